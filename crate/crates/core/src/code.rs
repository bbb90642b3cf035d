//! Prime-field arithmetic and the small linear block codes used as the
//! per-user FEC stage.
//!
//! Decoding is hard-decision minimum Hamming distance. Ties between
//! equidistant codewords go to the lexicographically smallest message.
//! Identity, repetition and single-parity-check codes have closed-form
//! decoders that honour this rule; any other generator matrix is decoded by
//! exhaustive search over the codebook.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{is_rational_prime, mod_pow};

/// Upper bound on `q^k` for exhaustive decoding.
pub const MAX_EXHAUSTIVE_CODEBOOK: u128 = 1 << 20;

/// The prime field `F_q`; symbols are plain integers in `0..q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if !is_rational_prime(q as u64) {
            return Err(Error::InvalidField(q));
        }
        Ok(PrimeField { q })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn check(&self, value: u32) -> Result<u32> {
        if value >= self.q {
            return Err(Error::FieldMismatch { value, q: self.q });
        }
        Ok(value)
    }

    pub fn add(&self, x: u32, y: u32) -> u32 {
        ((x as u64 + y as u64) % self.q as u64) as u32
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        ((x as u64 + self.q as u64 - y as u64 % self.q as u64) % self.q as u64) as u32
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        ((x as u64 * y as u64) % self.q as u64) as u32
    }

    pub fn inv(&self, x: u32) -> Option<u32> {
        (x % self.q != 0).then(|| mod_pow(x as u64, self.q as u64 - 2, self.q as u64) as u32)
    }
}

/// A length-`k` information word `w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Message(pub Vec<u32>);

/// A length-`n` codeword `v = w·G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Codeword(pub Vec<u32>);

/// How a code was built; selects the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeFamily {
    Identity,
    Repetition,
    SingleParity,
    Generic,
}

/// An `(n, k)` linear code over `F_q` given by a full-rank `k × n`
/// generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: PrimeField,
    k: usize,
    n: usize,
    generator: Vec<Vec<u32>>,
    family: CodeFamily,
}

impl LinearCode {
    /// Uncoded transmission: `G = I_n`.
    pub fn identity(q: u32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("block length must be positive".into()));
        }
        let field = PrimeField::new(q)?;
        let generator = (0..n)
            .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
            .collect();
        Ok(LinearCode { field, k: n, n, generator, family: CodeFamily::Identity })
    }

    /// `(n, 1)` repetition code.
    pub fn repetition(q: u32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("block length must be positive".into()));
        }
        let field = PrimeField::new(q)?;
        Ok(LinearCode { field, k: 1, n, generator: vec![vec![1; n]], family: CodeFamily::Repetition })
    }

    /// `(k + 1, k)` code whose last symbol is the field sum of the message.
    pub fn single_parity(q: u32, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("message length must be positive".into()));
        }
        let field = PrimeField::new(q)?;
        let generator = (0..k)
            .map(|i| {
                let mut row: Vec<u32> = (0..k).map(|j| u32::from(i == j)).collect();
                row.push(1);
                row
            })
            .collect();
        Ok(LinearCode { field, k, n: k + 1, generator, family: CodeFamily::SingleParity })
    }

    /// Arbitrary generator matrix, decoded exhaustively.
    pub fn from_generator(q: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        let field = PrimeField::new(q)?;
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidArgument("generator matrix has no rows".into()));
        }
        let n = rows[0].len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::Dimension { expected: n, actual: row.len() });
            }
            for &g in row {
                field.check(g)?;
            }
        }
        if k > n || rank(&field, &rows) != k {
            return Err(Error::RankDeficient);
        }
        let size = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if size > MAX_EXHAUSTIVE_CODEBOOK {
            return Err(Error::CodebookTooLarge(size));
        }
        Ok(LinearCode { field, k, n, generator: rows, family: CodeFamily::Generic })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> CodeFamily {
        self.family
    }

    pub fn generator(&self) -> &[Vec<u32>] {
        &self.generator
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Information bits per channel symbol, `(k / n)·log₂ q`.
    pub fn bits_per_symbol(&self) -> f64 {
        self.rate() * (self.field.q as f64).log2()
    }

    fn check_word(&self, word: &[u32], expected: usize) -> Result<()> {
        if word.len() != expected {
            return Err(Error::Dimension { expected, actual: word.len() });
        }
        for &s in word {
            self.field.check(s)?;
        }
        Ok(())
    }

    /// `v = w·G` over `F_q`.
    pub fn encode(&self, w: &Message) -> Result<Codeword> {
        self.check_word(&w.0, self.k)?;
        Ok(self.encode_unchecked(&w.0))
    }

    fn encode_unchecked(&self, w: &[u32]) -> Codeword {
        let f = &self.field;
        match self.family {
            CodeFamily::Identity => Codeword(w.to_vec()),
            CodeFamily::Repetition => Codeword(vec![w[0]; self.n]),
            _ => {
                let mut v = vec![0u32; self.n];
                for (wi, row) in w.iter().zip(&self.generator) {
                    if *wi == 0 {
                        continue;
                    }
                    for (vj, gij) in v.iter_mut().zip(row) {
                        *vj = f.add(*vj, f.mul(*wi, *gij));
                    }
                }
                Codeword(v)
            }
        }
    }

    /// Re-encodes a decoded message to reconstruct its code level.
    pub fn reencode(&self, w_hat: &Message) -> Result<Codeword> {
        self.encode(w_hat)
    }

    /// Minimum Hamming distance decoding.
    pub fn decode(&self, r: &[u32]) -> Result<(Message, Codeword)> {
        self.check_word(r, self.n)?;
        let w = match self.family {
            CodeFamily::Identity => r.to_vec(),
            CodeFamily::Repetition => vec![majority(self.field.q, r)],
            CodeFamily::SingleParity => self.decode_single_parity(r),
            CodeFamily::Generic => self.decode_exhaustive(r),
        };
        let v = self.encode_unchecked(&w);
        Ok((Message(w), v))
    }

    fn decode_single_parity(&self, r: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let (info, parity) = r.split_at(self.k);
        let sum = info.iter().fold(0, |acc, &x| f.add(acc, x));
        let delta = f.sub(sum, parity[0]);
        let mut w = info.to_vec();
        if delta == 0 {
            return w;
        }
        // Every single-symbol correction is at distance 1. Lowering the
        // earliest information symbol gives the smallest message; if none
        // can be lowered, correcting the parity symbol keeps `info`.
        if let Some(j) = w.iter().position(|&x| f.sub(x, delta) < x) {
            w[j] = f.sub(w[j], delta);
        }
        w
    }

    fn decode_exhaustive(&self, r: &[u32]) -> Vec<u32> {
        let q = self.field.q;
        let mut w = vec![0u32; self.k];
        let mut best = (usize::MAX, w.clone());
        loop {
            let d = hamming(&self.encode_unchecked(&w).0, r);
            if d < best.0 {
                best = (d, w.clone());
            }
            // next message in lexicographic order (w[0] most significant)
            let mut i = self.k;
            loop {
                if i == 0 {
                    return best.1;
                }
                i -= 1;
                w[i] += 1;
                if w[i] < q {
                    break;
                }
                w[i] = 0;
            }
        }
    }

    /// Smallest nonzero codeword weight, by enumeration.
    pub fn minimum_distance(&self) -> Result<usize> {
        let size = (self.field.q as u128).checked_pow(self.k as u32).unwrap_or(u128::MAX);
        if size > MAX_EXHAUSTIVE_CODEBOOK {
            return Err(Error::CodebookTooLarge(size));
        }
        let mut best = usize::MAX;
        for idx in 1..size {
            let w = index_to_message(idx, self.field.q, self.k);
            let weight = self.encode_unchecked(&w).0.iter().filter(|&&s| s != 0).count();
            best = best.min(weight);
        }
        Ok(best)
    }
}

/// The `idx`-th message in lexicographic order.
pub fn index_to_message(mut idx: u128, q: u32, k: usize) -> Vec<u32> {
    let mut w = vec![0u32; k];
    for slot in w.iter_mut().rev() {
        *slot = (idx % q as u128) as u32;
        idx /= q as u128;
    }
    w
}

fn hamming(x: &[u32], y: &[u32]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a != b).count()
}

fn majority(q: u32, r: &[u32]) -> u32 {
    let mut counts = vec![0usize; q as usize];
    for &s in r {
        counts[s as usize] += 1;
    }
    // max_by_key keeps the last maximum, so scan in reverse
    counts
        .iter()
        .enumerate()
        .rev()
        .max_by_key(|(_, c)| **c)
        .map(|(v, _)| v as u32)
        .unwrap_or(0)
}

fn rank(field: &PrimeField, rows: &[Vec<u32>]) -> usize {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = field.inv(m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in 0..cols {
                    let t = field.mul(factor, m[r][j]);
                    m[i][j] = field.sub(m[i][j], t);
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}
