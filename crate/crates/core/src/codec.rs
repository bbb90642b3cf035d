//! Multilevel lattice superposition encoder and modulo-lattice receivers.
//!
//! Level `ℓ` carries a codeword `v_ℓ` of a linear code over `F_{q_ℓ}` with
//! `q_ℓ = N(θ_ℓ)`. Symbol-wise, the levels are combined as
//!
//! ```text
//! W(v_1, …, v_L) = [ Σ_ℓ v_ℓ · Π_{ℓ'≠ℓ} θ_ℓ' ] mod (Π_ℓ θ_ℓ) R
//! x = β · (W + u)
//! ```
//!
//! Reducing `W` modulo `θ_ℓ` annihilates every level but `ℓ`, which is left
//! multiplied by its co-factor `Π_{ℓ'≠ℓ} θ_ℓ'`. Receivers undo that factor
//! with its inverse in `F_{q_ℓ}` before FEC decoding.
//!
//! Levels are indexed from 0 in this API; level 0 belongs to the user with
//! the weakest channel.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::code::{Codeword, LinearCode, Message};
use crate::error::{Error, Result};
use crate::ring::{
    coprime, embed, inverse_mod, mod_fold, mod_ring, quantize_to_ring, ComplexSample, RingDomain,
    RingElement, RingPrime,
};

/// Largest residue ring `R / MR` whose representatives are enumerated.
pub const MAX_CONSTELLATION: u128 = 1 << 22;

/// One user's code level: its prime and its FEC code over `F_{N(θ)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelConfig {
    pub user_id: u32,
    pub theta: RingPrime,
    pub code: LinearCode,
}

impl LevelConfig {
    pub fn new(user_id: u32, theta: RingPrime, code: LinearCode) -> Result<Self> {
        if code.q() as u64 != theta.norm_q() {
            return Err(Error::Config(format!(
                "user {user_id}: code over F_{} does not match prime {theta}",
                code.q()
            )));
        }
        Ok(LevelConfig { user_id, theta, code })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Sic,
    Pic,
    Hybrid,
}

/// A validated superposition configuration with its derived constants.
#[derive(Debug, Clone)]
pub struct LpmaConfig {
    domain: RingDomain,
    levels: Vec<LevelConfig>,
    n: usize,
    power: f64,
    beta: f64,
    dither: ComplexSample,
    modulus: RingElement,
    cofactors: Vec<RingElement>,
    descale: Vec<u64>,
}

impl LpmaConfig {
    /// Validates the levels (same ring, pairwise coprime primes, common block
    /// length, matching fields) and derives `M`, the co-factors, the dither
    /// and the scaling for average symbol energy `power`.
    pub fn new(domain: RingDomain, levels: Vec<LevelConfig>, power: f64) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Config("at least one level is required".into()));
        }
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::Config(format!("transmit power must be positive, got {power}")));
        }
        let n = levels[0].code.n();
        for lvl in &levels {
            if lvl.theta.domain() != domain {
                return Err(Error::Config(format!(
                    "prime {} is not in {domain}",
                    lvl.theta
                )));
            }
            if lvl.code.n() != n {
                return Err(Error::Config(format!(
                    "user {} has block length {}, expected {n}",
                    lvl.user_id,
                    lvl.code.n()
                )));
            }
            if lvl.code.q() as u64 != lvl.theta.norm_q() {
                return Err(Error::Config(format!(
                    "user {}: code over F_{} does not match prime {}",
                    lvl.user_id,
                    lvl.code.q(),
                    lvl.theta
                )));
            }
        }
        let mut ids = HashSet::new();
        for lvl in &levels {
            if !ids.insert(lvl.user_id) {
                return Err(Error::Config(format!("duplicate user id {}", lvl.user_id)));
            }
        }
        for (i, x) in levels.iter().enumerate() {
            for y in &levels[i + 1..] {
                if !coprime(x.theta.value(), y.theta.value())? {
                    return Err(Error::Config(format!(
                        "primes {} and {} are not coprime",
                        x.theta.value(),
                        y.theta.value()
                    )));
                }
            }
        }

        let primes: Vec<RingPrime> = levels.iter().map(|l| l.theta).collect();
        let (modulus, cofactors) = modulus_and_cofactors(domain, &primes)?;
        let descale = cofactors
            .iter()
            .zip(&primes)
            .map(|(c, p)| inverse_mod(c, p).and_then(|inv| p.residue(&inv)))
            .collect::<Result<Vec<_>>>()?;
        let (beta, dither) = derive_scaling_and_dither(domain, &primes, power)?;
        Ok(LpmaConfig { domain, levels, n, power, beta, dither, modulus, cofactors, descale })
    }

    pub fn domain(&self) -> RingDomain {
        self.domain
    }

    pub fn levels(&self) -> &[LevelConfig] {
        &self.levels
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The per-symbol dither; the dither vector repeats it `n` times.
    pub fn dither(&self) -> ComplexSample {
        self.dither
    }

    pub fn dither_vector(&self) -> Vec<ComplexSample> {
        vec![self.dither; self.n]
    }

    /// `M = Π θ_ℓ`.
    pub fn modulus(&self) -> &RingElement {
        &self.modulus
    }

    /// `Π_{ℓ'≠ℓ} θ_ℓ'` for level `ℓ`.
    pub fn cofactor(&self, level: usize) -> &RingElement {
        &self.cofactors[level]
    }

    /// Inverse of the level's co-factor in `F_{q_ℓ}`.
    pub fn descale_factor(&self, level: usize) -> u64 {
        self.descale[level]
    }

    /// Replaces a level's descaling constant. Only meant for fault-injection
    /// tests of the verification harness.
    #[doc(hidden)]
    pub fn override_descale_factor(&mut self, level: usize, factor: u64) {
        self.descale[level] = factor;
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level >= self.levels.len() {
            return Err(Error::InvalidArgument(format!(
                "level {level} out of range for {} levels",
                self.levels.len()
            )));
        }
        Ok(())
    }
}

fn modulus_and_cofactors(
    domain: RingDomain,
    primes: &[RingPrime],
) -> Result<(RingElement, Vec<RingElement>)> {
    let mut modulus = domain.one();
    for p in primes {
        modulus = modulus.mul(p.value())?;
    }
    let cofactors = (0..primes.len())
        .map(|i| {
            primes
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .try_fold(domain.one(), |acc, (_, p)| acc.mul(p.value()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((modulus, cofactors))
}

fn combine_symbol(
    modulus: &RingElement,
    cofactors: &[RingElement],
    primes: &[RingPrime],
    symbols: impl Iterator<Item = u64>,
) -> Result<RingElement> {
    let mut acc = modulus.domain().zero();
    for ((s, c), p) in symbols.zip(cofactors).zip(primes) {
        acc = acc.add(&p.lift(s).mul(c)?)?;
    }
    mod_ring(&acc, modulus)
}

/// Canonical representatives of `R / MR` for `M = Π θ_ℓ`, enumerated as the
/// image of every field tuple (in lexicographic tuple order).
pub fn representatives(domain: RingDomain, primes: &[RingPrime]) -> Result<Vec<RingElement>> {
    let (modulus, cofactors) = modulus_and_cofactors(domain, primes)?;
    let size = primes
        .iter()
        .try_fold(1u128, |acc, p| acc.checked_mul(p.norm_q() as u128))
        .filter(|&s| s <= MAX_CONSTELLATION)
        .ok_or_else(|| Error::Config("constellation too large to enumerate".into()))?;
    let mut tuple = vec![0u64; primes.len()];
    let mut reps = Vec::with_capacity(size as usize);
    for _ in 0..size {
        reps.push(combine_symbol(&modulus, &cofactors, primes, tuple.iter().copied())?);
        for (slot, p) in tuple.iter_mut().zip(primes).rev() {
            *slot += 1;
            if *slot < p.norm_q() {
                break;
            }
            *slot = 0;
        }
    }
    Ok(reps)
}

/// Dither `u` centring the constellation and scaling `β` giving average
/// symbol energy `power`, both taken over the uniform distribution on the
/// representative set.
pub fn derive_scaling_and_dither(
    domain: RingDomain,
    primes: &[RingPrime],
    power: f64,
) -> Result<(f64, ComplexSample)> {
    let reps = representatives(domain, primes)?;
    let count = reps.len() as f64;
    let mean = reps.iter().map(embed).sum::<ComplexSample>() / count;
    let dither = -mean;
    let energy = reps.iter().map(|r| (embed(r) + dither).norm_sqr()).sum::<f64>() / count;
    let beta = if energy > 0.0 { (power / energy).sqrt() } else { power.sqrt() };
    Ok((beta, dither))
}

/// Lattice symbols before dither and scaling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeWord(pub Vec<RingElement>);

/// Transmitted samples `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmitSignal(pub Vec<ComplexSample>);

/// The symbol-wise mapping `W(v_1, …, v_L)`.
pub fn map_pi_a(cfg: &LpmaConfig, codewords: &[Codeword]) -> Result<LatticeWord> {
    if codewords.len() != cfg.levels.len() {
        return Err(Error::Dimension { expected: cfg.levels.len(), actual: codewords.len() });
    }
    for (cw, lvl) in codewords.iter().zip(&cfg.levels) {
        if cw.0.len() != cfg.n {
            return Err(Error::Dimension { expected: cfg.n, actual: cw.0.len() });
        }
        for &s in &cw.0 {
            lvl.code.field().check(s)?;
        }
    }
    let primes: Vec<RingPrime> = cfg.levels.iter().map(|l| l.theta).collect();
    (0..cfg.n)
        .map(|j| {
            combine_symbol(
                &cfg.modulus,
                &cfg.cofactors,
                &primes,
                codewords.iter().map(|cw| cw.0[j] as u64),
            )
        })
        .collect::<Result<Vec<_>>>()
        .map(LatticeWord)
}

/// `x = β (embed(W) + u)`.
pub fn modulate(cfg: &LpmaConfig, word: &LatticeWord) -> TransmitSignal {
    TransmitSignal(word.0.iter().map(|s| cfg.beta * (embed(s) + cfg.dither)).collect())
}

/// FEC-encodes every level, maps through `W`, then dithers and scales.
pub fn lpma_encode(cfg: &LpmaConfig, messages: &[Message]) -> Result<TransmitSignal> {
    if messages.len() != cfg.levels.len() {
        return Err(Error::Dimension { expected: cfg.levels.len(), actual: messages.len() });
    }
    let codewords = messages
        .iter()
        .zip(&cfg.levels)
        .map(|(w, lvl)| lvl.code.encode(w))
        .collect::<Result<Vec<_>>>()?;
    Ok(modulate(cfg, &map_pi_a(cfg, &codewords)?))
}

/// `ỹ = y / (h β) − u`: back to unit lattice scale with the dither removed.
pub fn channel_compensate(
    cfg: &LpmaConfig,
    y: &[ComplexSample],
    h: ComplexSample,
) -> Result<Vec<ComplexSample>> {
    if h.norm_sqr() == 0.0 || !h.is_finite() {
        return Err(Error::InvalidArgument("channel gain must be nonzero and finite".into()));
    }
    let scale = h * cfg.beta;
    Ok(y.iter().map(|&s| s / scale - cfg.dither).collect())
}

/// Decoded level output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelDecision {
    pub level: usize,
    pub message: Message,
    pub codeword: Codeword,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub kind: DecoderKind,
    pub levels: Vec<LevelDecision>,
}

impl DecodeResult {
    pub fn level(&self, level: usize) -> Option<&LevelDecision> {
        self.levels.iter().find(|d| d.level == level)
    }

    /// Per decoded level, whether the message matches `truth[level]`.
    pub fn correctness(&self, truth: &[Message]) -> Vec<(usize, bool)> {
        self.levels
            .iter()
            .map(|d| (d.level, truth.get(d.level) == Some(&d.message)))
            .collect()
    }
}

/// Folds `residual` modulo `θ_ℓ R`, hard-quantizes to R, maps to `F_{q_ℓ}`,
/// removes the co-factor and FEC-decodes.
pub fn extract_level(
    cfg: &LpmaConfig,
    residual: &[ComplexSample],
    level: usize,
) -> Result<LevelDecision> {
    cfg.check_level(level)?;
    if residual.len() != cfg.n {
        return Err(Error::Dimension { expected: cfg.n, actual: residual.len() });
    }
    let lvl = &cfg.levels[level];
    let theta = &lvl.theta;
    let q = theta.norm_q();
    let descale = cfg.descale[level];
    let symbols = residual
        .iter()
        .map(|&s| {
            let folded = mod_fold(s, theta.value())?;
            let point = quantize_to_ring(folded, cfg.domain)?;
            let scaled = theta.residue(&point)? as u128 * descale as u128 % q as u128;
            Ok(scaled as u32)
        })
        .collect::<Result<Vec<u32>>>()?;
    let (message, codeword) = lvl.code.decode(&symbols)?;
    Ok(LevelDecision { level, message, codeword })
}

/// Removes a decoded level's contribution `v̂_ℓ · co-factor_ℓ` in signal space.
fn subtract_level(cfg: &LpmaConfig, residual: &mut [ComplexSample], decision: &LevelDecision) {
    let weight = embed(&cfg.cofactors[decision.level]);
    for (r, &v) in residual.iter_mut().zip(&decision.codeword.0) {
        *r -= weight * v as f64;
    }
}

/// Successive decoding of levels `0..=target`, subtracting each re-encoded
/// level before extracting the next.
pub fn mlo_sic_decode(cfg: &LpmaConfig, y_tilde: &[ComplexSample], target: usize) -> Result<DecodeResult> {
    cfg.check_level(target)?;
    let order: Vec<usize> = (0..=target).collect();
    let levels = successive(cfg, y_tilde.to_vec(), &order)?;
    Ok(DecodeResult { kind: DecoderKind::Sic, levels })
}

fn successive(
    cfg: &LpmaConfig,
    mut residual: Vec<ComplexSample>,
    order: &[usize],
) -> Result<Vec<LevelDecision>> {
    let mut out = Vec::with_capacity(order.len());
    for (i, &level) in order.iter().enumerate() {
        let decision = extract_level(cfg, &residual, level)?;
        if i + 1 < order.len() {
            subtract_level(cfg, &mut residual, &decision);
        }
        out.push(decision);
    }
    Ok(out)
}

/// Single modulo fold with respect to `θ_ℓ`; no other level is decoded.
pub fn mlo_pic_decode(cfg: &LpmaConfig, y_tilde: &[ComplexSample], level: usize) -> Result<DecodeResult> {
    let decision = extract_level(cfg, y_tilde, level)?;
    Ok(DecodeResult { kind: DecoderKind::Pic, levels: vec![decision] })
}

/// Decodes `pic_levels` independently from `ỹ`, subtracts their
/// reconstructions, then runs successive decoding over `sic_levels` in the
/// given order.
pub fn hybrid_decode(
    cfg: &LpmaConfig,
    y_tilde: &[ComplexSample],
    pic_levels: &[usize],
    sic_levels: &[usize],
) -> Result<DecodeResult> {
    let mut seen = HashSet::new();
    for &l in pic_levels.iter().chain(sic_levels) {
        cfg.check_level(l)?;
        if !seen.insert(l) {
            return Err(Error::InvalidArgument(format!(
                "level {l} appears more than once in the hybrid split"
            )));
        }
    }
    let mut residual = y_tilde.to_vec();
    let mut levels = Vec::with_capacity(seen.len());
    for &l in pic_levels {
        levels.push(extract_level(cfg, y_tilde, l)?);
    }
    for d in &levels {
        subtract_level(cfg, &mut residual, d);
    }
    levels.extend(successive(cfg, residual, sic_levels)?);
    Ok(DecodeResult { kind: DecoderKind::Hybrid, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn prime(x: RingElement) -> RingPrime {
        RingPrime::new(x).unwrap()
    }

    fn integer_config(n: usize) -> LpmaConfig {
        let levels = vec![
            LevelConfig::new(1, prime(RingElement::integer(2)), LinearCode::identity(2, n).unwrap()).unwrap(),
            LevelConfig::new(2, prime(RingElement::integer(7)), LinearCode::identity(7, n).unwrap()).unwrap(),
        ];
        LpmaConfig::new(RingDomain::Integers, levels, 1.0).unwrap()
    }

    #[test]
    fn worked_integer_instance() {
        let cfg = integer_config(1);
        let w = map_pi_a(&cfg, &[Codeword(vec![1]), Codeword(vec![3])]).unwrap();
        assert_eq!(w.0, vec![RingElement::integer(-1)]);
        assert_eq!(cfg.descale_factor(0), 1);
        assert_eq!(cfg.descale_factor(1), 4);

        let y = [Complex64::new(-1.0, 0.0)];
        let first = extract_level(&cfg, &y, 0).unwrap();
        assert_eq!(first.message, Message(vec![1]));
        let second = extract_level(&cfg, &[y[0] - 7.0], 1).unwrap();
        assert_eq!(second.message, Message(vec![3]));
    }

    #[test]
    fn zero_and_single_level() {
        let cfg = integer_config(3);
        let w = map_pi_a(&cfg, &[Codeword(vec![0; 3]), Codeword(vec![0; 3])]).unwrap();
        assert!(w.0.iter().all(RingElement::is_zero));

        let single = LpmaConfig::new(
            RingDomain::Integers,
            vec![LevelConfig::new(1, prime(RingElement::integer(2)), LinearCode::identity(2, 1).unwrap()).unwrap()],
            1.0,
        )
        .unwrap();
        // empty co-factor product; 1 mod 2 is canonically −1 ≡ 1
        assert_eq!(single.cofactor(0), &RingDomain::Integers.one());
        let w = map_pi_a(&single, &[Codeword(vec![1])]).unwrap();
        assert_eq!(single.levels()[0].theta.residue(&w.0[0]).unwrap(), 1);
    }

    #[test]
    fn dither_for_modulus_two() {
        let (beta, u) = derive_scaling_and_dither(
            RingDomain::Integers,
            &[prime(RingElement::integer(2))],
            3.0,
        )
        .unwrap();
        assert!((u - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((beta - (3.0f64 / 0.25).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn symmetric_constellation_needs_no_dither() {
        // Z/3: representatives {-1, 0, 1}
        let (_, u) = derive_scaling_and_dither(RingDomain::Integers, &[prime(RingElement::integer(3))], 1.0).unwrap();
        assert!(u.norm() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let two = prime(RingElement::integer(2));
        let id2 = LinearCode::identity(2, 4).unwrap();
        let id7 = LinearCode::identity(7, 4).unwrap();
        assert!(LevelConfig::new(1, two, id7.clone()).is_err());

        let same = vec![
            LevelConfig::new(1, two, id2.clone()).unwrap(),
            LevelConfig::new(2, prime(RingElement::integer(-2)), id2.clone()).unwrap(),
        ];
        assert!(matches!(LpmaConfig::new(RingDomain::Integers, same, 1.0), Err(Error::Config(_))));

        let mismatched_n = vec![
            LevelConfig::new(1, two, id2.clone()).unwrap(),
            LevelConfig::new(2, prime(RingElement::integer(7)), LinearCode::identity(7, 3).unwrap()).unwrap(),
        ];
        assert!(LpmaConfig::new(RingDomain::Integers, mismatched_n, 1.0).is_err());

        let ok = vec![
            LevelConfig::new(1, two, id2).unwrap(),
            LevelConfig::new(2, prime(RingElement::integer(7)), id7).unwrap(),
        ];
        assert!(LpmaConfig::new(RingDomain::Integers, ok.clone(), 0.0).is_err());
        assert!(LpmaConfig::new(RingDomain::Gaussian, ok, 1.0).is_err());
    }

    #[test]
    fn compensation_inverts_noiseless_channel() {
        let cfg = integer_config(2);
        let x = lpma_encode(&cfg, &[Message(vec![1, 0]), Message(vec![3, 6])]).unwrap();
        let h = Complex64::from_polar(0.7, 1.1);
        let y: Vec<_> = x.0.iter().map(|&s| h * s).collect();
        let yt = channel_compensate(&cfg, &y, h).unwrap();
        let w = map_pi_a(&cfg, &[Codeword(vec![1, 0]), Codeword(vec![3, 6])]).unwrap();
        for (a, b) in yt.iter().zip(&w.0) {
            assert!((a - embed(b)).norm() < 1e-9);
        }
        assert!(channel_compensate(&cfg, &y, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn hybrid_rejects_overlap() {
        let cfg = integer_config(1);
        let y = [Complex64::new(0.0, 0.0)];
        assert!(hybrid_decode(&cfg, &y, &[0], &[0]).is_err());
        assert!(hybrid_decode(&cfg, &y, &[5], &[]).is_err());
        let r = hybrid_decode(&cfg, &y, &[1], &[0]).unwrap();
        assert_eq!(r.levels.len(), 2);
        assert_eq!(r.level(0).unwrap().message, Message(vec![0]));
    }
}
