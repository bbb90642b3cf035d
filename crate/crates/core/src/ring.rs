//! Exact arithmetic in the three Euclidean rings used as lattice scalars:
//! the rational integers Z, the Gaussian integers Z[i] and the Eisenstein
//! integers Z[ω] with ω = (−1 + i√3)/2.
//!
//! Elements are stored as integer coordinates `(a, b)` meaning `a + b·i` or
//! `a + b·ω`. All exact operations are overflow-checked.
//!
//! Tie policy: whenever two lattice points are equally close to a target,
//! the one leaving the residual (target minus lattice point) with the smaller
//! first coordinate, then the smaller second coordinate, wins. The same rule
//! picks the canonical representative of a coset `x + mR`, so `mod_ring` and
//! `mod_fold` agree on embedded lattice points.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the complex plane; the embedding target of every ring.
pub type ComplexSample = Complex64;

/// Relative tolerance used to detect distance ties between lattice points.
pub const TIE_TOLERANCE: f64 = 1e-9;

const HALF_SQRT3: f64 = 0.866_025_403_784_438_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingDomain {
    /// Z, embedded on the real axis.
    Integers,
    /// Z[i], the square lattice.
    Gaussian,
    /// Z[ω], the hexagonal lattice.
    Eisenstein,
}

impl RingDomain {
    pub fn zero(self) -> RingElement {
        RingElement { domain: self, a: 0, b: 0 }
    }

    pub fn one(self) -> RingElement {
        RingElement { domain: self, a: 1, b: 0 }
    }

    /// The unit group of the ring.
    pub fn units(self) -> Vec<RingElement> {
        let coords: &[(i64, i64)] = match self {
            RingDomain::Integers => &[(1, 0), (-1, 0)],
            RingDomain::Gaussian => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            // ±1, ±ω, ±ω² = ∓(1 + ω)
            RingDomain::Eisenstein => &[(1, 0), (-1, 0), (0, 1), (0, -1), (-1, -1), (1, 1)],
        };
        coords
            .iter()
            .map(|&(a, b)| RingElement { domain: self, a, b })
            .collect()
    }

    /// Real coordinates of `s` in the basis `(1, i)` or `(1, ω)`.
    ///
    /// For the rational integers the imaginary part is reported as the
    /// second coordinate, which no lattice point can absorb.
    pub fn coordinates(self, s: ComplexSample) -> (f64, f64) {
        match self {
            RingDomain::Integers | RingDomain::Gaussian => (s.re, s.im),
            RingDomain::Eisenstein => {
                let b = s.im / HALF_SQRT3;
                (s.re + 0.5 * b, b)
            }
        }
    }
}

impl fmt::Display for RingDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RingDomain::Integers => "Z",
            RingDomain::Gaussian => "Z[i]",
            RingDomain::Eisenstein => "Z[ω]",
        })
    }
}

/// An exact element `a + b·i` or `a + b·ω`; `b` is always zero over Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingElement {
    domain: RingDomain,
    a: i64,
    b: i64,
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

impl RingElement {
    pub fn new(domain: RingDomain, a: i64, b: i64) -> Result<Self> {
        if domain == RingDomain::Integers && b != 0 {
            return Err(Error::NonZeroImaginary(b));
        }
        Ok(RingElement { domain, a, b })
    }

    pub fn integer(a: i64) -> Self {
        RingElement { domain: RingDomain::Integers, a, b: 0 }
    }

    pub fn gaussian(a: i64, b: i64) -> Self {
        RingElement { domain: RingDomain::Gaussian, a, b }
    }

    pub fn eisenstein(a: i64, b: i64) -> Self {
        RingElement { domain: RingDomain::Eisenstein, a, b }
    }

    /// The rational integer `k` viewed inside `domain`.
    pub fn from_integer(domain: RingDomain, k: i64) -> Self {
        RingElement { domain, a: k, b: 0 }
    }

    pub fn domain(&self) -> RingDomain {
        self.domain
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    fn check_domain(&self, other: &RingElement) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(self.domain, other.domain));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_domain(other)?;
        Ok(RingElement {
            domain: self.domain,
            a: self.a.checked_add(other.a).ok_or(Error::Overflow)?,
            b: self.b.checked_add(other.b).ok_or(Error::Overflow)?,
        })
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.check_domain(other)?;
        Ok(RingElement {
            domain: self.domain,
            a: self.a.checked_sub(other.a).ok_or(Error::Overflow)?,
            b: self.b.checked_sub(other.b).ok_or(Error::Overflow)?,
        })
    }

    pub fn neg(&self) -> Result<RingElement> {
        Ok(RingElement {
            domain: self.domain,
            a: self.a.checked_neg().ok_or(Error::Overflow)?,
            b: self.b.checked_neg().ok_or(Error::Overflow)?,
        })
    }

    /// Exact product; over Z[ω] the reduction ω² = −1 − ω is applied.
    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check_domain(other)?;
        let (a, b) = (self.a as i128, self.b as i128);
        let (c, d) = (other.a as i128, other.b as i128);
        let (re, im) = match self.domain {
            RingDomain::Integers => (a * c, 0),
            RingDomain::Gaussian => (a * c - b * d, a * d + b * c),
            RingDomain::Eisenstein => (a * c - b * d, a * d + b * c - b * d),
        };
        Ok(RingElement {
            domain: self.domain,
            a: narrow(re)?,
            b: narrow(im)?,
        })
    }

    /// Complex conjugate, expressed in the ring's own basis.
    pub fn conj(&self) -> Result<RingElement> {
        match self.domain {
            RingDomain::Integers => Ok(*self),
            RingDomain::Gaussian => Ok(RingElement {
                domain: self.domain,
                a: self.a,
                b: self.b.checked_neg().ok_or(Error::Overflow)?,
            }),
            // conj(ω) = ω² = −1 − ω
            RingDomain::Eisenstein => Ok(RingElement {
                domain: self.domain,
                a: self.a.checked_sub(self.b).ok_or(Error::Overflow)?,
                b: self.b.checked_neg().ok_or(Error::Overflow)?,
            }),
        }
    }

    /// Algebraic norm. Over Z this is `a²`, which keeps Euclidean division
    /// uniform across the three rings.
    pub fn norm(&self) -> u128 {
        let (a, b) = (self.a as i128, self.b as i128);
        let n = match self.domain {
            RingDomain::Integers => a * a,
            RingDomain::Gaussian => a * a + b * b,
            RingDomain::Eisenstein => a * a - a * b + b * b,
        };
        n as u128
    }

    /// Lexicographic key used by the tie policy.
    fn tie_key(&self) -> (u128, i64, i64) {
        (self.norm(), self.a, self.b)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.domain {
            RingDomain::Integers => return write!(f, "{}", self.a),
            RingDomain::Gaussian => "i",
            RingDomain::Eisenstein => "ω",
        };
        if self.b < 0 {
            write!(f, "{}-{}{}", self.a, -(self.b as i128), unit)
        } else {
            write!(f, "{}+{}{}", self.a, self.b, unit)
        }
    }
}

/// Complex embedding of a ring element.
pub fn embed(x: &RingElement) -> ComplexSample {
    let (a, b) = (x.a as f64, x.b as f64);
    match x.domain {
        RingDomain::Integers => Complex64::new(a, 0.0),
        RingDomain::Gaussian => Complex64::new(a, b),
        RingDomain::Eisenstein => Complex64::new(a - 0.5 * b, HALF_SQRT3 * b),
    }
}

fn round_half_up(num: i128, den: i128) -> i128 {
    // floor(num / den + 1/2) for den > 0
    (2 * num + den).div_euclid(2 * den)
}

/// Euclidean division with the quotient rounded to the nearest ring element:
/// `x = q·m + r` where `r` is the canonical (minimal-norm) representative of
/// `x mod mR`.
pub fn divmod_nearest(x: &RingElement, m: &RingElement) -> Result<(RingElement, RingElement)> {
    x.check_domain(m)?;
    if m.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let domain = x.domain;
    let den = m.norm() as i128;
    let num = x.mul(&m.conj()?)?;
    let qa = narrow(round_half_up(num.a as i128, den))?;
    let qb = narrow(round_half_up(num.b as i128, den))?;

    // Rounding in the (1, ω) basis can land one step away from the
    // minimal-norm quotient, so the 3x3 neighbourhood is searched exactly.
    let offsets: &[i64] = if domain == RingDomain::Integers { &[0] } else { &[-1, 0, 1] };
    let mut best: Option<(RingElement, RingElement)> = None;
    for da in [-1i64, 0, 1] {
        for &db in offsets {
            let q = RingElement {
                domain,
                a: qa.checked_add(da).ok_or(Error::Overflow)?,
                b: qb.checked_add(db).ok_or(Error::Overflow)?,
            };
            let r = x.sub(&q.mul(m)?)?;
            match &best {
                Some((_, br)) if br.tie_key() <= r.tie_key() => {}
                _ => best = Some((q, r)),
            }
        }
    }
    Ok(best.expect("candidate set is never empty"))
}

/// Canonical representative of `x mod mR`. Idempotent.
pub fn mod_ring(x: &RingElement, m: &RingElement) -> Result<RingElement> {
    divmod_nearest(x, m).map(|(_, r)| r)
}

/// A greatest common divisor, defined up to multiplication by a unit.
pub fn gcd(x: &RingElement, y: &RingElement) -> Result<RingElement> {
    x.check_domain(y)?;
    if x.is_zero() && y.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let (mut p, mut q) = (*x, *y);
    while !q.is_zero() {
        let r = mod_ring(&p, &q)?;
        p = q;
        q = r;
    }
    Ok(p)
}

/// True when `x` and `y` share no non-unit factor.
pub fn coprime(x: &RingElement, y: &RingElement) -> Result<bool> {
    Ok(gcd(x, y)?.is_unit())
}

pub(crate) fn is_rational_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn mod_pow(base: u64, mut exp: u64, q: u64) -> u64 {
    let q = q as u128;
    let mut acc = 1u128 % q;
    let mut b = base as u128 % q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        exp >>= 1;
    }
    acc as u64
}

/// A prime of R whose residue field `R/θR` is the prime field `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingPrime {
    value: RingElement,
    q: u64,
    /// Image of `i` (or `ω`) in `F_q`; zero over Z.
    root: u64,
}

impl RingPrime {
    pub fn new(value: RingElement) -> Result<Self> {
        let domain = value.domain;
        let q = match domain {
            RingDomain::Integers => value.a.unsigned_abs(),
            _ => u64::try_from(value.norm()).map_err(|_| Error::Overflow)?,
        };
        if !is_rational_prime(q) {
            // A unit multiple of a rational prime p stays prime when p is
            // inert, but its residue field then has p² elements.
            let p = (q as f64).sqrt().round() as u64;
            let inert = match domain {
                RingDomain::Integers => false,
                RingDomain::Gaussian => p % 4 == 3,
                RingDomain::Eisenstein => p % 3 == 2,
            };
            if inert && p * p == q && is_rational_prime(p) {
                let (quot, rem) = divmod_nearest(&value, &RingElement::from_integer(domain, p as i64))?;
                if rem.is_zero() && quot.is_unit() {
                    return Err(Error::InertPrime(value.to_string()));
                }
            }
            return Err(Error::NotPrime(value.to_string()));
        }
        let root = if domain == RingDomain::Integers {
            0
        } else {
            // θ = a + b·t ≡ 0 gives t ≡ −a / b; q ∤ b because N(θ) = q.
            let a = (value.a as i128).rem_euclid(q as i128) as u64;
            let b = (value.b as i128).rem_euclid(q as i128) as u64;
            let minus_a = (q - a) % q;
            ((minus_a as u128 * mod_pow(b, q - 2, q) as u128) % q as u128) as u64
        };
        Ok(RingPrime { value, q, root })
    }

    pub fn value(&self) -> &RingElement {
        &self.value
    }

    pub fn domain(&self) -> RingDomain {
        self.value.domain
    }

    /// Size of the residue field.
    pub fn norm_q(&self) -> u64 {
        self.q
    }

    /// The residue-field image of `x`, as an integer in `0..q`.
    ///
    /// This is the isomorphism `R/θR ≅ F_q` whose inverse is [`Self::lift`].
    pub fn residue(&self, x: &RingElement) -> Result<u64> {
        self.value.check_domain(x)?;
        let q = self.q as i128;
        let v = (x.a as i128).rem_euclid(q) + (x.b as i128).rem_euclid(q) * self.root as i128;
        Ok((v % q) as u64)
    }

    /// The rational integer `k` as a ring element; `residue(lift(k)) == k mod q`.
    pub fn lift(&self, k: u64) -> RingElement {
        RingElement::from_integer(self.value.domain, k as i64)
    }
}

impl fmt::Display for RingPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (F_{})", self.value, self.q)
    }
}

/// `y` with `x·y ≡ 1 (mod θ)`, returned as a rational integer in `0..q`.
pub fn inverse_mod(x: &RingElement, theta: &RingPrime) -> Result<RingElement> {
    let k = theta.residue(x)?;
    if k == 0 {
        return Err(Error::NotInvertible(x.to_string()));
    }
    Ok(theta.lift(mod_pow(k, theta.q - 2, theta.q)))
}

fn floor_coord(v: f64) -> Result<i64> {
    if !v.is_finite() {
        return Err(Error::NonFinite);
    }
    if v.abs() > (1u64 << 52) as f64 {
        return Err(Error::Overflow);
    }
    Ok(v.floor() as i64)
}

/// Picks, among the corners of the fundamental cell containing `approx`,
/// the candidate `c` whose lattice point `to_point(c)` is closest to `s`.
///
/// For all three rings the nearest point is a corner of that cell: the
/// square and the rhombus split into Delaunay triangles along their edges
/// and short diagonal.
fn select_nearest(
    s: ComplexSample,
    domain: RingDomain,
    approx: (f64, f64),
    to_point: impl Fn(&RingElement) -> Result<RingElement>,
) -> Result<(RingElement, ComplexSample)> {
    let a0 = floor_coord(approx.0)?;
    let b0 = if domain == RingDomain::Integers { 0 } else { floor_coord(approx.1)? };
    let b_steps: &[i64] = if domain == RingDomain::Integers { &[0] } else { &[0, 1] };

    let mut best: Option<(RingElement, ComplexSample, f64)> = None;
    for da in [0i64, 1] {
        for &db in b_steps {
            let c = RingElement { domain, a: a0 + da, b: b0 + db };
            let residual = s - embed(&to_point(&c)?);
            let d = residual.norm_sqr();
            let better = match &best {
                None => true,
                Some((_, br, bd)) => residual_precedes(domain, residual, d, *br, *bd),
            };
            if better {
                best = Some((c, residual, d));
            }
        }
    }
    let (c, r, _) = best.expect("candidate set is never empty");
    Ok((c, r))
}

/// Whether residual `r` (squared length `d`) beats the incumbent under the
/// shared tie policy.
pub(crate) fn residual_precedes(
    domain: RingDomain,
    r: ComplexSample,
    d: f64,
    incumbent: ComplexSample,
    incumbent_d: f64,
) -> bool {
    let tol = TIE_TOLERANCE * (1.0 + d.max(incumbent_d));
    if d < incumbent_d - tol {
        return true;
    }
    if d > incumbent_d + tol {
        return false;
    }
    let (ra, rb) = domain.coordinates(r);
    let (ia, ib) = domain.coordinates(incumbent);
    if ra < ia - tol {
        return true;
    }
    if ra > ia + tol {
        return false;
    }
    rb < ib - tol
}

/// Nearest ring element to `s` (the lattice quantizer for `Λ = R`).
pub fn quantize_to_ring(s: ComplexSample, domain: RingDomain) -> Result<RingElement> {
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    select_nearest(s, domain, domain.coordinates(s), |c| Ok(*c)).map(|(c, _)| c)
}

/// `s mod mR`: subtracts the nearest point of the scaled lattice `mR`,
/// leaving the quantization error in its Voronoi region.
pub fn mod_fold(s: ComplexSample, m: &RingElement) -> Result<ComplexSample> {
    if m.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    let domain = m.domain;
    let approx = domain.coordinates(s / embed(m));
    select_nearest(s, domain, approx, |c| c.mul(m)).map(|(_, r)| r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: ComplexSample, y: ComplexSample) -> bool {
        (x - y).norm() < 1e-12
    }

    #[test]
    fn addition() {
        let x = RingElement::eisenstein(1, 2);
        let y = RingElement::eisenstein(3, 4);
        assert_eq!(x.add(&y).unwrap(), RingElement::eisenstein(4, 6));
        assert!(x.add(&x.neg().unwrap()).unwrap().is_zero());
        let g = RingElement::gaussian(2, 3);
        assert_eq!(g.add(&RingDomain::Gaussian.zero()).unwrap(), g);
        assert_eq!(
            x.add(&g),
            Err(Error::DomainMismatch(RingDomain::Eisenstein, RingDomain::Gaussian))
        );
    }

    #[test]
    fn multiplication() {
        let x = RingElement::eisenstein(2, 3);
        let omega = RingElement::eisenstein(0, 1);
        let p = x.mul(&omega).unwrap();
        assert_eq!(p, RingElement::eisenstein(-3, -1));
        // cross-check against complex multiplication
        assert!(close(embed(&p), embed(&x) * embed(&omega)));

        let g = RingElement::gaussian(2, 3);
        assert_eq!(g.mul(&g.conj().unwrap()).unwrap(), RingElement::gaussian(13, 0));
        assert_eq!(x.mul(&RingDomain::Eisenstein.one()).unwrap(), x);
    }

    #[test]
    fn overflow_is_reported() {
        let big = RingElement::integer(i64::MAX);
        assert_eq!(big.add(&RingElement::integer(1)), Err(Error::Overflow));
        assert_eq!(big.mul(&RingElement::integer(2)), Err(Error::Overflow));
    }

    #[test]
    fn rational_integers_reject_second_coordinate() {
        assert_eq!(
            RingElement::new(RingDomain::Integers, 1, 2),
            Err(Error::NonZeroImaginary(2))
        );
    }

    #[test]
    fn norms() {
        assert_eq!(RingElement::eisenstein(2, 3).norm(), 7);
        assert_eq!(RingElement::eisenstein(3, 2).norm(), 7);
        assert_eq!(RingDomain::Eisenstein.zero().norm(), 0);
        assert_eq!(RingElement::integer(-5).norm(), 25);
    }

    #[test]
    fn nearest_division() {
        let (q, r) = divmod_nearest(&RingElement::integer(13), &RingElement::integer(14)).unwrap();
        assert_eq!((q, r), (RingElement::integer(1), RingElement::integer(-1)));
        let (q, r) = divmod_nearest(&RingElement::integer(-8), &RingElement::integer(7)).unwrap();
        assert_eq!((q, r), (RingElement::integer(-1), RingElement::integer(-1)));
        let theta = RingElement::eisenstein(2, 3);
        let (q, r) = divmod_nearest(&theta, &theta).unwrap();
        assert_eq!(q, RingDomain::Eisenstein.one());
        assert!(r.is_zero());
        assert_eq!(
            divmod_nearest(&theta, &RingDomain::Eisenstein.zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn ties_prefer_smaller_residual() {
        // 1 mod 2 is either 1 or -1; the smaller one is canonical
        assert_eq!(
            mod_ring(&RingElement::integer(1), &RingElement::integer(2)).unwrap(),
            RingElement::integer(-1)
        );
        assert_eq!(
            mod_ring(&RingElement::integer(7), &RingElement::integer(14)).unwrap(),
            RingElement::integer(-7)
        );
        assert_eq!(quantize_to_ring(Complex64::new(0.5, 0.0), RingDomain::Integers).unwrap(), RingElement::integer(1));
        assert!(close(
            mod_fold(Complex64::new(7.0, 0.0), &RingElement::integer(14)).unwrap(),
            Complex64::new(-7.0, 0.0)
        ));
    }

    #[test]
    fn ring_modulo() {
        let x = RingElement::integer(7 + 2 * 3);
        let m = RingElement::integer(14);
        let r = mod_ring(&x, &m).unwrap();
        assert_eq!(r, RingElement::integer(-1));
        assert_eq!(mod_ring(&r, &m).unwrap(), r);
        assert!(mod_ring(&RingElement::integer(0), &m).unwrap().is_zero());
    }

    #[test]
    fn gcds() {
        let g = gcd(&RingElement::integer(2), &RingElement::integer(7)).unwrap();
        assert!(g.is_unit());
        let g = gcd(&RingElement::integer(6), &RingElement::integer(4)).unwrap();
        assert_eq!(g.a().abs(), 2);
        let g = gcd(&RingElement::eisenstein(2, 3), &RingElement::eisenstein(3, 2)).unwrap();
        assert!(g.is_unit());
        assert_eq!(
            gcd(&RingElement::integer(0), &RingElement::integer(0)),
            Err(Error::ZeroGcd)
        );
    }

    #[test]
    fn primes_and_inverses() {
        let seven = RingPrime::new(RingElement::integer(7)).unwrap();
        let two = RingPrime::new(RingElement::integer(2)).unwrap();
        assert_eq!(inverse_mod(&RingElement::integer(2), &seven).unwrap(), RingElement::integer(4));
        assert_eq!(inverse_mod(&RingElement::integer(7), &two).unwrap(), RingElement::integer(1));
        assert_eq!(inverse_mod(&RingElement::integer(1), &seven).unwrap(), RingElement::integer(1));
        assert!(matches!(
            inverse_mod(&RingElement::integer(14), &seven),
            Err(Error::NotInvertible(_))
        ));

        let theta = RingPrime::new(RingElement::eisenstein(2, 3)).unwrap();
        assert_eq!(theta.norm_q(), 7);
        assert_eq!(theta.residue(theta.value()).unwrap(), 0);
    }

    #[test]
    fn prime_validation() {
        assert!(matches!(RingPrime::new(RingElement::integer(15)), Err(Error::NotPrime(_))));
        assert!(matches!(RingPrime::new(RingElement::integer(1)), Err(Error::NotPrime(_))));
        // 3 is inert in Z[i]; 2 is inert in Z[ω]
        assert!(matches!(RingPrime::new(RingElement::gaussian(3, 0)), Err(Error::InertPrime(_))));
        assert!(matches!(RingPrime::new(RingElement::gaussian(0, -3)), Err(Error::InertPrime(_))));
        assert!(matches!(RingPrime::new(RingElement::eisenstein(2, 0)), Err(Error::InertPrime(_))));
        // 5 splits in Z[i], so 5 itself is not prime there
        assert!(matches!(RingPrime::new(RingElement::gaussian(5, 0)), Err(Error::NotPrime(_))));
        assert_eq!(RingPrime::new(RingElement::gaussian(1, 1)).unwrap().norm_q(), 2);
        assert_eq!(RingPrime::new(RingElement::integer(-7)).unwrap().norm_q(), 7);
    }

    #[test]
    fn quantizer_examples() {
        assert_eq!(
            quantize_to_ring(Complex64::new(0.4, 0.0), RingDomain::Integers).unwrap(),
            RingElement::integer(0)
        );
        let x = RingElement::eisenstein(2, 3);
        assert_eq!(quantize_to_ring(embed(&x), RingDomain::Eisenstein).unwrap(), x);
        assert_eq!(
            quantize_to_ring(Complex64::new(f64::NAN, 0.0), RingDomain::Gaussian),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn embeddings() {
        assert!(close(embed(&RingElement::integer(1)), Complex64::new(1.0, 0.0)));
        assert!(close(
            embed(&RingElement::eisenstein(0, 1)),
            Complex64::new(-0.5, 3f64.sqrt() / 2.0)
        ));
        assert!(close(
            embed(&RingElement::eisenstein(2, 3)),
            Complex64::new(0.5, 3.0 * 3f64.sqrt() / 2.0)
        ));
    }

    #[test]
    fn folding() {
        let m = RingElement::integer(14);
        assert!(close(mod_fold(embed(&RingElement::integer(13)), &m).unwrap(), Complex64::new(-1.0, 0.0)));
        let s = Complex64::new(0.3, -0.2);
        assert!(close(mod_fold(s, &m).unwrap(), s));
        let theta = RingElement::eisenstein(2, 3);
        let k = RingElement::eisenstein(-4, 5);
        let shifted = s + embed(&theta.mul(&k).unwrap());
        assert!((mod_fold(shifted, &theta).unwrap() - mod_fold(s, &theta).unwrap()).norm() < 1e-9);
    }
}
