//! Rate-formula baselines: power-domain NOMA with SIC and orthogonal time
//! sharing. All rates are in bits per complex symbol with unit noise power.

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

/// Total power and per-user power fractions, indexed by ascending gain.
#[derive(Debug, Clone, PartialEq)]
pub struct NomaConfig {
    pub power: f64,
    pub alpha: Vec<f64>,
}

impl NomaConfig {
    pub fn new(power: f64, alpha: Vec<f64>) -> Result<Self> {
        if !(power.is_finite() && power >= 0.0) {
            return Err(Error::InvalidArgument(format!("power must be non-negative, got {power}")));
        }
        if alpha.is_empty() || alpha.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::InvalidArgument("power fractions must be non-negative".into()));
        }
        let total: f64 = alpha.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidArgument(format!("power fractions sum to {total}, not 1")));
        }
        Ok(NomaConfig { power, alpha })
    }
}

fn check_gains(gains: &[f64]) -> Result<()> {
    if gains.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
        return Err(Error::InvalidArgument("channel gains must be non-negative".into()));
    }
    Ok(())
}

/// Per-user NOMA rates for gains sorted ascending.
///
/// User `i` decodes and cancels every weaker user, then treats the power of
/// the stronger users as noise:
/// `R_i = log₂(1 + P α_i g_i / (P g_i Σ_{j>i} α_j + 1))`. For two users this
/// is the classic degraded broadcast region.
pub fn noma_rates(cfg: &NomaConfig, gains: &[f64]) -> Result<Vec<f64>> {
    if gains.len() != cfg.alpha.len() {
        return Err(Error::Dimension { expected: cfg.alpha.len(), actual: gains.len() });
    }
    check_gains(gains)?;
    if gains.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("gains must be sorted ascending".into()));
    }
    let p = cfg.power;
    let mut stronger: f64 = 0.0;
    let mut rates = vec![0.0; gains.len()];
    for i in (0..gains.len()).rev() {
        let g = gains[i];
        rates[i] = (1.0 + p * cfg.alpha[i] * g / (p * stronger * g + 1.0)).log2();
        stronger += cfg.alpha[i];
    }
    Ok(rates)
}

pub fn noma_sum_rate(cfg: &NomaConfig, gains: &[f64]) -> Result<f64> {
    Ok(noma_rates(cfg, gains)?.iter().sum())
}

/// Time-sharing rates `R_i = share_i · log₂(1 + P g_i)`.
pub fn oma_rates(power: f64, gains: &[f64], shares: &[f64]) -> Result<Vec<f64>> {
    if gains.len() != shares.len() {
        return Err(Error::Dimension { expected: gains.len(), actual: shares.len() });
    }
    check_gains(gains)?;
    if shares.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(Error::InvalidArgument("time shares must be non-negative".into()));
    }
    let total: f64 = shares.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidArgument(format!("time shares sum to {total}, not 1")));
    }
    Ok(gains
        .iter()
        .zip(shares)
        .map(|(g, s)| s * (1.0 + power * g).log2())
        .collect())
}
