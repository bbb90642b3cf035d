//! Single-cell downlink channel: link budget, distance path loss, Rayleigh
//! block fading and complex AWGN.
//!
//! Noise power is normalised to one; a user's linear SNR is its average
//! channel gain.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::ComplexSample;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkBudget {
    pub tx_power_dbm: f64,
    pub noise_density_dbm_hz: f64,
    pub noise_figure_db: f64,
    pub bandwidth_hz: f64,
    pub pathloss_intercept_db: f64,
    pub pathloss_slope: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        LinkBudget {
            tx_power_dbm: 46.0,
            noise_density_dbm_hz: -174.0,
            noise_figure_db: 5.0,
            bandwidth_hz: 10e6,
            pathloss_intercept_db: 21.5,
            pathloss_slope: 36.7,
        }
    }
}

impl LinkBudget {
    pub fn pathloss_db(&self, distance_km: f64) -> Result<f64> {
        if !(distance_km.is_finite() && distance_km > 0.0) {
            return Err(Error::InvalidArgument(format!("distance must be positive, got {distance_km}")));
        }
        Ok(self.pathloss_intercept_db + self.pathloss_slope * distance_km.log10())
    }

    /// Noise power over the band including the receiver noise figure.
    pub fn noise_dbm(&self) -> f64 {
        self.noise_density_dbm_hz + 10.0 * self.bandwidth_hz.log10() + self.noise_figure_db
    }

    pub fn snr_db(&self, distance_km: f64) -> Result<f64> {
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::InvalidArgument("bandwidth must be positive".into()));
        }
        Ok(self.tx_power_dbm - self.pathloss_db(distance_km)? - self.noise_dbm())
    }
}

/// `21.5 + 36.7·log₁₀(D)` with the default budget, `D` in km.
pub fn pathloss_db(distance_km: f64) -> Result<f64> {
    LinkBudget::default().pathloss_db(distance_km)
}

/// Linear SNR at `distance_km` (transmit power minus path loss minus noise).
pub fn snr_from_budget(budget: &LinkBudget, distance_km: f64) -> Result<f64> {
    Ok(db_to_linear(budget.snr_db(distance_km)?))
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Circularly symmetric complex Gaussian with variance `sigma2`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, sigma2: f64) -> Complex64 {
    let s = (sigma2 / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

/// Rayleigh fading coefficient with `E|h|² = 1`.
pub fn rayleigh_sample<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    complex_gaussian(rng, 1.0)
}

/// Per-user channel coefficients for one block.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: Vec<Complex64>,
    pub sigma2: f64,
}

impl ChannelRealization {
    /// `h_ℓ = sqrt(g_ℓ)·f_ℓ` with `f_ℓ` Rayleigh when `fading`, else 1.
    pub fn draw<R: Rng + ?Sized>(mean_gains: &[f64], fading: bool, rng: &mut R) -> Result<Self> {
        if mean_gains.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::InvalidArgument("mean gains must be non-negative".into()));
        }
        let h = mean_gains
            .iter()
            .map(|&g| {
                let f = if fading { rayleigh_sample(rng) } else { Complex64::new(1.0, 0.0) };
                f * g.sqrt()
            })
            .collect();
        Ok(ChannelRealization { h, sigma2: 1.0 })
    }

    pub fn gains(&self) -> Vec<f64> {
        self.h.iter().map(|h| h.norm_sqr()).collect()
    }
}

/// `y_j = h·x_j + z_j`, `z_j ~ CN(0, σ²)`.
pub fn apply_channel<R: Rng + ?Sized>(
    x: &[ComplexSample],
    h: Complex64,
    sigma2: f64,
    rng: &mut R,
) -> Vec<ComplexSample> {
    x.iter()
        .map(|&s| {
            let z = if sigma2 > 0.0 { complex_gaussian(rng, sigma2) } else { Complex64::new(0.0, 0.0) };
            h * s + z
        })
        .collect()
}
