//! Experiment configuration files (TOML) and their validation.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::assignment::{assign_by_lookup, order_by_fairness, ThroughputTable};
use crate::baseline::NomaConfig;
use crate::channel::{db_to_linear, snr_from_budget, LinkBudget};
use crate::code::LinearCode;
use crate::codec::{DecoderKind, LevelConfig, LpmaConfig};
use crate::error::{Error, Result};
use crate::pairing::DEFAULT_RATIO_THRESHOLD;
use crate::ring::{RingDomain, RingElement, RingPrime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Lpma,
    Noma,
    Oma,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Lpma => "lpma",
            Scheme::Noma => "noma",
            Scheme::Oma => "oma",
        }
    }
}

/// How per-user mean channel gains are specified. Noise power is one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GainModel {
    /// `values` are per-user SNRs in dB; transmit power is 1.
    SnrDb,
    /// `values` are linear gains `|h|²`; transmit power is `power`.
    Gains,
    /// `values` are distances in km run through the link budget.
    Distances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UsersConfig {
    pub model: GainModel,
    pub values: Vec<f64>,
    #[serde(default = "one")]
    pub power: f64,
    #[serde(default)]
    pub fading: bool,
    #[serde(default)]
    pub budget: Option<LinkBudget>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CodeSpec {
    /// Uncoded: `k = n`.
    #[default]
    Identity,
    /// `(n, 1)` repetition.
    Repetition,
    /// `(n, n − 1)` single parity check.
    SingleParity,
    /// Explicit generator rows; the row length must equal the block length.
    Generator { rows: Vec<Vec<u32>> },
}

impl CodeSpec {
    pub fn build(&self, q: u32, n: usize) -> Result<LinearCode> {
        match self {
            CodeSpec::Identity => LinearCode::identity(q, n),
            CodeSpec::Repetition => LinearCode::repetition(q, n),
            CodeSpec::SingleParity => {
                if n < 2 {
                    return Err(Error::Config("single-parity code needs block length ≥ 2".into()));
                }
                LinearCode::single_parity(q, n - 1)
            }
            CodeSpec::Generator { rows } => {
                let code = LinearCode::from_generator(q, rows.clone())?;
                if code.n() != n {
                    return Err(Error::Config(format!(
                        "generator has {} columns, block length is {n}",
                        code.n()
                    )));
                }
                Ok(code)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    /// Coordinates `(a, b)` of the prime `a + b·i` / `a + b·ω` (`b = 0` over Z).
    pub prime: (i64, i64),
    #[serde(default)]
    pub code: CodeSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AssignmentPolicy {
    /// Weakest user gets the smallest prime.
    #[default]
    Fairness,
    /// Level `i` goes to user `i` as listed.
    Fixed,
    /// SINR lookup over the listed candidates.
    Lookup,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LpmaSection {
    pub domain: RingDomain,
    pub block_length: usize,
    #[serde(default = "default_decoder")]
    pub decoder: DecoderKind,
    /// Levels decoded in parallel first when `decoder = "hybrid"`.
    #[serde(default)]
    pub pic_levels: Vec<usize>,
    #[serde(default)]
    pub assignment: AssignmentPolicy,
    #[serde(default)]
    pub table: ThroughputTable,
    pub levels: Vec<LevelSpec>,
}

fn default_decoder() -> DecoderKind {
    DecoderKind::Sic
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NomaSection {
    /// Power fractions by ascending gain rank.
    pub alpha: Vec<f64>,
    #[serde(default = "default_threshold")]
    pub ratio_threshold: f64,
}

fn default_threshold() -> f64 {
    DEFAULT_RATIO_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OmaSection {
    /// Time shares per user; equal shares when omitted.
    #[serde(default)]
    pub shares: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: u64,
    pub schemes: Vec<Scheme>,
    pub users: UsersConfig,
    #[serde(default)]
    pub lpma: Option<LpmaSection>,
    #[serde(default)]
    pub noma: Option<NomaSection>,
    #[serde(default)]
    pub oma: Option<OmaSection>,
    /// Worker threads; results do not depend on it.
    #[serde(default, skip_serializing)]
    pub parallel: Option<usize>,
    /// Output path stem; `.csv` and `.json` are appended.
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Canonical JSON used for the digest and the report echo.
    pub fn canonical_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config is always serialisable")
    }

    pub fn validate(&self) -> Result<Experiment> {
        Experiment::build(self)
    }
}

/// A validated experiment with all derived objects.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub schemes: Vec<Scheme>,
    pub user_ids: Vec<u32>,
    /// Mean `|h|²` per user.
    pub mean_gains: Vec<f64>,
    pub power: f64,
    pub fading: bool,
    pub lpma: Option<LpmaSetup>,
    pub noma: Option<(NomaConfig, f64)>,
    pub oma_shares: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpmaSetup {
    pub config: LpmaConfig,
    pub decoder: DecoderKind,
    pub pic_levels: Vec<usize>,
    /// Level index for each user, in user order.
    pub user_level: Vec<usize>,
}

impl Experiment {
    fn build(cfg: &ExperimentConfig) -> Result<Self> {
        let mut schemes = cfg.schemes.clone();
        schemes.sort();
        schemes.dedup();
        if schemes.is_empty() {
            return Err(Error::Config("no schemes selected".into()));
        }
        let users = &cfg.users;
        if users.values.is_empty() {
            return Err(Error::Config("users.values is empty".into()));
        }
        let (mean_gains, power) = match users.model {
            GainModel::SnrDb => (users.values.iter().map(|&v| db_to_linear(v)).collect(), 1.0),
            GainModel::Gains => (users.values.clone(), users.power),
            GainModel::Distances => {
                let budget = users.budget.clone().unwrap_or_default();
                let gains = users
                    .values
                    .iter()
                    .map(|&d| snr_from_budget(&budget, d))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::Config(e.to_string()))?;
                (gains, 1.0)
            }
        };
        if mean_gains.iter().any(|g: &f64| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::Config("user gains must be finite and non-negative".into()));
        }
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::Config(format!("users.power must be positive, got {power}")));
        }
        let user_count = mean_gains.len();
        let user_ids: Vec<u32> = (1..=user_count as u32).collect();

        let lpma = if schemes.contains(&Scheme::Lpma) {
            let section = cfg
                .lpma
                .as_ref()
                .ok_or_else(|| Error::Config("scheme lpma needs an [lpma] section".into()))?;
            Some(build_lpma(section, &user_ids, &mean_gains, power)?)
        } else {
            None
        };

        let noma = if schemes.contains(&Scheme::Noma) {
            let section = cfg
                .noma
                .as_ref()
                .ok_or_else(|| Error::Config("scheme noma needs a [noma] section".into()))?;
            if section.alpha.len() != user_count {
                return Err(Error::Config(format!(
                    "noma.alpha has {} entries for {user_count} users",
                    section.alpha.len()
                )));
            }
            if !(section.ratio_threshold > 1.0) {
                return Err(Error::Config("noma.ratio_threshold must exceed 1".into()));
            }
            let nc = NomaConfig::new(power, section.alpha.clone()).map_err(|e| Error::Config(e.to_string()))?;
            Some((nc, section.ratio_threshold))
        } else {
            None
        };

        let oma_shares = match cfg.oma.as_ref().and_then(|o| o.shares.clone()) {
            Some(s) => {
                if s.len() != user_count {
                    return Err(Error::Config(format!(
                        "oma.shares has {} entries for {user_count} users",
                        s.len()
                    )));
                }
                let total: f64 = s.iter().sum();
                if s.iter().any(|x| *x < 0.0) || (total - 1.0).abs() > 1e-9 {
                    return Err(Error::Config("oma.shares must be non-negative and sum to 1".into()));
                }
                s
            }
            None => vec![1.0 / user_count as f64; user_count],
        };

        Ok(Experiment {
            schemes,
            user_ids,
            mean_gains,
            power,
            fading: users.fading,
            lpma,
            noma,
            oma_shares,
        })
    }
}

fn build_lpma(section: &LpmaSection, user_ids: &[u32], mean_gains: &[f64], power: f64) -> Result<LpmaSetup> {
    if section.block_length == 0 {
        return Err(Error::Config("lpma.block_length must be positive".into()));
    }
    let candidates = section
        .levels
        .iter()
        .map(|l| {
            let value = RingElement::new(section.domain, l.prime.0, l.prime.1)?;
            let theta = RingPrime::new(value)?;
            let q = u32::try_from(theta.norm_q()).map_err(|_| Error::Overflow)?;
            Ok((theta, l.code.build(q, section.block_length)?))
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| match e {
            Error::Config(_) => e,
            other => Error::Config(other.to_string()),
        })?;

    let users: Vec<(u32, f64)> = user_ids.iter().copied().zip(mean_gains.iter().map(|g| g * power)).collect();
    let levels = match section.assignment {
        AssignmentPolicy::Fairness => order_by_fairness(&users, candidates)?,
        AssignmentPolicy::Lookup => assign_by_lookup(&users, &candidates, &section.table)?,
        AssignmentPolicy::Fixed => {
            if candidates.len() != users.len() {
                return Err(Error::Config(format!(
                    "{} users but {} levels",
                    users.len(),
                    candidates.len()
                )));
            }
            users
                .iter()
                .zip(candidates)
                .map(|((id, _), (theta, code))| LevelConfig::new(*id, theta, code))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let config = LpmaConfig::new(section.domain, levels, power).map_err(|e| match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    })?;
    let user_level = user_ids
        .iter()
        .map(|id| {
            config
                .levels()
                .iter()
                .position(|l| l.user_id == *id)
                .expect("every user is assigned a level")
        })
        .collect();
    if section.decoder == DecoderKind::Hybrid {
        if let Some(&bad) = section.pic_levels.iter().find(|&&l| l >= config.num_levels()) {
            return Err(Error::Config(format!("pic level {bad} out of range")));
        }
    }
    Ok(LpmaSetup {
        config,
        decoder: section.decoder,
        pic_levels: section.pic_levels.clone(),
        user_level,
    })
}
