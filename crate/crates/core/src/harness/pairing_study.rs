//! Random pairing study: how often uniformly random two-user groups break
//! NOMA's gain-separation rule, and what each scheme delivers per group.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{CodeSpec, LevelSpec};
use super::experiment::trial_rng;
use super::report::{digest, rows_to_csv, write_pair, ReportRow, GIT_DESCRIBE};
use super::stats::mean_and_halfwidth;
use crate::assignment::order_by_fairness;
use crate::baseline::{noma_sum_rate, oma_rates, NomaConfig};
use crate::channel::apply_channel;
use crate::code::Message;
use crate::codec::{channel_compensate, lpma_encode, mlo_sic_decode, LpmaConfig};
use crate::error::{Error, Result};
use crate::pairing::{
    exact_degradation_rate, lpma_round_robin_pairing, noma_pair_valid, UserPopulation, DEFAULT_GAINS,
    DEFAULT_RATIO_THRESHOLD,
};
use crate::ring::{RingDomain, RingElement, RingPrime};

pub const PAIRING_NOTE: &str = "Each trial pairs the users by a uniformly random perfect matching. \
A NOMA group is degraded when its gain ratio is below the threshold and is then served at \
single-user capacity of the weaker gain. An LPMA group is degraded only when no coprime prime \
assignment exists. LPMA group throughput is simulated (credited on correct decode); NOMA and OMA \
throughput come from rate formulas.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingStudyConfig {
    pub seed: u64,
    pub trials: u64,
    /// Linear gains of users 1, 2, …; the count must be even.
    pub gains: Vec<f64>,
    pub ratio_threshold: f64,
    /// Transmit power with unit noise.
    pub power: f64,
    /// NOMA power split (weaker user first).
    pub alpha: Vec<f64>,
    pub domain: RingDomain,
    pub block_length: usize,
    /// Two levels, handed out by channel quality.
    pub levels: Vec<LevelSpec>,
    #[serde(default, skip_serializing)]
    pub parallel: Option<usize>,
}

impl Default for PairingStudyConfig {
    fn default() -> Self {
        PairingStudyConfig {
            seed: 1,
            trials: 100_000,
            gains: DEFAULT_GAINS.to_vec(),
            ratio_threshold: DEFAULT_RATIO_THRESHOLD,
            // 35 dB: the weakest default user sees 25 dB
            power: 10f64.powf(3.5),
            alpha: vec![0.8, 0.2],
            domain: RingDomain::Eisenstein,
            block_length: 16,
            levels: vec![
                LevelSpec { prime: (2, 3), code: CodeSpec::Identity },
                LevelSpec { prime: (3, 2), code: CodeSpec::Identity },
            ],
            parallel: None,
        }
    }
}

impl PairingStudyConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingStudyReport {
    pub note: &'static str,
    pub git_describe: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub config_digest: String,
    pub config: serde_json::Value,
    pub noma_degradation_rate: f64,
    pub lpma_degradation_rate: f64,
    /// Over all matchings; four-user populations only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_noma_degradation_rate: Option<f64>,
    /// Per-group sum throughput per scheme (user column `group`).
    pub rows: Vec<ReportRow>,
}

impl PairingStudyReport {
    pub fn to_csv(&self) -> String {
        rows_to_csv(&self.rows)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is always serialisable");
        s.push('\n');
        s
    }

    pub fn write(&self, stem: &Path) -> Result<(PathBuf, PathBuf)> {
        write_pair(stem, &self.to_csv(), &self.to_json())
    }

    pub fn row(&self, scheme: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.scheme == scheme)
    }
}

#[derive(Debug, Clone, Default)]
struct TrialOutcome {
    noma_degraded: bool,
    lpma_degraded: bool,
    noma: Vec<f64>,
    oma: Vec<f64>,
    /// Per group: simulated sum throughput and whether both users decoded.
    lpma: Vec<(f64, bool)>,
}

struct Study {
    pop: UserPopulation,
    noma: NomaConfig,
    threshold: f64,
    power: f64,
    /// LPMA configuration per unordered pair, `None` when none exists.
    lpma: BTreeMap<(u32, u32), Option<LpmaConfig>>,
}

fn build(cfg: &PairingStudyConfig) -> Result<Study> {
    let config_err = |e: Error| match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    };
    let users: Vec<(u32, f64)> = cfg.gains.iter().enumerate().map(|(i, &g)| (i as u32 + 1, g)).collect();
    let pop = UserPopulation::new(users).map_err(config_err)?;
    if pop.is_empty() || pop.len() % 2 != 0 {
        return Err(Error::Config(format!("pairing needs an even number of users, got {}", pop.len())));
    }
    if !(cfg.ratio_threshold > 1.0) {
        return Err(Error::Config("ratio_threshold must exceed 1".into()));
    }
    if cfg.alpha.len() != 2 {
        return Err(Error::Config("alpha needs one entry per group member (2)".into()));
    }
    let noma = NomaConfig::new(cfg.power, cfg.alpha.clone()).map_err(config_err)?;
    if cfg.levels.len() != 2 {
        return Err(Error::Config("levels needs exactly two entries".into()));
    }
    let candidates = cfg
        .levels
        .iter()
        .map(|l| {
            let theta = RingPrime::new(RingElement::new(cfg.domain, l.prime.0, l.prime.1)?)?;
            let q = u32::try_from(theta.norm_q()).map_err(|_| Error::Overflow)?;
            Ok((theta, l.code.build(q, cfg.block_length)?))
        })
        .collect::<Result<Vec<_>>>()
        .map_err(config_err)?;

    let mut lpma = BTreeMap::new();
    let users = pop.users();
    for (i, &(a, ga)) in users.iter().enumerate() {
        for &(b, gb) in &users[i + 1..] {
            let pair = [(a, ga * cfg.power), (b, gb * cfg.power)];
            let built = order_by_fairness(&pair, candidates.clone())
                .and_then(|levels| LpmaConfig::new(cfg.domain, levels, cfg.power))
                .ok();
            lpma.insert((a.min(b), a.max(b)), built);
        }
    }
    Ok(Study { pop, noma, threshold: cfg.ratio_threshold, power: cfg.power, lpma })
}

/// Sum throughput of one LPMA group over a static channel, and whether both
/// users decoded their own level.
fn lpma_group<R: Rng + ?Sized>(study: &Study, cfg: &LpmaConfig, rng: &mut R) -> Result<(f64, bool)> {
    let messages: Vec<Message> = cfg
        .levels()
        .iter()
        .map(|l| Message((0..l.code.k()).map(|_| rng.random_range(0..l.code.q())).collect()))
        .collect();
    let x = lpma_encode(cfg, &messages)?;
    let mut total = 0.0;
    let mut all = true;
    for (level, l) in cfg.levels().iter().enumerate() {
        let gain = study.pop.gain(l.user_id).expect("pair members are in the population");
        let h = Complex64::new(gain.sqrt(), 0.0);
        let y = apply_channel(&x.0, h, 1.0, rng);
        let ok = match channel_compensate(cfg, &y, h) {
            Ok(y_tilde) => mlo_sic_decode(cfg, &y_tilde, level)?
                .level(level)
                .is_some_and(|d| d.message == messages[level]),
            Err(_) => false,
        };
        if ok {
            total += l.code.bits_per_symbol();
        } else {
            all = false;
        }
    }
    Ok((total, all))
}

fn run_trial(study: &Study, seed: u64, trial: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, trial);
    let pairing = lpma_round_robin_pairing(&study.pop, &mut rng)?;
    let mut out = TrialOutcome::default();
    for &(a, b) in &pairing.groups {
        let (ga, gb) = (study.pop.gain(a).unwrap_or(0.0), study.pop.gain(b).unwrap_or(0.0));
        let (lo, hi) = if ga <= gb { (ga, gb) } else { (gb, ga) };
        let valid = hi > 0.0 && noma_pair_valid(lo, hi, study.threshold)?;
        out.noma_degraded |= !valid;
        let gains = if valid { [lo, hi] } else { [lo, lo] };
        out.noma.push(noma_sum_rate(&study.noma, &gains)?);
        out.oma.push(oma_rates(study.power, &[lo, hi], &[0.5, 0.5])?.iter().sum());
        match &study.lpma[&(a, b)] {
            Some(cfg) => out.lpma.push(lpma_group(study, cfg, &mut rng)?),
            None => {
                out.lpma_degraded = true;
                out.lpma.push((0.0, false));
            }
        }
    }
    Ok(out)
}

pub fn run_pairing_study(cfg: &PairingStudyConfig) -> Result<PairingStudyReport> {
    let study = build(cfg)?;
    let config = serde_json::to_value(cfg).expect("config is always serialisable");
    let exact = if study.pop.len() == 4 {
        Some(exact_degradation_rate(&study.pop, study.threshold)?)
    } else {
        None
    };
    let work = || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(&study, cfg.seed, t))
            .collect::<Result<Vec<_>>>()
    };
    let outcomes = match cfg.parallel {
        Some(0) => return Err(Error::Config("parallel worker count must be positive".into())),
        Some(1) => (0..cfg.trials).map(|t| run_trial(&study, cfg.seed, t)).collect::<Result<Vec<_>>>()?,
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work)?,
        None => work()?,
    };

    let n = outcomes.len().max(1) as f64;
    let noma_bad = outcomes.iter().filter(|o| o.noma_degraded).count();
    let lpma_bad = outcomes.iter().filter(|o| o.lpma_degraded).count();
    let mut rows = Vec::new();
    if !outcomes.is_empty() {
        let noma: Vec<f64> = outcomes.iter().flat_map(|o| o.noma.iter().copied()).collect();
        let oma: Vec<f64> = outcomes.iter().flat_map(|o| o.oma.iter().copied()).collect();
        let lpma: Vec<f64> = outcomes.iter().flat_map(|o| o.lpma.iter().map(|g| g.0)).collect();
        let lpma_ok = outcomes.iter().flat_map(|o| &o.lpma).filter(|g| g.1).count();
        let row = |scheme: &str, samples: &[f64], success: f64| {
            let (mean, half) = mean_and_halfwidth(samples);
            ReportRow {
                scheme: scheme.into(),
                user: "group".into(),
                throughput_bps_per_symbol: mean,
                success_rate: success,
                ci_halfwidth: half,
            }
        };
        rows.push(row("lpma", &lpma, lpma_ok as f64 / lpma.len() as f64));
        rows.push(row("noma", &noma, 1.0));
        rows.push(row("oma", &oma, 1.0));
    }
    Ok(PairingStudyReport {
        note: PAIRING_NOTE,
        git_describe: GIT_DESCRIBE,
        seed: cfg.seed,
        trials: cfg.trials,
        config_digest: digest(&config),
        config,
        noma_degradation_rate: if outcomes.is_empty() { 0.0 } else { noma_bad as f64 / n },
        lpma_degradation_rate: if outcomes.is_empty() { 0.0 } else { lpma_bad as f64 / n },
        exact_noma_degradation_rate: exact,
        rows,
    })
}
