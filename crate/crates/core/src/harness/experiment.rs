//! Seeded Monte Carlo throughput campaigns.
//!
//! Trial `t` draws everything from its own ChaCha8 stream (`seed`, stream
//! `t`), so results do not depend on the worker count or scheduling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{Experiment, ExperimentConfig, LpmaSetup, Scheme};
use super::report::{digest, ReportRow, ThroughputReport, ACCOUNTING_NOTE, GIT_DESCRIBE};
use super::stats::{mean_and_halfwidth, wilson_halfwidth};
use crate::baseline::{noma_rates, oma_rates, NomaConfig};
use crate::channel::{apply_channel, ChannelRealization};
use crate::code::Message;
use crate::codec::{
    channel_compensate, hybrid_decode, lpma_encode, mlo_pic_decode, mlo_sic_decode, DecoderKind,
};
use crate::error::{Error, Result};
use crate::pairing::noma_pair_valid;

/// Random number generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Default, PartialEq)]
struct TrialOutcome {
    /// Own-level decode success per user.
    lpma: Vec<bool>,
    noma: Vec<f64>,
    noma_degraded: bool,
    oma: Vec<f64>,
}

pub fn random_messages<R: Rng + ?Sized>(setup: &LpmaSetup, rng: &mut R) -> Vec<Message> {
    setup
        .config
        .levels()
        .iter()
        .map(|l| {
            let q = l.code.q();
            Message((0..l.code.k()).map(|_| rng.random_range(0..q)).collect())
        })
        .collect()
}

/// Decodes `level` from compensated samples with the configured receiver and
/// reports whether it matches `truth`.
fn lpma_user_success(
    setup: &LpmaSetup,
    y_tilde: &[num_complex::Complex64],
    level: usize,
    truth: &Message,
) -> Result<bool> {
    let cfg = &setup.config;
    let result = match setup.decoder {
        DecoderKind::Sic => mlo_sic_decode(cfg, y_tilde, level)?,
        DecoderKind::Pic => mlo_pic_decode(cfg, y_tilde, level)?,
        DecoderKind::Hybrid => {
            let pic: Vec<usize> = setup.pic_levels.iter().copied().filter(|&l| l <= level).collect();
            let sic: Vec<usize> = (0..=level).filter(|l| !pic.contains(l)).collect();
            hybrid_decode(cfg, y_tilde, &pic, &sic)?
        }
    };
    Ok(result.level(level).is_some_and(|d| &d.message == truth))
}

/// NOMA rates per user (input order) at the drawn gains. When any two
/// gain-adjacent users violate the ratio rule, every user is served at the
/// weakest gain, whose sum rate is the single-user capacity of that gain.
fn noma_trial(cfg: &NomaConfig, threshold: f64, gains: &[f64]) -> Result<(Vec<f64>, bool)> {
    let mut order: Vec<usize> = (0..gains.len()).collect();
    order.sort_by(|&a, &b| gains[a].total_cmp(&gains[b]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| gains[i]).collect();
    let mut valid = true;
    for w in sorted.windows(2) {
        if w[1] == 0.0 || !noma_pair_valid(w[0], w[1], threshold)? {
            valid = false;
            break;
        }
    }
    let effective = if valid { sorted } else { vec![sorted[0]; sorted.len()] };
    let rates_sorted = noma_rates(cfg, &effective)?;
    let mut rates = vec![0.0; gains.len()];
    for (rank, &user) in order.iter().enumerate() {
        rates[user] = rates_sorted[rank];
    }
    Ok((rates, !valid))
}

fn run_trial(exp: &Experiment, seed: u64, trial: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, trial);
    let channel = ChannelRealization::draw(&exp.mean_gains, exp.fading, &mut rng)?;
    let gains = channel.gains();
    let mut out = TrialOutcome::default();

    if let Some(setup) = &exp.lpma {
        let messages = random_messages(setup, &mut rng);
        let x = lpma_encode(&setup.config, &messages)?;
        for (user, &level) in setup.user_level.iter().enumerate() {
            let h = channel.h[user];
            let y = apply_channel(&x.0, h, channel.sigma2, &mut rng);
            let ok = match channel_compensate(&setup.config, &y, h) {
                Ok(y_tilde) => lpma_user_success(setup, &y_tilde, level, &messages[level])?,
                // a dead channel carries nothing
                Err(Error::InvalidArgument(_)) => false,
                Err(e) => return Err(e),
            };
            out.lpma.push(ok);
        }
    }
    if let Some((cfg, threshold)) = &exp.noma {
        let (rates, degraded) = noma_trial(cfg, *threshold, &gains)?;
        out.noma = rates;
        out.noma_degraded = degraded;
    }
    if exp.schemes.contains(&Scheme::Oma) {
        out.oma = oma_rates(exp.power, &gains, &exp.oma_shares)?;
    }
    Ok(out)
}

fn run_trials(exp: &Experiment, seed: u64, trials: u64, workers: Option<usize>) -> Result<Vec<TrialOutcome>> {
    let work = || (0..trials).into_par_iter().map(|t| run_trial(exp, seed, t)).collect::<Result<Vec<_>>>();
    match workers {
        Some(0) => Err(Error::Config("parallel worker count must be positive".into())),
        Some(1) => (0..trials).map(|t| run_trial(exp, seed, t)).collect(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work),
        None => work(),
    }
}

fn lpma_rows(exp: &Experiment, setup: &LpmaSetup, outcomes: &[TrialOutcome]) -> Vec<ReportRow> {
    let n = outcomes.len() as u64;
    let rates: Vec<f64> = setup
        .user_level
        .iter()
        .map(|&l| setup.config.levels()[l].code.bits_per_symbol())
        .collect();
    let mut rows = Vec::with_capacity(rates.len() + 1);
    for (u, &rate) in rates.iter().enumerate() {
        let successes = outcomes.iter().filter(|o| o.lpma[u]).count() as u64;
        rows.push(ReportRow {
            scheme: Scheme::Lpma.name().into(),
            user: exp.user_ids[u].to_string(),
            throughput_bps_per_symbol: rate * successes as f64 / n as f64,
            success_rate: successes as f64 / n as f64,
            ci_halfwidth: rate * wilson_halfwidth(successes, n),
        });
    }
    let sums: Vec<f64> = outcomes
        .iter()
        .map(|o| o.lpma.iter().zip(&rates).filter(|(ok, _)| **ok).fold(0.0, |acc, (_, r)| acc + r))
        .collect();
    let all_ok = outcomes.iter().filter(|o| o.lpma.iter().all(|&b| b)).count();
    let (mean, half) = mean_and_halfwidth(&sums);
    rows.push(ReportRow {
        scheme: Scheme::Lpma.name().into(),
        user: "sum".into(),
        throughput_bps_per_symbol: mean,
        success_rate: all_ok as f64 / n as f64,
        ci_halfwidth: half,
    });
    rows
}

fn formula_rows(exp: &Experiment, scheme: Scheme, per_trial: &[&[f64]]) -> Vec<ReportRow> {
    let users = exp.user_ids.len();
    let mut rows = Vec::with_capacity(users + 1);
    let row = |user: String, samples: &[f64]| {
        let (mean, half) = mean_and_halfwidth(samples);
        ReportRow {
            scheme: scheme.name().into(),
            user,
            throughput_bps_per_symbol: mean,
            success_rate: 1.0,
            ci_halfwidth: half,
        }
    };
    for u in 0..users {
        let samples: Vec<f64> = per_trial.iter().map(|r| r[u]).collect();
        rows.push(row(exp.user_ids[u].to_string(), &samples));
    }
    let sums: Vec<f64> = per_trial.iter().map(|r| r.iter().fold(0.0, |a, b| a + b)).collect();
    rows.push(row("sum".into(), &sums));
    rows
}

/// Runs the configured campaign. Zero trials yield a report with no rows.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ThroughputReport> {
    let exp = cfg.validate()?;
    let config = cfg.canonical_json();
    let mut report = ThroughputReport {
        note: ACCOUNTING_NOTE,
        git_describe: GIT_DESCRIBE,
        seed: cfg.seed,
        trials: cfg.trials,
        config_digest: digest(&config),
        config,
        rows: Vec::new(),
        noma_degraded_fraction: None,
    };
    if cfg.trials == 0 {
        return Ok(report);
    }
    let outcomes = run_trials(&exp, cfg.seed, cfg.trials, cfg.parallel)?;
    for &scheme in &exp.schemes {
        match scheme {
            Scheme::Lpma => {
                let setup = exp.lpma.as_ref().expect("validated");
                report.rows.extend(lpma_rows(&exp, setup, &outcomes));
            }
            Scheme::Noma => {
                let per_trial: Vec<&[f64]> = outcomes.iter().map(|o| o.noma.as_slice()).collect();
                report.rows.extend(formula_rows(&exp, scheme, &per_trial));
                let degraded = outcomes.iter().filter(|o| o.noma_degraded).count();
                report.noma_degraded_fraction = Some(degraded as f64 / outcomes.len() as f64);
            }
            Scheme::Oma => {
                let per_trial: Vec<&[f64]> = outcomes.iter().map(|o| o.oma.as_slice()).collect();
                report.rows.extend(formula_rows(&exp, scheme, &per_trial));
            }
        }
    }
    Ok(report)
}
