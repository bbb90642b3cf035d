//! Prime-to-user assignment.
//!
//! Weaker users get the smaller own-prime, which gives them the larger
//! co-factor weight in the superposition. Two policies are offered: a plain
//! ordering of a fixed prime list by channel quality, and a lookup that
//! maps each user's SINR to a supportable throughput and picks the richest
//! level that fits.

use serde::{Deserialize, Serialize};

use crate::channel::linear_to_db;
use crate::code::LinearCode;
use crate::codec::LevelConfig;
use crate::error::{Error, Result};
use crate::ring::{coprime, RingPrime};

/// SINR-to-throughput table (bits per symbol).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThroughputTable {
    /// `log₂(1 + SINR)`.
    #[default]
    Shannon,
    /// Staircase: the throughput of the last entry whose threshold does not
    /// exceed the SINR, or 0 below the first entry.
    Steps { points: Vec<(f64, f64)> },
}

impl ThroughputTable {
    pub fn steps(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.iter().any(|(s, t)| !s.is_finite() || !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::InvalidArgument("table entries must be finite".into()));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(ThroughputTable::Steps { points })
    }

    pub fn throughput(&self, sinr_linear: f64) -> f64 {
        match self {
            ThroughputTable::Shannon => (1.0 + sinr_linear.max(0.0)).log2(),
            ThroughputTable::Steps { points } => {
                let db = linear_to_db(sinr_linear);
                points
                    .iter()
                    .take_while(|(s, _)| *s <= db)
                    .last()
                    .map_or(0.0, |(_, t)| *t)
            }
        }
    }
}

fn weakest_first(users: &[(u32, f64)]) -> Vec<(u32, f64)> {
    let mut sorted = users.to_vec();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    sorted
}

/// Sorts users by ascending channel quality and hands out the candidate
/// levels by ascending prime norm (stable in candidate order).
pub fn order_by_fairness(
    users: &[(u32, f64)],
    mut candidates: Vec<(RingPrime, LinearCode)>,
) -> Result<Vec<LevelConfig>> {
    if users.len() != candidates.len() {
        return Err(Error::Config(format!(
            "{} users but {} primes",
            users.len(),
            candidates.len()
        )));
    }
    candidates.sort_by_key(|(p, _)| p.norm_q());
    weakest_first(users)
        .into_iter()
        .zip(candidates)
        .map(|((id, _), (theta, code))| LevelConfig::new(id, theta, code))
        .collect()
}

/// For each user, weakest first, picks the unused candidate with the
/// largest level throughput not above `table(SINR)`, coprime with the
/// primes already chosen. A user whose SINR supports no candidate gets the
/// lowest-throughput one left.
pub fn assign_by_lookup(
    users: &[(u32, f64)],
    candidates: &[(RingPrime, LinearCode)],
    table: &ThroughputTable,
) -> Result<Vec<LevelConfig>> {
    if candidates.len() < users.len() {
        return Err(Error::Config(format!(
            "{} users but only {} candidate primes",
            users.len(),
            candidates.len()
        )));
    }
    let mut used = vec![false; candidates.len()];
    let mut chosen: Vec<LevelConfig> = Vec::with_capacity(users.len());
    for (id, sinr) in weakest_first(users) {
        let target = table.throughput(sinr);
        let mut fits: Option<usize> = None;
        let mut fallback: Option<usize> = None;
        for (i, (p, code)) in candidates.iter().enumerate() {
            if used[i] {
                continue;
            }
            let mut compatible = true;
            for c in &chosen {
                if !coprime(p.value(), c.theta.value())? {
                    compatible = false;
                    break;
                }
            }
            if !compatible {
                continue;
            }
            let rate = code.bits_per_symbol();
            if rate <= target && fits.is_none_or(|j| rate > candidates[j].1.bits_per_symbol()) {
                fits = Some(i);
            }
            if fallback.is_none_or(|j| rate < candidates[j].1.bits_per_symbol()) {
                fallback = Some(i);
            }
        }
        let pick = fits.or(fallback).ok_or_else(|| {
            Error::Config(format!("no coprime prime left for user {id}"))
        })?;
        used[pick] = true;
        let (theta, code) = candidates[pick].clone();
        chosen.push(LevelConfig::new(id, theta, code)?);
    }
    Ok(chosen)
}
