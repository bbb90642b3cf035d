//! User grouping for two-user superposition.
//!
//! NOMA needs the paired users' gains to differ by at least a ratio
//! threshold; LPMA can serve any pair with two distinct primes over the same
//! field, so its round-robin pairing applies no filter.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Default gains for the four-user scheduling example: two weak users with
/// similar gains (UE 1, UE 3) and two strong ones (UE 2, UE 4).
pub const DEFAULT_GAINS: [f64; 4] = [0.10, 1.00, 0.12, 1.10];

/// Default "similar channel" threshold on the gain ratio (3 dB).
pub const DEFAULT_RATIO_THRESHOLD: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct UserPopulation {
    users: Vec<(u32, f64)>,
}

impl UserPopulation {
    pub fn new(users: Vec<(u32, f64)>) -> Result<Self> {
        let mut ids: Vec<u32> = users.iter().map(|u| u.0).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("user ids must be unique".into()));
        }
        if users.iter().any(|u| !(u.1.is_finite() && u.1 >= 0.0)) {
            return Err(Error::InvalidArgument("gains must be non-negative".into()));
        }
        Ok(UserPopulation { users })
    }

    /// UE 1..4 with [`DEFAULT_GAINS`].
    pub fn example_default() -> Self {
        UserPopulation {
            users: DEFAULT_GAINS.iter().enumerate().map(|(i, &g)| (i as u32 + 1, g)).collect(),
        }
    }

    pub fn users(&self) -> &[(u32, f64)] {
        &self.users
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn gain(&self, id: u32) -> Option<f64> {
        self.users.iter().find(|u| u.0 == id).map(|u| u.1)
    }
}

/// A partition of user ids into pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pairing {
    pub groups: Vec<(u32, u32)>,
}

impl Pairing {
    /// Pairs with ids ordered inside each pair and pairs sorted, so equal
    /// matchings compare equal.
    pub fn canonical(mut groups: Vec<(u32, u32)>) -> Self {
        for g in groups.iter_mut() {
            if g.0 > g.1 {
                *g = (g.1, g.0);
            }
        }
        groups.sort_unstable();
        Pairing { groups }
    }
}

/// NOMA's geometrical-separation rule: `max/min ≥ threshold`.
pub fn noma_pair_valid(gain_a: f64, gain_b: f64, threshold: f64) -> Result<bool> {
    if !(threshold > 1.0) {
        return Err(Error::InvalidArgument(format!("ratio threshold must exceed 1, got {threshold}")));
    }
    let (lo, hi) = if gain_a <= gain_b { (gain_a, gain_b) } else { (gain_b, gain_a) };
    if hi == 0.0 {
        return Err(Error::InvalidArgument("both gains are zero".into()));
    }
    if lo == 0.0 {
        return Ok(true);
    }
    Ok(hi / lo >= threshold)
}

fn pairing_valid(pop: &UserPopulation, p: &Pairing, threshold: f64) -> Result<bool> {
    for &(a, b) in &p.groups {
        let ga = pop.gain(a).ok_or_else(|| Error::InvalidArgument(format!("unknown user {a}")))?;
        let gb = pop.gain(b).ok_or_else(|| Error::InvalidArgument(format!("unknown user {b}")))?;
        if !noma_pair_valid(ga, gb, threshold)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The three perfect matchings of four users.
pub fn enumerate_pairings(pop: &UserPopulation) -> Result<Vec<Pairing>> {
    if pop.len() != 4 {
        return Err(Error::InvalidArgument(format!("expected 4 users, got {}", pop.len())));
    }
    let id: Vec<u32> = pop.users.iter().map(|u| u.0).collect();
    Ok([(1, 2, 3), (2, 1, 3), (3, 1, 2)]
        .iter()
        .map(|&(partner, c, d)| Pairing::canonical(vec![(id[0], id[partner]), (id[c], id[d])]))
        .collect())
}

/// Uniformly random perfect matching, with no validity filter.
pub fn lpma_round_robin_pairing<R: Rng + ?Sized>(pop: &UserPopulation, rng: &mut R) -> Result<Pairing> {
    if pop.len() % 2 != 0 || pop.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "pairing needs an even, non-zero population, got {}",
            pop.len()
        )));
    }
    let mut ids: Vec<u32> = pop.users.iter().map(|u| u.0).collect();
    // every matching arises from the same number of permutations
    ids.shuffle(rng);
    Ok(Pairing::canonical(ids.chunks(2).map(|c| (c[0], c[1])).collect()))
}

/// Fraction of uniformly random pairings that put at least one pair of
/// similar-gain users together.
pub fn random_pairing_degradation_rate<R: Rng + ?Sized>(
    pop: &UserPopulation,
    threshold: f64,
    trials: u64,
    rng: &mut R,
) -> Result<f64> {
    if trials == 0 {
        return Ok(0.0);
    }
    let mut degraded = 0u64;
    for _ in 0..trials {
        let p = lpma_round_robin_pairing(pop, rng)?;
        if !pairing_valid(pop, &p, threshold)? {
            degraded += 1;
        }
    }
    Ok(degraded as f64 / trials as f64)
}

/// Exact degradation probability over the three four-user matchings.
pub fn exact_degradation_rate(pop: &UserPopulation, threshold: f64) -> Result<f64> {
    let pairings = enumerate_pairings(pop)?;
    let mut invalid = 0;
    for p in &pairings {
        if !pairing_valid(pop, p, threshold)? {
            invalid += 1;
        }
    }
    Ok(invalid as f64 / pairings.len() as f64)
}

/// Whether a pairing is servable by NOMA.
pub fn noma_pairing_valid(pop: &UserPopulation, p: &Pairing, threshold: f64) -> Result<bool> {
    pairing_valid(pop, p, threshold)
}
