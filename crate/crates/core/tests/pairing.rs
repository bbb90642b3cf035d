//! Pairing: matchings, uniformity and degradation frequencies.

use std::collections::{HashMap, HashSet};

use lpma::pairing::{
    enumerate_pairings, exact_degradation_rate, lpma_round_robin_pairing, noma_pair_valid,
    random_pairing_degradation_rate, Pairing, UserPopulation, DEFAULT_RATIO_THRESHOLD,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Perfect matchings of four ids by brute force over all 4! orderings.
fn oracle_matchings(ids: [u32; 4]) -> HashSet<Pairing> {
    let mut out = HashSet::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let set: HashSet<usize> = [a, b, c, d].into_iter().collect();
                    if set.len() == 4 {
                        out.insert(Pairing::canonical(vec![(ids[a], ids[b]), (ids[c], ids[d])]));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn default_population_degradation() {
    let pop = UserPopulation::example_default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let rate = random_pairing_degradation_rate(&pop, DEFAULT_RATIO_THRESHOLD, 100_000, &mut rng).unwrap();
    assert!((rate - 1.0 / 3.0).abs() <= 0.02, "{rate}");
    assert_eq!(exact_degradation_rate(&pop, DEFAULT_RATIO_THRESHOLD).unwrap(), 1.0 / 3.0);
    assert!(!noma_pair_valid(0.7, 0.7, 1.5).unwrap());
}

#[test]
fn round_robin_is_uniform() {
    let pop = UserPopulation::example_default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut counts: HashMap<Pairing, u32> = HashMap::new();
    for _ in 0..100_000 {
        *counts.entry(lpma_round_robin_pairing(&pop, &mut rng).unwrap()).or_default() += 1;
    }
    assert_eq!(counts.len(), 3);
    for (p, c) in counts {
        let f = c as f64 / 100_000.0;
        assert!((f - 1.0 / 3.0).abs() <= 0.02, "{p:?}: {f}");
    }
}

proptest! {
    #[test]
    fn matchings_exhaustive(ids in prop::collection::hash_set(0u32..1000, 4)) {
        let ids: Vec<u32> = ids.into_iter().collect();
        let pop = UserPopulation::new(ids.iter().map(|&i| (i, 1.0)).collect()).unwrap();
        let got = enumerate_pairings(&pop).unwrap();
        let unique: HashSet<Pairing> = got.iter().cloned().collect();
        prop_assert_eq!(got.len(), 3);
        prop_assert_eq!(unique, oracle_matchings([ids[0], ids[1], ids[2], ids[3]]));
        for p in &got {
            let mut members: Vec<u32> = p.groups.iter().flat_map(|&(a, b)| [a, b]).collect();
            members.sort_unstable();
            let mut expected = ids.clone();
            expected.sort_unstable();
            prop_assert_eq!(members, expected);
        }
    }

    #[test]
    fn frequency_tracks_enumeration(gains in prop::collection::vec(0.01f64..10.0, 4), seed in any::<u64>()) {
        let pop = UserPopulation::new(gains.iter().enumerate().map(|(i, &g)| (i as u32, g)).collect()).unwrap();
        let exact = exact_degradation_rate(&pop, 2.0).unwrap();
        let rate = random_pairing_degradation_rate(&pop, 2.0, 20_000, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        // exact is a multiple of 1/3; the estimate is within 5 standard deviations
        prop_assert!((rate - exact).abs() < 0.02, "{} vs {}", rate, exact);
    }
}
