//! Channel model: link budget arithmetic and noise statistics.

use lpma::channel::{
    apply_channel, complex_gaussian, pathloss_db, rayleigh_sample, snr_from_budget, ChannelRealization, LinkBudget,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SAMPLES: usize = 1_000_000;

#[test]
fn budget_examples() {
    assert!((pathloss_db(1.0).unwrap() - 21.5).abs() < 1e-12);
    assert!((pathloss_db(0.5).unwrap() - 10.453).abs() < 1e-3);
    assert!((pathloss_db(10.0).unwrap() - 58.2).abs() < 1e-12);
    assert!(pathloss_db(10f64.powf(-21.5 / 36.7)).unwrap().abs() < 1e-12);
    assert!(pathloss_db(0.0).is_err());

    let b = LinkBudget::default();
    let noise = -174.0 + 70.0 + 5.0;
    let expected = 46.0 - (21.5 + 36.7 * 0.25f64.log10()) - noise;
    assert!((b.snr_db(0.25).unwrap() - expected).abs() < 1e-9);
    assert!((expected - 145.6).abs() < 0.01);
    let linear = snr_from_budget(&b, 0.25).unwrap();
    assert!((10.0 * linear.log10() - expected).abs() < 1e-9);
    let doubled = LinkBudget { bandwidth_hz: 2.0 * b.bandwidth_hz, ..b.clone() };
    let drop = b.snr_db(0.25).unwrap() - doubled.snr_db(0.25).unwrap();
    assert!((drop - 3.0103).abs() < 1e-4);
}

/// Variance of `|z|²` samples and the excess kurtosis of the real parts.
fn moments(z: &[Complex64]) -> (f64, Complex64, f64) {
    let n = z.len() as f64;
    let mean = z.iter().sum::<Complex64>() / n;
    let var = z.iter().map(|s| (s - mean).norm_sqr()).sum::<f64>() / n;
    let re_var = z.iter().map(|s| (s.re - mean.re).powi(2)).sum::<f64>() / n;
    let re_m4 = z.iter().map(|s| (s.re - mean.re).powi(4)).sum::<f64>() / n;
    (var, mean, re_m4 / (re_var * re_var))
}

#[test]
fn noise_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for sigma2 in [1.0, 0.25, 4.0] {
        let z: Vec<Complex64> = (0..SAMPLES).map(|_| complex_gaussian(&mut rng, sigma2)).collect();
        let (var, mean, kurt) = moments(&z);
        assert!((var / sigma2 - 1.0).abs() < 0.02, "variance {var} for {sigma2}");
        assert!(mean.norm() < 0.01 * sigma2.sqrt());
        assert!((kurt / 3.0 - 1.0).abs() < 0.05, "kurtosis {kurt}");
    }
}

#[test]
fn rayleigh_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h: Vec<Complex64> = (0..SAMPLES).map(|_| rayleigh_sample(&mut rng)).collect();
    let power = h.iter().map(|x| x.norm_sqr()).sum::<f64>() / SAMPLES as f64;
    let mean = h.iter().sum::<Complex64>() / SAMPLES as f64;
    assert!((power - 1.0).abs() < 0.01);
    assert!(mean.re.abs() < 0.01 && mean.im.abs() < 0.01);
    // |h|² is exponential: E|h|⁴ = 2
    let m4 = h.iter().map(|x| x.norm_sqr().powi(2)).sum::<f64>() / SAMPLES as f64;
    assert!((m4 / 2.0 - 1.0).abs() < 0.05);
}

#[test]
fn applied_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x: Vec<Complex64> = (0..SAMPLES).map(|i| Complex64::new((i % 7) as f64, -((i % 3) as f64))).collect();
    let y = apply_channel(&x, Complex64::new(1.0, 0.0), 0.5, &mut rng);
    let z: Vec<Complex64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
    let (var, _, _) = moments(&z);
    assert!((var / 0.5 - 1.0).abs() < 0.02);

    let zeros = vec![Complex64::new(0.0, 0.0); SAMPLES];
    let y = apply_channel(&zeros, Complex64::new(0.3, 0.2), 2.0, &mut rng);
    let (var, _, _) = moments(&y);
    assert!((var / 2.0 - 1.0).abs() < 0.02);

    let h = Complex64::new(-0.4, 0.9);
    assert_eq!(apply_channel(&x[..10], h, 0.0, &mut rng), x[..10].iter().map(|s| h * s).collect::<Vec<_>>());
}

#[test]
fn seeded_streams() {
    let x = vec![Complex64::new(1.0, 1.0); 64];
    let run = |seed| apply_channel(&x, Complex64::new(0.5, 0.0), 1.0, &mut ChaCha8Rng::seed_from_u64(seed));
    assert_eq!(run(5), run(5));
    assert_ne!(run(5), run(6));
    let draw = |seed| ChannelRealization::draw(&[1.0, 2.0], true, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    assert_eq!(draw(9), draw(9));
    assert_ne!(draw(9), draw(10));
}

proptest! {
    #[test]
    fn pathloss_increasing(d in 1e-3f64..100.0, factor in 1.000_001f64..10.0) {
        prop_assert!(pathloss_db(d * factor).unwrap() > pathloss_db(d).unwrap());
    }

    #[test]
    fn apply_channel_deterministic(seed in any::<u64>(), re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let x = vec![Complex64::new(re, im); 16];
        let h = Complex64::new(im, re);
        let a = apply_channel(&x, h, 1.0, &mut ChaCha8Rng::seed_from_u64(seed));
        let b = apply_channel(&x, h, 1.0, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(a, b);
    }
}
