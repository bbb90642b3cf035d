//! The acceptance suite: eight end-to-end checks with runtime budgets.
//!
//! Each check reports pass/fail with a one-line detail; a check that runs
//! over its budget fails.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baseline::{noma_sum_rate, NomaConfig};
use crate::channel::apply_channel;
use crate::code::{Codeword, LinearCode, Message};
use crate::codec::{
    channel_compensate, hybrid_decode, lpma_encode, map_pi_a, mlo_pic_decode, mlo_sic_decode, modulate,
    LatticeWord, LevelConfig, LpmaConfig,
};
use crate::error::{Error, Result};
use crate::harness::config::{
    AssignmentPolicy, CodeSpec, ExperimentConfig, GainModel, LevelSpec, LpmaSection, NomaSection, Scheme,
    UsersConfig,
};
use crate::harness::experiment::run_experiment;
use crate::harness::pairing_study::{run_pairing_study, PairingStudyConfig};
use crate::ring::{quantize_to_ring, RingDomain, RingElement, RingPrime};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let budget = self.budget.map_or(String::new(), |b| format!(" / budget {:.0} s", b.as_secs_f64()));
        write!(
            f,
            "[{}] C{} {} ({:.3} s{budget}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Times `body`, folding errors and budget overruns into a failure.
fn check(id: u32, name: &'static str, budget: Option<Duration>, body: impl FnOnce() -> Result<(bool, String)>) -> CheckOutcome {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(b) = budget {
        if elapsed > b {
            passed = false;
            detail.push_str(&format!("; over runtime budget ({:.2} s)", elapsed.as_secs_f64()));
        }
    }
    CheckOutcome { id, name, passed, detail, elapsed, budget }
}

fn uncoded(domain: RingDomain, primes: &[(i64, i64)], n: usize, power: f64) -> Result<LpmaConfig> {
    let levels = primes
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let theta = RingPrime::new(RingElement::new(domain, a, b)?)?;
            let code = LinearCode::identity(theta.norm_q() as u32, n)?;
            LevelConfig::new(i as u32 + 1, theta, code)
        })
        .collect::<Result<Vec<_>>>()?;
    LpmaConfig::new(domain, levels, power)
}

/// Every symbol tuple of an uncoded configuration: `Π q_ℓ` tuples, one per
/// column, packed into blocks of the configured length (the last block is
/// padded with zeros).
fn all_tuples(cfg: &LpmaConfig) -> Result<Vec<Vec<Message>>> {
    if cfg.levels().iter().any(|l| l.code.k() != l.code.n()) {
        return Err(Error::InvalidArgument("round trip needs uncoded levels".into()));
    }
    let qs: Vec<u32> = cfg.levels().iter().map(|l| l.code.q()).collect();
    let total: u64 = qs.iter().map(|&q| q as u64).product();
    let n = cfg.block_length();
    let mut blocks = Vec::new();
    let mut idx = 0u64;
    while idx < total {
        let mut block = vec![vec![0u32; n]; qs.len()];
        for j in 0..n {
            if idx >= total {
                break;
            }
            let mut rest = idx;
            for (l, &q) in qs.iter().enumerate() {
                block[l][j] = (rest % q as u64) as u32;
                rest /= q as u64;
            }
            idx += 1;
        }
        blocks.push(block.into_iter().map(Message).collect());
    }
    Ok(blocks)
}

/// Exhaustive noiseless round trip of an uncoded configuration: checks that
/// `W` is a bijection onto `R / MR` and that SIC, PIC and every two-way
/// hybrid split return each level's symbols unchanged.
pub fn crt_round_trip(cfg: &LpmaConfig) -> Result<bool> {
    let levels = cfg.num_levels();
    let last = levels - 1;
    let mut seen: HashSet<(i64, i64)> = HashSet::new();
    let mut tuples = 0u64;
    let one = Complex64::new(1.0, 0.0);
    for messages in all_tuples(cfg)? {
        let codewords: Vec<Codeword> = messages.iter().map(|m| Codeword(m.0.clone())).collect();
        let word: LatticeWord = map_pi_a(cfg, &codewords)?;
        let x = modulate(cfg, &word);
        if lpma_encode(cfg, &messages)? != x {
            return Ok(false);
        }
        for w in &word.0 {
            seen.insert((w.a(), w.b()));
        }
        tuples += cfg.block_length() as u64;
        let y_tilde = channel_compensate(cfg, &x.0, one)?;

        let sic = mlo_sic_decode(cfg, &y_tilde, last)?;
        if sic.correctness(&messages).iter().any(|(_, ok)| !ok) || sic.levels.len() != levels {
            return Ok(false);
        }
        for l in 0..levels {
            let pic = mlo_pic_decode(cfg, &y_tilde, l)?;
            if pic.levels[0].message != messages[l] {
                return Ok(false);
            }
            let rest: Vec<usize> = (0..levels).filter(|&j| j != l).collect();
            let hybrid = hybrid_decode(cfg, &y_tilde, &[l], &rest)?;
            if hybrid.correctness(&messages).iter().any(|(_, ok)| !ok) {
                return Ok(false);
            }
        }
    }
    // |R / MR| = Π q_ℓ; the padding repeats the zero tuple
    let size: u128 = cfg.levels().iter().map(|l| l.theta.norm_q() as u128).product();
    Ok(seen.len() as u128 == size && tuples as u128 >= size)
}

pub fn criterion_1() -> CheckOutcome {
    check(1, "CRT bijection and noiseless round trip", Some(Duration::from_secs(1)), || {
        let z = uncoded(RingDomain::Integers, &[(2, 0), (7, 0)], 14, 1.0)?;
        let w = uncoded(RingDomain::Eisenstein, &[(2, 3), (3, 2)], 49, 1.0)?;
        let (a, b) = (crt_round_trip(&z)?, crt_round_trip(&w)?);
        Ok((a && b, format!("Z (2,7) over 14 tuples: {a}; Z[ω] (2+3ω,3+2ω) over 49 tuples: {b}")))
    })
}

pub fn criterion_2() -> CheckOutcome {
    check(2, "worked instance v=(1,3)", None, || {
        let cfg = uncoded(RingDomain::Integers, &[(2, 0), (7, 0)], 1, 1.0)?;
        let word = map_pi_a(&cfg, &[Codeword(vec![1]), Codeword(vec![3])])?;
        let w = word.0[0];
        let factors = (cfg.descale_factor(0), cfg.descale_factor(1));
        let msgs = [Message(vec![1]), Message(vec![3])];
        let y_tilde = channel_compensate(&cfg, &lpma_encode(&cfg, &msgs)?.0, Complex64::new(1.0, 0.0))?;
        let sic = mlo_sic_decode(&cfg, &y_tilde, 1)?;
        let decoded: Vec<u32> = sic.levels.iter().map(|d| d.message.0[0]).collect();
        let passed = w == RingElement::integer(-1) && factors == (1, 4) && decoded == vec![1, 3];
        Ok((passed, format!("W = {w}, descale factors {factors:?}, SIC output {decoded:?}")))
    })
}

pub fn criterion_3() -> CheckOutcome {
    check(3, "equal-gain NOMA sum rate equals single-user capacity", Some(Duration::from_secs(1)), || {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let p = 10f64.powf(rng.random_range(-2.0..4.0));
            let g = 10f64.powf(rng.random_range(-3.0..2.0));
            let a1: f64 = rng.random_range(0.0..1.0);
            let cfg = NomaConfig::new(p, vec![a1, 1.0 - a1])?;
            let err = (noma_sum_rate(&cfg, &[g, g])? - (1.0 + p * g).log2()).abs();
            worst = worst.max(err);
        }
        Ok((worst < 1e-12, format!("max |error| {worst:.2e} over 1000 draws")))
    })
}

pub fn criterion_4() -> CheckOutcome {
    check(4, "random pairing degradation", Some(Duration::from_secs(5)), || {
        let cfg = PairingStudyConfig { trials: 100_000, ..Default::default() };
        let r = run_pairing_study(&cfg)?;
        let passed = (r.noma_degradation_rate - 1.0 / 3.0).abs() <= 0.02 && r.lpma_degradation_rate == 0.0;
        Ok((
            passed,
            format!(
                "NOMA {:.4} (target 0.333 ± 0.02), LPMA {:.4} over {} trials",
                r.noma_degradation_rate, r.lpma_degradation_rate, cfg.trials
            ),
        ))
    })
}

/// The equal-gain sweep configuration used by criterion 5.
pub fn equal_gain_config(snr_db: f64, trials: u64, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        seed,
        trials,
        schemes: vec![Scheme::Lpma, Scheme::Noma, Scheme::Oma],
        users: UsersConfig {
            model: GainModel::SnrDb,
            values: vec![snr_db, snr_db],
            power: 1.0,
            fading: false,
            budget: None,
        },
        lpma: Some(LpmaSection {
            domain: RingDomain::Eisenstein,
            block_length: 256,
            decoder: crate::codec::DecoderKind::Sic,
            pic_levels: Vec::new(),
            assignment: AssignmentPolicy::Fairness,
            table: Default::default(),
            levels: vec![
                LevelSpec { prime: (2, 3), code: CodeSpec::Identity },
                LevelSpec { prime: (3, 2), code: CodeSpec::Identity },
            ],
        }),
        noma: Some(NomaSection { alpha: vec![0.5, 0.5], ratio_threshold: 2.0 }),
        oma: None,
        parallel: None,
        output: None,
    }
}

pub fn criterion_5() -> CheckOutcome {
    check(5, "equal-gain throughput ordering", Some(Duration::from_secs(120)), || {
        let mut passed = true;
        let mut qualifying = 0;
        let mut parts = Vec::new();
        for snr in [10.0, 15.0, 20.0, 25.0, 30.0] {
            let r = run_experiment(&equal_gain_config(snr, 10_000, 5))?;
            let get = |s: &str, u: &str| r.row(s, u).expect("row present").clone();
            let lpma = get("lpma", "sum").throughput_bps_per_symbol;
            let noma = get("noma", "sum").throughput_bps_per_symbol;
            let oma = get("oma", "sum").throughput_bps_per_symbol;
            let success = get("lpma", "1").success_rate.min(get("lpma", "2").success_rate);
            if success >= 0.99 {
                qualifying += 1;
                if !(lpma > noma && lpma > oma) {
                    passed = false;
                }
            }
            parts.push(format!("{snr} dB: LPMA {lpma:.3} (success {success:.4}) NOMA {noma:.3} OMA {oma:.3}"));
        }
        if qualifying == 0 {
            passed = false;
            parts.push("no point reached success 0.99".into());
        }
        Ok((passed, parts.join("; ")))
    })
}

/// Nearest lattice point by exhaustive search over a window, in lattice
/// coordinates. Ties go to the smaller residual first coordinate, then the
/// smaller second coordinate.
pub fn brute_force_quantize(s: Complex64, domain: RingDomain) -> RingElement {
    // lattice coordinates of s and the Gram matrix of the basis
    let (sa, sb, g12, g22) = match domain {
        RingDomain::Integers => (s.re, 0.0, 0.0, 1.0),
        RingDomain::Gaussian => (s.re, s.im, 0.0, 1.0),
        RingDomain::Eisenstein => {
            let b = s.im * 2.0 / 3f64.sqrt();
            (s.re + b / 2.0, b, -0.5, 1.0)
        }
    };
    let tol = 1e-9;
    let base = (sa.round() as i64, sb.round() as i64);
    let span: i64 = if domain == RingDomain::Integers { 0 } else { 3 };
    let mut best: Option<((i64, i64), f64, (f64, f64))> = None;
    for a in base.0 - 3..=base.0 + 3 {
        for b in base.1 - span..=base.1 + span {
            let (ra, rb) = (sa - a as f64, sb - b as f64);
            let d = ra * ra + 2.0 * g12 * ra * rb + g22 * rb * rb;
            let take = match best {
                None => true,
                Some((_, bd, (ba, bb))) => {
                    let t = tol * (1.0 + d.max(bd));
                    if (d - bd).abs() > t {
                        d < bd
                    } else if (ra - ba).abs() > t {
                        ra < ba
                    } else {
                        rb < bb - t
                    }
                }
            };
            if take {
                best = Some(((a, b), d, (ra, rb)));
            }
        }
    }
    let (a, b) = best.expect("window is non-empty").0;
    RingElement::new(domain, a, b).expect("coordinates are in range")
}

fn quantizer_samples(domain: RingDomain, count: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let s = Complex64::new(rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0));
        if i % 4 == 0 {
            // boundary points: midpoints between lattice neighbours and cell vertices
            let p = quantize_to_ring(s, domain).map(|p| crate::ring::embed(&p)).unwrap_or(s);
            let offsets = match domain {
                RingDomain::Integers => vec![Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)],
                RingDomain::Gaussian => vec![
                    Complex64::new(0.5, 0.0),
                    Complex64::new(0.0, -0.5),
                    Complex64::new(0.5, 0.5),
                    Complex64::new(-0.5, 0.5),
                ],
                RingDomain::Eisenstein => {
                    let h = 3f64.sqrt() / 2.0;
                    vec![
                        Complex64::new(0.5, 0.0),
                        Complex64::new(-0.25, h / 2.0),
                        Complex64::new(0.0, 1.0 / 3f64.sqrt()),
                        Complex64::new(0.5, 1.0 / (2.0 * 3f64.sqrt())),
                    ]
                }
            };
            out.push(p + offsets[(i / 4) % offsets.len()]);
        } else {
            out.push(s);
        }
    }
    out
}

pub fn criterion_6() -> CheckOutcome {
    check(6, "quantizer matches brute-force search", Some(Duration::from_secs(5)), || {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut parts = Vec::new();
        let mut passed = true;
        for domain in [RingDomain::Integers, RingDomain::Gaussian, RingDomain::Eisenstein] {
            let samples = quantizer_samples(domain, 10_000, &mut rng);
            let mismatches = samples
                .iter()
                .filter(|&&s| quantize_to_ring(s, domain).ok() != Some(brute_force_quantize(s, domain)))
                .count();
            passed &= mismatches == 0;
            parts.push(format!("{domain}: {mismatches} mismatches"));
        }
        Ok((passed, format!("{} over 10000 samples each", parts.join(", "))))
    })
}

/// Per-level symbol error rates `(sic, pic)` of an uncoded configuration at
/// one SNR. The seed fixes messages and unit noise, so different SNRs see
/// common random numbers.
pub fn symbol_error_rates(cfg: &LpmaConfig, snr_db: f64, blocks: usize, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let levels = cfg.num_levels();
    let n = cfg.block_length();
    let h = Complex64::new(10f64.powf(snr_db / 20.0), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sic_err = vec![0u64; levels];
    let mut pic_err = vec![0u64; levels];
    for _ in 0..blocks {
        let msgs: Vec<Message> = cfg
            .levels()
            .iter()
            .map(|l| Message((0..n).map(|_| rng.random_range(0..l.code.q())).collect()))
            .collect();
        let x = lpma_encode(cfg, &msgs)?;
        let y = apply_channel(&x.0, h, 1.0, &mut rng);
        let y_tilde = channel_compensate(cfg, &y, h)?;
        let sic = mlo_sic_decode(cfg, &y_tilde, levels - 1)?;
        for d in &sic.levels {
            sic_err[d.level] += d.message.0.iter().zip(&msgs[d.level].0).filter(|(a, b)| a != b).count() as u64;
        }
        for l in 0..levels {
            let d = &mlo_pic_decode(cfg, &y_tilde, l)?.levels[0];
            pic_err[l] += d.message.0.iter().zip(&msgs[l].0).filter(|(a, b)| a != b).count() as u64;
        }
    }
    let total = (blocks * n) as f64;
    Ok((
        sic_err.iter().map(|&e| e as f64 / total).collect(),
        pic_err.iter().map(|&e| e as f64 / total).collect(),
    ))
}

pub fn criterion_7() -> CheckOutcome {
    check(7, "SER monotone in SNR and PIC ≥ SIC", Some(Duration::from_secs(60)), || {
        let cfg = uncoded(RingDomain::Integers, &[(2, 0), (7, 0)], 1000, 1.0)?;
        let grid = [10.0, 14.0, 18.0, 22.0];
        let mut rows = Vec::new();
        for &snr in &grid {
            rows.push(symbol_error_rates(&cfg, snr, 100, 7)?);
        }
        let mut passed = true;
        for l in 0..cfg.num_levels() {
            for w in rows.windows(2) {
                passed &= w[1].0[l] <= w[0].0[l] && w[1].1[l] <= w[0].1[l];
            }
            for (sic, pic) in &rows {
                passed &= pic[l] >= sic[l];
            }
        }
        let detail = grid
            .iter()
            .zip(&rows)
            .map(|(snr, (s, p))| format!("{snr} dB SIC {s:.4?} PIC {p:.4?}"))
            .collect::<Vec<_>>()
            .join("; ");
        Ok((passed, format!("{detail} (1e5 symbols per point)")))
    })
}

/// Small fading configuration used by the determinism check.
pub fn determinism_config() -> ExperimentConfig {
    let mut cfg = equal_gain_config(18.0, 200, 8);
    cfg.users.values = vec![12.0, 24.0];
    cfg.users.fading = true;
    if let Some(l) = cfg.lpma.as_mut() {
        l.block_length = 32;
    }
    cfg.noma = Some(NomaSection { alpha: vec![0.8, 0.2], ratio_threshold: 2.0 });
    cfg
}

pub fn criterion_8() -> CheckOutcome {
    check(8, "determinism", None, || {
        let cfg = determinism_config();
        let a = run_experiment(&cfg)?;
        let mut serial = cfg.clone();
        serial.parallel = Some(1);
        let b = run_experiment(&serial)?;
        let dir = std::env::temp_dir().join(format!("lpma-acceptance-{}", std::process::id()));
        let (ca, ja) = a.write(&dir.join("a"))?;
        let (cb, jb) = b.write(&dir.join("b"))?;
        let read = |p: &std::path::Path| std::fs::read(p).map_err(|e| Error::Config(e.to_string()));
        let same = read(&ca)? == read(&cb)? && read(&ja)? == read(&jb)?;
        let _ = std::fs::remove_dir_all(&dir);
        Ok((same, format!("two runs, seed {}: CSV and JSON byte-identical = {same}", cfg.seed)))
    })
}

pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ]
}
