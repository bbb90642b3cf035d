//! Linear codes against an exhaustive minimum-distance oracle.

use lpma::code::{index_to_message, CodeFamily, Codeword, LinearCode, Message};
use lpma::Error;
use proptest::prelude::*;

/// Every codeword by brute force, messages in lexicographic order.
fn codebook(code: &LinearCode) -> Vec<(Vec<u32>, Vec<u32>)> {
    let q = code.q() as u64;
    let size = q.pow(code.k() as u32);
    (0..size)
        .map(|idx| {
            // w[0] is the most significant digit
            let mut w = vec![0u32; code.k()];
            let mut rest = idx;
            for i in (0..code.k()).rev() {
                w[i] = (rest % q) as u32;
                rest /= q;
            }
            let mut v = vec![0u64; code.n()];
            for (wi, row) in w.iter().zip(code.generator()) {
                for (vj, g) in v.iter_mut().zip(row) {
                    *vj = (*vj + *wi as u64 * *g as u64) % q;
                }
            }
            (w, v.into_iter().map(|x| x as u32).collect())
        })
        .collect()
}

fn oracle_decode(book: &[(Vec<u32>, Vec<u32>)], r: &[u32]) -> Vec<u32> {
    let dist = |v: &[u32]| v.iter().zip(r).filter(|(a, b)| a != b).count();
    book.iter().min_by_key(|(w, v)| (dist(v), w.clone())).unwrap().0.clone()
}

fn configured_codes() -> Vec<LinearCode> {
    let mut codes = Vec::new();
    for q in [2u32, 3, 5, 7, 13] {
        codes.push(LinearCode::identity(q, 3).unwrap());
        codes.push(LinearCode::repetition(q, 3).unwrap());
        codes.push(LinearCode::repetition(q, 4).unwrap());
        codes.push(LinearCode::single_parity(q, 2).unwrap());
        codes.push(LinearCode::single_parity(q, 3).unwrap());
    }
    codes.push(LinearCode::from_generator(2, vec![vec![1, 0, 1, 1], vec![0, 1, 0, 1]]).unwrap());
    // (7,4) Hamming code
    codes.push(
        LinearCode::from_generator(
            2,
            vec![
                vec![1, 0, 0, 0, 1, 1, 0],
                vec![0, 1, 0, 0, 1, 0, 1],
                vec![0, 0, 1, 0, 0, 1, 1],
                vec![0, 0, 0, 1, 1, 1, 1],
            ],
        )
        .unwrap(),
    );
    codes.push(LinearCode::from_generator(7, vec![vec![1, 2, 3], vec![0, 1, 4]]).unwrap());
    codes
}

fn all_words(q: u32, n: usize) -> Vec<Vec<u32>> {
    (0..(q as u128).pow(n as u32)).map(|i| index_to_message(i, q, n)).collect()
}

#[test]
fn documented_examples() {
    let id = LinearCode::identity(7, 2).unwrap();
    assert_eq!(id.encode(&Message(vec![1, 3])).unwrap(), Codeword(vec![1, 3]));
    let rep = LinearCode::repetition(2, 3).unwrap();
    assert_eq!(rep.encode(&Message(vec![1])).unwrap(), Codeword(vec![1, 1, 1]));
    let rep7 = LinearCode::from_generator(7, vec![vec![1, 1]]).unwrap();
    assert_eq!(rep7.encode(&Message(vec![3])).unwrap(), Codeword(vec![3, 3]));

    assert_eq!(LinearCode::identity(7, 2).unwrap().decode(&[5, 2]).unwrap().0, Message(vec![5, 2]));
    assert_eq!(rep.decode(&[1, 0, 1]).unwrap().0, Message(vec![1]));
    assert_eq!(rep7.decode(&[3, 4]).unwrap().0, Message(vec![3]));
    assert_eq!(rep.reencode(&Message(vec![0])).unwrap(), Codeword(vec![0, 0, 0]));

    assert!(matches!(id.encode(&Message(vec![1])), Err(Error::Dimension { .. })));
    assert!(matches!(id.encode(&Message(vec![1, 7])), Err(Error::FieldMismatch { .. })));
    assert!(matches!(
        LinearCode::from_generator(5, vec![vec![1, 2], vec![2, 4]]),
        Err(Error::RankDeficient)
    ));
    assert!(LinearCode::identity(6, 2).is_err());
}

#[test]
fn round_trip_every_message() {
    for code in configured_codes() {
        for (w, v) in codebook(&code) {
            let msg = Message(w.clone());
            let cw = code.encode(&msg).unwrap();
            assert_eq!(cw.0, v);
            assert_eq!(code.reencode(&msg).unwrap(), cw);
            assert_eq!(code.decode(&v).unwrap(), (msg, cw));
        }
    }
}

#[test]
fn decoders_match_oracle_on_every_received_word() {
    for code in configured_codes() {
        if (code.q() as u128).pow(code.n() as u32) > 100_000 {
            continue;
        }
        let book = codebook(&code);
        for r in all_words(code.q(), code.n()) {
            let (w, v) = code.decode(&r).unwrap();
            let expected = oracle_decode(&book, &r);
            assert_eq!(w.0, expected, "{:?} q={} received {r:?}", code.family(), code.q());
            assert_eq!(v, code.encode(&w).unwrap());
        }
    }
}

#[test]
fn repetition_corrects_below_half_distance() {
    for q in [2u32, 3, 5, 7] {
        for n in 1..=6 {
            let code = LinearCode::repetition(q, n).unwrap();
            let d = code.minimum_distance().unwrap();
            assert_eq!(d, n);
            let t = (d - 1) / 2;
            for s in 0..q {
                let v = vec![s; n];
                // every error pattern of weight ≤ t: positions by bitmask, values exhaustively
                for mask in 0u32..(1 << n) {
                    let weight = mask.count_ones() as usize;
                    if weight > t {
                        continue;
                    }
                    let positions: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                    for e in all_words(q - 1, weight) {
                        let mut r = v.clone();
                        for (p, ev) in positions.iter().zip(&e) {
                            r[*p] = (r[*p] + ev + 1) % q;
                        }
                        assert_eq!(code.decode(&r).unwrap().0, Message(vec![s]), "q={q} n={n} r={r:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn families_and_rates() {
    assert_eq!(LinearCode::single_parity(5, 3).unwrap().family(), CodeFamily::SingleParity);
    assert_eq!(LinearCode::single_parity(5, 3).unwrap().minimum_distance().unwrap(), 2);
    let c = LinearCode::repetition(7, 4).unwrap();
    assert!((c.bits_per_symbol() - 7f64.log2() / 4.0).abs() < 1e-15);
    assert!((LinearCode::identity(2, 8).unwrap().bits_per_symbol() - 1.0).abs() < 1e-15);
}

fn code_and_two_messages() -> impl Strategy<Value = (LinearCode, Vec<u32>, Vec<u32>)> {
    (0..configured_codes().len()).prop_flat_map(|i| {
        let code = configured_codes().swap_remove(i);
        let (q, k) = (code.q(), code.k());
        (Just(code), prop::collection::vec(0..q, k), prop::collection::vec(0..q, k))
    })
}

proptest! {
    #[test]
    fn encoding_is_linear((code, a, b) in code_and_two_messages()) {
        let q = code.q();
        let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| (x + y) % q).collect();
        let va = code.encode(&Message(a)).unwrap().0;
        let vb = code.encode(&Message(b)).unwrap().0;
        let vs = code.encode(&Message(sum)).unwrap().0;
        let expected: Vec<u32> = va.iter().zip(&vb).map(|(x, y)| (x + y) % q).collect();
        prop_assert_eq!(vs, expected);
    }

    #[test]
    fn long_identity_and_parity_round_trip(q in prop::sample::select(vec![2u32, 3, 7, 31]), w in prop::collection::vec(0u32..1000, 1..64)) {
        let w: Vec<u32> = w.into_iter().map(|x| x % q).collect();
        let sp = LinearCode::single_parity(q, w.len()).unwrap();
        let cw = sp.encode(&Message(w.clone())).unwrap();
        prop_assert_eq!(sp.decode(&cw.0).unwrap().0, Message(w.clone()));
        let id = LinearCode::identity(q, w.len()).unwrap();
        prop_assert_eq!(id.decode(&w).unwrap().0, Message(w));
    }
}
