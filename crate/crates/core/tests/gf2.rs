mod common;

use common::*;
use morphocrc::gf2::audit::{PUBLISHED_CCITT_8, PUBLISHED_CRC16_8};
use morphocrc::gf2::feedforward::parse_poly_bits;
use morphocrc::gf2::network::canonicalize;
use morphocrc::gf2::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CANON: BitConvention = BitConvention::CANONICAL;

fn net(poly: &GeneratorPolynomial) -> UpdateNetwork {
    derive_network(poly, 8, CANON).unwrap()
}

fn eight_serial(state: LfsrState, poly: &GeneratorPolynomial, byte: u8) -> LfsrState {
    (0..8).fold(state, |s, t| {
        serial_shift(s, poly, (byte >> t) & 1 == 1, CANON).unwrap()
    })
}

#[test]
fn long_division_oracle_agrees_with_published_check_values() {
    // Reflected CCITT with zero preset is the KERMIT check; reflected CRC-16
    // with zero preset is the ARC check.
    assert_eq!(
        long_division_crc(CHECK_MESSAGE, &GeneratorPolynomial::ccitt(), 0),
        0x2189
    );
    assert_eq!(
        long_division_crc(CHECK_MESSAGE, &GeneratorPolynomial::crc16(), 0),
        0xbb3d
    );
}

#[test]
fn check_values_match_oracle_and_golden() {
    for poly in GeneratorPolynomial::catalogue() {
        for init in [LfsrState::zero(poly.width()), LfsrState::ones(poly.width())] {
            let want = long_division_crc(CHECK_MESSAGE, &poly, init.bits());
            for engine in [Engine::Serial, Engine::Parallel] {
                let got = crc_compute(CHECK_MESSAGE, &poly, init, engine).unwrap();
                assert_eq!(got.bits(), want, "{poly} {engine:?} init {:#x}", init.bits());
            }
        }
    }
    assert_golden("check_values.txt", &check_value_listing());
}

#[test]
fn oracle_agrees_with_engines_on_random_messages() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for poly in GeneratorPolynomial::catalogue() {
        for _ in 0..50 {
            let len = rng.gen_range(0..200);
            let msg: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            let init = rng.gen::<u64>() & poly.register_mask();
            let state = LfsrState::from_bits(poly.width(), init).unwrap();
            let got = crc_compute(&msg, &poly, state, Engine::Serial).unwrap();
            assert_eq!(got.bits(), long_division_crc(&msg, &poly, init), "{poly}");
        }
    }
}

#[test]
fn zero_state_zero_bit_is_fixed_point() {
    for poly in GeneratorPolynomial::catalogue() {
        for conv in BitConvention::ALL {
            let z = LfsrState::zero(poly.width());
            assert_eq!(serial_shift(z, &poly, false, conv).unwrap(), z);
        }
    }
}

#[test]
fn single_one_bit_lands_on_tap_positions() {
    let poly = GeneratorPolynomial::ccitt();
    let s = serial_shift(LfsrState::zero(16), &poly, true, CANON).unwrap();
    // Register i carries x^(15 - i): x^12, x^5 and x^0 map to 3, 10 and 15.
    let ones: Vec<u32> = (0..16).filter(|&i| s.register(i)).collect();
    assert_eq!(ones, vec![3, 10, 15]);
}

#[test]
fn width_mismatch_is_rejected() {
    let poly = GeneratorPolynomial::ccitt();
    let wrong = LfsrState::zero(12);
    assert!(serial_shift(wrong, &poly, true, CANON).is_err());
    assert!(apply_network(wrong, 0, &net(&poly)).is_err());
    assert!(crc_compute(b"x", &poly, wrong, Engine::Serial).is_err());
}

#[test]
fn zero_steps_is_identity_listing() {
    let n = derive_network(&GeneratorPolynomial::ccitt(), 0, CANON).unwrap();
    for i in 0..16 {
        assert_eq!(n.register_def(i), &[Term::reg(i as u32)]);
    }
}

#[test]
fn brute_force_1024_cases() {
    let poly = GeneratorPolynomial::ccitt();
    let n = net(&poly);
    let mut cases = 0;
    for init in [0x0000u64, 0xffff, 0x8005, 0x1021] {
        let s = LfsrState::from_bits(16, init).unwrap();
        for byte in 0..=255u8 {
            assert_eq!(
                apply_network(s, u64::from(byte), &n).unwrap(),
                eight_serial(s, &poly, byte)
            );
            cases += 1;
        }
    }
    assert_eq!(cases, 1024);
}

#[test]
fn serial_and_parallel_engines_agree_on_10k_messages() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let polys = [GeneratorPolynomial::ccitt(), GeneratorPolynomial::crc16()];
    let nets: Vec<UpdateNetwork> = polys.iter().map(net).collect();
    for i in 0..10_000 {
        let k = i % 2;
        let len = rng.gen_range(0..=1024);
        let msg: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let init = LfsrState::from_bits(16, rng.gen::<u64>() & 0xffff).unwrap();
        let serial = crc_compute(&msg, &polys[k], init, Engine::Serial).unwrap();
        assert_eq!(nets[k].apply_bytes(init, &msg).unwrap(), serial, "message {i}");
    }
}

#[test]
fn wider_generators_and_word_networks() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for poly in [GeneratorPolynomial::ethernet(), GeneratorPolynomial::crc12()] {
        for step in [8u32, 16, 32] {
            let n = derive_network(&poly, step, CANON).unwrap();
            for _ in 0..200 {
                let s = LfsrState::from_bits(poly.width(), rng.gen::<u64>() & poly.register_mask()).unwrap();
                let data = rng.gen::<u64>() & ((1u64 << step) - 1);
                let want = serial_shift_word(s, &poly, data, step, CANON).unwrap();
                assert_eq!(n.apply(s, data).unwrap(), want, "{poly} step {step}");
            }
        }
    }
}

#[test]
fn ccitt_network_reproduces_published_listing() {
    let report = audit_published(&GeneratorPolynomial::ccitt(), CANON, PUBLISHED_CCITT_8).unwrap();
    assert!(report.is_exact(), "{report}");
    let listing = net(&GeneratorPolynomial::ccitt()).to_listing();
    assert!(listing.lines().any(|l| l == "Register_11' = XOR_3"));
    assert!(listing.lines().any(|l| l == "Register_12' = XOR_0 ^ XOR_4"));
    assert_eq!(discover_conventions(), vec![CANON]);
}

#[test]
fn crc16_audit_flags_undefined_xor8() {
    let report = audit_published(&GeneratorPolynomial::crc16(), CANON, PUBLISHED_CRC16_8).unwrap();
    assert!(!report.is_exact());
    let undefined: Vec<u32> = report
        .discrepancies()
        .filter(|l| matches!(&l.status, LineStatus::UndefinedTerms { terms } if terms.iter().any(|t| t == "XOR_8")))
        .map(|l| l.register)
        .collect();
    assert_eq!(undefined, vec![13, 14]);
    for l in report.discrepancies() {
        assert_eq!(l.xor_index_shift, Some(-1), "Register_{}'", l.register);
    }
    assert_golden("crc16_published_audit.json", &(report.to_json() + "\n"));
    assert_golden("crc16_published_audit.txt", &report.to_string());
}

#[test]
fn network_golden_files() {
    for (name, poly) in [
        ("ccitt", GeneratorPolynomial::ccitt()),
        ("crc16", GeneratorPolynomial::crc16()),
    ] {
        let n = net(&poly);
        assert_golden(&format!("{name}_8.txt"), &n.to_listing());
        assert_golden(&format!("{name}_8.json"), &(n.to_json() + "\n"));
        assert_eq!(UpdateNetwork::from_json(&n.to_json()).unwrap(), n);
        assert_eq!(UpdateNetwork::from_listing(&n.to_listing(), CANON).unwrap(), n);
    }
}

#[test]
fn feedforward_worked_example() {
    let x = parse_poly_bits("11001").unwrap();
    let c = FeedForwardCircuit::all_taps(3);
    let y = feedforward_encode(&x, &c).unwrap();
    assert_eq!(y, gf2_multiply(&x, c.taps()));
    let powers: Vec<usize> = y.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
    assert_eq!(powers, vec![0, 1, 2, 7]);
}

fn terms() -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(
        (0u32..3, 0u32..16).prop_map(|(k, i)| match k {
            0 => Term::reg(i),
            1 => Term::xor(i % 8),
            _ => Term::data(i % 8),
        }),
        0..24,
    )
}

proptest! {
    #![proptest_config(proptest_config(1000))]

    #[test]
    fn feedforward_is_convolution(
        x in prop::collection::vec(any::<bool>(), 1..64),
        mut taps in prop::collection::vec(any::<bool>(), 1..12),
    ) {
        taps[0] = true;
        let c = FeedForwardCircuit::new(taps.clone()).unwrap();
        let y = feedforward_encode(&x, &c).unwrap();
        prop_assert_eq!(y.len(), x.len() + c.stages());
        prop_assert_eq!(y, gf2_multiply(&x, &taps));
    }

    #[test]
    fn network_is_linear(s1 in 0u64..1 << 16, s2 in 0u64..1 << 16, d1: u8, d2: u8, which in 0usize..2) {
        let poly = [GeneratorPolynomial::ccitt(), GeneratorPolynomial::crc16()][which];
        let n = net(&poly);
        let st = |v| LfsrState::from_bits(16, v).unwrap();
        let lhs = apply_network(st(s1 ^ s2), u64::from(d1 ^ d2), &n).unwrap();
        let a = apply_network(st(s1), u64::from(d1), &n).unwrap();
        let b = apply_network(st(s2), u64::from(d2), &n).unwrap();
        prop_assert_eq!(lhs.bits(), a.bits() ^ b.bits());
    }

    #[test]
    fn network_matches_eight_serial_shifts(s in 0u64..1 << 16, d: u8) {
        for poly in [GeneratorPolynomial::ccitt(), GeneratorPolynomial::crc16()] {
            let st = LfsrState::from_bits(16, s).unwrap();
            prop_assert_eq!(apply_network(st, u64::from(d), &net(&poly)).unwrap(), eight_serial(st, &poly, d));
        }
    }

    #[test]
    fn canonicalize_is_idempotent(t in terms()) {
        let once = canonicalize(&t, 8).unwrap();
        prop_assert_eq!(canonicalize(&once, 8).unwrap(), once.clone());
        let mut sorted = once.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted, once);
    }

    #[test]
    fn single_bursts_are_detected(
        msg in prop::collection::vec(any::<u8>(), 1..64),
        start_frac in 0.0f64..1.0,
        len in 1usize..=16,
        inner: u16,
    ) {
        let poly = GeneratorPolynomial::ccitt();
        let bits = msg.len() * 8;
        let len = len.min(bits);
        let start = ((bits - len) as f64 * start_frac) as usize;
        // Burst of exactly `len` bits: first and last flipped, interior arbitrary.
        let mut corrupted = msg.clone();
        for k in 0..len {
            if k == 0 || k == len - 1 || (inner >> k) & 1 == 1 {
                let p = start + k;
                corrupted[p / 8] ^= 1 << (p % 8);
            }
        }
        let init = LfsrState::zero(16);
        let a = crc_compute(&msg, &poly, init, Engine::Parallel).unwrap();
        let b = crc_compute(&corrupted, &poly, init, Engine::Parallel).unwrap();
        prop_assert_ne!(a, b);
    }
}
