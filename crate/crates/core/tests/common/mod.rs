//! Independent oracles and golden-file plumbing shared by the test targets.
#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use morphocrc::gf2::GeneratorPolynomial;
use proptest::test_runner::{Config, RngSeed};

/// Fixed-seed proptest configuration with no failure persistence.
pub fn proptest_config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x6d31_6372),
        failure_persistence: None,
        ..Config::default()
    }
}

/// CRC remainder by polynomial long division, written without reference to
/// any shift-register model.
///
/// The message is one long binary number: bytes in order, each read least
/// significant bit first, the first bit being the highest power. The preset
/// `init` is placed above the message so that
/// `R(x) = (M(x) x^w + S(x) x^n) mod G(x)`. Register `i` of the result holds
/// the coefficient of `x^(w-1-i)`, as does register `i` of `init`.
pub fn long_division_crc(message: &[u8], poly: &GeneratorPolynomial, init: u64) -> u64 {
    let w = poly.width() as usize;
    let n = message.len() * 8;
    // dividend[k] is the coefficient of x^(n + w - 1 - k).
    let mut dividend = vec![false; n + w];
    for (i, d) in dividend.iter_mut().enumerate().take(w) {
        *d ^= (init >> i) & 1 == 1;
    }
    for (j, byte) in message.iter().enumerate() {
        for b in 0..8 {
            dividend[j * 8 + b] ^= (byte >> b) & 1 == 1;
        }
    }
    // divisor[t] is the coefficient of x^(w - t).
    let divisor: Vec<bool> = (0..=w).map(|t| t == 0 || poly.coefficient((w - t) as u32)).collect();
    for k in 0..n {
        if dividend[k] {
            for (t, &g) in divisor.iter().enumerate() {
                dividend[k + t] ^= g;
            }
        }
    }
    dividend[n..]
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
}

/// Product of two GF(2) polynomials given as coefficient vectors indexed by
/// power.
pub fn gf2_multiply(a: &[bool], b: &[bool]) -> Vec<bool> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![false; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] ^= x & y;
        }
    }
    out
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compare `actual` against a checked-in golden file. With `UPDATE_GOLDEN`
/// set, rewrite the file instead.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().expect("golden dir")).map_err(|e| e.to_string())?;
        fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = fs::read_to_string(&path)
        .map_err(|e| format!("{}: {e} (run with UPDATE_GOLDEN=1 to create it)", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        let line = expected
            .lines()
            .zip(actual.lines())
            .position(|(a, b)| a != b)
            .map_or_else(|| "length".to_string(), |i| format!("line {}", i + 1));
        Err(format!("{name} differs from golden copy at {line}"))
    }
}

pub fn assert_golden(name: &str, actual: &str) {
    if let Err(e) = check_golden(name, actual) {
        panic!("{e}");
    }
}

pub const CHECK_MESSAGE: &[u8] = b"123456789";

/// Check values of every named generator for presets zero and all-ones.
pub fn check_value_listing() -> String {
    use morphocrc::gf2::{crc_compute, Engine, LfsrState};
    let mut out = String::new();
    for poly in GeneratorPolynomial::catalogue() {
        for (label, init) in [
            ("zero", LfsrState::zero(poly.width())),
            ("ones", LfsrState::ones(poly.width())),
        ] {
            let r = crc_compute(CHECK_MESSAGE, &poly, init, Engine::Serial).expect("crc");
            out.push_str(&format!(
                "{} init={label} \"123456789\" {}\n",
                poly,
                poly.format_remainder(r.bits())
            ));
        }
    }
    out
}
