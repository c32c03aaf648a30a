//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use morphocrc::gf2::audit::{PUBLISHED_CCITT_8, PUBLISHED_CRC16_8};
use morphocrc::gf2::feedforward::parse_poly_bits;
use morphocrc::gf2::*;
use morphocrc::morphosim::*;
use morphocrc::perf::*;
use morphocrc::ExactMetrics;
use num_rational::Rational64;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CANON: BitConvention = BitConvention::CANONICAL;

type Outcome = Result<String, String>;

fn exhaustive() -> Outcome {
    let mut notes = Vec::new();
    for poly in [GeneratorPolynomial::ccitt(), GeneratorPolynomial::crc16()] {
        let t = Instant::now();
        let r = exhaustive_equivalence(&poly).map_err(|e| e.to_string())?;
        if !r.is_pass() || r.cases != 1 << 24 {
            return Err(r.to_string());
        }
        notes.push(format!("{r} in {:.1}s", t.elapsed().as_secs_f64()));
    }
    Ok(notes.join("; "))
}

fn ccitt_listing() -> Outcome {
    let conventions = discover_conventions();
    if conventions != vec![CANON] {
        return Err(format!("matching conventions: {conventions:?}"));
    }
    let report = audit_published(&GeneratorPolynomial::ccitt(), CANON, PUBLISHED_CCITT_8).map_err(|e| e.to_string())?;
    if report.is_exact() {
        Ok(format!("{} lines term-for-term under {CANON:?}", report.lines.len()))
    } else {
        Err(report.to_string())
    }
}

fn crc16_audit() -> Outcome {
    let poly = GeneratorPolynomial::crc16();
    let equivalence = exhaustive_equivalence(&poly).map_err(|e| e.to_string())?;
    if !equivalence.is_pass() {
        return Err(equivalence.to_string());
    }
    let report = audit_published(&poly, CANON, PUBLISHED_CRC16_8).map_err(|e| e.to_string())?;
    let flagged: Vec<u32> = report
        .discrepancies()
        .filter(|l| matches!(&l.status, LineStatus::UndefinedTerms { terms } if terms.iter().any(|t| t == "XOR_8")))
        .map(|l| l.register)
        .collect();
    if flagged.is_empty() {
        return Err("no line flagged for XOR_8".into());
    }
    check_golden("crc16_published_audit.json", &(report.to_json() + "\n"))?;
    let names: Vec<String> = flagged.iter().map(|r| format!("Register_{r}'")).collect();
    Ok(format!(
        "{} discrepant lines, XOR_8 flagged on {}; {equivalence}",
        report.discrepancies().count(),
        names.join(", ")
    ))
}

fn cycle_counts() -> Outcome {
    let mut notes = Vec::new();
    for (prog, want) in [(ccitt_program(), 30u64), (crc16_program(), 26)] {
        for n in [1usize, 8] {
            let ch = vec![
                ChannelInput {
                    data: 0x5a,
                    init: 0xffff
                };
                n
            ];
            let run = run_channels(&prog, &ch, &RunOptions::default()).map_err(|e| e.to_string())?;
            if run.cycles != want {
                return Err(format!(
                    "{} with {n} channels: {} cycles, want {want}",
                    prog.name, run.cycles
                ));
            }
        }
        notes.push(format!("{} {want}", prog.name));
    }
    Ok(format!("{} cycles for 1 and 8 channels", notes.join(", ")))
}

fn simulator_vs_kernel() -> Outcome {
    let mut checked = 0u32;
    for (prog, poly) in [
        (ccitt_program(), GeneratorPolynomial::ccitt()),
        (crc16_program(), GeneratorPolynomial::crc16()),
    ] {
        let net = derive_network(&poly, 8, CANON).map_err(|e| e.to_string())?;
        for init in [0x0000u64, 0xffff] {
            let kernel = |d: u8| {
                apply_network(LfsrState::from_bits(16, init).unwrap(), u64::from(d), &net)
                    .unwrap()
                    .bits()
            };
            for data in 0..=255u8 {
                for n in [1u8, 8] {
                    let ch: Vec<ChannelInput> = (0..n)
                        .map(|k| ChannelInput {
                            data: data.wrapping_add(k.wrapping_mul(29)),
                            init,
                        })
                        .collect();
                    let run = run_channels(&prog, &ch, &RunOptions::default()).map_err(|e| e.to_string())?;
                    for (c, &got) in ch.iter().zip(&run.states) {
                        if got != kernel(c.data) {
                            return Err(format!(
                                "{} init {init:#06x} data {:#04x}: {got:#06x}",
                                prog.name, c.data
                            ));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} channel results bit-exact"))
}

fn rel_ok(computed: Rational64, published: &str) -> Result<bool, String> {
    let p = Rational64::from_decimal(published).map_err(|e| e.to_string())?;
    Ok(((computed - p) / p).abs() <= Rational64::new(5, 1000))
}

fn abs_ok(computed: Rational64, published: &str) -> Result<bool, String> {
    let p = Rational64::from_decimal(published).map_err(|e| e.to_string())?;
    Ok((computed - p).abs() <= Rational64::new(1, 100))
}

fn metrics() -> Outcome {
    let measured = MeasuredCycles::from_simulator().map_err(|e| e.to_string())?;
    let ds = ReferenceDataset::published();
    let mut failures = Vec::new();
    let mut checked = 0;
    for row in &ds.comparison {
        let cycles = row.cycles.unwrap_or_else(|| measured.get(row.algorithm));
        let profile = SystemProfile::new(row.system.to_string(), row.system.frequency_hz(), cycles, row.bits())
            .map_err(|e| e.to_string())?;
        let m: ExactMetrics = compute_metrics(&profile).map_err(|e| e.to_string())?;
        for (metric, value, published) in [
            ("bits_per_cycle", m.bits_per_cycle, row.published.bits_per_cycle),
            ("mbps", m.mbps, row.published.mbps),
        ] {
            checked += 1;
            if !rel_ok(value, published)? {
                failures.push(format!(
                    "{} = {} vs {published}",
                    row.provenance(metric),
                    value.render(5)
                ));
            }
        }
        if let Some(published) = row.published.speedup {
            checked += 1;
            let s: Rational64 = speedup(measured.get(row.algorithm), cycles).map_err(|e| e.to_string())?;
            if !abs_ok(s, published)? {
                failures.push(format!(
                    "{} = {} vs {published}",
                    row.provenance("speedup"),
                    s.render(4)
                ));
            }
        }
    }
    for row in &ds.fpga {
        checked += 1;
        let s: Rational64 = speedup(row.fpga_cycles, measured.get(row.algorithm)).map_err(|e| e.to_string())?;
        if s.render(2) != row.published_speedup {
            failures.push(format!(
                "{} = {} vs {}",
                row.provenance("speedup"),
                s.render(2),
                row.published_speedup
            ));
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} cells within tolerance"))
    } else {
        Err(format!(
            "{} of {checked} cells outside ±0.5% / ±0.01: {}",
            failures.len(),
            failures.join("; ")
        ))
    }
}

fn feedforward() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..1000 {
        let x: Vec<bool> = (0..rng.gen_range(1..64)).map(|_| rng.gen()).collect();
        let mut taps: Vec<bool> = (0..rng.gen_range(1..12)).map(|_| rng.gen()).collect();
        taps[0] = true;
        let c = FeedForwardCircuit::new(taps.clone()).map_err(|e| e.to_string())?;
        if feedforward_encode(&x, &c).map_err(|e| e.to_string())? != gf2_multiply(&x, &taps) {
            return Err(format!("case {case} differs from convolution"));
        }
    }
    let x = parse_poly_bits("11001").map_err(|e| e.to_string())?;
    let c = FeedForwardCircuit::all_taps(3);
    let y = feedforward_encode(&x, &c).map_err(|e| e.to_string())?;
    let powers: Vec<usize> = y.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
    if y != gf2_multiply(&x, c.taps()) || powers != [0, 1, 2, 7] {
        return Err(format!("worked example gave powers {powers:?}"));
    }
    Ok("1000 random cases plus 11001 * (1+D+D^2+D^3) = 1+D+D^2+D^7".into())
}

/// Every artifact the suite pins to a golden file, regenerated from scratch.
fn artifacts() -> Result<Vec<(String, String)>, String> {
    let e = |x: &dyn std::fmt::Display| x.to_string();
    let mut out = vec![("check_values.txt".to_string(), check_value_listing())];
    for (name, poly) in [
        ("ccitt", GeneratorPolynomial::ccitt()),
        ("crc16", GeneratorPolynomial::crc16()),
    ] {
        let n = derive_network(&poly, 8, CANON).map_err(|x| e(&x))?;
        out.push((format!("{name}_8.txt"), n.to_listing()));
        out.push((format!("{name}_8.json"), n.to_json() + "\n"));
    }
    let audit = audit_published(&GeneratorPolynomial::crc16(), CANON, PUBLISHED_CRC16_8).map_err(|x| e(&x))?;
    out.push(("crc16_published_audit.json".into(), audit.to_json() + "\n"));
    out.push(("crc16_published_audit.txt".into(), audit.to_string()));

    for prog in [ccitt_program(), crc16_program()] {
        let opts = RunOptions {
            trace: true,
            snapshots: vec![19],
        };
        let sym = run_symbolic(&prog, &opts).map_err(|x| e(&x))?;
        out.push((
            format!("{}_fb_symbolic.txt", prog.name),
            fb_dump(&sym.state, &prog.results),
        ));
        out.push((
            format!("{}_trace.txt", prog.name),
            sym.trace.iter().map(|t| format!("{t}\n")).collect(),
        ));
        out.push((format!("{}_grid_cycle19.txt", prog.name), sym.snapshots[0].to_string()));
        let concrete = run_channels(
            &prog,
            &[ChannelInput {
                data: 0x31,
                init: 0xffff,
            }],
            &RunOptions::default(),
        )
        .map_err(|x| e(&x))?;
        out.push((
            format!("{}_fb_31_ffff.txt", prog.name),
            fb_dump(&concrete.raw.state, &prog.results),
        ));
    }

    let measured = MeasuredCycles::from_simulator().map_err(|x| e(&x))?;
    let report = build_report::<Rational64>(&ReferenceDataset::published(), &measured, &Tolerance::default())
        .map_err(|x| e(&x))?;
    for (file, format) in [
        ("report.md", ReportFormat::Markdown),
        ("report.csv", ReportFormat::Csv),
        ("report.json", ReportFormat::Structured),
    ] {
        out.push((file.into(), report.render(format).map_err(|x| e(&x))?));
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let first = artifacts()?;
    let second = artifacts()?;
    if first != second {
        let name = first
            .iter()
            .zip(&second)
            .find(|(a, b)| a != b)
            .map_or("artifact count", |(a, _)| a.0.as_str());
        return Err(format!("two runs differ in {name}"));
    }
    for (name, text) in &first {
        check_golden(name, text)?;
    }
    Ok(format!(
        "{} artifacts byte-identical across runs and golden copies",
        first.len()
    ))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("exhaustive oracle equivalence", exhaustive),
        ("CCITT byte-wise listing reproduction", ccitt_listing),
        ("CRC-16 listing audit", crc16_audit),
        ("cycle counts", cycle_counts),
        ("simulator vs kernel", simulator_vs_kernel),
        ("metrics reproduction", metrics),
        ("feed-forward convolution", feedforward),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(note) => println!("PASS {}. {name}: {note}", i + 1),
            Err(note) => {
                failed += 1;
                println!("FAIL {}. {name}: {note}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
