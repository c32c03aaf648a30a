use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use morphocrc::gf2::audit::{PUBLISHED_CCITT_8, PUBLISHED_CRC16_8};
use morphocrc::gf2::{audit, crc_compute, derive_network, BitConvention, Engine, GeneratorPolynomial, LfsrState};
use morphocrc::morphosim::{
    assemble, builtin_program, fb_dump, run_channels, run_symbolic, ChannelInput, Lane, Program, RunOptions,
};
use morphocrc::perf::{build_report, CellStatus, MeasuredCycles, ReferenceDataset, ReportFormat, Tolerance};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{Format, Outcome};

pub fn parse_poly(s: &str) -> Result<GeneratorPolynomial> {
    s.parse().with_context(|| format!("unknown polynomial `{s}`"))
}

pub fn parse_init(s: &str, width: u32) -> Result<LfsrState> {
    match s {
        "0" | "zero" => Ok(LfsrState::zero(width)),
        "ones" => Ok(LfsrState::ones(width)),
        hex => {
            let v = parse_hex(hex)?;
            Ok(LfsrState::from_bits(width, v)?)
        }
    }
}

fn parse_hex(s: &str) -> Result<u64> {
    let digits = s.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(digits, 16).with_context(|| format!("`{s}` is not a hex value"))
}

fn read_input(input: Option<&Path>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match input {
        None => std::io::stdin()
            .read_to_end(&mut buf)
            .context("reading standard input")?,
        Some(p) if p.as_os_str() == "-" => std::io::stdin()
            .read_to_end(&mut buf)
            .context("reading standard input")?,
        Some(p) => return std::fs::read(p).with_context(|| format!("reading {}", p.display())),
    };
    Ok(buf)
}

pub fn crc(input: Option<&Path>, poly: &str, init: &str, engine: &str, format: Format) -> Result<Outcome> {
    let poly = parse_poly(poly)?;
    let init = parse_init(init, poly.width())?;
    let engine: Engine = engine.parse()?;
    let msg = read_input(input)?;
    let r = crc_compute(&msg, &poly, init, engine)?;
    let remainder = poly.format_remainder(r.bits());
    let text = match format {
        Format::Structured => json!({
            "poly": poly.to_string(),
            "init": poly.format_remainder(init.bits()),
            "engine": format!("{engine:?}").to_lowercase(),
            "bytes": msg.len(),
            "remainder": remainder,
        })
        .to_string(),
        Format::Csv => format!("poly,bytes,remainder\n{poly},{},{remainder}", msg.len()),
        Format::Text | Format::Md => remainder,
    };
    Ok(Outcome {
        text: text + "\n",
        ok: true,
    })
}

fn bundled_listing(poly: &GeneratorPolynomial) -> Option<&'static str> {
    match poly.name()? {
        "ccitt" => Some(PUBLISHED_CCITT_8),
        "crc16" => Some(PUBLISHED_CRC16_8),
        _ => None,
    }
}

pub fn derive(poly: &str, steps: u32, diff: Option<&str>, format: Format) -> Result<Outcome> {
    let poly = parse_poly(poly)?;
    let net = derive_network(&poly, steps, BitConvention::CANONICAL)?;
    if let Some(file) = diff {
        let published = if file.is_empty() {
            bundled_listing(&poly)
                .with_context(|| format!("no bundled listing for {poly}; pass --diff FILE"))?
                .to_string()
        } else {
            std::fs::read_to_string(file).with_context(|| format!("reading {file}"))?
        };
        let report = audit(&net, &poly, &published)?;
        let text = match format {
            Format::Structured => report.to_json() + "\n",
            _ => report.to_string(),
        };
        // Like diff(1): differences exit 1.
        return Ok(Outcome {
            text,
            ok: report.is_exact(),
        });
    }
    let listing = net.to_listing();
    let text = match format {
        Format::Structured => net.to_json() + "\n",
        Format::Csv => {
            let mut out = String::from("lhs,rhs\n");
            for line in listing.lines() {
                let (lhs, rhs) = line.split_once(" = ").unwrap_or((line, ""));
                writeln!(out, "{lhs},{rhs}").unwrap();
            }
            out
        }
        Format::Text | Format::Md => listing,
    };
    Ok(Outcome { text, ok: true })
}

pub struct SimArgs {
    pub program: String,
    pub data: Vec<String>,
    pub init: String,
    pub channels: Option<usize>,
    pub dump_array: Vec<u64>,
    pub dump_fb: bool,
    pub trace: bool,
    pub symbolic: bool,
}

fn load_program(name: &str) -> Result<Program> {
    if let Some(p) = builtin_program(name) {
        return Ok(p);
    }
    let src = std::fs::read_to_string(name).with_context(|| format!("reading program {name}"))?;
    assemble(&src).with_context(|| format!("assembling {name}"))
}

fn channel_inputs(args: &SimArgs, seed: u64) -> Result<Vec<ChannelInput>> {
    let init = parse_init(&args.init, 16)?.bits();
    let data: Vec<u8> = args
        .data
        .iter()
        .map(|d| {
            let v = parse_hex(d)?;
            u8::try_from(v).with_context(|| format!("data byte `{d}` out of range"))
        })
        .collect::<Result<_>>()?;
    let channels = args.channels.unwrap_or(data.len().max(1));
    let data = match data.len() {
        0 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..channels).map(|_| rng.gen()).collect()
        }
        1 => vec![data[0]; channels],
        n if n == channels => data,
        n => bail!("{n} data bytes given for {channels} channels"),
    };
    Ok(data.into_iter().map(|data| ChannelInput { data, init }).collect())
}

fn section(out: &mut String, title: &str, body: &str) {
    writeln!(out, "\n# {title}").unwrap();
    out.push_str(body);
    if !body.ends_with('\n') {
        out.push('\n');
    }
}

pub fn simulate(args: &SimArgs, seed: u64, format: Format) -> Result<Outcome> {
    let program = load_program(&args.program)?;
    let opts = RunOptions {
        trace: args.trace,
        snapshots: args.dump_array.clone(),
    };
    if args.symbolic {
        return simulate_symbolic(&program, &opts, args, format);
    }
    let inputs = channel_inputs(args, seed)?;
    let run = run_channels(&program, &inputs, &opts)?;
    let poly = program.poly.as_deref().map(parse_poly).transpose()?;
    let expected: Option<Vec<u64>> = match &poly {
        Some(p) => {
            let net = derive_network(p, 8, BitConvention::CANONICAL)?;
            Some(
                inputs
                    .iter()
                    .map(|c| Ok(net.apply(LfsrState::from_bits(16, c.init)?, u64::from(c.data))?.bits()))
                    .collect::<Result<_>>()?,
            )
        }
        None => None,
    };
    let ok = expected.as_ref().is_none_or(|e| *e == run.states);

    if format == Format::Structured {
        let channels: Vec<_> = inputs
            .iter()
            .zip(&run.states)
            .map(|(c, s)| json!({ "data": format!("{:#04x}", c.data), "init": format!("{:#06x}", c.init), "registers": format!("{s:#06x}") }))
            .collect();
        let mut v = json!({ "program": program.name, "cycles": run.cycles, "channels": channels });
        if let Some(e) = &expected {
            v["kernel_agrees"] = json!(*e == run.states);
        }
        if args.dump_fb {
            v["frame_buffer"] = json!(fb_dump(&run.raw.state, &program.results));
        }
        if args.trace {
            v["trace"] = json!(run.raw.trace.iter().map(ToString::to_string).collect::<Vec<_>>());
        }
        if !opts.snapshots.is_empty() {
            v["array"] = json!(run.raw.snapshots.iter().map(ToString::to_string).collect::<Vec<_>>());
        }
        return Ok(Outcome {
            text: serde_json::to_string_pretty(&v)? + "\n",
            ok,
        });
    }

    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("channel,data,init,registers\n");
        for (k, (c, s)) in inputs.iter().zip(&run.states).enumerate() {
            writeln!(out, "{k},{:#04x},{:#06x},{s:#06x}", c.data, c.init).unwrap();
        }
        return Ok(Outcome { text: out, ok });
    }
    writeln!(out, "program: {}", program.name).unwrap();
    writeln!(out, "cycles: {}", run.cycles).unwrap();
    for (k, (c, s)) in inputs.iter().zip(&run.states).enumerate() {
        writeln!(
            out,
            "channel {k}: data {:#04x} init {:#06x} -> {s:#06x}",
            c.data, c.init
        )
        .unwrap();
    }
    if let Some(e) = &expected {
        let agree = e.iter().zip(&run.states).filter(|(a, b)| a == b).count();
        writeln!(out, "kernel: {agree}/{} channels agree", e.len()).unwrap();
    }
    dumps(&mut out, args, &run.raw.trace, &run.raw.snapshots, || {
        fb_dump(&run.raw.state, &program.results)
    });
    Ok(Outcome { text: out, ok })
}

fn dumps<V: Lane>(
    out: &mut String,
    args: &SimArgs,
    trace: &[morphocrc::morphosim::TraceEntry],
    snapshots: &[morphocrc::morphosim::GridSnapshot<V>],
    fb: impl FnOnce() -> String,
) {
    if args.trace {
        let body: String = trace.iter().map(|t| format!("{t}\n")).collect();
        section(out, "trace", &body);
    }
    for snap in snapshots {
        section(out, "array", &snap.to_string());
    }
    if args.dump_fb {
        section(out, "frame buffer", &fb());
    }
}

fn simulate_symbolic(program: &Program, opts: &RunOptions, args: &SimArgs, format: Format) -> Result<Outcome> {
    let run = run_symbolic(program, opts)?;
    let registers: Vec<String> = run.registers.iter().map(Lane::render).collect();
    if format == Format::Structured {
        let v = json!({ "program": program.name, "cycles": run.cycles, "registers": registers });
        return Ok(Outcome {
            text: serde_json::to_string_pretty(&v)? + "\n",
            ok: true,
        });
    }
    let mut out = String::new();
    writeln!(out, "program: {}", program.name).unwrap();
    writeln!(out, "cycles: {}", run.cycles).unwrap();
    for (i, r) in registers.iter().enumerate() {
        writeln!(out, "Register_{i}' = {r}").unwrap();
    }
    dumps(&mut out, args, &run.trace, &run.snapshots, || {
        fb_dump(&run.state, &program.results)
    });
    Ok(Outcome { text: out, ok: true })
}

pub fn bench(tolerance: &str, format: Format) -> Result<Outcome> {
    let tol = Tolerance::default().with_percent(tolerance)?;
    let measured = MeasuredCycles::from_simulator()?;
    let report = build_report::<Rational64>(&ReferenceDataset::published(), &measured, &tol)?;
    let format = match format {
        Format::Text | Format::Md => ReportFormat::Markdown,
        Format::Csv => ReportFormat::Csv,
        Format::Structured => ReportFormat::Structured,
    };
    Ok(Outcome {
        text: report.render(format)?,
        ok: report.cells.iter().all(|c| c.status != CellStatus::Flag),
    })
}
