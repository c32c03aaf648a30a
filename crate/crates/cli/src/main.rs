use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

mod commands;
mod verify;

#[derive(Parser, Debug)]
#[command(
    name = "morphocrc",
    version,
    about = "Byte-wise CRC networks, an RC-array simulator and throughput reports"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized inputs and property runs.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Relative tolerance in percent for report cells.
    #[arg(long, global = true, default_value = "0.5")]
    tolerance: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Md,
    Csv,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the CRC remainder of a file or standard input.
    Crc {
        /// Input file; `-` or absent reads standard input.
        input: Option<PathBuf>,
        #[arg(long, default_value = "ccitt")]
        poly: String,
        /// Preset register contents: `0`, `ones`, or a hex value.
        #[arg(long, default_value = "0")]
        init: String,
        #[arg(long, default_value = "parallel")]
        engine: String,
    },
    /// Print the register update equations after a number of shifts.
    Derive {
        #[arg(long, default_value = "ccitt")]
        poly: String,
        #[arg(long, default_value_t = 8)]
        steps: u32,
        /// Audit against a published listing; without FILE, use the bundled one.
        #[arg(long, value_name = "FILE", num_args = 0..=1, default_missing_value = "")]
        diff: Option<String>,
    },
    /// Run a program on the RC-array simulator.
    Simulate {
        /// `ccitt`, `crc16`, or an assembly file.
        #[arg(default_value = "ccitt")]
        program: String,
        /// Data bytes in hex, comma separated: one per channel, or one for all.
        #[arg(long, value_delimiter = ',')]
        data: Vec<String>,
        #[arg(long, default_value = "0")]
        init: String,
        #[arg(long)]
        channels: Option<usize>,
        /// Print the RC array after the given cycle (repeatable).
        #[arg(long, value_name = "CYCLE")]
        dump_array: Vec<u64>,
        /// Print the frame buffer after the run.
        #[arg(long)]
        dump_fb: bool,
        /// Print one line per retired instruction.
        #[arg(long)]
        trace: bool,
        /// Run with symbolic lanes instead of data.
        #[arg(long)]
        symbolic: bool,
    },
    /// Run verification suites.
    #[command(group(ArgGroup::new("scope").required(true).multiple(true)))]
    Verify {
        /// Every register state and data byte for a 16-bit generator (repeatable).
        #[arg(long, value_name = "POLY", group = "scope")]
        exhaustive: Vec<String>,
        /// Randomized property checks driven by --seed.
        #[arg(long, group = "scope")]
        properties: bool,
        /// Simulator against kernel and symbolic proof of both programs.
        #[arg(long, group = "scope")]
        simulator: bool,
        /// Audit the bundled published listings.
        #[arg(long, group = "scope")]
        listings: bool,
        #[arg(long, group = "scope")]
        all: bool,
        /// Cases per property.
        #[arg(long, default_value_t = 1000)]
        cases: u32,
    },
    /// Recompute throughput figures and compare with the published ones.
    Bench,
}

/// Rendered output and whether every check in it passed.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Crc {
            input,
            poly,
            init,
            engine,
        } => commands::crc(input.as_deref(), &poly, &init, &engine, cli.format),
        Command::Derive { poly, steps, diff } => commands::derive(&poly, steps, diff.as_deref(), cli.format),
        Command::Simulate {
            program,
            data,
            init,
            channels,
            dump_array,
            dump_fb,
            trace,
            symbolic,
        } => commands::simulate(
            &commands::SimArgs {
                program,
                data,
                init,
                channels,
                dump_array,
                dump_fb,
                trace,
                symbolic,
            },
            cli.seed,
            cli.format,
        ),
        Command::Verify {
            exhaustive,
            properties,
            simulator,
            listings,
            all,
            cases,
        } => verify::run(
            &verify::Scope {
                exhaustive: if all {
                    vec!["ccitt".into(), "crc16".into()]
                } else {
                    exhaustive
                },
                properties: properties || all,
                simulator: simulator || all,
                listings: listings || all,
            },
            cli.seed,
            cases,
            cli.format,
        ),
        Command::Bench => commands::bench(&cli.tolerance, cli.format),
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
