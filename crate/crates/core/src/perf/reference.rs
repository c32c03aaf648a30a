//! Published reference figures for the byte-update CRC programs.
//!
//! Cycle counts and clock rates are inputs. Every other figure is kept as the
//! literal decimal it was published as, to be compared against recomputation.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ccitt,
    Crc16,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Ccitt => "CRC-CCITT",
            Algorithm::Crc16 => "CRC-16",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Algorithm::Ccitt => "ccitt",
            Algorithm::Crc16 => "crc16",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum System {
    M1,
    Pentium,
    I80486,
    Rc1000,
}

impl System {
    pub fn frequency_hz(self) -> u64 {
        match self {
            System::M1 | System::I80486 => 100_000_000,
            System::Pentium => 133_000_000,
            // Only cycle counts are compared for the FPGA.
            System::Rc1000 => 100_000_000,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            System::M1 => "m1",
            System::Pentium => "pentium",
            System::I80486 => "80486",
            System::Rc1000 => "rc1000",
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::M1 => "M1",
            System::Pentium => "Pentium",
            System::I80486 => "80486",
            System::Rc1000 => "RC-1000",
        })
    }
}

/// Published derived figures for one row, as printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PublishedCells {
    pub cycles: &'static str,
    pub speedup: Option<&'static str>,
    pub time_us: &'static str,
    pub bits_per_cycle: &'static str,
    pub mbps: &'static str,
    pub cycles_per_bit: &'static str,
}

/// One row of the Intel comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub algorithm: Algorithm,
    pub channels: u32,
    pub system: System,
    /// `None` for M1 rows: those cycle counts come from the simulator.
    pub cycles: Option<u64>,
    pub published: PublishedCells,
}

impl ComparisonRow {
    pub fn bits(&self) -> u64 {
        8 * u64::from(self.channels)
    }

    pub fn group(&self) -> String {
        format!("{} {}ch", self.algorithm.label(), self.channels)
    }

    /// Stable identifier of one published cell, e.g. `intel/ccitt-1ch/80486/mbps`.
    pub fn provenance(&self, metric: &str) -> String {
        format!(
            "intel/{}-{}ch/{}/{metric}",
            self.algorithm.key(),
            self.channels,
            self.system.key()
        )
    }
}

/// One row of the FPGA comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FpgaRow {
    pub algorithm: Algorithm,
    pub published_m1_cycles: &'static str,
    pub fpga_cycles: u64,
    /// Published `M1 cycles / FPGA cycles`.
    pub published_speedup: &'static str,
}

impl FpgaRow {
    pub fn provenance(&self, metric: &str) -> String {
        format!("fpga/{}/{metric}", self.algorithm.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct ReferenceDataset {
    pub comparison: Vec<ComparisonRow>,
    pub fpga: Vec<FpgaRow>,
}

const fn cells(
    cycles: &'static str,
    speedup: Option<&'static str>,
    time_us: &'static str,
    bits_per_cycle: &'static str,
    mbps: &'static str,
    cycles_per_bit: &'static str,
) -> PublishedCells {
    PublishedCells {
        cycles,
        speedup,
        time_us,
        bits_per_cycle,
        mbps,
        cycles_per_bit,
    }
}

const fn row(
    algorithm: Algorithm,
    channels: u32,
    system: System,
    cycles: Option<u64>,
    published: PublishedCells,
) -> ComparisonRow {
    ComparisonRow {
        algorithm,
        channels,
        system,
        cycles,
        published,
    }
}

use Algorithm::{Ccitt, Crc16};
use System::{Pentium, I80486, M1};

const COMPARISON: [ComparisonRow; 12] = [
    row(Ccitt, 1, M1, None, cells("30", None, "0.3", "0.267", "26.67", "3.75")),
    row(
        Ccitt,
        1,
        Pentium,
        Some(128),
        cells("128", Some("4.26"), "0.96", "0.0625", "8.3", "16"),
    ),
    row(
        Ccitt,
        1,
        I80486,
        Some(142),
        cells("142", Some("4.73"), "1.42", "0.056", "5.6", "17.86"),
    ),
    row(Crc16, 1, M1, None, cells("26", None, "0.26", "0.307", "30.76", "3.25")),
    row(
        Crc16,
        1,
        Pentium,
        Some(162),
        cells("162", Some("6.23"), "1.22", "0.049", "6.56", "20.25"),
    ),
    row(
        Crc16,
        1,
        I80486,
        Some(190),
        cells("190", Some("7.3"), "1.9", "0.042", "4.2", "23.75"),
    ),
    row(Ccitt, 8, M1, None, cells("30", None, "0.3", "2.13", "213.13", "0.46")),
    row(
        Ccitt,
        8,
        Pentium,
        Some(1024),
        cells("1024", Some("34.13"), "7.69", "0.0625", "8.32", "16"),
    ),
    row(
        Ccitt,
        8,
        I80486,
        Some(1136),
        cells("1136", Some("37.86"), "11.36", "0.056", "5.63", "17.75"),
    ),
    row(Crc16, 8, M1, None, cells("26", None, "0.26", "2.46", "246.15", "0.41")),
    row(
        Crc16,
        8,
        Pentium,
        Some(1296),
        cells("1296", Some("49.84"), "9.74", "0.05", "6.57", "20.25"),
    ),
    row(
        Crc16,
        8,
        I80486,
        Some(1520),
        cells("1520", Some("58.46"), "15.2", "0.042", "4.21", "23.75"),
    ),
];

const FPGA: [FpgaRow; 2] = [
    FpgaRow {
        algorithm: Ccitt,
        published_m1_cycles: "30",
        fpga_cycles: 8,
        published_speedup: "3.75",
    },
    FpgaRow {
        algorithm: Crc16,
        published_m1_cycles: "26",
        fpga_cycles: 17,
        published_speedup: "1.53",
    },
];

impl ReferenceDataset {
    pub fn published() -> Self {
        Self {
            comparison: COMPARISON.to_vec(),
            fpga: FPGA.to_vec(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }
}

/// Simulator-measured M1 cycle counts fed into the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeasuredCycles {
    pub ccitt: u64,
    pub crc16: u64,
}

impl MeasuredCycles {
    pub fn get(&self, a: Algorithm) -> u64 {
        match a {
            Algorithm::Ccitt => self.ccitt,
            Algorithm::Crc16 => self.crc16,
        }
    }
}

impl MeasuredCycles {
    /// Run both bundled programs once and count retired cycles.
    pub fn from_simulator() -> std::result::Result<Self, crate::morphosim::SimError> {
        use crate::morphosim::{ccitt_program, crc16_program, run_channels, ChannelInput, RunOptions};
        let input = [ChannelInput { data: 0, init: 0 }];
        let cycles = |p| run_channels(&p, &input, &RunOptions::default()).map(|r| r.cycles);
        Ok(Self {
            ccitt: cycles(ccitt_program())?,
            crc16: cycles(crc16_program())?,
        })
    }
}
