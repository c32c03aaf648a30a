//! Recompute every published figure and render the comparison.

use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::Rational64;
use serde::Serialize;

use super::metrics::{compute_metrics, speedup, SystemProfile};
use super::reference::{ComparisonRow, MeasuredCycles, ReferenceDataset, System};
use super::scalar::{decimals_of, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Structured,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "md" | "markdown" => Ok(Self::Markdown),
            "csv" => Ok(Self::Csv),
            "structured" | "json" => Ok(Self::Structured),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Allowed deviation from a published figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tolerance {
    /// Relative, for rates, times and per-bit figures.
    pub relative: Rational64,
    /// Absolute, for cycle ratios.
    pub speedup: Rational64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            relative: Rational64::new(5, 1000),
            speedup: Rational64::new(1, 100),
        }
    }
}

impl Tolerance {
    /// Relative tolerance given in percent, e.g. `"0.5"`.
    pub fn with_percent(self, percent: &str) -> Result<Self> {
        let p = Rational64::from_decimal(percent)?;
        Ok(Self {
            relative: p / Rational64::from_integer(100),
            ..self
        })
    }

    fn percent(&self) -> String {
        trim_zeros(&(self.relative * Rational64::from_integer(100)).render(4))
    }
}

fn to_scalar<S: Scalar>(r: Rational64) -> Result<S> {
    let n = S::from_i64(*r.numer()).ok_or_else(|| Error::InvalidMetric("tolerance out of range".into()))?;
    let d = S::from_i64(*r.denom()).ok_or_else(|| Error::InvalidMetric("tolerance out of range".into()))?;
    Ok(n / d)
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    /// A constant taken as given.
    Input,
    /// Within tolerance and equal at the published precision.
    Match,
    /// Within tolerance, but rounds differently.
    Info,
    /// Outside tolerance.
    Flag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportCell {
    pub table: &'static str,
    pub group: String,
    pub system: String,
    pub metric: &'static str,
    /// Recomputed value at the published precision (two extra places when it
    /// does not match).
    pub value: String,
    /// Exact recomputed value.
    pub exact: String,
    pub reference: Option<String>,
    pub difference: Option<String>,
    pub status: CellStatus,
    pub provenance: String,
}

/// Published figures that differ between the 1- and 8-channel rows although
/// the recomputed value is identical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inconsistency {
    pub algorithm: &'static str,
    pub system: String,
    pub metric: &'static str,
    pub one_channel: String,
    pub eight_channel: String,
    pub recomputed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub relative_tolerance_percent: String,
    pub speedup_tolerance: String,
    pub cells: Vec<ReportCell>,
    pub inconsistencies: Vec<Inconsistency>,
}

impl Report {
    pub fn flagged(&self) -> impl Iterator<Item = &ReportCell> {
        self.cells.iter().filter(|c| c.status == CellStatus::Flag)
    }

    pub fn cell(&self, provenance: &str) -> Option<&ReportCell> {
        self.cells.iter().find(|c| c.provenance == provenance)
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        Ok(match format {
            ReportFormat::Markdown => self.markdown(),
            ReportFormat::Csv => self.csv(),
            ReportFormat::Structured => serde_json::to_string_pretty(self)? + "\n",
        })
    }

    fn markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Tolerance: ±{}% relative, ±{} on speedups.\n",
            self.relative_tolerance_percent, self.speedup_tolerance
        );
        out.push_str("## Intel comparison\n\n");
        out.push_str(
            "| Algorithm | System | Cycles | Speedup | Time (us) | Bits per cycle | Mbps | Cycles per bit |\n\
             |---|---|---|---|---|---|---|---|\n",
        );
        let intel: Vec<&ReportCell> = self.cells.iter().filter(|c| c.table == "intel").collect();
        let mut i = 0;
        while i < intel.len() {
            let (group, system) = (&intel[i].group, &intel[i].system);
            let mut cols = vec![String::new(); 6];
            while i < intel.len() && &intel[i].group == group && &intel[i].system == system {
                let slot = INTEL_METRICS.iter().position(|m| *m == intel[i].metric).unwrap_or(0);
                cols[slot] = md_cell(intel[i]);
                i += 1;
            }
            let _ = writeln!(out, "| {group} | {system} | {} |", cols.join(" | "));
        }

        out.push_str("\n## FPGA comparison\n\n");
        out.push_str("| Algorithm | M1 cycles | RC-1000 cycles | Speedup |\n|---|---|---|---|\n");
        let fpga: Vec<&ReportCell> = self.cells.iter().filter(|c| c.table == "fpga").collect();
        for chunk in fpga.chunks(3) {
            let cols: Vec<String> = chunk.iter().map(|c| md_cell(c)).collect();
            let _ = writeln!(out, "| {} | {} |", chunk[0].group, cols.join(" | "));
        }

        let flagged: Vec<&ReportCell> = self.flagged().collect();
        if !flagged.is_empty() {
            out.push_str("\n## Outside tolerance\n\n");
            for c in flagged {
                let _ = writeln!(
                    out,
                    "- `{}`: {} vs {} ({})",
                    c.provenance,
                    c.value,
                    c.reference.as_deref().unwrap_or("-"),
                    c.difference.as_deref().unwrap_or("-")
                );
            }
        }
        if !self.inconsistencies.is_empty() {
            out.push_str("\n## Reference figures that disagree across channel counts\n\n");
            for n in &self.inconsistencies {
                let _ = writeln!(
                    out,
                    "- {} {} {}: 1ch {} vs 8ch {} (recomputed {})",
                    n.algorithm, n.system, n.metric, n.one_channel, n.eight_channel, n.recomputed
                );
            }
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::from("table,group,system,metric,value,exact,reference,difference,status,provenance\n");
        for c in &self.cells {
            let status = serde_json::to_value(c.status)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                c.table,
                c.group,
                c.system,
                c.metric,
                c.value,
                c.exact,
                c.reference.as_deref().unwrap_or(""),
                c.difference.as_deref().unwrap_or(""),
                status,
                c.provenance
            );
        }
        out
    }
}

fn md_cell(c: &ReportCell) -> String {
    match (c.status, &c.reference) {
        (CellStatus::Info, Some(r)) => format!("{} (ref {r})", c.value),
        (CellStatus::Flag, Some(r)) => format!("**{} (ref {r}, {})**", c.value, c.difference.as_deref().unwrap_or("-")),
        _ => c.value.clone(),
    }
}

const INTEL_METRICS: [&str; 6] = [
    "cycles",
    "speedup",
    "time_us",
    "bits_per_cycle",
    "mbps",
    "cycles_per_bit",
];

enum Compare {
    Relative,
    Absolute,
}

struct Ctx<S> {
    relative: S,
    absolute: S,
}

impl<S: Scalar> Ctx<S> {
    fn cell(
        &self,
        base: (&'static str, String, String),
        metric: &'static str,
        computed: &S,
        reference: &str,
        mode: Compare,
        provenance: String,
    ) -> Result<ReportCell> {
        let r = S::from_decimal(reference)?;
        let dec = decimals_of(reference);
        let (within, difference) = match mode {
            Compare::Relative => {
                let d = (computed.clone() - r.clone()) / r.clone();
                let pct = d.clone() * S::from_u64_checked(100)?;
                (d.abs() <= self.relative, format!("{}%", signed(&pct, 2)))
            }
            Compare::Absolute => {
                let d = computed.clone() - r.clone();
                (d.abs() <= self.absolute, signed(&d, 4))
            }
        };
        let display_match = computed.round_to(dec) == r.round_to(dec);
        let status = match (within, display_match) {
            (false, _) => CellStatus::Flag,
            (true, true) => CellStatus::Match,
            (true, false) => CellStatus::Info,
        };
        let value = if status == CellStatus::Match {
            computed.render(dec)
        } else {
            computed.render(dec + 2)
        };
        Ok(ReportCell {
            table: base.0,
            group: base.1,
            system: base.2,
            metric,
            value,
            exact: computed.to_string(),
            reference: Some(reference.to_string()),
            difference: Some(difference),
            status,
            provenance,
        })
    }
}

fn signed<S: Scalar>(v: &S, decimals: u32) -> String {
    let s = v.render(decimals);
    if s.starts_with('-') {
        s
    } else {
        format!("+{s}")
    }
}

fn exact_cycles(
    base: (&'static str, String, String),
    measured: u64,
    reference: &str,
    provenance: String,
) -> ReportCell {
    let ok = reference.parse::<u64>() == Ok(measured);
    ReportCell {
        table: base.0,
        group: base.1,
        system: base.2,
        metric: "cycles",
        value: measured.to_string(),
        exact: measured.to_string(),
        reference: Some(reference.to_string()),
        difference: Some(if ok {
            "+0".into()
        } else {
            format!("{measured} != {reference}")
        }),
        status: if ok { CellStatus::Match } else { CellStatus::Flag },
        provenance,
    }
}

/// Recompute every published figure from cycle counts and clock rates.
/// M1 cycle counts come from `measured`, never from the dataset.
pub fn build_report<S: Scalar>(
    dataset: &ReferenceDataset,
    measured: &MeasuredCycles,
    tolerance: &Tolerance,
) -> Result<Report> {
    let ctx = Ctx::<S> {
        relative: to_scalar(tolerance.relative)?,
        absolute: to_scalar(tolerance.speedup)?,
    };
    let mut cells = Vec::new();
    let mut computed_rows = Vec::new();

    for row in &dataset.comparison {
        let base = || ("intel", row.group(), row.system.to_string());
        let m1 = measured.get(row.algorithm);
        let cycles = row.cycles.unwrap_or(m1);
        let profile = SystemProfile::new(row.system.to_string(), row.system.frequency_hz(), cycles, row.bits())?;
        let m = compute_metrics::<S>(&profile)?;
        let p = &row.published;

        if row.cycles.is_some() {
            cells.push(ReportCell {
                table: "intel",
                group: row.group(),
                system: row.system.to_string(),
                metric: "cycles",
                value: cycles.to_string(),
                exact: cycles.to_string(),
                reference: Some(p.cycles.to_string()),
                difference: None,
                status: CellStatus::Input,
                provenance: row.provenance("cycles"),
            });
        } else {
            cells.push(exact_cycles(base(), cycles, p.cycles, row.provenance("cycles")));
        }
        if let Some(s) = p.speedup {
            let v = speedup::<S>(m1, cycles)?;
            cells.push(ctx.cell(base(), "speedup", &v, s, Compare::Absolute, row.provenance("speedup"))?);
        }
        for (metric, v, r) in [
            ("time_us", &m.time_us, p.time_us),
            ("bits_per_cycle", &m.bits_per_cycle, p.bits_per_cycle),
            ("mbps", &m.mbps, p.mbps),
            ("cycles_per_bit", &m.cycles_per_bit, p.cycles_per_bit),
        ] {
            cells.push(ctx.cell(base(), metric, v, r, Compare::Relative, row.provenance(metric))?);
        }
        computed_rows.push((row, m));
    }

    for row in &dataset.fpga {
        let base = || ("fpga", row.algorithm.label().to_string(), System::Rc1000.to_string());
        let m1 = measured.get(row.algorithm);
        cells.push(exact_cycles(
            base(),
            m1,
            row.published_m1_cycles,
            row.provenance("m1_cycles"),
        ));
        cells.push(ReportCell {
            table: "fpga",
            group: row.algorithm.label().to_string(),
            system: System::Rc1000.to_string(),
            metric: "fpga_cycles",
            value: row.fpga_cycles.to_string(),
            exact: row.fpga_cycles.to_string(),
            reference: Some(row.fpga_cycles.to_string()),
            difference: None,
            status: CellStatus::Input,
            provenance: row.provenance("fpga_cycles"),
        });
        let v = speedup::<S>(row.fpga_cycles, m1)?;
        cells.push(ctx.cell(
            base(),
            "speedup",
            &v,
            row.published_speedup,
            Compare::Absolute,
            row.provenance("speedup"),
        )?);
    }

    let inconsistencies = inconsistencies(&computed_rows);
    Ok(Report {
        relative_tolerance_percent: tolerance.percent(),
        speedup_tolerance: trim_zeros(&tolerance.speedup.render(4)),
        cells,
        inconsistencies,
    })
}

fn inconsistencies<S: Scalar>(rows: &[(&ComparisonRow, super::metrics::MetricsRow<S>)]) -> Vec<Inconsistency> {
    let mut out = Vec::new();
    for (a, ma) in rows.iter().filter(|(r, _)| r.channels == 1) {
        let Some((b, mb)) = rows
            .iter()
            .find(|(r, _)| r.channels == 8 && r.algorithm == a.algorithm && r.system == a.system)
        else {
            continue;
        };
        for (metric, va, vb, ra, rb) in [
            (
                "bits_per_cycle",
                &ma.bits_per_cycle,
                &mb.bits_per_cycle,
                a.published.bits_per_cycle,
                b.published.bits_per_cycle,
            ),
            ("mbps", &ma.mbps, &mb.mbps, a.published.mbps, b.published.mbps),
            (
                "cycles_per_bit",
                &ma.cycles_per_bit,
                &mb.cycles_per_bit,
                a.published.cycles_per_bit,
                b.published.cycles_per_bit,
            ),
        ] {
            if va == vb && ra != rb {
                out.push(Inconsistency {
                    algorithm: a.algorithm.label(),
                    system: a.system.to_string(),
                    metric,
                    one_channel: ra.to_string(),
                    eight_channel: rb.to_string(),
                    recomputed: va.render(decimals_of(ra).max(decimals_of(rb)) + 2),
                });
            }
        }
    }
    out
}

/// Build and render in one call.
pub fn render_report<S: Scalar>(
    dataset: &ReferenceDataset,
    measured: &MeasuredCycles,
    format: ReportFormat,
    tolerance: &Tolerance,
) -> Result<String> {
    build_report::<S>(dataset, measured, tolerance)?.render(format)
}
