use serde::Serialize;

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// One system running one algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemProfile {
    pub name: String,
    pub frequency_hz: u64,
    pub cycles: u64,
    pub bits: u64,
}

impl SystemProfile {
    pub fn new(name: impl Into<String>, frequency_hz: u64, cycles: u64, bits: u64) -> Result<Self> {
        let p = Self {
            name: name.into(),
            frequency_hz,
            cycles,
            bits,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("frequency", self.frequency_hz),
            ("cycles", self.cycles),
            ("bits", self.bits),
        ] {
            if v == 0 {
                return Err(Error::InvalidMetric(format!("{}: {what} must be positive", self.name)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow<S> {
    pub bits_per_cycle: S,
    pub mbps: S,
    pub cycles_per_bit: S,
    pub time_us: S,
    /// Filled in when the row is compared against a baseline.
    pub speedup: Option<S>,
}

pub fn compute_metrics<S: Scalar>(profile: &SystemProfile) -> Result<MetricsRow<S>> {
    profile.validate()?;
    let bits = S::from_u64_checked(profile.bits)?;
    let cycles = S::from_u64_checked(profile.cycles)?;
    let mhz = S::from_u64_checked(profile.frequency_hz)? / S::from_u64_checked(1_000_000)?;
    let bits_per_cycle = bits.clone() / cycles.clone();
    Ok(MetricsRow {
        mbps: bits_per_cycle.clone() * mhz.clone(),
        cycles_per_bit: cycles.clone() / bits,
        time_us: cycles / mhz,
        bits_per_cycle,
        speedup: None,
    })
}

/// How many times more cycles `other` needs than `baseline`.
pub fn speedup<S: Scalar>(baseline_cycles: u64, other_cycles: u64) -> Result<S> {
    if baseline_cycles == 0 || other_cycles == 0 {
        return Err(Error::InvalidMetric("cycle counts must be positive".into()));
    }
    Ok(S::from_u64_checked(other_cycles)? / S::from_u64_checked(baseline_cycles)?)
}
