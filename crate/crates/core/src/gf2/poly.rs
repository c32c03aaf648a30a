use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest register width the bitmask representation supports.
pub const MAX_WIDTH: u32 = 64;

/// A CRC generator over GF(2).
///
/// `taps` holds the coefficients of `x^0 ..= x^(width-1)`; the `x^width`
/// coefficient is implicit and always one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorPolynomial {
    width: u32,
    taps: u64,
    name: Option<&'static str>,
}

/// Names of the standard generators, in catalogue order.
pub const NAMED: [&str; 6] = ["ccitt", "sdlc-reverse", "crc16", "crc16-reverse", "crc12", "ethernet"];

impl GeneratorPolynomial {
    pub fn new(width: u32, taps: u64) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::InvalidPolynomial(format!(
                "width {width} outside 1..={MAX_WIDTH}"
            )));
        }
        if width < 64 && taps >> width != 0 {
            return Err(Error::InvalidPolynomial(format!(
                "tap mask {taps:#x} has bits at or above x^{width}"
            )));
        }
        Ok(Self {
            width,
            taps,
            name: None,
        })
    }

    const fn named(name: &'static str, width: u32, taps: u64) -> Self {
        assert!(taps & 1 == 1, "standard generators include x^0");
        assert!(taps >> width == 0);
        Self {
            width,
            taps,
            name: Some(name),
        }
    }

    /// SDLC (CCITT): x^16 + x^12 + x^5 + x^0.
    pub const fn ccitt() -> Self {
        Self::named("ccitt", 16, 0x1021)
    }

    /// SDLC reverse: x^16 + x^11 + x^4 + x^0.
    pub const fn sdlc_reverse() -> Self {
        Self::named("sdlc-reverse", 16, 0x0811)
    }

    /// CRC-16: x^16 + x^15 + x^2 + x^0.
    pub const fn crc16() -> Self {
        Self::named("crc16", 16, 0x8005)
    }

    /// CRC-16 reverse: x^16 + x^14 + x^1 + x^0.
    pub const fn crc16_reverse() -> Self {
        Self::named("crc16-reverse", 16, 0x4003)
    }

    /// CRC-12: x^12 + x^11 + x^3 + x^2 + x^1 + x^0.
    pub const fn crc12() -> Self {
        Self::named("crc12", 12, 0x80f)
    }

    /// Ethernet: x^32 + x^26 + x^23 + x^22 + x^16 + x^12 + x^11 + x^10 + x^8
    /// + x^7 + x^5 + x^4 + x^2 + x^1 + x^0.
    pub const fn ethernet() -> Self {
        Self::named("ethernet", 32, 0x04c1_1db7)
    }

    /// The six standard generators.
    pub const fn catalogue() -> [Self; 6] {
        [
            Self::ccitt(),
            Self::sdlc_reverse(),
            Self::crc16(),
            Self::crc16_reverse(),
            Self::crc12(),
            Self::ethernet(),
        ]
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Self::catalogue().into_iter().find(|p| p.name == Some(name))
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn taps(&self) -> u64 {
        self.taps
    }

    pub fn name(&self) -> Option<&'static str> {
        self.name
    }

    /// Whether the coefficient of `x^exponent` is one (`x^width` always is).
    pub fn coefficient(&self, exponent: u32) -> bool {
        exponent == self.width || (exponent < self.width && (self.taps >> exponent) & 1 == 1)
    }

    /// Mask covering all `width` register bits.
    pub fn register_mask(&self) -> u64 {
        low_mask(self.width)
    }

    /// Exponents with nonzero coefficient, highest first, `x^width` included.
    pub fn exponents(&self) -> Vec<u32> {
        (0..=self.width).rev().filter(|&e| self.coefficient(e)).collect()
    }

    /// Algebraic form, e.g. `x^16 + x^12 + x^5 + x^0`.
    pub fn algebraic(&self) -> String {
        self.exponents()
            .iter()
            .map(|e| format!("x^{e}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Number of hex digits used when printing a remainder.
    pub fn hex_digits(&self) -> usize {
        self.width.div_ceil(4) as usize
    }

    /// Lowercase `0x`-prefixed remainder zero-padded to the register width.
    pub fn format_remainder(&self, value: u64) -> String {
        format!("0x{:0width$x}", value, width = self.hex_digits())
    }
}

pub(crate) fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl fmt::Display for GeneratorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name {
            Some(name) => f.write_str(name),
            None => write!(f, "poly:{}:{:x}", self.width, self.taps),
        }
    }
}

impl FromStr for GeneratorPolynomial {
    type Err = Error;

    /// Accepts a catalogue name or `poly:<width>:<hex tap mask>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(p) = Self::by_name(s) {
            return Ok(p);
        }
        let Some(rest) = s.strip_prefix("poly:") else {
            return Err(Error::UnknownPolynomial(s.to_string()));
        };
        let (width, taps) = rest
            .split_once(':')
            .ok_or_else(|| Error::UnknownPolynomial(s.to_string()))?;
        let width: u32 = width.parse().map_err(|_| Error::UnknownPolynomial(s.to_string()))?;
        let taps = taps.trim_start_matches("0x").trim_start_matches("0X");
        let taps = u64::from_str_radix(taps, 16).map_err(|_| Error::UnknownPolynomial(s.to_string()))?;
        Self::new(width, taps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_has_six_entries_with_unit_constant_term() {
        let all = GeneratorPolynomial::catalogue();
        assert_eq!(all.len(), 6);
        for p in all {
            assert!(p.coefficient(0), "{p}");
            assert!(p.coefficient(p.width()));
            assert_eq!(p.taps() >> p.width(), 0);
        }
        let names: Vec<_> = all.iter().map(|p| p.name().unwrap()).collect();
        assert_eq!(names, NAMED);
    }

    #[test]
    fn algebraic_forms() {
        assert_eq!(GeneratorPolynomial::ccitt().algebraic(), "x^16 + x^12 + x^5 + x^0");
        assert_eq!(GeneratorPolynomial::crc16().algebraic(), "x^16 + x^15 + x^2 + x^0");
        assert_eq!(
            GeneratorPolynomial::sdlc_reverse().algebraic(),
            "x^16 + x^11 + x^4 + x^0"
        );
        assert_eq!(
            GeneratorPolynomial::crc16_reverse().algebraic(),
            "x^16 + x^14 + x^1 + x^0"
        );
        assert_eq!(
            GeneratorPolynomial::crc12().algebraic(),
            "x^12 + x^11 + x^3 + x^2 + x^1 + x^0"
        );
        assert_eq!(
            GeneratorPolynomial::ethernet().algebraic(),
            "x^32 + x^26 + x^23 + x^22 + x^16 + x^12 + x^11 + x^10 + x^8 + x^7 + x^5 + x^4 + x^2 + x^1 + x^0"
        );
    }

    #[test]
    fn parses_spec_strings() {
        for name in NAMED {
            let p: GeneratorPolynomial = name.parse().unwrap();
            assert_eq!(p.to_string(), name);
        }
        let custom: GeneratorPolynomial = "poly:8:07".parse().unwrap();
        assert_eq!((custom.width(), custom.taps(), custom.name()), (8, 7, None));
        assert_eq!(custom.to_string(), "poly:8:7");
        let same: GeneratorPolynomial = "poly:16:0x1021".parse().unwrap();
        assert_eq!(same.taps(), 0x1021);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            "crc99".parse::<GeneratorPolynomial>(),
            Err(Error::UnknownPolynomial(_))
        ));
        assert!(matches!(
            "poly:8:1ff".parse::<GeneratorPolynomial>(),
            Err(Error::InvalidPolynomial(_))
        ));
        assert!(GeneratorPolynomial::new(0, 0).is_err());
        assert!(GeneratorPolynomial::new(65, 1).is_err());
        assert!("poly:16".parse::<GeneratorPolynomial>().is_err());
    }

    #[test]
    fn remainder_formatting_tracks_width() {
        assert_eq!(GeneratorPolynomial::ccitt().format_remainder(0), "0x0000");
        assert_eq!(GeneratorPolynomial::crc12().format_remainder(0xabc), "0xabc");
        assert_eq!(GeneratorPolynomial::ethernet().format_remainder(0xdead), "0x0000dead");
    }
}
