use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Number type the metrics are computed in. `Ratio<i64>` keeps every cell
/// exact until it is rendered; the float impls exist for comparison.
pub trait Scalar:
    Num + Signed + FromPrimitive + ToPrimitive + Clone + PartialOrd + Debug + Display + Send + Sync
{
    /// Round half away from zero to `decimals` places.
    fn round_to(&self, decimals: u32) -> Self;

    fn from_u64_checked(v: u64) -> Result<Self> {
        Self::from_u64(v).ok_or_else(|| Error::InvalidMetric(format!("{v} does not fit the scalar type")))
    }

    /// Parse a plain decimal literal such as `213.13` exactly.
    fn from_decimal(s: &str) -> Result<Self> {
        let bad = || Error::InvalidMetric(format!("malformed decimal `{s}`"));
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: u64 = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let scale = 10u64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        Ok(Self::from_u64_checked(digits)? / Self::from_u64_checked(scale)?)
    }

    /// Fixed-point rendering with `decimals` places.
    fn render(&self, decimals: u32) -> String {
        let v = self.round_to(decimals).to_f64().unwrap_or(f64::NAN);
        format!("{v:.prec$}", prec = decimals as usize)
    }
}

impl Scalar for Ratio<i64> {
    fn round_to(&self, decimals: u32) -> Self {
        let scale = Ratio::from_integer(10i64.pow(decimals));
        (self * scale).round() / scale
    }
}

impl Scalar for f64 {
    fn round_to(&self, decimals: u32) -> Self {
        let scale = 10f64.powi(decimals as i32);
        (self * scale).round() / scale
    }
}

impl Scalar for f32 {
    fn round_to(&self, decimals: u32) -> Self {
        let scale = 10f32.powi(decimals as i32);
        (self * scale).round() / scale
    }
}

/// Places after the decimal point in a literal.
pub fn decimals_of(s: &str) -> u32 {
    s.split_once('.').map_or(0, |(_, f)| f.len() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(Rational64::from_decimal("213.13").unwrap(), Rational64::new(21313, 100));
        assert_eq!(Rational64::from_decimal("16").unwrap(), Rational64::from_integer(16));
        assert!(Rational64::from_decimal("1.2.3").is_err());
        assert!(Rational64::from_decimal("-1").is_err());
        assert!(Rational64::from_decimal(".5").is_err());
        assert_eq!(decimals_of("0.0625"), 4);
        assert_eq!(decimals_of("16"), 0);
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(Rational64::new(1, 8).render(2), "0.13");
        assert_eq!(Rational64::new(26, 17).render(2), "1.53");
        assert_eq!(Rational64::new(8, 30).render(3), "0.267");
        assert_eq!(0.125f64.render(2), "0.13");
    }
}
