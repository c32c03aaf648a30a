//! Audit of published byte-wise equation listings against derived networks.
//!
//! Published listings are parsed from a small transcription syntax:
//!
//! ```text
//! XOR_i = Register_i ^ DataIn_i ; i = 0..7
//! X = XOR_0 ^ XOR_1 ^ XOR_2 ^ XOR_3 ^ XOR_4 ^ XOR_5 ^ XOR_6 ^ XOR_7
//! Register_0 = Register_8 ^ X
//! ```
//!
//! A line whose left side is neither `XOR_i` nor `Register_n` defines an
//! alias that later lines may use. Nothing here assumes the published text
//! is correct: every line is resolved and compared against the derived
//! network, and the result is a machine-readable [`DiscrepancyReport`].

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use super::lfsr::BitConvention;
use super::network::{derive_network, expand, factor, join_terms, Term, TermKind, UpdateNetwork};
use super::poly::GeneratorPolynomial;
use crate::error::{Error, Result};

/// Published 8-shift equations for the CCITT generator, transcribed verbatim
/// (term order as printed).
pub const PUBLISHED_CCITT_8: &str = "\
XOR_i = Register_i ^ DataIn_i ; i = 0..7
Register_0 = Register_8 ^ XOR_4 ^ XOR_0
Register_1 = Register_9 ^ XOR_5 ^ XOR_1
Register_2 = Register_10 ^ XOR_6 ^ XOR_2
Register_3 = Register_11 ^ XOR_0 ^ XOR_7 ^ XOR_3
Register_4 = Register_12 ^ XOR_1
Register_5 = Register_13 ^ XOR_2
Register_6 = Register_14 ^ XOR_3
Register_7 = Register_15 ^ XOR_4 ^ XOR_0
Register_8 = XOR_0 ^ XOR_5 ^ XOR_1
Register_9 = XOR_1 ^ XOR_6 ^ XOR_2
Register_10 = XOR_2 ^ XOR_7 ^ XOR_3
Register_11 = XOR_3
Register_12 = XOR_4 ^ XOR_0
Register_13 = XOR_5 ^ XOR_1
Register_14 = XOR_6 ^ XOR_2
Register_15 = XOR_7 ^ XOR_3
";

/// Published 8-shift equations for the CRC-16 generator, transcribed
/// verbatim. Lines 13 and 14 cite `XOR_8`, which the listing never defines.
pub const PUBLISHED_CRC16_8: &str = "\
XOR_i = Register_i ^ DataIn_i ; i = 0..7
X = XOR_0 ^ XOR_1 ^ XOR_2 ^ XOR_3 ^ XOR_4 ^ XOR_5 ^ XOR_6 ^ XOR_7
Register_0 = Register_8 ^ X
Register_1 = Register_9
Register_2 = Register_10
Register_3 = Register_11
Register_4 = Register_12
Register_5 = Register_13
Register_6 = Register_14 ^ XOR_0
Register_7 = Register_15 ^ XOR_1 ^ XOR_0
Register_8 = XOR_3 ^ XOR_2
Register_9 = XOR_4 ^ XOR_3
Register_10 = XOR_5 ^ XOR_4
Register_11 = XOR_6 ^ XOR_5
Register_12 = XOR_7 ^ XOR_6
Register_13 = XOR_8 ^ XOR_7
Register_14 = XOR_8 ^ X
Register_15 = X
";

#[derive(Debug, Clone, PartialEq, Eq)]
enum Symbol {
    Term(Term),
    Alias(String),
}

#[derive(Debug, Clone)]
struct RegisterLine {
    index: u32,
    text: String,
    symbols: Vec<Symbol>,
}

/// A parsed published listing.
#[derive(Debug, Clone)]
pub struct PublishedListing {
    xor_range: Option<(u32, u32)>,
    aliases: BTreeMap<String, Vec<Symbol>>,
    lines: Vec<RegisterLine>,
}

impl PublishedListing {
    pub fn parse(text: &str) -> Result<Self> {
        let mut listing = PublishedListing {
            xor_range: None,
            aliases: BTreeMap::new(),
            lines: Vec::new(),
        };
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let bad = |reason: String| Error::Listing { line: line_no, reason };
            let (body, range) = match raw.split_once(';') {
                Some((b, r)) => (b, Some(r)),
                None => (raw, None),
            };
            let body = body.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = body.split_once('=').ok_or_else(|| bad("missing `=`".into()))?;
            let lhs = lhs.trim().trim_end_matches('\'');
            if lhs == "XOR_i" {
                if rhs.split_whitespace().collect::<Vec<_>>() != ["Register_i", "^", "DataIn_i"] {
                    return Err(bad("unsupported XOR_i definition".into()));
                }
                let range = range.ok_or_else(|| bad("XOR_i needs `; i = a..b`".into()))?;
                listing.xor_range = Some(parse_range(range).map_err(bad)?);
                continue;
            }
            let symbols = rhs
                .split('^')
                .map(|s| parse_symbol(s.trim(), &listing.aliases))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(bad)?;
            if let Some(idx) = lhs.strip_prefix("Register_") {
                let index = idx.parse().map_err(|_| bad(format!("bad lhs `{lhs}`")))?;
                listing.lines.push(RegisterLine {
                    index,
                    text: rhs.trim().to_string(),
                    symbols,
                });
            } else {
                listing.aliases.insert(lhs.to_string(), symbols);
            }
        }
        Ok(listing)
    }

    /// Resolve a symbol list to a canonical term list, reporting any terms
    /// the listing leaves undefined. `shift` offsets explicit XOR indices.
    fn resolve(&self, symbols: &[Symbol], xor_count: u32, shift: i64) -> std::result::Result<Vec<Term>, Vec<String>> {
        let defined = self.xor_range.map_or(0..0, |(a, b)| a..b + 1);
        let mut flat = Vec::new();
        let mut undefined = Vec::new();
        self.flatten(symbols, shift, &mut flat);
        for t in &flat {
            if t.kind == TermKind::Xor && !(defined.contains(&t.index) && t.index < xor_count) {
                undefined.push(t.to_string());
            }
        }
        if !undefined.is_empty() {
            undefined.sort();
            undefined.dedup();
            return Err(undefined);
        }
        let form = expand(&flat, xor_count).map_err(|e| vec![e.to_string()])?;
        Ok(factor(form, xor_count))
    }

    fn flatten(&self, symbols: &[Symbol], shift: i64, out: &mut Vec<Term>) {
        for s in symbols {
            match s {
                Symbol::Term(t) if t.kind == TermKind::Xor && shift != 0 => {
                    let index = i64::from(t.index) + shift;
                    // A negative index cannot name anything; keep it
                    // out of range so it is reported as undefined.
                    out.push(Term::xor(u32::try_from(index).unwrap_or(u32::MAX)));
                }
                Symbol::Term(t) => out.push(*t),
                // Aliases are resolved unshifted: they are named values.
                Symbol::Alias(name) => self.flatten(&self.aliases[name], 0, out),
            }
        }
    }
}

fn parse_range(s: &str) -> std::result::Result<(u32, u32), String> {
    let s = s.trim();
    let rest = s
        .strip_prefix("i")
        .map(str::trim_start)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| format!("bad range `{s}`"))?;
    let (a, b) = rest.trim().split_once("..").ok_or_else(|| format!("bad range `{s}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    Ok((a, b))
}

fn parse_symbol(s: &str, aliases: &BTreeMap<String, Vec<Symbol>>) -> std::result::Result<Symbol, String> {
    if aliases.contains_key(s) {
        return Ok(Symbol::Alias(s.to_string()));
    }
    s.parse::<Term>().map(Symbol::Term)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum LineStatus {
    Match,
    /// `difference` is the canonical XOR of published and derived forms.
    Mismatch {
        difference: Vec<Term>,
    },
    /// The line cites terms the listing never defines.
    UndefinedTerms {
        terms: Vec<String>,
    },
    /// The listing has no line for this register.
    Missing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineAudit {
    pub register: u32,
    pub published: Option<String>,
    pub derived: Vec<Term>,
    #[serde(flatten)]
    pub status: LineStatus,
    /// Offset applied to every explicit XOR index that makes the published
    /// line equal the derived one, when a shift of -1 or +1 does.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xor_index_shift: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscrepancyReport {
    pub poly: String,
    pub convention: String,
    /// Whether the listing's `XOR_i` block defines exactly the derived
    /// subexpressions.
    pub xor_defs_match: bool,
    pub lines: Vec<LineAudit>,
}

impl DiscrepancyReport {
    pub fn is_exact(&self) -> bool {
        self.xor_defs_match && self.lines.iter().all(|l| l.status == LineStatus::Match)
    }

    pub fn discrepancies(&self) -> impl Iterator<Item = &LineAudit> {
        self.lines.iter().filter(|l| l.status != LineStatus::Match)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

impl fmt::Display for DiscrepancyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let matched = self.lines.iter().filter(|l| l.status == LineStatus::Match).count();
        writeln!(
            f,
            "audit {} ({}): {}/{} register lines match, xor definitions {}",
            self.poly,
            self.convention,
            matched,
            self.lines.len(),
            if self.xor_defs_match { "match" } else { "differ" }
        )?;
        for l in &self.lines {
            let mut line = format!("Register_{}': ", l.register);
            match &l.status {
                LineStatus::Match => line.push_str("match"),
                LineStatus::Mismatch { difference } => {
                    let _ = write!(line, "MISMATCH difference {}", join_terms(difference));
                }
                LineStatus::UndefinedTerms { terms } => {
                    let _ = write!(line, "UNDEFINED {}", terms.join(", "));
                }
                LineStatus::Missing => line.push_str("MISSING"),
            }
            if l.status != LineStatus::Match {
                let _ = write!(
                    line,
                    " | published {} | derived {}",
                    l.published.as_deref().unwrap_or("-"),
                    join_terms(&l.derived)
                );
                if let Some(shift) = l.xor_index_shift {
                    let _ = write!(line, " | reconciled by XOR index shift {shift:+}");
                }
            }
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Compare a derived network with a published listing, line by line.
pub fn audit(net: &UpdateNetwork, poly: &GeneratorPolynomial, published: &str) -> Result<DiscrepancyReport> {
    let listing = PublishedListing::parse(published)?;
    let xor_count = net.xor_count();
    let xor_defs_match = match listing.xor_range {
        Some((0, last)) => last + 1 == xor_count,
        None => xor_count == 0,
        _ => false,
    };
    let lines = (0..net.width())
        .map(|r| {
            let derived = net.register_def(r as usize).to_vec();
            let Some(line) = listing.lines.iter().find(|l| l.index == r) else {
                return Ok(LineAudit {
                    register: r,
                    published: None,
                    derived,
                    status: LineStatus::Missing,
                    xor_index_shift: None,
                });
            };
            let status = match listing.resolve(&line.symbols, xor_count, 0) {
                Ok(terms) if terms == derived => LineStatus::Match,
                Ok(terms) => {
                    let diff = expand(&terms, xor_count)? ^ expand(&derived, xor_count)?;
                    LineStatus::Mismatch {
                        difference: factor(diff, xor_count),
                    }
                }
                Err(terms) => LineStatus::UndefinedTerms { terms },
            };
            let xor_index_shift = if status == LineStatus::Match {
                None
            } else {
                [-1i64, 1]
                    .into_iter()
                    .find(|&s| listing.resolve(&line.symbols, xor_count, s).is_ok_and(|t| t == derived))
            };
            Ok(LineAudit {
                register: r,
                published: Some(line.text.clone()),
                derived,
                status,
                xor_index_shift,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscrepancyReport {
        poly: poly.to_string(),
        convention: net.convention().to_string(),
        xor_defs_match,
        lines,
    })
}

/// Derive the 8-shift network under `conv` and audit it against `published`.
pub fn audit_published(poly: &GeneratorPolynomial, conv: BitConvention, published: &str) -> Result<DiscrepancyReport> {
    let net = derive_network(poly, 8, conv)?;
    audit(&net, poly, published)
}

/// Every bit convention under which the derived CCITT network reproduces the
/// published CCITT listing exactly.
pub fn discover_conventions() -> Vec<BitConvention> {
    BitConvention::ALL
        .into_iter()
        .filter(|&conv| {
            audit_published(&GeneratorPolynomial::ccitt(), conv, PUBLISHED_CCITT_8).is_ok_and(|r| r.is_exact())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_aliases_and_ranges() {
        let l = PublishedListing::parse(PUBLISHED_CRC16_8).unwrap();
        assert_eq!(l.xor_range, Some((0, 7)));
        assert_eq!(l.aliases["X"].len(), 8);
        assert_eq!(l.lines.len(), 16);
    }

    #[test]
    fn rejects_malformed_transcriptions() {
        assert!(PublishedListing::parse("Register_0 Register_8").is_err());
        assert!(PublishedListing::parse("XOR_i = Register_i ^ DataIn_i").is_err());
        assert!(PublishedListing::parse("Register_0 = Foo_1").is_err());
        assert!(PublishedListing::parse("XOR_i = Register_i ^ DataIn_i ; j = 0..7").is_err());
    }

    #[test]
    fn missing_lines_and_mismatches_are_reported() {
        let text = "XOR_i = Register_i ^ DataIn_i ; i = 0..7\nRegister_11 = XOR_2\n";
        let r = audit_published(&GeneratorPolynomial::ccitt(), BitConvention::CANONICAL, text).unwrap();
        assert!(!r.is_exact());
        assert_eq!(
            r.lines[11].status,
            LineStatus::Mismatch {
                difference: vec![Term::xor(2), Term::xor(3)]
            }
        );
        assert_eq!(r.lines[0].status, LineStatus::Missing);
        assert_eq!(r.discrepancies().count(), 16);
    }

    #[test]
    fn canonical_convention_is_the_unique_reproduction() {
        assert_eq!(discover_conventions(), vec![BitConvention::CANONICAL]);
    }
}
