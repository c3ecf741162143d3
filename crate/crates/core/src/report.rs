//! Lookup-table files and the JSON analysis report.
//!
//! A LUT file is a header line `m=<int> poly=0x<hex>` followed by `2^m`
//! lines, each the hex value of `F(x)` for `x = 0, 1, ...`. Blank lines and
//! lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ccz::{ea_power_test, EaVerdict};
use crate::error::{Error, Result};
use crate::gf2m::{Elem, FieldCtx};
use crate::spectra::spectrum_report;
use crate::vbf::{algebraic_degree, FuncTable};

pub const SCHEMA_VERSION: u32 = 1;

/// The component-degree scan is `O(m 4^m)`; above this it is skipped.
pub const EA_TEST_LIMIT: u32 = 14;

pub fn write_lut(f: &FuncTable) -> String {
    let ctx = f.ctx();
    let mut out = format!("m={} poly={:#x}\n", ctx.m(), ctx.poly());
    for &v in f.values() {
        writeln!(out, "{v:x}").expect("writing to a string");
    }
    out
}

fn malformed(line: usize, reason: impl Into<String>) -> Error {
    Error::Malformed { line, reason: reason.into() }
}

fn parse_hex(s: &str) -> Option<u64> {
    let s = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u64::from_str_radix(s, 16).ok()
}

pub fn parse_lut(text: &str) -> Result<FuncTable> {
    let mut lines =
        text.lines().enumerate().map(|(n, l)| (n + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| malformed(1, "empty file"))?;
    let mut m = None;
    let mut poly = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("m", v)) => m = Some(v.parse::<u32>().map_err(|_| malformed(hline, format!("bad m '{v}'")))?),
            Some(("poly", v)) => poly = Some(parse_hex(v).ok_or_else(|| malformed(hline, format!("bad poly '{v}'")))?),
            _ => return Err(malformed(hline, format!("unexpected header field '{field}'"))),
        }
    }
    let m = m.ok_or_else(|| malformed(hline, "header lacks m="))?;
    let ctx = Arc::new(FieldCtx::new(m, poly)?);
    let mut values = Vec::with_capacity(ctx.size());
    for (n, l) in lines {
        let v = parse_hex(l).ok_or_else(|| malformed(n, format!("bad hex value '{l}'")))?;
        if v > ctx.mask() as u64 {
            return Err(Error::BadTableEntry { index: values.len(), value: v });
        }
        values.push(v as Elem);
    }
    FuncTable::from_values(&ctx, values)
}

/// Properties of a function as emitted by `analyze`. Serialized with sorted
/// keys; Walsh values are signed decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub m: u32,
    pub reduction_poly: String,
    pub degree: u32,
    pub nonlinearity: i64,
    pub differential_uniformity: u64,
    pub is_apn: bool,
    pub is_ab: bool,
    pub walsh_distribution: BTreeMap<String, u64>,
    pub delta_distribution: BTreeMap<String, u64>,
    /// Hex `c` with `tr(cF)` of degree outside `{0, 1, deg F}`; absent when
    /// there is none or the scan was skipped.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ea_power_witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u64>,
}

impl AnalysisReport {
    pub fn analyze(f: &FuncTable) -> Result<Self> {
        let ctx = f.ctx();
        let s = spectrum_report(f)?;
        let ea_power_witness = if ctx.m() <= EA_TEST_LIMIT {
            match ea_power_test(f) {
                EaVerdict::ProvenInequivalent { c } => Some(format!("{c:#x}")),
                EaVerdict::Inconclusive => None,
            }
        } else {
            None
        };
        Ok(AnalysisReport {
            schema: SCHEMA_VERSION,
            m: ctx.m(),
            reduction_poly: format!("{:#x}", ctx.poly()),
            degree: algebraic_degree(f),
            nonlinearity: s.nonlinearity,
            differential_uniformity: s.differential_uniformity,
            is_apn: s.is_apn,
            is_ab: s.is_ab,
            walsh_distribution: s.walsh.distribution.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            delta_distribution: s.differential.distribution.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            ea_power_witness,
            timing_ms: None,
        })
    }

    /// Canonical JSON: object keys sorted, two-space indentation, trailing
    /// newline.
    pub fn to_json(&self) -> String {
        // serde_json's Map is ordered by key, so going through Value sorts
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| malformed(e.line(), e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(m: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(m, None).unwrap())
    }

    #[test]
    fn lut_round_trip() {
        let ctx = field(5);
        let f = FuncTable::power(&ctx, 3);
        let text = write_lut(&f);
        assert!(text.starts_with("m=5 poly=0x25\n"));
        assert_eq!(text.lines().count(), 33);
        assert_eq!(parse_lut(&text).unwrap(), f);
        let other = Arc::new(FieldCtx::new(5, Some(0b111101)).unwrap());
        let g = FuncTable::power(&other, 3);
        assert_eq!(parse_lut(&write_lut(&g)).unwrap(), g);
    }

    #[test]
    fn lut_errors() {
        assert!(matches!(parse_lut(""), Err(Error::Malformed { .. })));
        assert!(matches!(parse_lut("m=x\n"), Err(Error::Malformed { .. })));
        assert!(matches!(parse_lut("m=2 poly=0x7\n0\n1\n2\n"), Err(Error::BadTableLength { .. })));
        assert!(matches!(parse_lut("m=2 poly=0x7\n0\n1\n2\n4\n"), Err(Error::BadTableEntry { index: 3, value: 4 })));
        assert!(matches!(parse_lut("m=2 poly=0x7\n0\nzz\n2\n3\n"), Err(Error::Malformed { line: 3, .. })));
        assert_eq!(parse_lut("m=2 poly=0x5\n0\n1\n2\n3\n").unwrap_err(), Error::RejectsReducible(5));
        assert!(parse_lut("# comment\nm=2\n\n0\n1\n2\n3\n").is_ok());
    }

    #[test]
    fn gold_report() {
        let ctx = field(5);
        let r = AnalysisReport::analyze(&FuncTable::power(&ctx, 3)).unwrap();
        assert_eq!((r.nonlinearity, r.differential_uniformity, r.is_ab, r.is_apn), (12, 2, true, true));
        assert_eq!(r.degree, 2);
        assert_eq!(r.ea_power_witness, None);
        let keys: Vec<_> = r.walsh_distribution.keys().cloned().collect();
        assert_eq!(keys, ["-8", "0", "8"]);
        let json = r.to_json();
        assert_eq!(AnalysisReport::from_json(&json).unwrap(), r);
        assert!(!json.contains("timing_ms"));
        let pos = |k: &str| json.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("degree") < pos("delta_distribution") || pos("delta_distribution") < pos("degree"));
        let order = ["degree", "delta_distribution", "differential_uniformity", "is_ab", "is_apn", "m"];
        let mut sorted = order;
        sorted.sort_by_key(|k| pos(k));
        let mut alpha = order;
        alpha.sort();
        assert_eq!(sorted, alpha);
    }

    #[test]
    fn small_reports() {
        let r = AnalysisReport::analyze(&FuncTable::power(&field(6), 62)).unwrap();
        assert_eq!((r.nonlinearity, r.differential_uniformity), (24, 4));
        let r = AnalysisReport::analyze(&FuncTable::zero(&field(4))).unwrap();
        assert_eq!((r.degree, r.nonlinearity), (0, 0));
    }
}
