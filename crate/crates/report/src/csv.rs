//! Per-point diagnostics CSV.

use std::fmt::Write as _;

use gtorsion_core::{DiagnosticsReport, NormSet};

pub fn header(dim: usize) -> String {
    let mut cols = vec!["point_id".to_string()];
    cols.extend((1..=dim).map(|i| format!("x_{i}")));
    cols.extend(NormSet::NAMES.iter().map(|s| s.to_string()));
    cols.join(",")
}

/// 17 significant digits in scientific notation.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn diagnostics_csv(dim: usize, report: &DiagnosticsReport) -> String {
    let mut out = header(dim);
    out.push('\n');
    for p in &report.points {
        write!(out, "{}", p.point_id).unwrap();
        for v in p.x.iter().copied().chain(p.norms.values()) {
            out.push(',');
            out.push_str(&format_value(v));
        }
        out.push('\n');
    }
    out
}
