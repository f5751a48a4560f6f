//! Report rendering: a human summary and a machine-readable key-value
//! document.
//!
//! The machine document is byte-identical across runs of the same
//! invocation: floats are printed at a fixed 12 significant digits and
//! the wall time (the one nondeterministic field) appears only in the
//! human summary.

use std::fmt::Write as _;

use crate::harness::{CheckStatus, VerificationReport};

/// Fixed 12-significant-digit float formatting for machine output.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

fn status_str(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Errored => "errored",
    }
}

/// Deterministic key-value rendering of a report.
pub fn render_machine(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format = metric-collapse.report/1");
    let _ = writeln!(out, "scene = {}", report.scene);
    let _ = writeln!(out, "seed = {}", report.config.seed);
    let _ = writeln!(out, "points = {}", report.config.n_points);
    let _ = writeln!(out, "pairs = {}", report.config.n_pairs);
    let _ = writeln!(out, "triples = {}", report.config.n_triples);
    let bbox = &report.config.bbox;
    let mut box_str = String::new();
    for axis in 0..bbox.dim() {
        let (lo, hi) = bbox.interval(axis);
        if axis > 0 {
            box_str.push_str(" x ");
        }
        let _ = write!(box_str, "[{}, {}]", fmt_sig(lo), fmt_sig(hi));
    }
    let _ = writeln!(out, "box = {box_str}");
    let _ = writeln!(out, "tol = {}", fmt_sig(report.tol));
    let _ = writeln!(out, "boundary_pairs = {}", report.boundary_pairs);
    let _ = writeln!(out, "checks = {}", report.checks.len());
    for check in &report.checks {
        let key = check.name;
        let _ = writeln!(out, "check.{key}.status = {}", status_str(check.status));
        let _ = writeln!(out, "check.{key}.checked = {}", check.checked);
        let _ = writeln!(out, "check.{key}.violations = {}", check.violations);
        for (name, value) in &check.constants {
            let _ = writeln!(out, "check.{key}.const.{name} = {}", fmt_sig(*value));
        }
        for (name, value) in &check.empirical {
            let _ = writeln!(out, "check.{key}.emp.{name} = {}", fmt_sig(*value));
        }
        if let Some(w) = &check.worst {
            let _ = writeln!(out, "check.{key}.worst.lhs = {}", fmt_sig(w.lhs));
            let _ = writeln!(out, "check.{key}.worst.rhs = {}", fmt_sig(w.rhs));
            let _ = writeln!(out, "check.{key}.worst.margin = {}", fmt_sig(w.margin()));
        }
        if let Some(note) = &check.note {
            let _ = writeln!(out, "check.{key}.note = {note}");
        }
    }
    let _ = writeln!(
        out,
        "result = {}",
        if report.all_passed() { "pass" } else { "fail" }
    );
    out
}

/// Free-form human summary (includes the wall time).
pub fn render_human(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scene: {}", report.scene);
    let _ = writeln!(
        out,
        "sample: seed {}, {} points, {} pairs, {} triples, tol {:.1e}",
        report.config.seed,
        report.config.n_points,
        report.config.n_pairs,
        report.config.n_triples,
        report.tol
    );
    if report.boundary_pairs > 0 {
        let _ = writeln!(
            out,
            "note: {} pair(s) sit on the strict vicinity boundary",
            report.boundary_pairs
        );
    }
    for check in &report.checks {
        let _ = write!(
            out,
            "  {:<22} {:>7}  checked {:>6}  violations {:>4}",
            check.name,
            status_str(check.status).to_uppercase(),
            check.checked,
            check.violations
        );
        if !check.constants.is_empty() {
            let consts: Vec<String> = check
                .constants
                .iter()
                .map(|(n, v)| format!("{n}={v:.6}"))
                .collect();
            let _ = write!(out, "  [{}]", consts.join(", "));
        }
        if let Some(w) = &check.worst {
            let _ = write!(out, "  worst margin {:+.3e}", w.margin());
        }
        if let Some(note) = &check.note {
            let _ = write!(out, "  ({note})");
        }
        let _ = writeln!(out);
    }
    let _ = writeln!(
        out,
        "result: {} ({:.2} s)",
        if report.all_passed() { "PASS" } else { "FAIL" },
        report.wall.as_secs_f64()
    );
    out
}
