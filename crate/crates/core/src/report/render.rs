use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Fraction, Satisfaction, SatisfactionReport};
use crate::engine::{Conflict, ConflictKind, IterationTrace, ManagerStep, ResolutionOutcome};
use crate::stakeholder::Literal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("unknown output format `{0}` (expected json or table)")]
    UnknownFormat(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Table,
}

impl FromStr for Format {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => Err(RenderError::UnknownFormat(other.to_string())),
        }
    }
}

/// The JSON document written for a resolved session.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionDocument {
    #[serde(rename = "final")]
    pub final_config: Vec<Literal>,
    pub valid: bool,
    pub iterations: Vec<IterationTrace>,
    pub remained_conflicts: Vec<Conflict>,
    pub manager: Option<ManagerStep>,
    pub satisfaction: SatisfactionReport,
}

impl ResolutionDocument {
    pub fn new(report: &SatisfactionReport, outcome: &ResolutionOutcome) -> Self {
        ResolutionDocument {
            final_config: outcome.final_config.clone(),
            valid: outcome.valid,
            iterations: outcome.trace.clone(),
            remained_conflicts: outcome.remained.clone(),
            manager: outcome.manager.clone(),
            satisfaction: report.clone(),
        }
    }
}

pub fn render(report: &SatisfactionReport, outcome: &ResolutionOutcome, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&ResolutionDocument::new(report, outcome)).expect("document serializes");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut out = String::new();
            let finals: Vec<String> = outcome.final_config.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "final: {}", finals.join(", "));
            let _ = writeln!(out, "valid: {}", outcome.valid);
            out.push('\n');
            out.push_str(&render_trace(outcome));
            out.push('\n');
            out.push_str(&satisfaction_table(report));
            out
        }
    }
}

/// The satisfaction statistics alone, as rendered inside a full report.
pub fn render_satisfaction(report: &SatisfactionReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Table => satisfaction_table(report),
    }
}

/// One JSON object per iteration, newline-terminated.
pub fn render_trace_lines(outcome: &ResolutionOutcome) -> String {
    let mut out = String::new();
    for it in &outcome.trace {
        out.push_str(&serde_json::to_string(it).expect("trace serializes"));
        out.push('\n');
    }
    out
}

fn conflict_line(c: &Conflict) -> String {
    let kind = match c.kind {
        ConflictKind::Explicit => "explicit",
        ConflictKind::Xor => "xor",
    };
    let pair = format!("({}, {})", c.literals.0, c.literals.1);
    match &c.loser {
        Some(loser) => {
            let winner = if loser == &c.literals.0 {
                &c.literals.1
            } else {
                &c.literals.0
            };
            format!("  {kind:<9}{pair}: keep {winner}, remove {loser}")
        }
        None => format!("  {kind:<9}{pair}: tie"),
    }
}

fn render_trace(outcome: &ResolutionOutcome) -> String {
    let mut out = String::new();
    for it in &outcome.trace {
        let _ = writeln!(out, "iteration {}", it.index);
        for c in it.explicit_conflicts.iter().chain(&it.xor_conflicts) {
            let _ = writeln!(out, "{}", conflict_line(c));
        }
        for r in &it.propagation {
            let _ = writeln!(
                out,
                "  propagate #{} {} => {} ({})",
                r.constraint_id, r.trigger, r.added, r.degree
            );
        }
    }
    if let Some(m) = &outcome.manager {
        let _ = writeln!(out, "manager rule {}", m.rule);
        for c in &outcome.remained {
            let _ = writeln!(out, "{}", conflict_line(c));
        }
        for r in &m.propagation {
            let _ = writeln!(
                out,
                "  propagate #{} {} => {} ({})",
                r.constraint_id, r.trigger, r.added, r.degree
            );
        }
    }
    out
}

fn rate(f: Option<Fraction>) -> String {
    f.map_or_else(|| "-".to_string(), |f| format!("{:.2}", f.value()))
}

/// Rows per degree (5 to 1), a `d r s` column group per stakeholder and a
/// final column group for all stakeholders together. Undefined rates
/// print as `-`.
fn satisfaction_table(report: &SatisfactionReport) -> String {
    let mut columns: Vec<(&str, &Satisfaction)> = report
        .per_stakeholder
        .iter()
        .map(|s| (s.stakeholder.as_str(), &s.satisfaction))
        .collect();
    columns.push(("Final", &report.global));
    let width = columns.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max(12);

    let mut out = String::new();
    let _ = write!(out, "{:<8}", "degree");
    for (name, _) in &columns {
        let _ = write!(out, " | {name:^width$}");
    }
    out.push('\n');
    let _ = write!(out, "{:<8}", "");
    for _ in &columns {
        let _ = write!(out, " | {:^width$}", format!("{:>3} {:>3} {:>4}", "d", "r", "s"));
    }
    out.push('\n');
    for degree in (1..=5).rev() {
        let _ = write!(out, "{degree:<8}");
        for (_, s) in &columns {
            let cell = s.cell(degree).copied().unwrap_or_default();
            let text = format!("{:>3} {:>3} {:>4}", cell.chosen, cell.retained, rate(cell.rate()));
            let _ = write!(out, " | {text:^width$}");
        }
        out.push('\n');
    }
    for (label, pick) in [
        (
            "overall",
            (|s: &Satisfaction| s.overall) as fn(&Satisfaction) -> Option<Fraction>,
        ),
        ("weighted", |s: &Satisfaction| s.weighted),
    ] {
        let _ = write!(out, "{label:<8}");
        for (_, s) in &columns {
            let f = pick(s);
            let text = match f {
                Some(f) => format!("{f} = {}", rate(Some(f))),
                None => "-".to_string(),
            };
            let _ = write!(out, " | {text:^width$}");
        }
        out.push('\n');
    }
    out
}
