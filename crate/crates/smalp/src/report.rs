//! Human and JSON renderings of answers and tuning runs.

use serde::Serialize;
use smalp_core::engine::Trace;
use smalp_core::tuner::{CandidateResult, Objective, Rounded};
use smalp_core::{Answer, Substitution, SymbolId, SymbolicSubstitution, TuningReport};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonSymbol {
    pub name: String,
    pub sort: String,
}

impl From<&SymbolId> for JsonSymbol {
    fn from(s: &SymbolId) -> Self {
        JsonSymbol {
            name: s.name.clone(),
            sort: s.sort.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonCheck {
    pub rules: usize,
    pub symbols: Vec<JsonSymbol>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonBinding {
    pub var: String,
    pub term: String,
}

fn bindings(s: &Substitution) -> Vec<JsonBinding> {
    s.iter()
        .map(|(v, t)| JsonBinding {
            var: v.clone(),
            term: t.to_string(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonAnswer {
    pub classification: String,
    pub expr: String,
    /// Present for fuzzy computed answers.
    pub value: Option<f64>,
    pub substitution: Vec<JsonBinding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
}

impl JsonAnswer {
    pub fn new(answer: &Answer, trace: Option<&Trace>) -> Self {
        JsonAnswer {
            classification: answer.classification.to_string(),
            expr: format!("{:#}", answer.expr),
            value: answer.value().map(|v| v.get()),
            substitution: bindings(&answer.subst),
            trace: trace.map(|t| t.steps.iter().map(ToString::to_string).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonAssignment {
    pub symbol: String,
    pub value: String,
}

fn assignments(theta: &SymbolicSubstitution) -> Vec<JsonAssignment> {
    theta
        .iter()
        .map(|(s, a)| JsonAssignment {
            symbol: s.to_string(),
            value: a.to_string(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonCase {
    pub goal: String,
    pub expected: f64,
    /// Answer of the symbolic program, computed once per case.
    pub sfca: String,
    pub substitution: Vec<JsonBinding>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonOutcome {
    pub value: f64,
    pub deviation: f64,
    pub reported_value: f64,
    pub reported_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonCandidate {
    /// 1-based, in enumeration order.
    pub index: usize,
    pub theta: Vec<JsonAssignment>,
    pub cases: Vec<JsonOutcome>,
    pub z: f64,
    pub reported_z: f64,
}

impl JsonCandidate {
    fn new(c: &CandidateResult) -> Self {
        JsonCandidate {
            index: c.index + 1,
            theta: assignments(&c.theta),
            cases: c
                .cases
                .iter()
                .map(|o| JsonOutcome {
                    value: o.value.get(),
                    deviation: o.deviation,
                    reported_value: o.reported_value.to_f64(),
                    reported_deviation: o.reported_deviation.to_f64(),
                })
                .collect(),
            z: c.total,
            reported_z: c.reported_total.to_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonReport {
    pub symbols: Vec<JsonSymbol>,
    pub cases: Vec<JsonCase>,
    pub objective: String,
    pub decimals: u32,
    pub candidates: Vec<JsonCandidate>,
    pub best: JsonCandidate,
}

impl JsonReport {
    pub fn new(report: &TuningReport) -> Self {
        JsonReport {
            symbols: report.symbols.iter().map(JsonSymbol::from).collect(),
            cases: report
                .cases
                .iter()
                .zip(&report.sfcas)
                .map(|(c, a)| JsonCase {
                    goal: format!("{:#}", c.goal),
                    expected: c.expected.get(),
                    sfca: format!("{:#}", a.expr),
                    substitution: bindings(&a.subst),
                })
                .collect(),
            objective: match report.options.objective {
                Objective::Reported => "reported",
                Objective::Exact => "exact",
            }
            .to_string(),
            decimals: report.options.decimals,
            candidates: report.candidates.iter().map(JsonCandidate::new).collect(),
            best: JsonCandidate::new(report.best()),
        }
    }
}

/// `Θ4: s=luka, disj=prod, v=0.3 (z=0.05)`.
pub fn best_line(report: &TuningReport) -> String {
    let best = report.best();
    format!("Θ{}: {} (z={})", best.index + 1, best.theta, best.reported_total)
}

fn pad(cells: &[String], widths: &[usize]) -> String {
    let mut line = String::new();
    for (i, (c, w)) in cells.iter().zip(widths).enumerate() {
        if i > 0 {
            line.push_str("  ");
        }
        line.push_str(c);
        if i + 1 < cells.len() {
            line.extend(std::iter::repeat_n(' ', w - c.chars().count()));
        }
    }
    line
}

/// Legend of the cases, then one row per candidate: the assignment of each
/// symbol, the value and deviation for every case, and `z`, all rounded.
/// The best row is marked with `*`.
pub fn render_table(report: &TuningReport) -> String {
    let decimals = report.options.decimals;
    let mut out = String::from("cases:\n");
    for (i, c) in report.cases.iter().enumerate() {
        let expected = Rounded::half_away(c.expected.get(), decimals);
        out.push_str(&format!("  {}. {:#} -> {expected}\n", i + 1, c.goal));
    }
    out.push('\n');

    let mut header = vec!["Θ".to_string()];
    header.extend(report.symbols.iter().map(|s| s.name.clone()));
    for i in 1..=report.cases.len() {
        header.push(format!("v{i}"));
        header.push(format!("d{i}"));
    }
    header.push("z".into());
    let mut rows = vec![header];
    for c in &report.candidates {
        let mut row = vec![format!("Θ{}", c.index + 1)];
        for s in &report.symbols {
            row.push(
                c.theta
                    .get(&s.name)
                    .map_or_else(|| "-".into(), ToString::to_string),
            );
        }
        for o in &c.cases {
            row.push(o.reported_value.to_string());
            row.push(o.reported_deviation.to_string());
        }
        row.push(c.reported_total.to_string());
        if c.index == report.best().index {
            row.push("*".into());
        }
        rows.push(row);
    }
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|i| {
            rows.iter()
                .filter_map(|r| r.get(i))
                .map(|c| c.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for r in &rows {
        out.push_str(&pad(r, &widths));
        out.push('\n');
    }
    out.push('\n');
    out.push_str(&best_line(report));
    out.push('\n');
    out
}
