//! JSON and text renderings of results.

use std::fmt::Write as _;

use compactlin::cover::{CoverSolution, MultiplierAssignment};
use compactlin::linearize::{ConditionReport, InducedProducts, LinearizedModel, RowTag};
use compactlin::model::ProductPair;
use compactlin::verify::{ConsistencyReport, DominanceReport, StrictOutcome, XCheck, XStatus};
use compactlin::{Instance, Rational};
use serde_json::{json, Value};

pub fn pair(p: &ProductPair) -> Value {
    json!([p.i.0, p.j.0])
}

fn num(v: &Rational) -> Value {
    json!(v.to_string())
}

pub fn row_counts(model: &LinearizedModel<Rational>) -> Value {
    let count = |f: fn(&RowTag) -> bool| model.count_rows(f);
    json!({
        "original": count(|t| matches!(t, RowTag::Original { .. })),
        "compact_equation": count(|t| matches!(t, RowTag::CompactE { .. })),
        "compact_plus": count(|t| matches!(t, RowTag::CompactPlus { .. })),
        "compact_minus": count(|t| matches!(t, RowTag::CompactMinus { .. })),
        "gw": model.gw_row_count(),
        "passthrough": count(|t| matches!(t, RowTag::Passthrough { .. })),
        "total": model.rows.len(),
    })
}

pub fn model_summary(model: &LinearizedModel<Rational>) -> Value {
    json!({
        "columns": { "x": model.n, "y": model.y_columns.len() },
        "rows": row_counts(model),
    })
}

pub fn conditions(report: &ConditionReport) -> Value {
    let violations: Vec<Value> =
        report.violations().iter().map(|(p, c)| json!({ "pair": pair(p), "condition": c.to_string() })).collect();
    json!({ "passes": report.passes(), "violations": violations })
}

pub fn induced(q: &InducedProducts, inst: &Instance) -> Value {
    let demanded = inst.products.iter().filter(|p| !p.is_square()).count();
    json!({
        "demanded_off_diagonal": demanded,
        "induced_off_diagonal": q.off_diagonal().count(),
        "induced_squares": q.squares().count(),
    })
}

pub fn cover(mode: &str, solution: Option<&CoverSolution<Rational>>, design: &MultiplierAssignment) -> Value {
    let mut v = json!({ "mode": mode, "multipliers": design.len() });
    if let Some(sol) = solution {
        v["objective"] = num(&sol.objective);
        v["nodes"] = json!(sol.stats.nodes);
        v["branches"] = json!(sol.stats.branches);
    }
    v
}

fn point(x: &[bool]) -> String {
    x.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

fn check_value(c: &XCheck<Rational>) -> Value {
    let status = match &c.status {
        XStatus::UniqueAndCorrect => json!({ "kind": "unique" }),
        XStatus::Ambiguous { pair: p, lo, hi } => {
            json!({ "kind": "ambiguous", "pair": pair(p), "lo": num(lo), "hi": num(hi) })
        }
        XStatus::Wrong { pair: p, value } => json!({ "kind": "wrong", "pair": pair(p), "value": num(value) }),
        XStatus::Infeasible => json!({ "kind": "infeasible" }),
    };
    let witness = c
        .witness
        .as_ref()
        .map(|w| Value::Array(w.iter().map(|(p, v)| json!({ "pair": pair(p), "y": num(v) })).collect()));
    json!({ "x": point(&c.x), "status": status, "witness": witness })
}

pub fn consistency(report: &ConsistencyReport<Rational>) -> Value {
    let failures: Vec<Value> = report.failures().map(check_value).collect();
    json!({ "passes": report.passes(), "points": report.entries.len(), "failures": failures })
}

pub fn consistency_text(out: &mut String, report: &ConsistencyReport<Rational>) {
    let failed = report.failures().count();
    let _ = writeln!(
        out,
        "consistency: {} ({} feasible points, {failed} failing)",
        verdict(report.passes()),
        report.entries.len()
    );
    if let Some(c) = report.first_failure() {
        let detail = match &c.status {
            XStatus::Ambiguous { pair, lo, hi } => format!("y{}_{} ranges over [{lo}, {hi}]", pair.i, pair.j),
            XStatus::Wrong { pair, value } => format!("y{}_{} is forced to {value}", pair.i, pair.j),
            XStatus::Infeasible => "the linearization rows exclude this point".to_string(),
            XStatus::UniqueAndCorrect => unreachable!(),
        };
        let _ = writeln!(out, "  first failure at x = {}: {detail}", point(&c.x));
        if let Some(w) = &c.witness {
            let ys: Vec<String> = w.iter().map(|(p, v)| format!("y{}_{}={v}", p.i, p.j)).collect();
            let _ = writeln!(out, "  witness y: {}", ys.join(" "));
        }
    }
}

pub fn dominance(report: &DominanceReport<Rational>) -> Value {
    let violations: Vec<Value> = report
        .checks
        .iter()
        .filter(|c| !c.holds())
        .map(|c| {
            json!({
                "inequality": c.inequality.describe(c.pair),
                "violation": c.result.value().map(num),
            })
        })
        .collect();
    json!({
        "case": report.case.map(|c| c.to_string()),
        "passes": report.passes(),
        "maximizations": report.checks.len(),
        "violations": violations,
    })
}

/// `names` are the model columns in order.
pub fn dominance_text(out: &mut String, report: &DominanceReport<Rational>, names: &[String]) {
    let case = report.case.map_or("no known case".to_string(), |c| format!("{c} case"));
    let _ = writeln!(out, "dominance: {} ({case}, {} maximizations)", verdict(report.passes()), report.checks.len());
    if let Some(c) = report.first_violation() {
        let value = c.result.value().map_or("-".to_string(), |v| v.to_string());
        let _ = writeln!(out, "  {} violated by {value}", c.inequality.describe(c.pair));
        if let compactlin::lp::Violation::Max { point, .. } = &c.result {
            let _ = writeln!(out, "  at {}", render_point(names, point));
        }
    }
}

pub fn render_point(names: &[String], point: &[Rational]) -> String {
    names.iter().zip(point).map(|(c, v)| format!("{c}={v}")).collect::<Vec<_>>().join(" ")
}

pub fn strict(outcome: &StrictOutcome<Rational>) -> Value {
    match outcome {
        StrictOutcome::NotApplicable(why) => json!({ "outcome": "not-applicable", "reason": why }),
        StrictOutcome::NoWitness => json!({ "outcome": "no-witness" }),
        StrictOutcome::Witness(w) => json!({
            "outcome": "witness",
            "row": w.row,
            "violation": num(&w.violation),
            "x": w.x.iter().map(num).collect::<Vec<_>>(),
            "y": w.y.iter().map(|(p, v)| json!({ "pair": pair(p), "y": num(v) })).collect::<Vec<_>>(),
        }),
    }
}

pub fn strict_text(out: &mut String, outcome: &StrictOutcome<Rational>) {
    match outcome {
        StrictOutcome::NotApplicable(why) => {
            let _ = writeln!(out, "strict: not applicable ({why})");
        }
        StrictOutcome::NoWitness => {
            let _ = writeln!(out, "strict: no Glover-Woolsey point violates a compact row");
        }
        StrictOutcome::Witness(w) => {
            let _ = writeln!(out, "strict: row {} violated by {} at a Glover-Woolsey point", w.row, w.violation);
            let xs: Vec<String> = w.x.iter().enumerate().map(|(i, v)| format!("x{}={v}", i + 1)).collect();
            let ys: Vec<String> = w.y.iter().map(|(p, v)| format!("y{}_{}={v}", p.i, p.j)).collect();
            let _ = writeln!(out, "  {}", xs.join(" "));
            let _ = writeln!(out, "  {}", ys.join(" "));
        }
    }
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
