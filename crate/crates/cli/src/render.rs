//! Text and JSON output.

use std::path::Path;

use entroplex::bounds::{BoundResult, GuardedSigma, Query};
use entroplex::validity::Axiom;
use entroplex::{
    format_rational, CheckReport, Decomposition, InequalityExpr, Semantics, VarSet,
    VariableUniverse, Witness,
};
use serde_json::{json, Value};

/// Version of the JSON output schema.
pub const SCHEMA_VERSION: u32 = 1;

fn set_name(u: &VariableUniverse, s: VarSet) -> String {
    if s.is_empty() {
        "∅".into()
    } else {
        u.format_set(s)
    }
}

fn axiom_text(u: &VariableUniverse, a: &Axiom) -> String {
    match *a {
        Axiom::NonNeg(s) => format!("h({}) >= 0", u.format_set(s)),
        Axiom::Mono { superset, subset } => format!(
            "h({}) >= h({})",
            u.format_set(superset),
            u.format_set(subset)
        ),
    }
}

/// Value table of `w` over every subset, smallest first.
fn witness_rows(u: &VariableUniverse, w: &Witness) -> Vec<(String, String)> {
    let mut sets: Vec<VarSet> = u.full().subsets().collect();
    sets.sort_by_key(|s| (s.len(), s.bits()));
    sets.into_iter()
        .map(|s| (set_name(u, s), format_rational(&w.value(s))))
        .collect()
}

fn classes(report: &CheckReport) -> Vec<&'static str> {
    report.classes.iter().map(|c| c.name()).collect()
}

pub fn check_text(
    expr: &InequalityExpr,
    report: &CheckReport,
    certificate: bool,
    witness: bool,
) -> String {
    let u = expr.universe();
    let mut out = format!(
        "{} over {} ({})\n",
        if report.verdict.is_valid() {
            "valid"
        } else {
            "invalid"
        },
        classes(report).join(", "),
        report.method
    );
    if certificate {
        match report.verdict.certificate() {
            Some(d) => {
                out.push_str("certificate:\n");
                for (w, a) in &d.axioms {
                    out.push_str(&format!(
                        "  {} * [{}]\n",
                        format_rational(w),
                        axiom_text(u, a)
                    ));
                }
            }
            None if report.verdict.is_valid() => {
                out.push_str("certificate: not produced by this checker\n")
            }
            None => {}
        }
    }
    if witness {
        match report.verdict.witness() {
            Some(w) => {
                out.push_str(&format!("witness ({}):\n", w.kind()));
                for (s, v) in witness_rows(u, w) {
                    out.push_str(&format!("  {s}: {v}\n"));
                }
                out.push_str(&format!(
                    "  value of inequality: {}\n",
                    format_rational(&w.evaluate(expr))
                ));
            }
            None if !report.verdict.is_valid() => out.push_str("witness: not available\n"),
            None => {}
        }
    }
    out
}

fn certificate_json(u: &VariableUniverse, d: &Decomposition) -> Value {
    d.axioms
        .iter()
        .map(|(w, a)| match *a {
            Axiom::NonNeg(s) => json!({
                "weight": format_rational(w),
                "axiom": "nonneg",
                "set": u.format_set(s),
            }),
            Axiom::Mono { superset, subset } => json!({
                "weight": format_rational(w),
                "axiom": "monotone",
                "superset": u.format_set(superset),
                "subset": u.format_set(subset),
            }),
        })
        .collect()
}

pub fn check_json(
    file: &Path,
    requested: Semantics,
    expr: &InequalityExpr,
    report: &CheckReport,
) -> Value {
    let u = expr.universe();
    let witness = report.verdict.witness().map(|w| {
        let values: serde_json::Map<String, Value> = witness_rows(u, w)
            .into_iter()
            .map(|(s, v)| (s, Value::String(v)))
            .collect();
        json!({ "kind": w.kind(), "values": values, "evaluation": format_rational(&w.evaluate(expr)) })
    });
    json!({
        "version": SCHEMA_VERSION,
        "command": "check",
        "file": file.display().to_string(),
        "class": requested,
        "variables": u.names(),
        "verdict": if report.verdict.is_valid() { "valid" } else { "invalid" },
        "classes": classes(report),
        "certificate": report.verdict.certificate().map(|d| certificate_json(u, d)),
        "witness": witness,
        "provenance": {
            "method": report.method,
            "iterations": report.iterations,
            "lp": report.lp.map(|s| json!({
                "rows": s.rows,
                "columns": s.columns,
                "pivots": s.pivots,
            })),
        },
    })
}

fn constraint_names(query: &Query, sigma: &GuardedSigma) -> Vec<String> {
    let u = query.universe();
    sigma
        .entries()
        .iter()
        .map(|e| {
            let c = &e.conditional;
            let rel = &query.atoms()[e.guard].relation;
            if c.given.is_empty() {
                format!("{rel}({})", u.format_set(c.target))
            } else {
                format!(
                    "{rel}({} | {})",
                    u.format_set(c.target),
                    u.format_set(c.given)
                )
            }
        })
        .collect()
}

pub fn bound_text(query: &Query, sigma: &GuardedSigma, r: &BoundResult) -> String {
    let Some(v) = &r.value else {
        return format!("inf ({})\n", r.method);
    };
    let mut out = format!("{} ({})\n", format_rational(v), r.method);
    if let Some(w) = &r.weights {
        out.push_str("weights:\n");
        for (name, w) in constraint_names(query, sigma).iter().zip(w) {
            out.push_str(&format!("  {name}: {}\n", format_rational(w)));
        }
    }
    out.push_str(&format!(
        "size bound 2^({}) = {}\n",
        format_rational(v),
        r.linear_estimate()
    ));
    out
}

pub fn bound_json(
    file: &Path,
    query: &Query,
    sigma: &GuardedSigma,
    r: &BoundResult,
    warning: Option<&str>,
) -> Value {
    let constraints: Vec<Value> = constraint_names(query, sigma)
        .into_iter()
        .zip(sigma.entries())
        .map(
            |(name, e)| json!({ "constraint": name, "log_degree": format_rational(&e.log_degree) }),
        )
        .collect();
    json!({
        "version": SCHEMA_VERSION,
        "command": "bound",
        "file": file.display().to_string(),
        "query": query.name(),
        "variables": query.universe().names(),
        "constraints": constraints,
        "value": r.value.as_ref().map_or("inf".to_string(), format_rational),
        "weights": r.weights.as_ref().map(|w| w.iter().map(format_rational).collect::<Vec<_>>()),
        "size_bound": r.value.as_ref().map(|_| r.linear_estimate()),
        "warning": warning,
        "provenance": { "method": r.method },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_table_lists_every_subset_smallest_first() {
        let u = VariableUniverse::new(["X", "Y"]).unwrap();
        let rows = witness_rows(&u, &Witness::StepFn(u.set(&["Y"]).unwrap()));
        let names: Vec<&str> = rows.iter().map(|(s, _)| s.as_str()).collect();
        assert_eq!(names, ["∅", "X", "Y", "X,Y"]);
        let values: Vec<&str> = rows.iter().map(|(_, v)| v.as_str()).collect();
        assert_eq!(values, ["0", "0", "1", "1"]);
    }
}
