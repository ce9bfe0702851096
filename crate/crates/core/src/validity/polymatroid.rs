use num_traits::{One, Signed, Zero};

use super::{Verdict, Witness};
use crate::cone::{column, elemental_inequalities};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::function::SetFunction;
use crate::lp::{solve_with_stats, Constraint, LpProblem, LpResult, LpStats, Relation, Sense};
use crate::model::{InequalityExpr, Rational, VarSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolymatroidRun {
    pub verdict: Verdict,
    pub stats: LpStats,
    /// Optimal value of the normalised program (zero iff valid).
    pub minimum: Rational,
}

pub fn check_polymatroid(expr: &InequalityExpr) -> Result<Verdict> {
    polymatroid_run(expr).map(|r| r.verdict)
}

/// Minimises the expression over the Shannon cone cut by `h(N) <= 1`.
/// A negative minimum comes with a polymatroid witness.
pub fn polymatroid_run(expr: &InequalityExpr) -> Result<PolymatroidRun> {
    let n = expr.universe().len();
    let limit = Limits::current().polymatroid_max_n;
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "polymatroid check",
            n,
            limit,
        });
    }
    if n == 0 {
        return Ok(PolymatroidRun {
            verdict: Verdict::Valid(None),
            stats: LpStats::default(),
            minimum: Rational::zero(),
        });
    }
    let cols = (1usize << n) - 1;
    let mut objective = vec![Rational::zero(); cols];
    for (s, c) in expr.terms() {
        objective[column(s)] = c.clone();
    }
    let mut lp = LpProblem::with_objective(Sense::Minimize, objective);
    for e in elemental_inequalities(n) {
        let coeffs = e
            .into_iter()
            .map(|(s, c)| (column(s), Rational::from_integer(c.into())))
            .collect();
        lp.push(Constraint::new(coeffs, Relation::Ge, Rational::zero()));
    }
    let full = VarSet::full(n);
    lp.push(Constraint::new(
        vec![(column(full), Rational::one())],
        Relation::Le,
        Rational::one(),
    ));
    let (result, stats) = solve_with_stats(&lp)?;
    let opt = match result {
        LpResult::Optimal(opt) => opt,
        other => unreachable!("normalised Shannon cone is bounded and non-empty: {other:?}"),
    };
    let verdict = if opt.value.is_negative() {
        let point = opt.point;
        let h = SetFunction::from_fn(expr.universe(), |s| {
            if s.is_empty() {
                Rational::zero()
            } else {
                point[column(s)].clone()
            }
        })?;
        Verdict::Invalid(Some(Witness::Polymatroid(h)))
    } else {
        Verdict::Valid(None)
    };
    Ok(PolymatroidRun {
        verdict,
        stats,
        minimum: opt.value,
    })
}
