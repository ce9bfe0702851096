use num_traits::{One, Zero};

use super::{sigma_inequality, weighted_cost, BoundResult, GuardedSigma, Query};
use crate::cone::{column, elemental_inequalities};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::lp::{solve, Constraint, LpProblem, LpResult, Relation, Sense};
use crate::model::{Rational, VarSet};
use crate::validity::{check_modular, check_polymatroid, check_step, Verdict};

fn reverify(verdict: Verdict, method: &str) -> Result<()> {
    if verdict.is_valid() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{method} bound weights failed re-verification"
        )))
    }
}

/// Cheapest fractional cover: every variable must lie in targets of total
/// weight at least 1. Equals validity over the basic modular functions.
pub fn logbound_modular(query: &Query, sigma: &GuardedSigma) -> Result<BoundResult> {
    const METHOD: &str = "modular";
    let n = query.universe().len();
    let m = sigma.len();
    let mut lp = LpProblem::with_objective(Sense::Minimize, sigma.log_degrees());
    for a in 0..n {
        let coeffs: Vec<_> = sigma
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.conditional.target.contains(a))
            .map(|(k, _)| (k, Rational::one()))
            .collect();
        if coeffs.is_empty() {
            return Ok(BoundResult::infinite(METHOD));
        }
        lp.push(Constraint::new(coeffs, Relation::Ge, Rational::one()));
    }
    debug_assert_eq!(lp.num_vars(), m);
    finish(query, sigma, solve(&lp)?, METHOD, |e| Ok(check_modular(e)))
}

/// Minimises the weighted cost subject to validity on every step function.
/// Solved through its dual (one column per step function), whose row
/// multipliers are the weights.
pub fn logbound_step(query: &Query, sigma: &GuardedSigma) -> Result<BoundResult> {
    const METHOD: &str = "step";
    let n = query.universe().len();
    let limit = Limits::current().step_bound_max_n;
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "step-function bound",
            n,
            limit,
        });
    }
    let conds = sigma.conditionals();
    let columns = (1usize << n) - 1;
    let mut lp = LpProblem::with_objective(Sense::Maximize, vec![Rational::one(); columns]);
    for (k, c) in conds.iter().enumerate() {
        let coeffs = (1..=columns as u64)
            .map(VarSet::from_bits)
            .filter(|w| c.step_value(*w))
            .map(|w| (column(w), Rational::one()))
            .collect();
        lp.push(Constraint::new(
            coeffs,
            Relation::Le,
            sigma.entries()[k].log_degree.clone(),
        ));
    }
    match solve(&lp)? {
        LpResult::Unbounded => Ok(BoundResult::infinite(METHOD)),
        LpResult::Infeasible => unreachable!("zero is feasible for the step dual"),
        LpResult::Optimal(opt) => {
            let w = opt.duals;
            debug_assert_eq!(weighted_cost(sigma, &w), opt.value);
            let e = sigma_inequality(query.universe(), &conds, &w)?;
            reverify(check_step(&e)?, METHOD)?;
            Ok(BoundResult {
                value: Some(opt.value),
                weights: Some(w),
                method: METHOD,
            })
        }
    }
}

/// Maximises `h(N)` over the Shannon cone with `h(UV) - h(U) <= b` for
/// every constraint; the multipliers of those rows are the weights.
pub fn logbound_polymatroid_dual(query: &Query, sigma: &GuardedSigma) -> Result<BoundResult> {
    const METHOD: &str = "polymatroid";
    let n = query.universe().len();
    let limit = Limits::current().polymatroid_max_n;
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "polymatroid bound",
            n,
            limit,
        });
    }
    let cols = (1usize << n) - 1;
    let full = VarSet::full(n);
    let mut objective = vec![Rational::zero(); cols];
    objective[column(full)] = Rational::one();
    let mut lp = LpProblem::with_objective(Sense::Maximize, objective);
    for e in sigma.entries() {
        let c = e.conditional;
        let mut coeffs = vec![(column(c.scope()), Rational::one())];
        if !c.given.is_empty() {
            coeffs.push((column(c.given), -Rational::one()));
        }
        lp.push(Constraint::new(coeffs, Relation::Le, e.log_degree.clone()));
    }
    for e in elemental_inequalities(n) {
        let coeffs = e
            .into_iter()
            .map(|(s, c)| (column(s), Rational::from_integer(c.into())))
            .collect();
        lp.push(Constraint::new(coeffs, Relation::Ge, Rational::zero()));
    }
    match solve(&lp)? {
        LpResult::Unbounded => Ok(BoundResult::infinite(METHOD)),
        LpResult::Infeasible => unreachable!("h = 0 is feasible"),
        LpResult::Optimal(opt) => {
            let w: Vec<Rational> = opt.duals[..sigma.len()].to_vec();
            debug_assert_eq!(weighted_cost(sigma, &w), opt.value);
            let e = sigma_inequality(query.universe(), &sigma.conditionals(), &w)?;
            reverify(check_polymatroid(&e)?, METHOD)?;
            Ok(BoundResult {
                value: Some(opt.value),
                weights: Some(w),
                method: METHOD,
            })
        }
    }
}

/// Reads weights off the first `|Σ|` coordinates of an optimum.
pub(super) fn finish(
    query: &Query,
    sigma: &GuardedSigma,
    result: LpResult,
    method: &'static str,
    verify: impl Fn(&crate::model::InequalityExpr) -> Result<Verdict>,
) -> Result<BoundResult> {
    match result {
        LpResult::Infeasible => Ok(BoundResult::infinite(method)),
        LpResult::Unbounded => unreachable!("costs are non-negative"),
        LpResult::Optimal(opt) => {
            let w = opt.point[..sigma.len()].to_vec();
            let e = sigma_inequality(query.universe(), &sigma.conditionals(), &w)?;
            reverify(verify(&e)?, method)?;
            Ok(BoundResult {
                value: Some(opt.value),
                weights: Some(w),
                method,
            })
        }
    }
}
