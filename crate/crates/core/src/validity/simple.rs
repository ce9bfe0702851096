use num_traits::Zero;

use super::monotone::check_monotone_lp;
use super::step::first_failing_step;
use super::{Verdict, Witness};
use crate::error::{Error, Result};
use crate::model::{lift_set, InequalityExpr, Rational, VarSet};

/// Result of eliminating one variable `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AReduction {
    /// Total left-hand weight on sets containing `A`.
    pub c_a: Rational,
    /// Total right-hand weight on sets containing `A`.
    pub d_a: Rational,
    /// `(c_A - d_A) h(N - A) + sum_{A ∉ X_i} c_i h(X_i) - sum_{A ∉ Y_i} d_i h(Y_i)`
    /// over the universe without `A`.
    pub reduced: InequalityExpr,
}

/// Every right-hand set is a singleton or the whole universe.
pub fn is_simple_form(expr: &InequalityExpr) -> bool {
    offending_rhs(expr).is_none()
}

fn offending_rhs(expr: &InequalityExpr) -> Option<VarSet> {
    let full = expr.universe().full();
    expr.two_sided()
        .rhs
        .into_iter()
        .map(|(s, _)| s)
        .find(|s| s.len() != 1 && *s != full)
}

pub fn a_reduction(expr: &InequalityExpr, a: usize) -> Result<AReduction> {
    let universe = expr.universe();
    if a >= universe.len() {
        return Err(Error::domain(format!(
            "variable index {a} is outside a universe of {} variables",
            universe.len()
        )));
    }
    let (reduced_universe, project) = universe.without(a);
    let two = expr.two_sided();
    let mut c_a = Rational::zero();
    let mut d_a = Rational::zero();
    let mut reduced = InequalityExpr::zero(&reduced_universe);
    for (x, c) in &two.lhs {
        if x.contains(a) {
            c_a += c;
        } else {
            reduced.add_term(project(*x), c.clone())?;
        }
    }
    for (y, d) in &two.rhs {
        if y.contains(a) {
            d_a += d;
        } else {
            reduced.add_term(project(*y), -d.clone())?;
        }
    }
    let rest = reduced_universe.full();
    if !rest.is_empty() {
        reduced.add_term(rest, &c_a - &d_a)?;
    }
    Ok(AReduction { c_a, d_a, reduced })
}

/// Decides inequalities whose right-hand sets are singletons or the full
/// set. The verdict is the same over step, normal, entropic and polymatroid
/// functions: valid iff for every variable `A`, `c_A >= d_A` and the
/// A-reduction is valid over monotone functions.
///
/// Witnesses are step functions: `s^{{A}}` when `c_A < d_A`, otherwise
/// `s^{U ∪ {A}}` where `U` collects the singletons on which the monotone
/// witness of the reduction equals 1.
pub fn check_simple_sigma(expr: &InequalityExpr) -> Result<Verdict> {
    if let Some(s) = offending_rhs(expr) {
        return Err(Error::Form(format!(
            "right-hand set {} is neither a singleton nor the full variable set",
            expr.universe().format_set(s)
        )));
    }
    for a in 0..expr.universe().len() {
        let red = a_reduction(expr, a)?;
        if red.c_a < red.d_a {
            return Ok(Verdict::Invalid(Some(Witness::StepFn(VarSet::singleton(
                a,
            )))));
        }
        let verdict = check_monotone_lp(&red.reduced)?;
        if verdict.is_valid() {
            continue;
        }
        let u = match verdict.witness() {
            Some(w) => {
                let n = red.reduced.universe().len();
                let singles = (0..n).map(VarSet::singleton);
                VarSet::from_indices(
                    singles
                        .filter(|s| w.value(*s) == Rational::from_integer(1.into()))
                        .map(|s| s.bits().trailing_zeros() as usize),
                )
            }
            None => first_failing_step(&red.reduced)?
                .expect("monotone-invalid reduction with singleton right side fails on a step"),
        };
        let lifted = lift_set(u, a).with(a);
        let witness = Witness::StepFn(lifted);
        debug_assert!(witness.evaluate(expr) < Rational::zero());
        return Ok(Verdict::Invalid(Some(witness)));
    }
    Ok(Verdict::Valid(None))
}
