use num_traits::{Signed, Zero};

use super::{Verdict, Witness};
use crate::model::{InequalityExpr, Rational};

/// Modular functions are positive combinations of the basic modular
/// functions `s^{{A}}`, so it suffices to evaluate on each of those:
/// `s^{{A}}` gives the sum of the coefficients of sets containing `A`.
pub fn check_modular(expr: &InequalityExpr) -> Verdict {
    let n = expr.universe().len();
    let mut sums = vec![Rational::zero(); n];
    for (set, c) in expr.terms() {
        for a in set.iter() {
            sums[a] += c;
        }
    }
    match sums.iter().position(|s| s.is_negative()) {
        Some(a) => Verdict::Invalid(Some(Witness::BasicModular(a))),
        None => Verdict::Valid(None),
    }
}
