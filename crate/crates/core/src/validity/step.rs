use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Verdict, Witness};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::model::{InequalityExpr, Rational, VarSet};

/// Evaluates `expr` on every step function `s^V`, `V ≠ ∅`, in ascending bit
/// mask order. Valid over step functions iff valid over normal polymatroids.
pub fn check_step(expr: &InequalityExpr) -> Result<Verdict> {
    Ok(match first_failing_step(expr)? {
        Some(v) => Verdict::Invalid(Some(Witness::StepFn(v))),
        None => Verdict::Valid(None),
    })
}

/// The first `V` (by bit mask) with `expr(s^V) < 0`.
pub fn first_failing_step(expr: &InequalityExpr) -> Result<Option<VarSet>> {
    let n = expr.universe().len();
    let limit = Limits::current().max_universe;
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "step-function enumeration",
            n,
            limit,
        });
    }
    if expr.is_zero() {
        return Ok(None);
    }
    // s^V(S) = 1 iff S meets V; scale to integers so the inner loop is cheap.
    let scale = Rational::from_integer(expr.denominator_lcm());
    let scaled: Vec<(u64, BigInt)> = expr
        .terms()
        .map(|(s, c)| (s.bits(), (c * &scale).to_integer()))
        .collect();
    let small: Option<Vec<(u64, i64)>> = scaled
        .iter()
        .map(|(s, c)| c.to_i64().map(|c| (*s, c)))
        .collect();
    let subsets = 1u64 << n;
    match small {
        Some(terms) => {
            for v in 1..subsets {
                let total: i128 = terms
                    .iter()
                    .filter(|(s, _)| s & v != 0)
                    .map(|(_, c)| *c as i128)
                    .sum();
                if total < 0 {
                    return Ok(Some(VarSet::from_bits(v)));
                }
            }
        }
        None => {
            for v in 1..subsets {
                let total = scaled
                    .iter()
                    .filter(|(s, _)| s & v != 0)
                    .fold(BigInt::zero(), |acc, (_, c)| acc + c);
                if total.is_negative() {
                    return Ok(Some(VarSet::from_bits(v)));
                }
            }
        }
    }
    Ok(None)
}
