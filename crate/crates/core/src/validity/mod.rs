//! Validity of information inequalities over the function classes
//! modular ⊆ normal = step ⊆ entropic ⊆ polymatroid ⊆ monotone.
//!
//! Every checker returns a [`Verdict`]. Invalid verdicts carry a witness
//! function on which the inequality is strictly negative; valid verdicts
//! from the monotone checkers carry a [`Decomposition`] into monotonicity
//! and non-negativity axioms.

mod modular;
mod monotone;
mod polymatroid;
mod simple;
mod step;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::SetFunction;
use crate::lp::LpStats;
use crate::model::{InequalityExpr, Rational, VarSet, VariableUniverse};

pub use modular::check_modular;
pub use monotone::{
    brute_force_monotone, check_monotone_fixpoint, check_monotone_lp, fixpoint_run,
    fixpoint_run_with_cap, monotone_lp_run, FixpointRun, MonotoneLpRun,
};
pub use polymatroid::{check_polymatroid, polymatroid_run, PolymatroidRun};
pub use simple::{a_reduction, check_simple_sigma, is_simple_form, AReduction};
pub use step::{check_step, first_failing_step};

/// Function class an inequality is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Modular,
    /// Positive combinations of step functions; same verdicts as `Step`.
    Normal,
    Step,
    /// Only decided on the simple fragment.
    Entropic,
    Polymatroid,
    Monotone,
    Auto,
}

impl Semantics {
    pub fn name(self) -> &'static str {
        match self {
            Semantics::Modular => "modular",
            Semantics::Normal => "normal",
            Semantics::Step => "step",
            Semantics::Entropic => "entropic",
            Semantics::Polymatroid => "polymatroid",
            Semantics::Monotone => "monotone",
            Semantics::Auto => "auto",
        }
    }
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "modular" => Semantics::Modular,
            "normal" => Semantics::Normal,
            "step" => Semantics::Step,
            "entropic" => Semantics::Entropic,
            "polymatroid" => Semantics::Polymatroid,
            "monotone" => Semantics::Monotone,
            "auto" => Semantics::Auto,
            other => return Err(Error::domain(format!("unknown class `{other}`"))),
        })
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid(Option<Decomposition>),
    /// `None` only when witness recovery was impossible within the caps.
    Invalid(Option<Witness>),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Invalid(w) => w.as_ref(),
            Verdict::Valid(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Decomposition> {
        match self {
            Verdict::Valid(d) => d.as_ref(),
            Verdict::Invalid(_) => None,
        }
    }
}

/// A function on which an inequality fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The step function `s^V`.
    StepFn(VarSet),
    /// Indicator of the upward closure of `generators` (an antichain).
    BooleanMonotone {
        generators: Vec<VarSet>,
    },
    Polymatroid(SetFunction),
    /// `s^{{A}}` for the variable with this index.
    BasicModular(usize),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::StepFn(_) => "step",
            Witness::BooleanMonotone { .. } => "boolean-monotone",
            Witness::Polymatroid(_) => "polymatroid",
            Witness::BasicModular(_) => "basic-modular",
        }
    }

    pub fn value(&self, set: VarSet) -> Rational {
        let indicator = |b: bool| if b { Rational::one() } else { Rational::zero() };
        match self {
            Witness::StepFn(v) => indicator(v.intersects(set)),
            Witness::BooleanMonotone { generators } => {
                indicator(generators.iter().any(|g| g.is_subset(set)))
            }
            Witness::Polymatroid(h) => h.value(set).clone(),
            Witness::BasicModular(a) => indicator(set.contains(*a)),
        }
    }

    /// Value of `expr` on the witness.
    pub fn evaluate(&self, expr: &InequalityExpr) -> Rational {
        expr.evaluate_with(|s| self.value(s))
    }

    pub fn to_set_function(&self, universe: &VariableUniverse) -> Result<SetFunction> {
        match self {
            Witness::Polymatroid(h) => Ok(h.clone()),
            _ => SetFunction::from_fn(universe, |s| self.value(s)),
        }
    }

    /// Whether the witness belongs to the class it claims.
    pub fn is_well_formed(&self, universe: &VariableUniverse) -> bool {
        match self {
            Witness::StepFn(v) => !v.is_empty() && universe.contains(*v),
            Witness::BasicModular(a) => *a < universe.len(),
            Witness::BooleanMonotone { generators } => generators
                .iter()
                .all(|g| !g.is_empty() && universe.contains(*g)),
            Witness::Polymatroid(h) => h.universe() == universe && h.is_polymatroid(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// `h(S) >= 0`
    NonNeg(VarSet),
    /// `h(superset) - h(subset) >= 0`
    Mono { superset: VarSet, subset: VarSet },
}

/// Positive combination of axioms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    pub axioms: Vec<(Rational, Axiom)>,
}

impl Decomposition {
    /// Sum of the weighted axioms as an inequality.
    pub fn recombine(&self, universe: &VariableUniverse) -> Result<InequalityExpr> {
        let mut e = InequalityExpr::zero(universe);
        for (w, ax) in &self.axioms {
            match *ax {
                Axiom::NonNeg(s) => e.add_term(s, w.clone())?,
                Axiom::Mono { superset, subset } => {
                    e.add_term(superset, w.clone())?;
                    e.add_term(subset, -w.clone())?;
                }
            }
        }
        Ok(e)
    }

    /// Non-negative weights, and no set receives contributions of both signs.
    pub fn is_separable(&self) -> bool {
        use std::collections::HashMap;
        let mut sign: HashMap<VarSet, bool> = HashMap::new();
        let mut ok = true;
        let mut note = |s: VarSet, positive: bool| {
            if let Some(prev) = sign.insert(s, positive) {
                if prev != positive {
                    ok = false;
                }
            }
        };
        for (w, ax) in &self.axioms {
            if w.is_negative() {
                return false;
            }
            if w.is_zero() {
                continue;
            }
            match *ax {
                Axiom::NonNeg(s) => note(s, true),
                Axiom::Mono { superset, subset } => {
                    if !subset.is_subset(superset) {
                        return false;
                    }
                    note(superset, true);
                    note(subset, false);
                }
            }
        }
        ok
    }
}

/// Verdict plus provenance of a dispatched check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: Verdict,
    /// Classes the verdict holds for.
    pub classes: Vec<Semantics>,
    pub method: &'static str,
    pub iterations: Option<usize>,
    pub lp: Option<LpStats>,
}

/// Dispatches to the checker for `semantics`.
///
/// `Auto` uses the simple-form reduction when the expression qualifies
/// (the verdict then holds for step, normal, entropic and polymatroid
/// functions alike) and the Shannon-cone program otherwise.
pub fn check(expr: &InequalityExpr, semantics: Semantics) -> Result<CheckReport> {
    let report = |verdict, classes: &[Semantics], method| CheckReport {
        verdict,
        classes: classes.to_vec(),
        method,
        iterations: None,
        lp: None,
    };
    let coincident = [
        Semantics::Step,
        Semantics::Normal,
        Semantics::Entropic,
        Semantics::Polymatroid,
    ];
    Ok(match semantics {
        Semantics::Modular => report(check_modular(expr), &[Semantics::Modular], "basic-modular"),
        Semantics::Step | Semantics::Normal => report(
            check_step(expr)?,
            &[Semantics::Step, Semantics::Normal],
            "step-enumeration",
        ),
        Semantics::Polymatroid => {
            let run = polymatroid_run(expr)?;
            CheckReport {
                lp: Some(run.stats),
                ..report(run.verdict, &[Semantics::Polymatroid], "elemental-lp")
            }
        }
        Semantics::Monotone => {
            let run = monotone_lp_run(expr)?;
            CheckReport {
                lp: Some(run.stats),
                ..report(run.verdict, &[Semantics::Monotone], "monotone-lp")
            }
        }
        Semantics::Entropic => {
            if !is_simple_form(expr) {
                return Err(Error::Unsupported(
                    "entropic validity is only decided for inequalities whose right-hand \
                     sets are singletons or the full variable set"
                        .into(),
                ));
            }
            report(check_simple_sigma(expr)?, &coincident, "a-reduction")
        }
        Semantics::Auto => {
            if is_simple_form(expr) {
                report(check_simple_sigma(expr)?, &coincident, "a-reduction")
            } else {
                let run = polymatroid_run(expr)?;
                CheckReport {
                    lp: Some(run.stats),
                    ..report(run.verdict, &[Semantics::Polymatroid], "elemental-lp")
                }
            }
        }
    })
}

/// Fixed-point variant of the monotone check with its iteration count.
pub fn check_monotone_fixpoint_report(expr: &InequalityExpr) -> Result<CheckReport> {
    let run = fixpoint_run(expr)?;
    Ok(CheckReport {
        verdict: run.verdict,
        classes: vec![Semantics::Monotone],
        method: "fixpoint",
        iterations: Some(run.iterations),
        lp: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rat;

    #[test]
    fn separability() {
        let u = VariableUniverse::new(["A", "B"]).unwrap();
        let a = u.set(&["A"]).unwrap();
        let b = u.set(&["B"]).unwrap();
        let ab = u.full();
        let ok = Decomposition {
            axioms: vec![
                (rat(1), Axiom::NonNeg(a)),
                (
                    rat(1),
                    Axiom::Mono {
                        superset: ab,
                        subset: b,
                    },
                ),
            ],
        };
        assert!(ok.is_separable());
        // h(A) - h(B) and h(A) + h(B) cannot be combined separably.
        let bad = Decomposition {
            axioms: vec![
                (rat(1), Axiom::NonNeg(b)),
                (
                    rat(1),
                    Axiom::Mono {
                        superset: ab,
                        subset: b,
                    },
                ),
            ],
        };
        assert!(!bad.is_separable());
        assert_eq!(
            ok.recombine(&u).unwrap(),
            InequalityExpr::from_named(&u, &[(&["A"], 1), (&["A", "B"], 1), (&["B"], -1)]).unwrap()
        );
    }

    #[test]
    fn witness_values() {
        let u = VariableUniverse::new(["X", "Y", "Z"]).unwrap();
        let top = Witness::BooleanMonotone {
            generators: vec![u.full()],
        };
        assert_eq!(top.value(u.full()), rat(1));
        assert_eq!(top.value(u.set(&["X", "Y"]).unwrap()), rat(0));
        assert!(top.to_set_function(&u).unwrap().is_monotone());
        assert!(Witness::StepFn(u.set(&["Y"]).unwrap()).is_well_formed(&u));
        assert!(!Witness::StepFn(VarSet::EMPTY).is_well_formed(&u));
    }

    #[test]
    fn entropic_outside_simple_form_is_refused() {
        let u = VariableUniverse::new(["X", "Y", "Z"]).unwrap();
        let sub = InequalityExpr::from_named(&u, &[(&["X", "Z"], 1), (&["X", "Y"], -1)]).unwrap();
        assert!(matches!(
            check(&sub, Semantics::Entropic),
            Err(Error::Unsupported(_))
        ));
    }
}
