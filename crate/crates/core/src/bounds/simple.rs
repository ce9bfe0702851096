use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::programs::finish;
use super::{is_simple, BoundResult, GuardedSigma, Query};
use crate::error::{Error, Result};
use crate::lp::{solve, Constraint, LpProblem, Relation, Sense};
use crate::model::{Rational, VarSet};
use crate::validity::check_simple_sigma;

/// Affine form over the global program variables.
#[derive(Clone, Debug, Default)]
struct Affine {
    coeffs: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl Affine {
    fn var(k: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, Rational::one());
        Affine {
            coeffs,
            constant: Rational::zero(),
        }
    }

    fn add_scaled(&mut self, other: &Affine, factor: &Rational) {
        for (k, c) in &other.coeffs {
            *self.coeffs.entry(*k).or_insert_with(Rational::zero) += c * factor;
        }
        self.constant += &other.constant * factor;
    }
}

/// One weighted set of the symbolic inequality; the weight is affine in `w`.
struct Term {
    set: VarSet,
    weight: Affine,
}

/// Local block for one variable `A`: the transportation rows of the
/// A-reduction (`sum_j x_ij - d_i >= 0`, `c_j - sum_i x_ij >= 0`) plus
/// `c_A - d_A >= 0`, each row a sparse vector over local columns.
struct Block {
    rows: Vec<Vec<(usize, Rational)>>,
    /// Local column -> affine form in the global variables.
    selector: Vec<Affine>,
}

/// Builds the block of `A` over global variables starting at `next_x`.
/// Local columns: transport pairs, then reduced left weights, reduced right
/// weights, `c_A`, `d_A`.
fn block(lhs: &[Term], rhs: &[Term], a: usize, full: VarSet, next_x: &mut usize) -> Block {
    let mut c_a = Affine::default();
    let mut d_a = Affine::default();
    let mut red_lhs: Vec<(VarSet, Affine)> = Vec::new();
    let mut red_rhs: Vec<(VarSet, Affine)> = Vec::new();
    for t in lhs {
        if t.set.contains(a) {
            c_a.add_scaled(&t.weight, &Rational::one());
        } else {
            red_lhs.push((t.set, t.weight.clone()));
        }
    }
    for t in rhs {
        if t.set.contains(a) {
            d_a.add_scaled(&t.weight, &Rational::one());
        } else {
            red_rhs.push((t.set, t.weight.clone()));
        }
    }
    let rest = full.without(a);
    if !rest.is_empty() {
        let mut diff = c_a.clone();
        diff.add_scaled(&d_a, &-Rational::one());
        red_lhs.push((rest, diff));
    }

    let mut pairs = Vec::new();
    for (i, (y, _)) in red_rhs.iter().enumerate() {
        for (j, (x, _)) in red_lhs.iter().enumerate() {
            if y.is_subset(*x) {
                pairs.push((i, j));
            }
        }
    }
    let np = pairs.len();
    let lhs_col = |j: usize| np + j;
    let rhs_col = |i: usize| np + red_lhs.len() + i;
    let ca_col = np + red_lhs.len() + red_rhs.len();
    let da_col = ca_col + 1;

    let mut selector: Vec<Affine> = (0..np).map(|k| Affine::var(*next_x + k)).collect();
    *next_x += np;
    selector.extend(red_lhs.iter().map(|(_, w)| w.clone()));
    selector.extend(red_rhs.iter().map(|(_, w)| w.clone()));
    selector.push(c_a);
    selector.push(d_a);

    let one = Rational::one;
    let mut rows = Vec::new();
    for i in 0..red_rhs.len() {
        let mut row: Vec<(usize, Rational)> = pairs
            .iter()
            .enumerate()
            .filter(|(_, (pi, _))| *pi == i)
            .map(|(k, _)| (k, one()))
            .collect();
        row.push((rhs_col(i), -one()));
        rows.push(row);
    }
    for j in 0..red_lhs.len() {
        let mut row = vec![(lhs_col(j), one())];
        row.extend(
            pairs
                .iter()
                .enumerate()
                .filter(|(_, (_, pj))| *pj == j)
                .map(|(k, _)| (k, -one())),
        );
        rows.push(row);
    }
    rows.push(vec![(ca_col, one()), (da_col, -one())]);
    Block { rows, selector }
}

/// Exact entropic bound for simple Σ in polynomial time.
///
/// The Σ-inequality `sum w_σ h(σ) >= h(N)` is kept symbolic in `w`. For each
/// variable `A` its A-reduction is turned into transportation rows whose
/// right-hand sides are affine in `w`; stacking these blocks (composed with
/// the map from `(x, w)` to each block's local columns) gives one program
/// whose feasible `w` are exactly the weightings valid over step functions,
/// equivalently over entropic functions.
pub fn logbound_simple_entropic(query: &Query, sigma: &GuardedSigma) -> Result<BoundResult> {
    const METHOD: &str = "simple-entropic";
    let conds = sigma.conditionals();
    if !is_simple(&conds) {
        return Err(Error::Form(
            "the polynomial program needs every condition to have at most one variable".into(),
        ));
    }
    let n = query.universe().len();
    let full = query.universe().full();
    let m = conds.len();

    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (k, c) in conds.iter().enumerate() {
        lhs.push(Term {
            set: c.scope(),
            weight: Affine::var(k),
        });
        if !c.given.is_empty() {
            rhs.push(Term {
                set: c.given,
                weight: Affine::var(k),
            });
        }
    }
    rhs.push(Term {
        set: full,
        weight: Affine {
            coeffs: BTreeMap::new(),
            constant: Rational::one(),
        },
    });

    let mut next_x = m;
    let blocks: Vec<Block> = (0..n)
        .map(|a| block(&lhs, &rhs, a, full, &mut next_x))
        .collect();

    let mut lp = LpProblem::new(Sense::Minimize, next_x);
    for (k, e) in sigma.entries().iter().enumerate() {
        lp.objective[k] = e.log_degree.clone();
    }
    for b in &blocks {
        for row in &b.rows {
            let mut global = Affine::default();
            for (col, coeff) in row {
                global.add_scaled(&b.selector[*col], coeff);
            }
            let coeffs = global
                .coeffs
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            lp.push(Constraint::new(coeffs, Relation::Ge, -global.constant));
        }
    }
    finish(query, sigma, solve(&lp)?, METHOD, check_simple_sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{logbound_polymatroid_dual, logbound_step, Atom, Conditional};
    use crate::model::{rat, ratio, VariableUniverse};

    #[test]
    fn triangle_weights() {
        let u = VariableUniverse::new(["A", "B", "C"]).unwrap();
        let sets: [&[&str]; 3] = [&["A", "B"], &["B", "C"], &["A", "C"]];
        let atoms = sets
            .iter()
            .zip(["R", "S", "T"])
            .map(|(s, r)| Atom {
                relation: r.into(),
                schema: u.set(s).unwrap(),
            })
            .collect();
        let q = Query::new("Q", &u, atoms).unwrap();
        let items = sets
            .iter()
            .map(|s| {
                (
                    Conditional::cardinality(u.set(s).unwrap()).unwrap(),
                    None,
                    rat(1),
                )
            })
            .collect();
        let s = GuardedSigma::with_inferred_guards(&q, items).unwrap();
        let r = logbound_simple_entropic(&q, &s).unwrap();
        assert_eq!(r.value, Some(ratio(3, 2)));
        assert_eq!(r.weights, Some(vec![ratio(1, 2); 3]));
    }

    #[test]
    fn cardinality_plus_functional_dependency() {
        let u = VariableUniverse::new(["A", "B", "C"]).unwrap();
        let q = Query::new(
            "Q",
            &u,
            vec![
                Atom {
                    relation: "R".into(),
                    schema: u.set(&["A", "B"]).unwrap(),
                },
                Atom {
                    relation: "S".into(),
                    schema: u.set(&["B", "C"]).unwrap(),
                },
            ],
        )
        .unwrap();
        let s = GuardedSigma::with_inferred_guards(
            &q,
            vec![
                (
                    Conditional::cardinality(u.set(&["A", "B"]).unwrap()).unwrap(),
                    None,
                    rat(1),
                ),
                (
                    Conditional::new(u.set(&["C"]).unwrap(), u.set(&["B"]).unwrap()).unwrap(),
                    None,
                    rat(0),
                ),
            ],
        )
        .unwrap();
        let r = logbound_simple_entropic(&q, &s).unwrap();
        assert_eq!(r.value, Some(rat(1)));
        assert_eq!(r.weights, Some(vec![rat(1), rat(1)]));
        assert_eq!(logbound_step(&q, &s).unwrap().value, Some(rat(1)));
        assert_eq!(
            logbound_polymatroid_dual(&q, &s).unwrap().value,
            Some(rat(1))
        );
    }

    #[test]
    fn non_simple_is_rejected() {
        let u = VariableUniverse::new(["A", "B", "C"]).unwrap();
        let q = Query::new(
            "Q",
            &u,
            vec![Atom {
                relation: "R".into(),
                schema: u.full(),
            }],
        )
        .unwrap();
        let s = GuardedSigma::with_inferred_guards(
            &q,
            vec![(
                Conditional::new(u.set(&["C"]).unwrap(), u.set(&["A", "B"]).unwrap()).unwrap(),
                None,
                rat(1),
            )],
        )
        .unwrap();
        assert!(matches!(
            logbound_simple_entropic(&q, &s),
            Err(Error::Form(_))
        ));
    }
}
