mod common;

use entroplex::function::{entropic_from_distribution, enumerate_monotone_boolean};
use entroplex::lp::{solve, Constraint, LpProblem, LpResult, Relation, Sense};
use entroplex::model::set_representation;
use entroplex::{
    expand_measure, rat, step_function, InequalityExpr, JointDistribution, MeasureTerm, Rational,
    SetFunction, VarSet,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn h_values(n: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-5i64..=5, 1usize << n)
}

fn function(n: usize, values: &[i64]) -> SetFunction {
    let u = common::universe(n);
    SetFunction::from_fn(&u, |s| {
        if s.is_empty() {
            rat(0)
        } else {
            rat(values[s.bits() as usize])
        }
    })
    .unwrap()
}

fn set(n: usize) -> impl Strategy<Value = VarSet> {
    (0u64..1 << n).prop_map(VarSet::from_bits)
}

proptest! {
    #[test]
    fn measures_match_their_formulas(
        (n, vals, x, y, z) in (1usize..=4).prop_flat_map(|n| (Just(n), h_values(n), set(n), set(n), set(n))),
        w in -3i64..=3,
    ) {
        let h = function(n, &vals);
        let u = h.universe().clone();
        let v = |s: VarSet| h.value(s).clone();
        let w = rat(w);
        let eval = |t: MeasureTerm| expand_measure(&u, &t, &w).unwrap().evaluate(&h).unwrap();

        prop_assert_eq!(eval(MeasureTerm::Entropy(x)), &w * v(x));
        prop_assert_eq!(
            eval(MeasureTerm::CondEntropy { target: x, given: y }),
            &w * (v(x.union(y)) - v(y))
        );
        prop_assert_eq!(
            eval(MeasureTerm::MutualInfo(x, y)),
            &w * (v(x) + v(y) - v(x.union(y)))
        );
        prop_assert_eq!(
            eval(MeasureTerm::CondMutualInfo { left: x, right: y, given: z }),
            &w * (v(x.union(z)) + v(y.union(z)) - v(z) - v(x.union(y).union(z)))
        );
        if !x.is_empty() {
            // Inclusion-exclusion written over the bit pattern of the subset.
            let mut direct = Rational::zero();
            for bits in 1..1u64 << n {
                let t = VarSet::from_bits(bits);
                if t.is_subset(x) {
                    let sign = if t.len() % 2 == 1 { 1 } else { -1 };
                    direct += rat(sign) * v(t);
                }
            }
            prop_assert_eq!(eval(MeasureTerm::MultiMutualInfo(x)), &w * direct);
        }
    }

    #[test]
    fn set_representation_reproduces_coefficients(
        n in 1usize..=4,
        terms in proptest::collection::vec((1u64..16, -6i64..=6, 1i64..=4), 1..8),
    ) {
        let u = common::universe(n);
        let mut e = InequalityExpr::zero(&u);
        for (bits, num, den) in terms {
            let s = VarSet::from_bits(bits & u.full().bits());
            if !s.is_empty() {
                e.add_term(s, entroplex::ratio(num, den)).unwrap();
            }
        }
        let rep = set_representation(&e, 100_000).unwrap();
        let scale = Rational::from_integer(rep.scale.clone());
        for bits in 1..1u64 << n {
            let s = VarSet::from_bits(bits);
            let count = |list: &[(VarSet, u64)]| -> i64 {
                list.iter().filter(|(t, _)| *t == s).map(|(_, m)| *m as i64).sum()
            };
            let diff = rat(count(&rep.positives) - count(&rep.negatives));
            prop_assert_eq!(diff, &scale * e.coefficient(s));
        }
    }

    #[test]
    fn evaluation_is_linear(
        (n, vals) in (1usize..=4).prop_flat_map(|n| (Just(n), h_values(n))),
        seed in any::<u64>(),
        a in -4i64..=4,
        b in -4i64..=4,
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let e1 = common::random_inequality(&mut rng, n, 3);
        let e2 = common::random_inequality(&mut rng, n, 3);
        let h = function(n, &vals);
        let (a, b) = (rat(a), rat(b));
        let sum = InequalityExpr::combine(e1.universe(), &[(a.clone(), &e1), (b.clone(), &e2)]).unwrap();
        prop_assert_eq!(
            sum.evaluate(&h).unwrap(),
            a * e1.evaluate(&h).unwrap() + b * e2.evaluate(&h).unwrap()
        );
    }

    #[test]
    fn step_function_definition(n in 1usize..=5, v in 1u64..32, w in 0u64..32) {
        let u = common::universe(n);
        let v = VarSet::from_bits(v & u.full().bits());
        prop_assume!(!v.is_empty());
        let w = VarSet::from_bits(w & u.full().bits());
        let s = step_function(&u, v).unwrap();
        prop_assert_eq!(s.value(w).is_one(), w.intersects(v));
    }

    #[test]
    fn positive_combinations_of_steps_are_polymatroids(
        n in 1usize..=4,
        parts in proptest::collection::vec((1u64..16, 1i64..=5), 1..6),
    ) {
        let u = common::universe(n);
        let mut h = SetFunction::zero(&u).unwrap();
        for (bits, c) in parts {
            let v = VarSet::from_bits(bits & u.full().bits());
            if v.is_empty() {
                continue;
            }
            h = h.linear_combination(&Rational::one(), &step_function(&u, v).unwrap(), &rat(c)).unwrap();
        }
        prop_assert!(h.is_polymatroid());
    }

    #[test]
    fn entropies_are_polymatroids(
        n in 1usize..=3,
        rows in proptest::collection::vec((proptest::collection::vec(0u8..3, 3), 1i64..=6), 1..8),
    ) {
        let u = common::universe(n);
        let total: i64 = rows.iter().map(|(_, w)| w).sum();
        let mut merged = std::collections::BTreeMap::<Vec<String>, i64>::new();
        for (vals, w) in rows {
            *merged.entry(vals[..n].iter().map(|x| x.to_string()).collect()).or_default() += w;
        }
        let rows = merged
            .into_iter()
            .map(|(t, w)| (t, entroplex::ratio(w, total)))
            .collect();
        let d = JointDistribution::new(&u, rows).unwrap();
        prop_assert!(entropic_from_distribution(&d).unwrap().is_polymatroid_within(1e-9));
    }
}

#[test]
fn monotone_enumeration_matches_filtering() {
    let u = common::universe(3);
    let list: Vec<SetFunction> = enumerate_monotone_boolean(&u).unwrap().collect();
    for (i, h) in list.iter().enumerate() {
        assert!(h.is_monotone());
        assert!(!list[..i].contains(h));
    }
    let filtered = (0u64..1 << 7)
        .filter(|f| {
            let value = |s: u64| if s == 0 { 0 } else { f >> (s - 1) & 1 };
            (1..8u64).all(|s| (0..3).all(|i| value(s) <= value(s | 1 << i)))
        })
        .count();
    assert_eq!(list.len(), filtered);
    // 20 monotone Boolean functions on three inputs, minus the one true on ∅.
    assert_eq!(filtered, 19);
}

/// Solves a square system exactly; `None` when singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * p;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Best objective over the vertices of a bounded feasible region.
fn vertex_oracle(p: &LpProblem, rows: &[(Vec<Rational>, Rational)]) -> Option<Rational> {
    let n = p.num_vars();
    let m = rows.len();
    let mut best: Option<Rational> = None;
    for mask in 0u32..1 << m {
        if mask.count_ones() as usize != n {
            continue;
        }
        let picked: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let a = picked.iter().map(|&i| rows[i].0.clone()).collect();
        let b = picked.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(x) = solve_square(a, b) else {
            continue;
        };
        if !p.is_feasible_point(&x) {
            continue;
        }
        let v = p.objective_at(&x);
        best = Some(match (best, p.sense) {
            (None, _) => v,
            (Some(b), Sense::Minimize) => b.min(v),
            (Some(b), Sense::Maximize) => b.max(v),
        });
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simplex_matches_vertex_enumeration(
        n in 1usize..=4,
        maximize in any::<bool>(),
        objective in proptest::collection::vec(-4i64..=4, 4),
        cons in proptest::collection::vec(
            (proptest::collection::vec(-3i64..=3, 4), 0u8..3, -6i64..=8), 0..=6),
    ) {
        let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
        let mut p = LpProblem::with_objective(sense, objective[..n].iter().map(|c| rat(*c)).collect());
        // Every row as an equation `a x = b`, for the vertex oracle.
        let mut rows = Vec::new();
        for (coeffs, rel, rhs) in &cons {
            let row: Vec<Rational> = coeffs[..n].iter().map(|c| rat(*c)).collect();
            let relation = [Relation::Le, Relation::Ge, Relation::Eq][*rel as usize];
            p.push(Constraint::dense(row.clone(), relation, rat(*rhs)));
            rows.push((row, rat(*rhs)));
        }
        for i in 0..n {
            let mut unit = vec![Rational::zero(); n];
            unit[i] = Rational::one();
            p.push(Constraint::dense(unit.clone(), Relation::Le, rat(10)));
            rows.push((unit.clone(), rat(10)));
            rows.push((unit, Rational::zero()));
        }
        let result = solve(&p).unwrap();
        prop_assert_eq!(&result, &solve(&p).unwrap());
        match (&result, vertex_oracle(&p, &rows)) {
            (LpResult::Optimal(o), Some(best)) => {
                prop_assert!(p.is_feasible_point(&o.point));
                prop_assert_eq!(&p.objective_at(&o.point), &o.value);
                prop_assert_eq!(&o.value, &best);
                let dual: Rational = o.duals.iter().zip(&p.constraints).map(|(y, c)| y * &c.rhs).sum();
                prop_assert_eq!(dual, best);
            }
            (LpResult::Infeasible, None) => {}
            (r, oracle) => prop_assert!(false, "solver {:?} vs oracle {:?}", r, oracle),
        }
    }
}
