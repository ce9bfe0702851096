//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use entroplex::bounds::{Atom, Conditional, GuardedSigma, Query};
use entroplex::model::{rat, ratio, InequalityExpr, Rational, VarSet, VariableUniverse};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn universe(n: usize) -> VariableUniverse {
    VariableUniverse::numbered("X", n).unwrap()
}

/// Random inequality with integer coefficients in `-k..=k` on random sets.
pub fn random_inequality<R: Rng>(rng: &mut R, n: usize, k: i64) -> InequalityExpr {
    let u = universe(n);
    let mut e = InequalityExpr::zero(&u);
    let terms = rng.gen_range(1..=(1usize << n).min(8));
    for _ in 0..terms {
        let s = VarSet::from_bits(rng.gen_range(1..1u64 << n));
        e.add_term(s, rat(rng.gen_range(-k..=k))).unwrap();
    }
    e
}

/// Inequality with the given coefficient on every non-empty set, in bit order.
pub fn dense_inequality(n: usize, coeffs: &[i64]) -> InequalityExpr {
    let u = universe(n);
    let mut e = InequalityExpr::zero(&u);
    for (k, c) in coeffs.iter().enumerate() {
        e.add_term(VarSet::from_bits(k as u64 + 1), rat(*c))
            .unwrap();
    }
    e
}

/// Value of `expr` on the step function `s^V`, computed from scratch.
fn step_value(expr: &InequalityExpr, v: VarSet) -> Rational {
    expr.evaluate_with(|w| if w.intersects(v) { rat(1) } else { rat(0) })
}

/// Non-negative on every step function.
pub fn step_oracle(expr: &InequalityExpr) -> bool {
    let n = expr.universe().len();
    (1..1u64 << n).all(|v| step_value(expr, VarSet::from_bits(v)) >= rat(0))
}

/// Non-negative on every basic modular function `h(W) = [A ∈ W]`.
pub fn modular_oracle(expr: &InequalityExpr) -> bool {
    let n = expr.universe().len();
    (0..n).all(|a| expr.evaluate_with(|w| rat(w.contains(a) as i64)) >= rat(0))
}

/// Non-negative on every monotone 0/1 function with `h(∅) = 0`, found by
/// filtering all 0/1 vectors on non-empty subsets. Needs `n <= 4`.
pub fn monotone_oracle(expr: &InequalityExpr) -> bool {
    let n = expr.universe().len();
    assert!(n <= 4);
    let m = (1usize << n) - 1;
    (0..1u64 << m).all(|f| {
        let value = |s: VarSet| {
            if s.is_empty() {
                0
            } else {
                f >> (s.bits() - 1) & 1
            }
        };
        let monotone = (1..1u64 << n).all(|s| {
            let s = VarSet::from_bits(s);
            (0..n).all(|i| value(s) <= value(s.with(i)))
        });
        !monotone || expr.evaluate_with(|s| rat(value(s) as i64)) >= rat(0)
    })
}

/// Random rational in `[0, hi]` with denominator up to 4.
pub fn random_rational<R: Rng>(rng: &mut R, hi: i64) -> Rational {
    let d = rng.gen_range(1..=4);
    ratio(rng.gen_range(0..=hi * d), d)
}

/// Random query over `n` variables whose atoms cover the universe.
pub fn random_query<R: Rng>(rng: &mut R, n: usize) -> Query {
    let u = universe(n);
    let atoms_n = rng.gen_range(1..=n.min(4));
    let mut schemas: Vec<VarSet> = (0..atoms_n)
        .map(|_| VarSet::from_bits(rng.gen_range(1..1u64 << n)))
        .collect();
    let covered = schemas.iter().fold(VarSet::EMPTY, |a, s| a.union(*s));
    for i in u.full().difference(covered).iter() {
        let k = rng.gen_range(0..schemas.len());
        schemas[k] = schemas[k].with(i);
    }
    let atoms = schemas
        .into_iter()
        .enumerate()
        .map(|(k, schema)| Atom {
            relation: format!("R{k}"),
            schema,
        })
        .collect();
    Query::new("Q", &u, atoms).unwrap()
}

/// Random conditional inside `schema` whose condition obeys `max_given`.
fn random_conditional<R: Rng>(rng: &mut R, schema: VarSet, max_given: usize) -> Conditional {
    let vars: Vec<usize> = schema.iter().collect();
    let mut given = VarSet::EMPTY;
    let g = rng.gen_range(0..=max_given.min(vars.len() - 1));
    for &i in vars.choose_multiple(rng, g) {
        given = given.with(i);
    }
    let rest: Vec<usize> = schema.difference(given).iter().collect();
    let t = rng.gen_range(1..=rest.len());
    let target = VarSet::from_indices(rest.choose_multiple(rng, t).copied());
    Conditional::new(target, given).unwrap()
}

/// Random guarded Σ with at most one variable in each condition.
pub fn random_simple_sigma<R: Rng>(rng: &mut R, n: usize, m: usize) -> (Query, GuardedSigma) {
    let q = random_query(rng, n);
    let items = (0..m)
        .map(|_| {
            let g = rng.gen_range(0..q.atoms().len());
            let c = random_conditional(rng, q.atoms()[g].schema, 1);
            (c, Some(g), random_rational(rng, 3))
        })
        .collect();
    let s = GuardedSigma::with_inferred_guards(&q, items).unwrap();
    (q, s)
}

/// Random guarded Σ whose dependency graph follows a random variable order.
pub fn random_acyclic_sigma<R: Rng>(rng: &mut R, n: usize, m: usize) -> (Query, GuardedSigma) {
    let q = random_query(rng, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let rank = |i: usize| order.iter().position(|&x| x == i).unwrap();
    let mut items = Vec::new();
    while items.len() < m {
        let g = rng.gen_range(0..q.atoms().len());
        let schema = q.atoms()[g].schema;
        let c = random_conditional(rng, schema, n);
        let ok = c
            .given
            .iter()
            .all(|a| c.target.iter().all(|b| rank(a) < rank(b)));
        if ok {
            items.push((c, Some(g), random_rational(rng, 3)));
        }
    }
    let s = GuardedSigma::with_inferred_guards(&q, items).unwrap();
    (q, s)
}
