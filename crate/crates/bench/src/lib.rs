//! Workloads shared by the benchmarks.

use entroplex::bounds::{Atom, Conditional, GuardedSigma, Query};
use entroplex::dsl::parse_inequality;
use entroplex::reductions::{from_3coloring, Graph};
use entroplex::{rat, InequalityExpr, VarSet, VariableUniverse};

pub fn worked_example() -> InequalityExpr {
    parse_inequality("h(X,Y) + h(Y,Z) + 2*h(X,Z) + h(X) >= h(Y) + 3*h(Z)").unwrap()
}

/// `k * sum_i h(X_i, X_{i+1}) >= k * sum_i h(X_i)` on a cycle of `n`
/// variables: monotone-valid, with `k * n` copies on each side.
pub fn scaled_cycle(n: usize, k: i64) -> InequalityExpr {
    let u = VariableUniverse::numbered("X", n).unwrap();
    let mut e = InequalityExpr::zero(&u);
    for i in 0..n {
        let pair = VarSet::from_indices([i, (i + 1) % n]);
        e.add_term(pair, rat(k)).unwrap();
        e.add_term(VarSet::singleton(i), rat(-k)).unwrap();
    }
    e
}

/// `sum_i h(X - X_i) >= (n - 1) h(X)`, the Han-type inequality; valid over
/// polymatroids.
pub fn han(n: usize) -> InequalityExpr {
    let u = VariableUniverse::numbered("X", n).unwrap();
    let mut e = InequalityExpr::zero(&u);
    for i in 0..n {
        e.add_term(u.full().without(i), rat(1)).unwrap();
    }
    e.add_term(u.full(), rat(-(n as i64 - 1))).unwrap();
    e
}

/// The 3-coloring inequality of the complete graph on four vertices
/// (12 variables, valid over step functions).
pub fn k4_coloring() -> InequalityExpr {
    let edges = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .collect();
    let g = Graph::new((0..4).map(|i| format!("v{i}")).collect(), edges).unwrap();
    from_3coloring(&g).unwrap()
}

/// Cycle query `R_i(X_i, X_{i+1})` with unit log-cardinalities.
pub fn cycle_query(n: usize) -> (Query, GuardedSigma) {
    let u = VariableUniverse::numbered("X", n).unwrap();
    let atoms: Vec<Atom> = (0..n)
        .map(|i| Atom {
            relation: format!("R{i}"),
            schema: VarSet::from_indices([i, (i + 1) % n]),
        })
        .collect();
    let items = atoms
        .iter()
        .enumerate()
        .map(|(g, a)| (Conditional::cardinality(a.schema).unwrap(), Some(g), rat(1)))
        .collect();
    let q = Query::new("Q", &u, atoms).unwrap();
    let s = GuardedSigma::with_inferred_guards(&q, items).unwrap();
    (q, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use entroplex::validity::{check_monotone_fixpoint, check_polymatroid, check_step};

    #[test]
    fn workloads_have_the_advertised_verdicts() {
        assert!(check_monotone_fixpoint(&scaled_cycle(5, 3))
            .unwrap()
            .is_valid());
        assert!(check_polymatroid(&han(4)).unwrap().is_valid());
        assert!(check_step(&k4_coloring()).unwrap().is_valid());
        let (q, s) = cycle_query(4);
        assert_eq!(
            entroplex::bounds::logbound_simple_entropic(&q, &s)
                .unwrap()
                .value,
            Some(rat(2))
        );
    }
}
