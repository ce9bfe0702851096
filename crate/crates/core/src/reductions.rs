//! Hard instance families translated into information inequalities, with
//! exhaustive deciders for the source problems.

use num_traits::One;

use crate::error::{Error, Result};
use crate::model::{
    expand_measure, is_identifier, InequalityExpr, MeasureTerm, Rational, VarSet, VariableUniverse,
};

const SAT_ORACLE_MAX_VARS: usize = 20;
const COLORING_ORACLE_MAX_VERTICES: usize = 8;
const PARTITION_ORACLE_MAX_ITEMS: usize = 20;
const PARTITION_ORACLE_MAX_SUM: u64 = 60;

/// Monotone 3-SAT: positive clauses need a true variable, negative clauses
/// a false one. Clauses hold variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonSat3Instance {
    variables: Vec<String>,
    positive: Vec<[usize; 3]>,
    negative: Vec<[usize; 3]>,
}

impl MonSat3Instance {
    pub fn new(
        variables: Vec<String>,
        positive: Vec<[usize; 3]>,
        negative: Vec<[usize; 3]>,
    ) -> Result<Self> {
        if positive.is_empty() && negative.is_empty() {
            return Err(Error::domain("instance has no clauses"));
        }
        for (i, v) in variables.iter().enumerate() {
            if !is_identifier(v) || variables[..i].contains(v) {
                return Err(Error::domain(format!(
                    "bad or repeated variable name `{v}`"
                )));
            }
        }
        for c in positive.iter().chain(&negative) {
            if c.iter().any(|&x| x >= variables.len()) {
                return Err(Error::domain(format!(
                    "clause {c:?} references an unknown variable"
                )));
            }
            if c[0] == c[1] || c[1] == c[2] || c[0] == c[2] {
                return Err(Error::domain(format!(
                    "clause {c:?} does not have three distinct variables"
                )));
            }
        }
        Ok(MonSat3Instance {
            variables,
            positive,
            negative,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn positive(&self) -> &[[usize; 3]] {
        &self.positive
    }

    pub fn negative(&self) -> &[[usize; 3]] {
        &self.negative
    }

    /// Truth of the instance under the assignment "true iff in `ones`".
    pub fn satisfied_by(&self, ones: VarSet) -> bool {
        let clause = |c: &[usize; 3]| VarSet::from_indices(c.iter().copied());
        self.positive.iter().all(|c| clause(c).intersects(ones))
            && self.negative.iter().all(|c| !clause(c).is_subset(ones))
    }
}

/// `sum_{C positive} h(X | C) + sum_{C negative} I(C) >= h(X)`.
///
/// Satisfying assignments correspond to failing step functions: the
/// instance is satisfiable iff the inequality is not valid over step
/// functions, and a failing `s^Y` decodes to the assignment true on `Y`.
/// Every satisfiable instance has a satisfying assignment with a true
/// variable (with no positive clause, any single true variable works), so
/// no instance needs rewriting.
pub fn from_3dmonsat(phi: &MonSat3Instance) -> Result<InequalityExpr> {
    let u = VariableUniverse::new(phi.variables.iter().cloned())?;
    let full = u.full();
    let one = Rational::one();
    let mut parts = Vec::new();
    for c in &phi.positive {
        let given = VarSet::from_indices(c.iter().copied());
        parts.push(expand_measure(
            &u,
            &MeasureTerm::CondEntropy {
                target: full,
                given,
            },
            &one,
        )?);
    }
    for c in &phi.negative {
        let s = VarSet::from_indices(c.iter().copied());
        parts.push(expand_measure(&u, &MeasureTerm::MultiMutualInfo(s), &one)?);
    }
    parts.push(expand_measure(
        &u,
        &MeasureTerm::Entropy(full),
        &-one.clone(),
    )?);
    let items: Vec<(Rational, &InequalityExpr)> = parts.iter().map(|p| (one.clone(), p)).collect();
    InequalityExpr::combine(&u, &items)
}

/// Assignment encoded by a failing step set: true exactly on `witness`.
pub fn decode_assignment(phi: &MonSat3Instance, witness: VarSet) -> Vec<bool> {
    (0..phi.variables.len())
        .map(|i| witness.contains(i))
        .collect()
}

pub fn sat_oracle(phi: &MonSat3Instance) -> Result<bool> {
    let n = phi.variables.len();
    if n > SAT_ORACLE_MAX_VARS {
        return Err(Error::LimitExceeded {
            what: "satisfiability oracle",
            n,
            limit: SAT_ORACLE_MAX_VARS,
        });
    }
    Ok((0..1u64 << n).any(|m| phi.satisfied_by(VarSet::from_bits(m))))
}

/// Simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Edges are normalised to `(low, high)` and deduplicated.
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::domain("graph has no vertices"));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !is_identifier(v) || vertices[..i].contains(v) {
                return Err(Error::domain(format!("bad or repeated vertex name `{v}`")));
            }
        }
        let mut norm = Vec::new();
        for (a, b) in edges {
            if a >= vertices.len() || b >= vertices.len() {
                return Err(Error::domain(format!(
                    "edge ({a}, {b}) references an unknown vertex"
                )));
            }
            if a == b {
                return Err(Error::domain(format!("self-loop on `{}`", vertices[a])));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(Graph {
            vertices,
            edges: norm,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_proper(&self, colors: &[usize]) -> bool {
        colors.len() == self.vertices.len()
            && colors.iter().all(|&c| c < 3)
            && self.edges.iter().all(|&(a, b)| colors[a] != colors[b])
    }
}

const COLORS: [char; 3] = ['r', 'g', 'b'];

/// Universe `A_r, A_g, A_b` per vertex `A`, in vertex order.
pub fn coloring_universe(g: &Graph) -> Result<VariableUniverse> {
    VariableUniverse::new(
        g.vertices
            .iter()
            .flat_map(|v| COLORS.iter().map(move |c| format!("{v}_{c}"))),
    )
}

/// `sum h(A_c) + sum_{c != d} k h(V | A_c A_d) + sum_{edges, c} k h(V | A_c B_c) >= k h(V)`
/// with `k = 2n + 1`, `V` all colour variables and `c, d` ranging over
/// ordered pairs. The graph is 3-colourable iff this fails on some step
/// function.
pub fn from_3coloring(g: &Graph) -> Result<InequalityExpr> {
    let u = coloring_universe(g)?;
    let full = u.full();
    let var = |vertex: usize, color: usize| 3 * vertex + color;
    let k = Rational::from_integer((2 * g.vertices.len() as i64 + 1).into());
    let one = Rational::one();
    let cond = |given: VarSet| -> Result<InequalityExpr> {
        expand_measure(
            &u,
            &MeasureTerm::CondEntropy {
                target: full,
                given,
            },
            &k,
        )
    };
    let mut parts = Vec::new();
    for a in 0..g.vertices.len() {
        for c in 0..3 {
            parts.push(expand_measure(
                &u,
                &MeasureTerm::Entropy(VarSet::singleton(var(a, c))),
                &one,
            )?);
        }
    }
    for a in 0..g.vertices.len() {
        for c in 0..3 {
            for d in 0..3 {
                if c != d {
                    parts.push(cond(VarSet::from_indices([var(a, c), var(a, d)]))?);
                }
            }
        }
    }
    for &(a, b) in &g.edges {
        for c in 0..3 {
            parts.push(cond(VarSet::from_indices([var(a, c), var(b, c)]))?);
        }
    }
    parts.push(expand_measure(
        &u,
        &MeasureTerm::Entropy(full),
        &-k.clone(),
    )?);
    let items: Vec<(Rational, &InequalityExpr)> = parts.iter().map(|p| (one.clone(), p)).collect();
    InequalityExpr::combine(&u, &items)
}

/// Colouring encoded by a failing step set `W`: vertex `A` gets colour `c`
/// when `A_c` lies outside `W`. `None` if that is not a proper colouring.
pub fn decode_coloring(g: &Graph, witness: VarSet) -> Option<Vec<usize>> {
    let mut colors = Vec::with_capacity(g.vertices.len());
    for a in 0..g.vertices.len() {
        let chosen: Vec<usize> = (0..3).filter(|&c| !witness.contains(3 * a + c)).collect();
        match chosen.as_slice() {
            [c] => colors.push(*c),
            _ => return None,
        }
    }
    g.is_proper(&colors).then_some(colors)
}

pub fn coloring_oracle(g: &Graph) -> Result<bool> {
    let n = g.vertices.len();
    if n > COLORING_ORACLE_MAX_VERTICES {
        return Err(Error::LimitExceeded {
            what: "colouring oracle",
            n,
            limit: COLORING_ORACLE_MAX_VERTICES,
        });
    }
    let mut colors = vec![0usize; n];
    loop {
        if g.is_proper(&colors) {
            return Ok(true);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(false);
            }
            colors[i] += 1;
            if colors[i] < 3 {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}

/// Multiset of positive integers with an even total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionInstance {
    items: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(items: Vec<u64>) -> Result<Self> {
        if items.is_empty() || items.contains(&0) {
            return Err(Error::domain(
                "partition items must be positive and non-empty",
            ));
        }
        let total: u64 = items.iter().sum();
        if total % 2 == 1 {
            return Err(Error::domain(format!(
                "partition total {total} is odd; the reduction needs an even total"
            )));
        }
        Ok(PartitionInstance { items })
    }

    pub fn items(&self) -> &[u64] {
        &self.items
    }

    pub fn total(&self) -> u64 {
        self.items.iter().sum()
    }
}

/// `((m/2)^2 - 1) h(X) >= sum_{i<j} x_i x_j (h(A_i | A_j) + h(A_j | A_i))`.
///
/// On `s^U` the right side is `(sum_{U} x)(sum_{X - U} x)`, which reaches
/// `(m/2)^2` exactly on an equal split.
pub fn from_partition(inst: &PartitionInstance) -> Result<InequalityExpr> {
    let n = inst.items.len();
    let u = VariableUniverse::numbered("A", n)?;
    let half = inst.total() / 2;
    let lhs = Rational::from_integer((half as i64 * half as i64 - 1).into());
    let one = Rational::one();
    let mut parts = vec![expand_measure(&u, &MeasureTerm::Entropy(u.full()), &lhs)?];
    for i in 0..n {
        for j in i + 1..n {
            let w = -Rational::from_integer(((inst.items[i] * inst.items[j]) as i64).into());
            let (a, b) = (VarSet::singleton(i), VarSet::singleton(j));
            parts.push(expand_measure(
                &u,
                &MeasureTerm::CondEntropy {
                    target: a,
                    given: b,
                },
                &w,
            )?);
            parts.push(expand_measure(
                &u,
                &MeasureTerm::CondEntropy {
                    target: b,
                    given: a,
                },
                &w,
            )?);
        }
    }
    let items: Vec<(Rational, &InequalityExpr)> = parts.iter().map(|p| (one.clone(), p)).collect();
    InequalityExpr::combine(&u, &items)
}

/// Split encoded by a failing step set: items inside versus outside.
pub fn decode_split(inst: &PartitionInstance, witness: VarSet) -> (Vec<u64>, Vec<u64>) {
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for (i, &x) in inst.items.iter().enumerate() {
        if witness.contains(i) {
            inside.push(x);
        } else {
            outside.push(x);
        }
    }
    (inside, outside)
}

pub fn partition_oracle(inst: &PartitionInstance) -> Result<bool> {
    let n = inst.items.len();
    if n > PARTITION_ORACLE_MAX_ITEMS || inst.total() > PARTITION_ORACLE_MAX_SUM {
        return Err(Error::LimitExceeded {
            what: "partition oracle",
            n,
            limit: PARTITION_ORACLE_MAX_ITEMS,
        });
    }
    let total = inst.total();
    Ok((0..1u64 << n).any(|m| {
        let side: u64 = (0..n)
            .filter(|i| m >> i & 1 == 1)
            .map(|i| inst.items[i])
            .sum();
        2 * side == total
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validity::{check_step, Verdict, Witness};

    fn names(k: &[&str]) -> Vec<String> {
        k.iter().map(|s| s.to_string()).collect()
    }

    fn step_witness(e: &InequalityExpr) -> Option<VarSet> {
        match check_step(e).unwrap() {
            Verdict::Invalid(Some(Witness::StepFn(v))) => Some(v),
            Verdict::Valid(_) => None,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_clause_instance() {
        let phi = MonSat3Instance::new(
            names(&["x", "y", "z", "w"]),
            vec![[0, 1, 2]],
            vec![[0, 1, 3]],
        )
        .unwrap();
        assert!(sat_oracle(&phi).unwrap());
        let w = step_witness(&from_3dmonsat(&phi).unwrap()).unwrap();
        assert!(phi.satisfied_by(w));
    }

    #[test]
    fn same_clause_both_signs() {
        let phi = MonSat3Instance::new(names(&["x", "y", "z"]), vec![[0, 1, 2]], vec![[0, 1, 2]])
            .unwrap();
        assert!(sat_oracle(&phi).unwrap());
        assert!(step_witness(&from_3dmonsat(&phi).unwrap()).is_some());
    }

    #[test]
    fn unsatisfiable_complementary_families() {
        // Every triple of 5 variables is both a positive and a negative
        // clause: some triple is all-true or all-false for any assignment.
        let vars = names(&["a", "b", "c", "d", "e"]);
        let mut triples = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                for k in j + 1..5 {
                    triples.push([i, j, k]);
                }
            }
        }
        let phi = MonSat3Instance::new(vars, triples.clone(), triples).unwrap();
        assert!(!sat_oracle(&phi).unwrap());
        assert_eq!(step_witness(&from_3dmonsat(&phi).unwrap()), None);
    }

    #[test]
    fn malformed_clauses() {
        assert!(MonSat3Instance::new(names(&["x", "y"]), vec![[0, 1, 1]], vec![]).is_err());
        assert!(MonSat3Instance::new(names(&["x", "y", "z"]), vec![], vec![]).is_err());
    }

    #[test]
    fn coloring_examples() {
        let k3 = Graph::new(names(&["A", "B", "C"]), vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(coloring_oracle(&k3).unwrap());
        let w = step_witness(&from_3coloring(&k3).unwrap()).unwrap();
        assert!(decode_coloring(&k3, w).is_some());

        let k4 = Graph::new(
            names(&["A", "B", "C", "D"]),
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        assert!(!coloring_oracle(&k4).unwrap());
        assert_eq!(step_witness(&from_3coloring(&k4).unwrap()), None);

        let single = Graph::new(names(&["A"]), vec![]).unwrap();
        assert!(step_witness(&from_3coloring(&single).unwrap()).is_some());
    }

    #[test]
    fn coloring_universe_names() {
        let g = Graph::new(names(&["P", "Q"]), vec![(1, 0)]).unwrap();
        assert_eq!(
            coloring_universe(&g).unwrap().names()[..3],
            names(&["P_r", "P_g", "P_b"])
        );
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn partition_examples() {
        for (items, yes) in [
            (vec![1, 1], true),
            (vec![1, 1, 2], true),
            (vec![1, 3], false),
        ] {
            let inst = PartitionInstance::new(items).unwrap();
            assert_eq!(partition_oracle(&inst).unwrap(), yes);
            let w = step_witness(&from_partition(&inst).unwrap());
            assert_eq!(w.is_some(), yes);
            if let Some(w) = w {
                let (a, b) = decode_split(&inst, w);
                assert_eq!(a.iter().sum::<u64>(), b.iter().sum::<u64>());
            }
        }
        assert!(PartitionInstance::new(vec![1, 2]).is_err());
    }

    #[test]
    fn partition_right_hand_sets_are_small() {
        let inst = PartitionInstance::new(vec![2, 3, 5, 4]).unwrap();
        let two = from_partition(&inst).unwrap().two_sided();
        assert!(two.rhs.iter().all(|(s, _)| s.len() <= 2));
    }
}
