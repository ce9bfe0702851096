//! Degree constraints on conjunctive queries and log-space upper bounds on
//! their output size.

mod data;
mod programs;
mod simple;

use num_traits::{One, Signed, ToPrimitive, Zero};
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::model::{InequalityExpr, Rational, VarSet, VariableUniverse};

pub use data::{degree_scan, fits_log_degree, join_size, satisfies, Database, Relation};
pub use programs::{logbound_modular, logbound_polymatroid_dual, logbound_step};
pub use simple::logbound_simple_entropic;

/// One atom `R(X_i)` of a query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub relation: String,
    pub schema: VarSet,
}

/// Self-join-free full conjunctive query; the head is the union of the
/// atom schemas and equals the universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    name: String,
    universe: VariableUniverse,
    atoms: Vec<Atom>,
}

impl Query {
    pub fn new(name: &str, universe: &VariableUniverse, atoms: Vec<Atom>) -> Result<Self> {
        let mut covered = VarSet::EMPTY;
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|b| b.relation == a.relation) {
                return Err(Error::domain(format!(
                    "relation `{}` occurs twice; self-joins are not supported",
                    a.relation
                )));
            }
            if a.schema.is_empty() || !universe.contains(a.schema) {
                return Err(Error::domain(format!(
                    "atom `{}` has an empty or out-of-universe schema",
                    a.relation
                )));
            }
            covered = covered.union(a.schema);
        }
        if covered != universe.full() {
            return Err(Error::domain(format!(
                "head variables {} are not the union of the atom schemas {}",
                universe.format_set(universe.full()),
                universe.format_set(covered)
            )));
        }
        Ok(Query {
            name: name.to_string(),
            universe: universe.clone(),
            atoms,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> &VariableUniverse {
        &self.universe
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_index(&self, relation: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a.relation == relation)
    }
}

/// A conditional `(V | U)` standing for `h(UV) - h(U)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Conditional {
    pub target: VarSet,
    pub given: VarSet,
}

impl Conditional {
    /// Normalises `V := V - U`; fails when nothing remains.
    pub fn new(target: VarSet, given: VarSet) -> Result<Self> {
        let target = target.difference(given);
        if target.is_empty() {
            return Err(Error::domain(
                "conditional target is empty after removing the condition",
            ));
        }
        Ok(Conditional { target, given })
    }

    pub fn cardinality(target: VarSet) -> Result<Self> {
        Conditional::new(target, VarSet::EMPTY)
    }

    pub fn scope(&self) -> VarSet {
        self.target.union(self.given)
    }

    /// `s^W(UV) - s^W(U)`: 1 iff `W` meets `V` and misses `U`.
    pub fn step_value(&self, w: VarSet) -> bool {
        w.intersects(self.target) && !w.intersects(self.given)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardedEntry {
    pub conditional: Conditional,
    /// Index of the guard atom in the query.
    pub guard: usize,
    /// Log-degree bound `b >= 0`.
    pub log_degree: Rational,
}

/// Degree constraints, each guarded by an atom whose schema contains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardedSigma {
    entries: Vec<GuardedEntry>,
}

impl GuardedSigma {
    pub fn new(query: &Query, entries: Vec<GuardedEntry>) -> Result<Self> {
        for e in &entries {
            let atom = query
                .atoms()
                .get(e.guard)
                .ok_or_else(|| Error::domain(format!("guard index {} is out of range", e.guard)))?;
            if !e.conditional.scope().is_subset(atom.schema) {
                return Err(Error::domain(format!(
                    "constraint on {} is not guarded by `{}`",
                    query.universe().format_set(e.conditional.scope()),
                    atom.relation
                )));
            }
            if e.log_degree.is_negative() {
                return Err(Error::domain("log-degree bounds must be non-negative"));
            }
        }
        Ok(GuardedSigma { entries })
    }

    /// Builds entries, assigning a missing guard to the first atom whose
    /// schema contains the conditional.
    pub fn with_inferred_guards(
        query: &Query,
        items: Vec<(Conditional, Option<usize>, Rational)>,
    ) -> Result<Self> {
        let entries = items
            .into_iter()
            .map(|(conditional, guard, log_degree)| {
                let guard = match guard {
                    Some(g) => g,
                    None => query
                        .atoms()
                        .iter()
                        .position(|a| conditional.scope().is_subset(a.schema))
                        .ok_or_else(|| {
                            Error::domain(format!(
                                "no atom guards the constraint on {}",
                                query.universe().format_set(conditional.scope())
                            ))
                        })?,
                };
                Ok(GuardedEntry {
                    conditional,
                    guard,
                    log_degree,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GuardedSigma::new(query, entries)
    }

    pub fn entries(&self) -> &[GuardedEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn conditionals(&self) -> Vec<Conditional> {
        self.entries.iter().map(|e| e.conditional).collect()
    }

    pub fn log_degrees(&self) -> Vec<Rational> {
        self.entries.iter().map(|e| e.log_degree.clone()).collect()
    }

    pub fn with_log_degrees(&self, b: Vec<Rational>) -> Result<Self> {
        if b.len() != self.entries.len() || b.iter().any(|x| x.is_negative()) {
            return Err(Error::domain(
                "log-degree vector must be non-negative and match Σ",
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(b)
            .map(|(e, log_degree)| GuardedEntry {
                log_degree,
                ..e.clone()
            })
            .collect();
        Ok(GuardedSigma { entries })
    }
}

/// No cycle in the graph with an edge `A -> B` whenever `A ∈ U`, `B ∈ V`
/// for some `(V | U)`.
pub fn is_acyclic(sigma: &[Conditional]) -> bool {
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..64).map(|_| g.add_node(())).collect();
    for c in sigma {
        for a in c.given.iter() {
            for b in c.target.iter() {
                g.add_edge(nodes[a], nodes[b], ());
            }
        }
    }
    !petgraph::algo::is_cyclic_directed(&g)
}

/// Every condition has at most one variable.
pub fn is_simple(sigma: &[Conditional]) -> bool {
    sigma.iter().all(|c| c.given.len() <= 1)
}

/// `sum_σ w_σ (h(U_σ V_σ) - h(U_σ)) - h(N)`.
pub fn sigma_inequality(
    universe: &VariableUniverse,
    sigma: &[Conditional],
    weights: &[Rational],
) -> Result<InequalityExpr> {
    if sigma.len() != weights.len() {
        return Err(Error::domain(format!(
            "{} weights for {} constraints",
            weights.len(),
            sigma.len()
        )));
    }
    let mut e = InequalityExpr::zero(universe);
    for (c, w) in sigma.iter().zip(weights) {
        if w.is_negative() {
            return Err(Error::domain("weights must be non-negative"));
        }
        e.add_term(c.scope(), w.clone())?;
        e.add_term(c.given, -w.clone())?;
    }
    e.add_term(universe.full(), -Rational::one())?;
    Ok(e)
}

/// Log-space bound; `value == None` means `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub value: Option<Rational>,
    pub weights: Option<Vec<Rational>>,
    pub method: &'static str,
}

impl BoundResult {
    pub(crate) fn infinite(method: &'static str) -> Self {
        BoundResult {
            value: None,
            weights: None,
            method,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_some()
    }

    /// `2^value` as a float, for display.
    pub fn linear_estimate(&self) -> f64 {
        match &self.value {
            Some(v) => v.to_f64().map_or(f64::INFINITY, f64::exp2),
            None => f64::INFINITY,
        }
    }
}

/// Bound method names accepted by [`logbound`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMethod {
    Modular,
    SimpleEntropic,
    Polymatroid,
    Step,
    /// Polynomial program when Σ is simple, modular cover when acyclic,
    /// otherwise the polymatroid program.
    Auto,
}

impl std::str::FromStr for BoundMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "modular" => BoundMethod::Modular,
            "simple" | "entropic" => BoundMethod::SimpleEntropic,
            "polymatroid" => BoundMethod::Polymatroid,
            "step" => BoundMethod::Step,
            "auto" => BoundMethod::Auto,
            other => return Err(Error::domain(format!("unknown bound method `{other}`"))),
        })
    }
}

pub fn logbound(query: &Query, sigma: &GuardedSigma, method: BoundMethod) -> Result<BoundResult> {
    match method {
        BoundMethod::Modular => logbound_modular(query, sigma),
        BoundMethod::SimpleEntropic => logbound_simple_entropic(query, sigma),
        BoundMethod::Polymatroid => logbound_polymatroid_dual(query, sigma),
        BoundMethod::Step => logbound_step(query, sigma),
        BoundMethod::Auto => {
            let conds = sigma.conditionals();
            if is_simple(&conds) {
                logbound_simple_entropic(query, sigma)
            } else if is_acyclic(&conds) {
                logbound_modular(query, sigma)
            } else {
                logbound_polymatroid_dual(query, sigma)
            }
        }
    }
}

/// Objective `sum w_σ b_σ`.
pub(crate) fn weighted_cost(sigma: &GuardedSigma, w: &[Rational]) -> Rational {
    sigma
        .entries()
        .iter()
        .zip(w)
        .fold(Rational::zero(), |acc, (e, w)| acc + &e.log_degree * w)
}
