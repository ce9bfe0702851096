//! Set functions: step and basic modular functions, entropic vectors of
//! explicit distributions, axiom classifiers and the monotone Boolean
//! enumerator.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::model::{rat, InequalityExpr, Rational, VarSet, VariableUniverse};

/// Dense exact set function `h : 2^[n] -> Q` with `h(∅) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunction {
    universe: VariableUniverse,
    values: Vec<Rational>,
}

impl SetFunction {
    pub fn zero(universe: &VariableUniverse) -> Result<Self> {
        Self::from_fn(universe, |_| Rational::zero())
    }

    /// Builds `h` from a closure; the value at `∅` is forced to zero.
    pub fn from_fn<F: FnMut(VarSet) -> Rational>(
        universe: &VariableUniverse,
        mut f: F,
    ) -> Result<Self> {
        let limit = Limits::current().max_universe;
        if universe.len() > limit {
            return Err(Error::LimitExceeded {
                what: "dense set functions",
                n: universe.len(),
                limit,
            });
        }
        let values = (0..universe.subset_count() as u64)
            .map(|bits| {
                if bits == 0 {
                    Rational::zero()
                } else {
                    f(VarSet::from_bits(bits))
                }
            })
            .collect();
        Ok(SetFunction {
            universe: universe.clone(),
            values,
        })
    }

    /// Wraps a value vector indexed by subset bit mask.
    pub fn from_values(universe: &VariableUniverse, values: Vec<Rational>) -> Result<Self> {
        if values.len() != universe.subset_count() {
            return Err(Error::domain(format!(
                "expected {} values, got {}",
                universe.subset_count(),
                values.len()
            )));
        }
        if !values[0].is_zero() {
            return Err(Error::domain("a set function must vanish on the empty set"));
        }
        Ok(SetFunction {
            universe: universe.clone(),
            values,
        })
    }

    pub fn universe(&self) -> &VariableUniverse {
        &self.universe
    }

    pub fn value(&self, set: VarSet) -> &Rational {
        &self.values[set.bits() as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Pointwise `a*self + b*other`.
    pub fn linear_combination(
        &self,
        a: &Rational,
        other: &SetFunction,
        b: &Rational,
    ) -> Result<Self> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(SetFunction {
            universe: self.universe.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Checks `h(∅) = 0` and `h(S ∪ {i}) >= h(S)` for every `S`, `i`.
    pub fn is_monotone(&self) -> bool {
        let n = self.universe.len();
        self.values[0].is_zero()
            && (0..self.values.len()).all(|s| {
                (0..n)
                    .filter(|i| s >> i & 1 == 0)
                    .all(|i| self.values[s | 1 << i] >= self.values[s])
            })
    }

    /// Monotone and submodular. Submodularity is checked on the local
    /// form `h(Si) + h(Sj) >= h(S) + h(Sij)`, which implies it for all pairs.
    pub fn is_polymatroid(&self) -> bool {
        let n = self.universe.len();
        self.is_monotone()
            && (0..self.values.len()).all(|s| {
                (0..n).filter(|i| s >> i & 1 == 0).all(|i| {
                    (i + 1..n).filter(|j| s >> j & 1 == 0).all(|j| {
                        let si = s | 1 << i;
                        let sj = s | 1 << j;
                        &self.values[si] + &self.values[sj]
                            >= &self.values[s] + &self.values[si | 1 << j]
                    })
                })
            })
    }

    /// Positive combination of basic modular functions: additive over
    /// singletons with non-negative singleton values.
    pub fn is_modular(&self) -> bool {
        let n = self.universe.len();
        let singles: Vec<&Rational> = (0..n).map(|i| &self.values[1 << i]).collect();
        self.values[0].is_zero()
            && singles.iter().all(|v| !v.is_negative())
            && (1..self.values.len()).all(|s| {
                let sum = VarSet::from_bits(s as u64)
                    .iter()
                    .fold(Rational::zero(), |acc, i| acc + singles[i]);
                sum == self.values[s]
            })
    }

    pub fn is_boolean(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }
}

/// The step function `s^V`: `1` on sets meeting `V`, `0` elsewhere.
pub fn step_function(universe: &VariableUniverse, v: VarSet) -> Result<SetFunction> {
    if v.is_empty() {
        return Err(Error::domain(
            "s^∅ is identically zero and is not a step function",
        ));
    }
    if !universe.contains(v) {
        return Err(Error::domain("step set is outside the universe"));
    }
    SetFunction::from_fn(universe, |w| step_value(v, w))
}

/// `s^V(W)` without materialising the function.
pub fn step_value(v: VarSet, w: VarSet) -> Rational {
    if v.intersects(w) {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// The basic modular function `s^{{A}}`.
pub fn basic_modular(universe: &VariableUniverse, variable: &str) -> Result<SetFunction> {
    let i = universe
        .index_of(variable)
        .ok_or_else(|| Error::UnknownIdentifier(variable.to_string()))?;
    step_function(universe, VarSet::singleton(i))
}

/// Finite joint distribution over named variables with exact probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    schema: VariableUniverse,
    rows: Vec<(Vec<String>, Rational)>,
}

impl JointDistribution {
    pub fn new(schema: &VariableUniverse, rows: Vec<(Vec<String>, Rational)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut total = Rational::zero();
        for (tuple, p) in &rows {
            if tuple.len() != schema.len() {
                return Err(Error::domain(format!(
                    "tuple of arity {} in a distribution over {} variables",
                    tuple.len(),
                    schema.len()
                )));
            }
            if !p.is_positive() {
                return Err(Error::domain("probabilities must be positive"));
            }
            if !seen.insert(tuple.clone()) {
                return Err(Error::domain(format!("duplicate tuple {tuple:?}")));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(Error::domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(JointDistribution {
            schema: schema.clone(),
            rows,
        })
    }

    /// Uniform distribution over the given tuples.
    pub fn uniform(schema: &VariableUniverse, tuples: Vec<Vec<String>>) -> Result<Self> {
        let p = Rational::new(1.into(), tuples.len().into());
        Self::new(schema, tuples.into_iter().map(|t| (t, p.clone())).collect())
    }

    pub fn schema(&self) -> &VariableUniverse {
        &self.schema
    }

    pub fn rows(&self) -> &[(Vec<String>, Rational)] {
        &self.rows
    }

    /// Exact marginal of the projection onto `set`.
    pub fn marginal(&self, set: VarSet) -> Vec<Rational> {
        let mut acc: HashMap<Vec<&str>, Rational> = HashMap::new();
        for (tuple, p) in &self.rows {
            let key: Vec<&str> = set.iter().map(|i| tuple[i].as_str()).collect();
            *acc.entry(key).or_insert_with(Rational::zero) += p;
        }
        let mut probs: Vec<Rational> = acc.into_values().collect();
        probs.sort();
        probs
    }
}

/// Floating-point entropy vector in bits. Deliberately a separate type from
/// [`SetFunction`] so approximate values never reach the exact checkers.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropicVector {
    universe: VariableUniverse,
    values: Vec<f64>,
}

impl EntropicVector {
    pub fn universe(&self) -> &VariableUniverse {
        &self.universe
    }

    pub fn value(&self, set: VarSet) -> f64 {
        self.values[set.bits() as usize]
    }

    pub fn evaluate(&self, expr: &InequalityExpr) -> Result<f64> {
        if expr.universe() != &self.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(expr
            .terms()
            .map(|(s, c)| c.to_f64().unwrap_or(f64::NAN) * self.value(s))
            .sum())
    }

    /// Polymatroid axioms up to an absolute tolerance.
    pub fn is_polymatroid_within(&self, tol: f64) -> bool {
        let n = self.universe.len();
        let v = &self.values;
        v[0].abs() <= tol
            && (0..v.len()).all(|s| {
                (0..n).filter(|i| s >> i & 1 == 0).all(|i| {
                    let si = s | 1 << i;
                    v[si] + tol >= v[s]
                        && (i + 1..n).filter(|j| s >> j & 1 == 0).all(|j| {
                            let sj = s | 1 << j;
                            v[si] + v[sj] + tol >= v[s] + v[si | 1 << j]
                        })
                })
            })
    }
}

/// Base-2 joint entropies of every marginal of `d`.
pub fn entropic_from_distribution(d: &JointDistribution) -> Result<EntropicVector> {
    let universe = d.schema().clone();
    let limit = Limits::current().max_universe;
    if universe.len() > limit {
        return Err(Error::LimitExceeded {
            what: "entropic vectors",
            n: universe.len(),
            limit,
        });
    }
    let values = (0..universe.subset_count() as u64)
        .map(|bits| {
            if bits == 0 {
                return 0.0;
            }
            d.marginal(VarSet::from_bits(bits))
                .iter()
                .map(|p| {
                    let p = p.to_f64().unwrap_or(0.0);
                    -p * p.log2()
                })
                .sum::<f64>()
                .max(0.0)
        })
        .collect();
    Ok(EntropicVector { universe, values })
}

/// Upward-closed families of non-empty subsets of an `n`-set, as bit masks
/// over subset indices, sorted ascending.
pub fn monotone_boolean_families(n: usize) -> Result<Vec<u64>> {
    let limit = Limits::current().boolean_enum_max_n;
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "monotone Boolean enumeration",
            n,
            limit,
        });
    }
    let mut order: Vec<u64> = (1..1u64 << n).collect();
    order.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));

    fn extend(order: &[u64], n: usize, k: usize, family: u64, out: &mut Vec<u64>) {
        let Some(&s) = order.get(k) else {
            out.push(family);
            return;
        };
        extend(order, n, k + 1, family, out);
        // `s` may join only if every one-element extension is already in.
        let closed = (0..n)
            .filter(|i| s >> i & 1 == 0)
            .all(|i| family >> (s | 1 << i) & 1 == 1);
        if closed {
            extend(order, n, k + 1, family | 1 << s, out);
        }
    }

    let mut out = Vec::new();
    extend(&order, n, 0, 0, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// Indicator function of a family given as a subset bit mask.
pub fn family_indicator(universe: &VariableUniverse, family: u64) -> Result<SetFunction> {
    SetFunction::from_fn(universe, |s| rat((family >> s.bits() & 1) as i64))
}

/// Every monotone 0/1 set function with `h(∅) = 0`, ordered by the bit mask
/// of its upward-closed support.
pub fn enumerate_monotone_boolean(
    universe: &VariableUniverse,
) -> Result<impl Iterator<Item = SetFunction> + '_> {
    let families = monotone_boolean_families(universe.len())?;
    Ok(families
        .into_iter()
        .map(move |f| family_indicator(universe, f).expect("size checked above")))
}
