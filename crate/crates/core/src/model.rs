//! Variable universes, subsets, inequality expressions and the information
//! measures that expand into them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::config::HARD_MAX_UNIVERSE;
use crate::error::{Error, Result};
use crate::function::SetFunction;

/// Exact rational number; all validity decisions are made in this type.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::format(format!("invalid rational `{text}`"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An ordered, named set of variables `X_1, ..., X_n`.
#[derive(Clone, Debug)]
pub struct VariableUniverse {
    names: Arc<[String]>,
}

impl PartialEq for VariableUniverse {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for VariableUniverse {}

impl VariableUniverse {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > HARD_MAX_UNIVERSE {
            return Err(Error::LimitExceeded {
                what: "a variable universe",
                n: names.len(),
                limit: HARD_MAX_UNIVERSE,
            });
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::domain(format!("`{name}` is not a valid identifier")));
            }
            if names[..i].contains(name) {
                return Err(Error::domain(format!("duplicate variable `{name}`")));
            }
        }
        Ok(VariableUniverse {
            names: names.into(),
        })
    }

    /// Universe with variables named by `prefix` followed by `1..=n`.
    pub fn numbered(prefix: &str, n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The set of all variables.
    pub fn full(&self) -> VarSet {
        VarSet::full(self.len())
    }

    /// Number of subsets, `2^n`.
    pub fn subset_count(&self) -> usize {
        1usize << self.len()
    }

    pub fn contains(&self, set: VarSet) -> bool {
        set.is_subset(self.full())
    }

    /// Builds a set from variable names.
    pub fn set<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        names.iter().try_fold(VarSet::EMPTY, |acc, name| {
            let name = name.as_ref();
            self.index_of(name)
                .map(|i| acc.with(i))
                .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
        })
    }

    /// The universe without variable `index`, together with the map taking
    /// subsets of the old universe (not containing `index`) to the new one.
    pub fn without(&self, index: usize) -> (VariableUniverse, impl Fn(VarSet) -> VarSet) {
        let names: Vec<String> = self
            .names
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, n)| n.clone())
            .collect();
        let low = (1u64 << index) - 1;
        let compact = move |s: VarSet| {
            let bits = s.bits() & !(1u64 << index);
            VarSet::from_bits((bits & low) | ((bits >> 1) & !low))
        };
        (
            VariableUniverse {
                names: names.into(),
            },
            compact,
        )
    }

    /// Renders a set as `A,B,C` (empty string for the empty set).
    pub fn format_set(&self, set: VarSet) -> String {
        set.iter()
            .map(|i| self.names[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Inverse of [`VariableUniverse::without`]: re-inserts a zero bit at `index`.
pub fn lift_set(set: VarSet, index: usize) -> VarSet {
    let low = (1u64 << index) - 1;
    let bits = set.bits();
    VarSet::from_bits((bits & low) | ((bits & !low) << 1))
}

/// A subset of a variable universe, stored as a bit mask over variable indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct VarSet(u64);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VarSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VarSet(u64::MAX)
        } else {
            VarSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(index: usize) -> Self {
        VarSet(1u64 << index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(VarSet::EMPTY, VarSet::with)
    }

    pub fn with(self, index: usize) -> Self {
        VarSet(self.0 | (1u64 << index))
    }

    pub fn without(self, index: usize) -> Self {
        VarSet(self.0 & !(1u64 << index))
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> VarSet {
        VarSet(self.0 & other.0)
    }

    pub fn difference(self, other: VarSet) -> VarSet {
        VarSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: VarSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Indices of the members, ascending.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = VarSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(VarSet(cur))
        })
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A linear information inequality `sum_S c_S h(S) >= 0`, kept as its
/// coefficient function. Empty-set keys and zero coefficients never appear.
#[derive(Clone, PartialEq, Eq)]
pub struct InequalityExpr {
    universe: VariableUniverse,
    terms: BTreeMap<VarSet, Rational>,
}

impl fmt::Debug for InequalityExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (set, c) in &self.terms {
            let key = if set.is_empty() {
                "{}".to_string()
            } else {
                self.universe.format_set(*set)
            };
            map.entry(&key, &format_rational(c));
        }
        map.finish()
    }
}

impl InequalityExpr {
    /// The trivial inequality `0 >= 0`.
    pub fn zero(universe: &VariableUniverse) -> Self {
        InequalityExpr {
            universe: universe.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Sums the given terms; repeated sets are merged.
    pub fn from_terms<I>(universe: &VariableUniverse, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VarSet, Rational)>,
    {
        let mut expr = Self::zero(universe);
        for (set, c) in terms {
            expr.add_term(set, c)?;
        }
        Ok(expr)
    }

    /// Convenience constructor from variable-name lists and integer coefficients.
    pub fn from_named(universe: &VariableUniverse, terms: &[(&[&str], i64)]) -> Result<Self> {
        let mut expr = Self::zero(universe);
        for (names, c) in terms {
            expr.add_term(universe.set(names)?, rat(*c))?;
        }
        Ok(expr)
    }

    pub fn universe(&self) -> &VariableUniverse {
        &self.universe
    }

    /// Adds `c * h(set)`; terms on the empty set are dropped since `h(∅) = 0`.
    pub fn add_term(&mut self, set: VarSet, c: Rational) -> Result<()> {
        if !self.universe.contains(set) {
            return Err(Error::domain(format!(
                "set {set:?} is outside a universe of {} variables",
                self.universe.len()
            )));
        }
        if set.is_empty() || c.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(set).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&set);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarSet, &Rational)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn coefficient(&self, set: VarSet) -> Rational {
        self.terms.get(&set).cloned().unwrap_or_else(Rational::zero)
    }

    /// Number of sets with a non-zero coefficient.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(&self.universe);
        }
        InequalityExpr {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(s, c)| (*s, c * factor)).collect(),
        }
    }

    /// Coefficient-wise linear combination of expressions over one universe.
    pub fn combine(
        universe: &VariableUniverse,
        items: &[(Rational, &InequalityExpr)],
    ) -> Result<Self> {
        let mut out = Self::zero(universe);
        for (weight, expr) in items {
            if expr.universe != *universe {
                return Err(Error::UniverseMismatch);
            }
            for (set, c) in expr.terms() {
                out.add_term(set, weight * c)?;
            }
        }
        Ok(out)
    }

    /// `sum_S c_S h(S)`; the inequality holds on `h` iff the result is `>= 0`.
    pub fn evaluate(&self, h: &SetFunction) -> Result<Rational> {
        if h.universe() != &self.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(self.evaluate_with(|s| h.value(s).clone()))
    }

    /// Evaluates against an arbitrary exact set function.
    pub fn evaluate_with<F: Fn(VarSet) -> Rational>(&self, h: F) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (s, c)| acc + c * h(*s))
    }

    /// Splits into `(LHS, RHS)` with positive coefficients on both sides:
    /// `sum LHS >= sum RHS`.
    pub fn two_sided(&self) -> TwoSided {
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for (set, c) in &self.terms {
            if c.is_positive() {
                lhs.push((*set, c.clone()));
            } else {
                rhs.push((*set, -c));
            }
        }
        TwoSided { lhs, rhs }
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Re-homes the expression onto an equal universe (for parsers that
    /// build universes independently).
    pub fn with_universe(&self, universe: &VariableUniverse) -> Result<Self> {
        if *universe != self.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(InequalityExpr {
            universe: universe.clone(),
            terms: self.terms.clone(),
        })
    }
}

/// Two-sided canonical form `sum c_i h(X_i) >= sum d_j h(Y_j)` with
/// `c_i, d_j > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSided {
    pub lhs: Vec<(VarSet, Rational)>,
    pub rhs: Vec<(VarSet, Rational)>,
}

/// One of the Shannon-type information measures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureTerm {
    /// `h(S)`
    Entropy(VarSet),
    /// `h(V | U) = h(UV) - h(U)`
    CondEntropy { target: VarSet, given: VarSet },
    /// `I(X;Y) = h(X) + h(Y) - h(XY)`
    MutualInfo(VarSet, VarSet),
    /// `I(Y;Z | X) = h(XY) + h(XZ) - h(X) - h(XYZ)`
    CondMutualInfo {
        left: VarSet,
        right: VarSet,
        given: VarSet,
    },
    /// `I(S) = sum_{∅≠T⊆S} (-1)^{|T|-1} h(T)`
    MultiMutualInfo(VarSet),
}

impl MeasureTerm {
    fn operands(&self) -> Vec<VarSet> {
        match *self {
            MeasureTerm::Entropy(s) | MeasureTerm::MultiMutualInfo(s) => vec![s],
            MeasureTerm::CondEntropy { target, given } => vec![target, given],
            MeasureTerm::MutualInfo(x, y) => vec![x, y],
            MeasureTerm::CondMutualInfo { left, right, given } => vec![left, right, given],
        }
    }
}

/// Expands `weight * term` into entropy terms.
pub fn expand_measure(
    universe: &VariableUniverse,
    term: &MeasureTerm,
    weight: &Rational,
) -> Result<InequalityExpr> {
    for op in term.operands() {
        if !universe.contains(op) {
            return Err(Error::domain(format!(
                "measure operand {op:?} is outside a universe of {} variables",
                universe.len()
            )));
        }
    }
    let w = weight.clone();
    let mut expr = InequalityExpr::zero(universe);
    match *term {
        MeasureTerm::Entropy(s) => expr.add_term(s, w)?,
        MeasureTerm::CondEntropy { target, given } => {
            expr.add_term(target.union(given), w.clone())?;
            expr.add_term(given, -w)?;
        }
        MeasureTerm::MutualInfo(x, y) => {
            expr.add_term(x, w.clone())?;
            expr.add_term(y, w.clone())?;
            expr.add_term(x.union(y), -w)?;
        }
        MeasureTerm::CondMutualInfo { left, right, given } => {
            expr.add_term(given.union(left), w.clone())?;
            expr.add_term(given.union(right), w.clone())?;
            expr.add_term(given, -w.clone())?;
            expr.add_term(given.union(left).union(right), -w)?;
        }
        MeasureTerm::MultiMutualInfo(s) => {
            if s.is_empty() {
                return Err(Error::domain(
                    "multivariate mutual information of the empty set",
                ));
            }
            for t in s.subsets().filter(|t| !t.is_empty()) {
                let c = if t.len() % 2 == 1 {
                    w.clone()
                } else {
                    -w.clone()
                };
                expr.add_term(t, c)?;
            }
        }
    }
    Ok(expr)
}

/// Multiset pair `(S+, S-)` of an integer-scaled inequality: each set appears
/// with multiplicity equal to its scaled absolute coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetRep {
    /// Factor the coefficients were multiplied by (LCM of denominators).
    pub scale: BigInt,
    pub positives: Vec<(VarSet, u64)>,
    pub negatives: Vec<(VarSet, u64)>,
}

impl SetRep {
    pub fn positive_total(&self) -> u64 {
        self.positives.iter().map(|(_, m)| m).sum()
    }

    pub fn negative_total(&self) -> u64 {
        self.negatives.iter().map(|(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.positives.is_empty() && self.negatives.is_empty()
    }
}

/// Scales `expr` to integer coefficients and expands them into multiplicities.
/// Fails with [`Error::CapExceeded`] when the total exceeds `cap`.
pub fn set_representation(expr: &InequalityExpr, cap: u64) -> Result<SetRep> {
    let scale = expr.denominator_lcm();
    let scale_q = Rational::from_integer(scale.clone());
    let mut total = BigInt::zero();
    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    for (set, c) in expr.terms() {
        let scaled = (c * &scale_q).to_integer();
        let magnitude = scaled.abs();
        total += &magnitude;
        if total > BigInt::from(cap) {
            return Err(Error::CapExceeded {
                total: format!(">= {total}"),
                cap,
            });
        }
        let m: u64 = magnitude.try_into().expect("bounded by cap");
        if scaled.is_positive() {
            positives.push((set, m));
        } else {
            negatives.push((set, m));
        }
    }
    Ok(SetRep {
        scale,
        positives,
        negatives,
    })
}
