//! Exact rational linear programming.
//!
//! A dense two-phase simplex over a compact (Tucker) tableau: one column per
//! nonbasic variable, one row per constraint. Bland's rule picks both the
//! entering and the leaving variable, so the method terminates on the highly
//! degenerate programs produced by the checkers.
//!
//! Every row is normalised to a non-negative right-hand side. `<=` rows and
//! `>= 0` rows start with their slack in the basis; only `>=` rows with a
//! positive right-hand side and equality rows need artificials.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// One sparse constraint row `sum coeffs[k].1 * x[coeffs[k].0]  rel  rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    /// Builds a row from a dense coefficient vector.
    pub fn dense(row: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        let coeffs = row
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Constraint::new(coeffs, relation, rhs)
    }

    pub fn lhs_at(&self, point: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, (j, c)| acc + c * &point[*j])
    }

    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs = self.lhs_at(point);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    /// `true` marks a variable without the default lower bound of zero.
    pub free: Vec<bool>,
}

impl LpProblem {
    /// A problem over `n` non-negative variables with a zero objective.
    pub fn new(sense: Sense, n: usize) -> Self {
        LpProblem {
            sense,
            objective: vec![Rational::zero(); n],
            constraints: Vec::new(),
            free: vec![false; n],
        }
    }

    pub fn with_objective(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LpProblem {
            sense,
            objective,
            constraints: Vec::new(),
            free: vec![false; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    /// Whether `point` satisfies every constraint and bound exactly.
    pub fn is_feasible_point(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars()
            && point
                .iter()
                .zip(&self.free)
                .all(|(x, free)| *free || !x.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied_by(point))
    }

    pub fn objective_at(&self, point: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(point)
            .fold(Rational::zero(), |acc, (c, x)| acc + c * x)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.free.len() != n {
            return Err(Error::domain(
                "bound vector length differs from objective length",
            ));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some((j, _)) = c.coeffs.iter().find(|(j, _)| *j >= n) {
                return Err(Error::domain(format!(
                    "constraint {i} references variable {j}, problem has {n}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal(Optimum),
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub value: Rational,
    pub point: Vec<Rational>,
    /// One multiplier per constraint with `value = sum duals[i] * rhs[i]`.
    /// For a minimisation, `>=` rows get non-negative and `<=` rows
    /// non-positive multipliers; signs flip for a maximisation.
    pub duals: Vec<Rational>,
}

impl LpResult {
    pub fn optimum(&self) -> Option<&Optimum> {
        match self {
            LpResult::Optimal(o) => Some(o),
            _ => None,
        }
    }
}

/// Work counters of a solve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LpStats {
    pub rows: usize,
    pub columns: usize,
    pub pivots: usize,
}

/// Solves `p` exactly.
pub fn solve(p: &LpProblem) -> Result<LpResult> {
    solve_with_stats(p).map(|(r, _)| r)
}

pub fn solve_with_stats(p: &LpProblem) -> Result<(LpResult, LpStats)> {
    p.validate()?;
    let mut tableau = Tableau::build(p);
    let stats_base = LpStats {
        rows: tableau.rows.len(),
        columns: tableau.nonbasic.len(),
        pivots: 0,
    };
    if !tableau.phase_one() {
        let stats = LpStats {
            pivots: tableau.pivots,
            ..stats_base
        };
        return Ok((LpResult::Infeasible, stats));
    }
    let result = tableau.phase_two(p);
    let stats = LpStats {
        pivots: tableau.pivots,
        ..stats_base
    };
    Ok((result, stats))
}

/// Phase one only: a feasible point, if any.
pub fn feasible(p: &LpProblem) -> Result<Option<Vec<Rational>>> {
    p.validate()?;
    let mut tableau = Tableau::build(p);
    if !tableau.phase_one() {
        return Ok(None);
    }
    Ok(Some(tableau.original_point(p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarKind {
    /// Column of the (split) structural vector.
    Structural,
    /// Slack or surplus of a row.
    Slack,
    Artificial,
}

struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

/// Compact tableau: `x_B(i) = rhs_i - sum_j T[i][j] * x_N(j)` and
/// `z = z0 + sum_j d_j * x_N(j)` (minimised).
struct Tableau {
    rows: Vec<Row>,
    /// Variable id of the basic variable of each row.
    basic: Vec<usize>,
    /// Variable id of each column.
    nonbasic: Vec<usize>,
    kinds: Vec<VarKind>,
    /// For each original constraint: (slack variable id, sign of slack in the
    /// normalised row, whether the row was negated).
    row_slack: Vec<(usize, bool)>,
    /// Map from split structural id to (original var, sign).
    split: Vec<(usize, bool)>,
    pivots: usize,
}

impl Tableau {
    fn build(p: &LpProblem) -> Tableau {
        // Split free variables into a positive and a negative part.
        let mut split = Vec::new();
        let mut pos_id = vec![0usize; p.num_vars()];
        let mut neg_id = vec![None; p.num_vars()];
        for j in 0..p.num_vars() {
            pos_id[j] = split.len();
            split.push((j, true));
            if p.free[j] {
                neg_id[j] = Some(split.len());
                split.push((j, false));
            }
        }
        let n_struct = split.len();
        let mut kinds = vec![VarKind::Structural; n_struct];

        let mut rows = Vec::with_capacity(p.constraints.len());
        let mut basic = Vec::with_capacity(p.constraints.len());
        let mut row_slack = Vec::with_capacity(p.constraints.len());
        // Columns for surplus variables, created lazily: (var id, row index).
        let mut surplus_cols: Vec<(usize, usize)> = Vec::new();

        for c in &p.constraints {
            let mut coeffs = vec![Rational::zero(); n_struct];
            for (j, a) in &c.coeffs {
                coeffs[pos_id[*j]] += a;
                if let Some(k) = neg_id[*j] {
                    coeffs[k] -= a;
                }
            }
            let mut rhs = c.rhs.clone();
            let mut relation = c.relation;
            let mut negated = false;
            let flip = rhs.is_negative() || (relation == Relation::Ge && rhs.is_zero());
            if flip {
                for a in coeffs.iter_mut() {
                    *a = -a.clone();
                }
                rhs = -rhs;
                negated = true;
                relation = match relation {
                    Relation::Ge => Relation::Le,
                    Relation::Le => Relation::Ge,
                    Relation::Eq => Relation::Eq,
                };
            }
            let row_index = rows.len();
            match relation {
                Relation::Le => {
                    let id = kinds.len();
                    kinds.push(VarKind::Slack);
                    basic.push(id);
                    row_slack.push((id, negated));
                }
                Relation::Ge => {
                    let surplus = kinds.len();
                    kinds.push(VarKind::Slack);
                    surplus_cols.push((surplus, row_index));
                    let art = kinds.len();
                    kinds.push(VarKind::Artificial);
                    basic.push(art);
                    row_slack.push((art, negated));
                }
                Relation::Eq => {
                    let art = kinds.len();
                    kinds.push(VarKind::Artificial);
                    basic.push(art);
                    row_slack.push((art, negated));
                }
            }
            rows.push(Row { coeffs, rhs });
        }

        let mut nonbasic: Vec<usize> = (0..n_struct).collect();
        for &(id, row) in &surplus_cols {
            nonbasic.push(id);
            for (i, r) in rows.iter_mut().enumerate() {
                // x_art = rhs - a.x + surplus, i.e. T = -1 in the surplus column.
                r.coeffs.push(if i == row {
                    -Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                });
            }
        }

        Tableau {
            rows,
            basic,
            nonbasic,
            kinds,
            row_slack,
            split,
            pivots: 0,
        }
    }

    fn pivot(&mut self, r: usize, s: usize, obj: &mut (Rational, Vec<Rational>)) {
        self.pivots += 1;
        let p = self.rows[r].coeffs[s].clone();
        {
            let row = &mut self.rows[r];
            row.rhs = &row.rhs / &p;
            for (j, a) in row.coeffs.iter_mut().enumerate() {
                if j == s {
                    *a = Rational::from_integer(1.into()) / &p;
                } else if !a.is_zero() {
                    *a = &*a / &p;
                }
            }
        }
        let pivot_row_nz: Vec<usize> = self.rows[r]
            .coeffs
            .iter()
            .enumerate()
            .filter(|(j, a)| *j != s && !a.is_zero())
            .map(|(j, _)| j)
            .collect();
        let (pivot_rhs, pivot_coeffs) = {
            let row = &self.rows[r];
            (row.rhs.clone(), row.coeffs.clone())
        };

        let update = |rhs: &mut Rational, coeffs: &mut [Rational], sign_rhs: bool| {
            let f = coeffs[s].clone();
            if f.is_zero() {
                return;
            }
            if sign_rhs {
                *rhs -= &f * &pivot_rhs;
            } else {
                *rhs += &f * &pivot_rhs;
            }
            for &j in &pivot_row_nz {
                coeffs[j] -= &f * &pivot_coeffs[j];
            }
            coeffs[s] = -(&f * &pivot_coeffs[s]);
        };

        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(&mut row.rhs, &mut row.coeffs, true);
            }
        }
        // Objective: z0' = z0 + d_s * rhs'_r, same column update.
        update(&mut obj.0, &mut obj.1, false);

        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[s]);
    }

    /// Runs Bland's-rule simplex on the objective row. Columns whose variable
    /// is artificial never enter. Returns `false` when unbounded.
    fn optimize(&mut self, obj: &mut (Rational, Vec<Rational>)) -> bool {
        loop {
            let entering = (0..self.nonbasic.len())
                .filter(|&j| {
                    obj.1[j].is_negative() && self.kinds[self.nonbasic[j]] != VarKind::Artificial
                })
                .min_by_key(|&j| self.nonbasic[j]);
            let Some(s) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row.coeffs[s];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row.rhs / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basic[i] < self.basic[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, s, obj);
        }
    }

    /// Minimises the sum of artificials; `true` iff it reaches zero. Basic
    /// artificials left at level zero are pivoted out where possible.
    fn phase_one(&mut self) -> bool {
        let has_artificial = self
            .basic
            .iter()
            .any(|&b| self.kinds[b] == VarKind::Artificial);
        if !has_artificial {
            return true;
        }
        // z = sum of artificial basics = sum rhs - sum T x_N.
        let mut obj = (
            Rational::zero(),
            vec![Rational::zero(); self.nonbasic.len()],
        );
        for (i, row) in self.rows.iter().enumerate() {
            if self.kinds[self.basic[i]] == VarKind::Artificial {
                obj.0 += &row.rhs;
                for (j, a) in row.coeffs.iter().enumerate() {
                    obj.1[j] -= a;
                }
            }
        }
        // Phase one is bounded below by zero.
        self.optimize(&mut obj);
        if obj.0.is_positive() {
            return false;
        }
        for r in 0..self.rows.len() {
            if self.kinds[self.basic[r]] != VarKind::Artificial {
                continue;
            }
            let col = (0..self.nonbasic.len())
                .filter(|&j| {
                    self.kinds[self.nonbasic[j]] != VarKind::Artificial
                        && !self.rows[r].coeffs[j].is_zero()
                })
                .min_by_key(|&j| self.nonbasic[j]);
            if let Some(s) = col {
                self.pivot(r, s, &mut obj);
            }
            // Otherwise the row is redundant; its artificial stays basic at zero.
        }
        true
    }

    fn phase_two(&mut self, p: &LpProblem) -> LpResult {
        let sign = match p.sense {
            Sense::Minimize => Rational::from_integer(1.into()),
            Sense::Maximize => -Rational::from_integer(1.into()),
        };
        let cost = |id: usize| -> Rational {
            if id < self.split.len() {
                let (j, pos) = self.split[id];
                let c = &p.objective[j] * &sign;
                if pos {
                    c
                } else {
                    -c
                }
            } else {
                Rational::zero()
            }
        };
        let mut obj = (
            Rational::zero(),
            vec![Rational::zero(); self.nonbasic.len()],
        );
        for (j, &id) in self.nonbasic.iter().enumerate() {
            obj.1[j] = cost(id);
        }
        for (i, row) in self.rows.iter().enumerate() {
            let cb = cost(self.basic[i]);
            if cb.is_zero() {
                continue;
            }
            obj.0 += &cb * &row.rhs;
            for (j, a) in row.coeffs.iter().enumerate() {
                obj.1[j] -= &cb * a;
            }
        }
        if !self.optimize(&mut obj) {
            return LpResult::Unbounded;
        }
        let point = self.original_point(p);
        let value = p.objective_at(&point);
        debug_assert_eq!(value, &obj.0 * &sign);

        // Multiplier of row i is minus the reduced cost of its slack
        // (or artificial) column; zero when that variable is basic.
        let mut reduced = vec![Rational::zero(); self.kinds.len()];
        for (j, &id) in self.nonbasic.iter().enumerate() {
            reduced[id] = obj.1[j].clone();
        }
        let duals = self
            .row_slack
            .iter()
            .map(|&(id, negated)| {
                let y = -reduced[id].clone();
                let y = if negated { -y } else { y };
                &y * &sign
            })
            .collect();
        LpResult::Optimal(Optimum {
            value,
            point,
            duals,
        })
    }

    fn original_point(&self, p: &LpProblem) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); p.num_vars()];
        for (i, &id) in self.basic.iter().enumerate() {
            if id < self.split.len() {
                let (j, pos) = self.split[id];
                if pos {
                    x[j] += &self.rows[i].rhs;
                } else {
                    x[j] -= &self.rows[i].rhs;
                }
            }
        }
        x
    }
}
