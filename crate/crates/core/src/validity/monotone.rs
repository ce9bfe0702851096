use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};

use super::{Axiom, Decomposition, Verdict, Witness};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::function::monotone_boolean_families;
use crate::lp::{solve_with_stats, Constraint, LpProblem, LpResult, LpStats, Relation, Sense};
use crate::model::{set_representation, InequalityExpr, Rational, VarSet};

/// Outcome of the augmenting-path fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointRun {
    pub verdict: Verdict,
    /// Number of augmentations performed.
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneLpRun {
    pub verdict: Verdict,
    pub stats: LpStats,
}

pub fn check_monotone_fixpoint(expr: &InequalityExpr) -> Result<Verdict> {
    fixpoint_run(expr).map(|r| r.verdict)
}

pub fn fixpoint_run(expr: &InequalityExpr) -> Result<FixpointRun> {
    fixpoint_run_with_cap(expr, Limits::current().multiplicity_cap)
}

/// Fixed point over the set representation.
///
/// Positive copies are matched to negative copies `Y ⊆ X`; each round
/// finds a shortest augmenting path from an unmatched positive copy to an
/// unmatched negative copy (breadth-first from all unmatched positive copies
/// at once, neighbours in index order). The inequality is valid over
/// monotone functions iff every negative copy ends up matched.
pub fn fixpoint_run_with_cap(expr: &InequalityExpr, cap: u64) -> Result<FixpointRun> {
    let rep = set_representation(expr, cap)?;
    let pos_groups: Vec<VarSet> = rep.positives.iter().map(|(s, _)| *s).collect();
    let neg_groups: Vec<VarSet> = rep.negatives.iter().map(|(s, _)| *s).collect();
    let mut pos_group_of = Vec::new();
    for (g, (_, m)) in rep.positives.iter().enumerate() {
        pos_group_of.extend(std::iter::repeat_n(g, *m as usize));
    }
    let mut neg_nodes_of: Vec<Vec<usize>> = Vec::with_capacity(neg_groups.len());
    let mut neg_group_of = Vec::new();
    for (g, (_, m)) in rep.negatives.iter().enumerate() {
        let start = neg_group_of.len();
        neg_group_of.extend(std::iter::repeat_n(g, *m as usize));
        neg_nodes_of.push((start..neg_group_of.len()).collect());
    }
    // Negative groups whose set lies inside each positive group.
    let below: Vec<Vec<usize>> = pos_groups
        .iter()
        .map(|x| {
            neg_groups
                .iter()
                .enumerate()
                .filter(|(_, y)| y.is_subset(*x))
                .map(|(b, _)| b)
                .collect()
        })
        .collect();

    let np = pos_group_of.len();
    let nn = neg_group_of.len();
    let mut mate_pos: Vec<Option<usize>> = vec![None; np];
    let mut mate_neg: Vec<Option<usize>> = vec![None; nn];
    let mut unmatched_neg = nn;
    let mut iterations = 0;

    while unmatched_neg > 0 {
        let Some(path) =
            augmenting_path(&pos_group_of, &below, &neg_nodes_of, &mate_pos, &mate_neg)
        else {
            break;
        };
        for pair in path.chunks(2) {
            let (p, q) = (pair[0], pair[1]);
            mate_pos[p] = Some(q);
            mate_neg[q] = Some(p);
        }
        unmatched_neg -= 1;
        iterations += 1;
    }

    let verdict = if unmatched_neg == 0 {
        let scale = Rational::from_integer(rep.scale.clone());
        let unit = Rational::one() / scale;
        let mut mono = std::collections::BTreeMap::<(usize, usize), u64>::new();
        let mut slack = vec![0u64; pos_groups.len()];
        for (p, m) in mate_pos.iter().enumerate() {
            match m {
                Some(q) => *mono.entry((pos_group_of[p], neg_group_of[*q])).or_default() += 1,
                None => slack[pos_group_of[p]] += 1,
            }
        }
        let mut axioms: Vec<(Rational, Axiom)> = mono
            .into_iter()
            .map(|((a, b), k)| {
                (
                    &unit * Rational::from_integer(k.into()),
                    Axiom::Mono {
                        superset: pos_groups[a],
                        subset: neg_groups[b],
                    },
                )
            })
            .collect();
        axioms.extend(
            slack
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(a, k)| {
                    (
                        &unit * Rational::from_integer((*k).into()),
                        Axiom::NonNeg(pos_groups[a]),
                    )
                }),
        );
        Verdict::Valid(Some(Decomposition { axioms }))
    } else {
        let generators = connected_upset(
            &pos_groups,
            &pos_group_of,
            &neg_groups,
            &neg_group_of,
            &mate_pos,
            &mate_neg,
        );
        Verdict::Invalid(Some(Witness::BooleanMonotone { generators }))
    };
    Ok(FixpointRun {
        verdict,
        iterations,
    })
}

/// Alternating path `p0, q0, p1, q1, ...` ending at an unmatched negative
/// copy, where `q_i` is newly matched to `p_i`.
fn augmenting_path(
    pos_group_of: &[usize],
    below: &[Vec<usize>],
    neg_nodes_of: &[Vec<usize>],
    mate_pos: &[Option<usize>],
    mate_neg: &[Option<usize>],
) -> Option<Vec<usize>> {
    let mut pos_parent: Vec<Option<usize>> = vec![None; pos_group_of.len()];
    let mut pos_seen = vec![false; pos_group_of.len()];
    let mut neg_parent: Vec<Option<usize>> = vec![None; mate_neg.len()];
    // Copies of a negative group are interchangeable as forward targets, so
    // each group is scanned once per search via a cursor.
    let mut cursor = vec![0usize; neg_nodes_of.len()];
    let mut queue = VecDeque::new();
    for (p, m) in mate_pos.iter().enumerate() {
        if m.is_none() {
            pos_seen[p] = true;
            queue.push_back(p);
        }
    }
    while let Some(p) = queue.pop_front() {
        for &b in &below[pos_group_of[p]] {
            let nodes = &neg_nodes_of[b];
            while cursor[b] < nodes.len() {
                let q = nodes[cursor[b]];
                cursor[b] += 1;
                if mate_pos[p] == Some(q) {
                    continue;
                }
                neg_parent[q] = Some(p);
                match mate_neg[q] {
                    None => return Some(trace(q, &neg_parent, &pos_parent)),
                    Some(next) => {
                        if !pos_seen[next] {
                            pos_seen[next] = true;
                            pos_parent[next] = Some(q);
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    None
}

fn trace(end: usize, neg_parent: &[Option<usize>], pos_parent: &[Option<usize>]) -> Vec<usize> {
    let mut rev = Vec::new();
    let mut q = end;
    loop {
        let p = neg_parent[q].expect("reached negative copy has a parent");
        rev.push(q);
        rev.push(p);
        match pos_parent[p] {
            Some(prev) => q = prev,
            None => break,
        }
    }
    rev.reverse();
    rev
}

/// Minimal sets among the negative copies that can reach an unmatched
/// negative copy in the residual graph. The indicator of their upward
/// closure is a Boolean monotone function violating the inequality.
fn connected_upset(
    pos_groups: &[VarSet],
    pos_group_of: &[usize],
    neg_groups: &[VarSet],
    neg_group_of: &[usize],
    mate_pos: &[Option<usize>],
    mate_neg: &[Option<usize>],
) -> Vec<VarSet> {
    let mut neg_mark = vec![false; neg_group_of.len()];
    let mut pos_mark = vec![false; pos_group_of.len()];
    let mut stack: Vec<usize> = (0..neg_group_of.len())
        .filter(|&q| mate_neg[q].is_none())
        .collect();
    for &q in &stack {
        neg_mark[q] = true;
    }
    while let Some(q) = stack.pop() {
        let y = neg_groups[neg_group_of[q]];
        for p in 0..pos_group_of.len() {
            if pos_mark[p] || !y.is_subset(pos_groups[pos_group_of[p]]) {
                continue;
            }
            pos_mark[p] = true;
            if let Some(q2) = mate_pos[p] {
                if !neg_mark[q2] {
                    neg_mark[q2] = true;
                    stack.push(q2);
                }
            }
        }
    }
    let mut sets: Vec<VarSet> = (0..neg_group_of.len())
        .filter(|&q| neg_mark[q])
        .map(|q| neg_groups[neg_group_of[q]])
        .collect();
    sets.sort();
    sets.dedup();
    minimal_sets(sets)
}

fn minimal_sets(sets: Vec<VarSet>) -> Vec<VarSet> {
    sets.iter()
        .copied()
        .filter(|s| !sets.iter().any(|t| t != s && t.is_subset(*s)))
        .collect()
}

pub fn check_monotone_lp(expr: &InequalityExpr) -> Result<Verdict> {
    monotone_lp_run(expr).map(|r| r.verdict)
}

/// Transportation program: variables `x[i][j]` for every right-hand set
/// `Y_i` contained in a left-hand set `X_j`, with
/// `sum_j x[i][j] >= d_i` and `sum_i x[i][j] <= c_j`. Feasible iff valid
/// over monotone functions. Works directly on rational coefficients.
pub fn monotone_lp_run(expr: &InequalityExpr) -> Result<MonotoneLpRun> {
    let two = expr.two_sided();
    let mut pairs = Vec::new();
    for (i, (y, _)) in two.rhs.iter().enumerate() {
        for (j, (x, _)) in two.lhs.iter().enumerate() {
            if y.is_subset(*x) {
                pairs.push((i, j));
            }
        }
    }
    let mut lp = LpProblem::new(Sense::Minimize, pairs.len());
    for (i, (_, d)) in two.rhs.iter().enumerate() {
        let coeffs = pairs
            .iter()
            .enumerate()
            .filter(|(_, (pi, _))| *pi == i)
            .map(|(k, _)| (k, Rational::one()))
            .collect();
        lp.push(Constraint::new(coeffs, Relation::Ge, d.clone()));
    }
    for (j, (_, c)) in two.lhs.iter().enumerate() {
        let coeffs: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(_, (_, pj))| *pj == j)
            .map(|(k, _)| (k, Rational::one()))
            .collect();
        if !coeffs.is_empty() {
            lp.push(Constraint::new(coeffs, Relation::Le, c.clone()));
        }
    }
    let (result, stats) = solve_with_stats(&lp)?;
    let verdict = match result {
        LpResult::Optimal(opt) => {
            let mut flow = opt.point;
            // Trim so each right-hand set is covered exactly once.
            for (i, (_, d)) in two.rhs.iter().enumerate() {
                let mut excess = -d.clone();
                for (k, (pi, _)) in pairs.iter().enumerate() {
                    if *pi == i {
                        excess += &flow[k];
                    }
                }
                for (k, (pi, _)) in pairs.iter().enumerate() {
                    if *pi != i || !excess.is_positive() {
                        continue;
                    }
                    let cut = if flow[k] < excess {
                        flow[k].clone()
                    } else {
                        excess.clone()
                    };
                    flow[k] -= &cut;
                    excess -= cut;
                }
            }
            let mut used = vec![Rational::zero(); two.lhs.len()];
            let mut axioms = Vec::new();
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if flow[k].is_positive() {
                    used[j] += &flow[k];
                    axioms.push((
                        flow[k].clone(),
                        Axiom::Mono {
                            superset: two.lhs[j].0,
                            subset: two.rhs[i].0,
                        },
                    ));
                }
            }
            for (j, (x, c)) in two.lhs.iter().enumerate() {
                let rest = c - &used[j];
                if rest.is_positive() {
                    axioms.push((rest, Axiom::NonNeg(*x)));
                }
            }
            Verdict::Valid(Some(Decomposition { axioms }))
        }
        LpResult::Infeasible => Verdict::Invalid(recover_witness(expr)?),
        LpResult::Unbounded => unreachable!("feasibility program has a zero objective"),
    };
    Ok(MonotoneLpRun { verdict, stats })
}

/// Witness for an infeasible transportation program: from the fixed point
/// when the set representation fits under the cap, otherwise by brute force
/// over Boolean monotone functions on small universes.
fn recover_witness(expr: &InequalityExpr) -> Result<Option<Witness>> {
    match fixpoint_run(expr) {
        Ok(run) => Ok(run.verdict.witness().cloned()),
        Err(Error::CapExceeded { .. }) => {
            if expr.universe().len() <= Limits::current().boolean_enum_max_n {
                brute_force_monotone(expr)
            } else {
                Ok(None)
            }
        }
        Err(e) => Err(e),
    }
}

/// Searches all Boolean monotone functions for one violating `expr`.
/// Such functions span the monotone cone, so `None` means valid.
pub fn brute_force_monotone(expr: &InequalityExpr) -> Result<Option<Witness>> {
    let n = expr.universe().len();
    let terms: Vec<(VarSet, &Rational)> = expr.terms().collect();
    for family in monotone_boolean_families(n)? {
        let in_family = |s: VarSet| family >> s.bits() & 1 == 1;
        let total: Rational = terms
            .iter()
            .filter(|(s, _)| in_family(*s))
            .map(|(_, c)| (*c).clone())
            .sum();
        if total.is_negative() {
            let members: Vec<VarSet> = (0..1u64 << n)
                .map(VarSet::from_bits)
                .filter(|s| in_family(*s))
                .collect();
            return Ok(Some(Witness::BooleanMonotone {
                generators: minimal_sets(members),
            }));
        }
    }
    Ok(None)
}
