use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Signed;

use super::{GuardedSigma, Query};
use crate::error::{Error, Result};
use crate::model::Rational;

/// A named table of string values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Relation {
    pub fn new(name: &str, columns: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self> {
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].contains(c) {
                return Err(Error::format(format!(
                    "relation `{name}` repeats column `{c}`"
                )));
            }
        }
        if let Some(r) = rows.iter().find(|r| r.len() != columns.len()) {
            return Err(Error::format(format!(
                "relation `{name}` has a row of width {} but {} columns",
                r.len(),
                columns.len()
            )));
        }
        Ok(Relation {
            name: name.to_string(),
            columns,
            rows,
        })
    }

    fn positions<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                self.columns
                    .iter()
                    .position(|c| c == n.as_ref())
                    .ok_or_else(|| {
                        Error::domain(format!(
                            "relation `{}` has no column `{}`",
                            self.name,
                            n.as_ref()
                        ))
                    })
            })
            .collect()
    }

    /// Distinct tuples (set semantics).
    pub fn distinct_rows(&self) -> BTreeSet<Vec<String>> {
        self.rows.iter().cloned().collect()
    }
}

/// Relations by name.
pub type Database = HashMap<String, Relation>;

/// Maximum number of distinct `target` values that co-occur with a single
/// `given` value; with no `given` columns, the number of distinct `target`
/// projections. Zero for an empty relation.
pub fn degree_scan<S: AsRef<str>>(relation: &Relation, target: &[S], given: &[S]) -> Result<u64> {
    let t = relation.positions(target)?;
    let g = relation.positions(given)?;
    let mut groups: BTreeMap<Vec<&str>, BTreeSet<Vec<&str>>> = BTreeMap::new();
    for row in &relation.rows {
        let key = g.iter().map(|&i| row[i].as_str()).collect();
        let val = t.iter().map(|&i| row[i].as_str()).collect();
        groups.entry(key).or_default().insert(val);
    }
    Ok(groups.values().map(|s| s.len() as u64).max().unwrap_or(0))
}

/// `log2 degree <= b`, decided exactly: `degree^q <= 2^p` for `b = p/q`.
pub fn fits_log_degree(degree: u64, b: &Rational) -> bool {
    if degree == 0 {
        return true;
    }
    if b.is_negative() {
        return false;
    }
    let p: usize = match b.numer().try_into() {
        Ok(p) => p,
        Err(_) => return true,
    };
    let q: usize = match b.denom().try_into() {
        Ok(q) => q,
        Err(_) => return false,
    };
    num_traits::pow(BigInt::from(degree), q) <= (BigInt::from(1) << p)
}

/// Whether every guard relation meets its degree constraint.
pub fn satisfies(db: &Database, query: &Query, sigma: &GuardedSigma) -> Result<bool> {
    let u = query.universe();
    for e in sigma.entries() {
        let atom = &query.atoms()[e.guard];
        let rel = db.get(&atom.relation).ok_or_else(|| {
            Error::domain(format!("database has no relation `{}`", atom.relation))
        })?;
        let names = |s: crate::model::VarSet| s.iter().map(|i| u.name(i)).collect::<Vec<_>>();
        let deg = degree_scan(
            rel,
            &names(e.conditional.target),
            &names(e.conditional.given),
        )?;
        if !fits_log_degree(deg, &e.log_degree) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Output size of the full join, by backtracking over the atoms.
pub fn join_size(db: &Database, query: &Query) -> Result<u64> {
    let u = query.universe();
    let mut tables = Vec::new();
    for atom in query.atoms() {
        let rel = db.get(&atom.relation).ok_or_else(|| {
            Error::domain(format!("database has no relation `{}`", atom.relation))
        })?;
        let vars: Vec<usize> = atom.schema.iter().collect();
        let names: Vec<&str> = vars.iter().map(|&i| u.name(i)).collect();
        if rel.columns.len() != names.len() {
            return Err(Error::domain(format!(
                "relation `{}` has {} columns, atom has {} variables",
                atom.relation,
                rel.columns.len(),
                names.len()
            )));
        }
        let pos = rel.positions(&names)?;
        let rows: BTreeSet<Vec<String>> = rel
            .rows
            .iter()
            .map(|r| pos.iter().map(|&i| r[i].clone()).collect())
            .collect();
        tables.push((vars, rows));
    }
    let mut assignment: Vec<Option<String>> = vec![None; u.len()];
    Ok(extend(&tables, 0, &mut assignment))
}

fn extend(
    tables: &[(Vec<usize>, BTreeSet<Vec<String>>)],
    depth: usize,
    assignment: &mut Vec<Option<String>>,
) -> u64 {
    let Some((vars, rows)) = tables.get(depth) else {
        return 1;
    };
    let mut total = 0;
    for row in rows {
        let consistent = vars
            .iter()
            .zip(row)
            .all(|(&v, x)| assignment[v].as_ref().is_none_or(|y| y == x));
        if !consistent {
            continue;
        }
        let fresh: Vec<usize> = vars
            .iter()
            .copied()
            .filter(|&v| assignment[v].is_none())
            .collect();
        for (&v, x) in vars.iter().zip(row) {
            if assignment[v].is_none() {
                assignment[v] = Some(x.clone());
            }
        }
        total += extend(tables, depth + 1, assignment);
        for v in fresh {
            assignment[v] = None;
        }
    }
    total
}
