//! Readers for constraint files, CSV data, function tables and reduction
//! instances.
//!
//! Constraint files are line oriented with `#` comments:
//!
//! ```text
//! query Q(A,B,C) = R(A,B), S(B,C), T(A,C)
//! logdeg R (B | A) <= 1      # rational log-degree
//! deg S (C | B) <= 4         # power of two, read as log-degree 2
//! card T <= 8                # whole-relation cardinality
//! logcard T <= 3/2
//! logdeg (C) <= 2            # guard inferred
//! ```

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::bounds::{Atom, Conditional, GuardedSigma, Query, Relation};
use crate::error::{Error, Result};
use crate::function::{JointDistribution, SetFunction};
use crate::model::{
    format_rational, is_identifier, parse_rational, Rational, VarSet, VariableUniverse,
};
use crate::reductions::{Graph, MonSat3Instance, PartitionInstance};

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column: 1,
        message: message.into(),
    }
}

fn name_list(text: &str, line: usize) -> Result<Vec<String>> {
    let names: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    if names.iter().any(|n| !is_identifier(n)) {
        return Err(syntax(line, format!("bad variable list `{text}`")));
    }
    Ok(names)
}

/// `name(a,b,...)` -> (`name`, [`a`, `b`, ...]).
fn call(text: &str, line: usize) -> Result<(String, Vec<String>)> {
    let text = text.trim();
    let open = text
        .find('(')
        .ok_or_else(|| syntax(line, format!("expected `name(vars)`, found `{text}`")))?;
    let inner = text[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| syntax(line, format!("missing `)` in `{text}`")))?;
    let name = text[..open].trim();
    if !is_identifier(name) {
        return Err(syntax(line, format!("bad name `{name}`")));
    }
    Ok((name.to_string(), name_list(inner, line)?))
}

/// Splits the top-level comma-separated atoms of a query body.
fn atoms(body: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0, 0);
    for (i, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&body[start..]);
    out
}

/// Exact `log2` of a positive power of two.
pub fn log2_power_of_two(text: &str) -> Result<Rational> {
    let v: u128 = text
        .trim()
        .parse()
        .map_err(|_| Error::domain(format!("`{text}` is not a positive integer")))?;
    if v == 0 || !v.is_power_of_two() {
        return Err(Error::domain(format!(
            "degree bound {v} is not a power of two; use a log-degree instead"
        )));
    }
    Ok(Rational::from_integer(v.trailing_zeros().into()))
}

/// Parses a constraint file into a query and its guarded constraints.
pub fn parse_constraints(text: &str) -> Result<(Query, GuardedSigma)> {
    let mut query: Option<Query> = None;
    let mut items = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = strip_comment(raw);
        if l.is_empty() {
            continue;
        }
        let (keyword, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        if keyword == "query" {
            if query.is_some() {
                return Err(syntax(line, "second `query` line"));
            }
            let (head, body) = rest
                .split_once('=')
                .ok_or_else(|| syntax(line, "expected `query Q(vars) = R(vars), ...`"))?;
            let (name, vars) = call(head, line)?;
            let universe = VariableUniverse::new(vars)?;
            let mut list = Vec::new();
            for a in atoms(body) {
                let (relation, vars) = call(a, line)?;
                let schema = universe.set(&vars).map_err(|_| {
                    syntax(
                        line,
                        format!("atom `{relation}` uses variables outside the head"),
                    )
                })?;
                list.push(Atom { relation, schema });
            }
            query = Some(Query::new(&name, &universe, list)?);
            continue;
        }
        let q = query
            .as_ref()
            .ok_or_else(|| syntax(line, "constraints must follow the `query` line"))?;
        let (lhs, bound) = rest
            .split_once("<=")
            .ok_or_else(|| syntax(line, "expected `<= value`"))?;
        let bound = bound.trim();
        let guard = |name: &str| {
            q.atom_index(name)
                .ok_or_else(|| syntax(line, format!("unknown relation `{name}`")))
        };
        match keyword {
            "card" | "logcard" => {
                let g = guard(lhs.trim())?;
                let b = if keyword == "card" {
                    log2_power_of_two(bound)?
                } else {
                    parse_rational(bound)?
                };
                items.push((Conditional::cardinality(q.atoms()[g].schema)?, Some(g), b));
            }
            "deg" | "logdeg" => {
                let lhs = lhs.trim();
                let open = lhs
                    .find('(')
                    .ok_or_else(|| syntax(line, "expected `(V | U)`"))?;
                let rel = lhs[..open].trim();
                let g = if rel.is_empty() {
                    None
                } else {
                    Some(guard(rel)?)
                };
                let inner = lhs[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| syntax(line, "missing `)`"))?;
                let (v, u) = inner.split_once('|').unwrap_or((inner, ""));
                let set = |s: &str| -> Result<VarSet> {
                    if s.trim().is_empty() {
                        return Ok(VarSet::EMPTY);
                    }
                    let names = name_list(s, line)?;
                    q.universe().set(&names).map_err(|_| {
                        Error::UnknownIdentifier(
                            names
                                .iter()
                                .find(|n| q.universe().index_of(n).is_none())
                                .cloned()
                                .unwrap_or_default(),
                        )
                    })
                };
                let b = if keyword == "deg" {
                    log2_power_of_two(bound)?
                } else {
                    parse_rational(bound)?
                };
                items.push((Conditional::new(set(v)?, set(u)?)?, g, b));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let q = query.ok_or_else(|| syntax(1, "missing `query` line"))?;
    let sigma = GuardedSigma::with_inferred_guards(&q, items)?;
    Ok((q, sigma))
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn csv_error(e: csv::Error) -> Error {
    Error::format(e.to_string())
}

/// Relation from CSV text whose header names the columns.
pub fn parse_relation_csv(name: &str, text: &str) -> Result<Relation> {
    let mut rdr = csv_reader(text);
    let columns: Vec<String> = rdr
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        rows.push(rec.map_err(csv_error)?.iter().map(str::to_string).collect());
    }
    Relation::new(name, columns, rows)
}

/// Distribution from CSV text: one column per variable plus `prob`.
pub fn parse_distribution_csv(text: &str) -> Result<JointDistribution> {
    let mut rdr = csv_reader(text);
    let header: Vec<String> = rdr
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    let p = header
        .iter()
        .position(|h| h == "prob")
        .ok_or_else(|| Error::format("distribution CSV needs a `prob` column"))?;
    let vars: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != p)
        .map(|(_, h)| h.clone())
        .collect();
    let schema = VariableUniverse::new(vars)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let prob = parse_rational(&rec[p])?;
        let values = rec
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != p)
            .map(|(_, v)| v.to_string())
            .collect();
        rows.push((values, prob));
    }
    JointDistribution::new(&schema, rows)
}

/// Function table: lines `h(A,B) = 1/2`, optional `vars A,B;` header;
/// unlisted sets are 0. Without a header the universe is the sorted set of
/// mentioned variables.
pub fn parse_function_table(text: &str) -> Result<SetFunction> {
    let mut declared: Option<Vec<String>> = None;
    let mut entries = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = strip_comment(raw);
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix("vars ") {
            let list = rest.trim().trim_end_matches(';');
            declared = Some(name_list(list, line)?);
            continue;
        }
        let (lhs, value) = l
            .split_once('=')
            .ok_or_else(|| syntax(line, "expected `h(vars) = value`"))?;
        let lhs = lhs.trim();
        let vars = if lhs == "h()" {
            Vec::new()
        } else {
            let (name, vars) = call(lhs, line)?;
            if name != "h" {
                return Err(syntax(line, format!("expected `h(...)`, found `{name}`")));
            }
            vars
        };
        entries.push((vars, parse_rational(value.trim())?, line));
    }
    let universe = match declared {
        Some(d) => VariableUniverse::new(d)?,
        None => {
            let names: BTreeSet<&String> = entries.iter().flat_map(|(v, _, _)| v).collect();
            VariableUniverse::new(names.into_iter().cloned())?
        }
    };
    let mut values = vec![Rational::zero(); universe.subset_count()];
    let mut seen = vec![false; universe.subset_count()];
    for (vars, value, line) in entries {
        let set = universe.set(&vars)?;
        let idx = set.bits() as usize;
        if seen[idx] {
            return Err(syntax(line, "set listed twice"));
        }
        seen[idx] = true;
        values[idx] = value;
    }
    SetFunction::from_values(&universe, values)
}

/// Inverse of [`parse_function_table`], listing every non-empty set.
pub fn print_function_table(h: &SetFunction) -> String {
    let u = h.universe();
    let mut out = format!("vars {};\n", u.names().join(", "));
    for bits in 1..u.subset_count() as u64 {
        let s = VarSet::from_bits(bits);
        let names: Vec<&str> = s.iter().map(|i| u.name(i)).collect();
        out.push_str(&format!(
            "h({}) = {}\n",
            names.join(","),
            format_rational(h.value(s))
        ));
    }
    out
}

/// Monotone 3-SAT instance: `p mon3sat <vars> <clauses>` then one clause
/// per line, `+ i j k` (needs a true variable) or `- i j k` (needs a false
/// one), with 1-based indices and an optional trailing `0`. `c` lines are
/// comments. Variables are named `x1`, `x2`, ...
pub fn parse_monsat(text: &str) -> Result<MonSat3Instance> {
    let mut header: Option<(usize, usize)> = None;
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = strip_comment(raw);
        let fields: Vec<&str> = l.split_whitespace().collect();
        match fields.first() {
            None | Some(&"c") => continue,
            Some(&"p") => {
                let nums: Vec<usize> = fields[1..].iter().filter_map(|f| f.parse().ok()).collect();
                if nums.len() != 2 {
                    return Err(syntax(line, "expected `p mon3sat <vars> <clauses>`"));
                }
                header = Some((nums[0], nums[1]));
            }
            Some(&sign) if sign == "+" || sign == "-" => {
                let (n, _) = header.ok_or_else(|| syntax(line, "clause before the `p` line"))?;
                let mut idx: Vec<usize> = Vec::new();
                for f in &fields[1..] {
                    let v: usize = f
                        .parse()
                        .map_err(|_| syntax(line, format!("bad variable index `{f}`")))?;
                    if v == 0 {
                        break;
                    }
                    if v > n {
                        return Err(syntax(line, format!("variable {v} exceeds declared {n}")));
                    }
                    idx.push(v - 1);
                }
                let clause: [usize; 3] = idx
                    .try_into()
                    .map_err(|_| syntax(line, "clauses have exactly three variables"))?;
                if sign == "+" {
                    pos.push(clause);
                } else {
                    neg.push(clause);
                }
            }
            Some(other) => return Err(syntax(line, format!("unexpected `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| syntax(1, "missing `p` line"))?;
    if pos.len() + neg.len() != m {
        return Err(Error::format(format!(
            "header declares {m} clauses, found {}",
            pos.len() + neg.len()
        )));
    }
    MonSat3Instance::new((1..=n).map(|i| format!("x{i}")).collect(), pos, neg)
}

/// Edge list: each line is `A B` (an edge) or `A` (a vertex). Vertices are
/// numbered by first appearance.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut vertices: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let index = |name: &str, vertices: &mut Vec<String>| {
        vertices.iter().position(|v| v == name).unwrap_or_else(|| {
            vertices.push(name.to_string());
            vertices.len() - 1
        })
    };
    for (k, raw) in text.lines().enumerate() {
        let fields: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        match fields.as_slice() {
            [] => {}
            [a] => {
                index(a, &mut vertices);
            }
            [a, b] => {
                let i = index(a, &mut vertices);
                let j = index(b, &mut vertices);
                edges.push((i, j));
            }
            _ => return Err(syntax(k + 1, "expected `A B` or `A`")),
        }
    }
    Graph::new(vertices, edges)
}

/// Whitespace-separated positive integers.
pub fn parse_partition(text: &str) -> Result<PartitionInstance> {
    let items = text
        .lines()
        .flat_map(|l| {
            strip_comment(l)
                .split_whitespace()
                .map(str::to_string)
                .collect::<Vec<_>>()
        })
        .map(|f| {
            f.parse::<u64>()
                .map_err(|_| Error::format(format!("`{f}` is not a positive integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    PartitionInstance::new(items)
}

/// Parses `V|U` or `V` (comma-separated names on each side).
pub fn parse_conditional_names(text: &str) -> Result<(Vec<String>, Vec<String>)> {
    let (v, u) = text.split_once('|').unwrap_or((text, ""));
    let target = name_list(v, 1)?;
    let given = if u.trim().is_empty() {
        Vec::new()
    } else {
        name_list(u, 1)?
    };
    Ok((target, given))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::logbound_simple_entropic;
    use crate::function::entropic_from_distribution;
    use crate::model::{rat, ratio};

    #[test]
    fn constraint_file() {
        let text = "# triangle\nquery Q(A,B,C) = R(A,B), S(B,C), T(A,C)\ncard R <= 2\nlogcard S <= 1\nlogdeg (A, C) <= 1\n";
        let (q, s) = parse_constraints(text).unwrap();
        assert_eq!(q.atoms().len(), 3);
        assert_eq!(s.entries()[2].guard, 2);
        assert_eq!(s.log_degrees(), vec![rat(1); 3]);
        assert_eq!(
            logbound_simple_entropic(&q, &s).unwrap().value,
            Some(ratio(3, 2))
        );
    }

    #[test]
    fn degree_lines() {
        let text = "query Q(A,B) = R(A,B)\nlogdeg R (B | A) <= 3/2\ndeg R (A,B) <= 16\n";
        let (q, s) = parse_constraints(text).unwrap();
        let u = q.universe();
        assert_eq!(s.entries()[0].conditional.given, u.set(&["A"]).unwrap());
        assert_eq!(s.entries()[0].log_degree, ratio(3, 2));
        assert_eq!(s.entries()[1].log_degree, rat(4));
        assert!(parse_constraints("query Q(A) = R(A)\ncard R <= 6\n").is_err());
        assert!(parse_constraints("card R <= 4\n").is_err());
        assert!(parse_constraints("query Q(A) = R(A)\nlogdeg R (Z) <= 1\n").is_err());
    }

    #[test]
    fn distribution_and_entropy() {
        let text = "A,B,C,prob\n0,0,0,1/4\n0,1,1,1/4\n1,0,1,1/4\n1,1,0,1/4\n";
        let d = parse_distribution_csv(text).unwrap();
        let h = entropic_from_distribution(&d).unwrap();
        assert!((h.value(d.schema().full()) - 2.0).abs() < 1e-12);
        assert!(parse_distribution_csv("A,B\n0,1\n").is_err());
    }

    #[test]
    fn function_table_round_trip() {
        let h = parse_function_table("vars X, Y;\nh(X) = 1\nh(X,Y) = 3/2\n").unwrap();
        assert_eq!(h.value(h.universe().set(&["Y"]).unwrap()), &rat(0));
        let text = print_function_table(&h);
        assert_eq!(parse_function_table(&text).unwrap(), h);
    }

    #[test]
    fn instances() {
        let phi = parse_monsat("c two clauses\np mon3sat 4 2\n+ 1 2 3 0\n- 1 2 4\n").unwrap();
        assert_eq!(phi.positive(), &[[0, 1, 2]]);
        assert_eq!(phi.negative(), &[[0, 1, 3]]);
        assert!(parse_monsat("p mon3sat 3 1\n+ 1 2\n").is_err());
        let g = parse_graph("A B\nB C\nD\n").unwrap();
        assert_eq!(g.vertices().len(), 4);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(parse_partition("1 1\n2").unwrap().items(), &[1, 1, 2]);
        assert!(parse_partition("1 2").is_err());
    }

    #[test]
    fn relation_csv() {
        let r = parse_relation_csv("R", "A,B\n1,1\n1,2\n2,1\n").unwrap();
        assert_eq!(r.rows.len(), 3);
        assert_eq!(
            parse_conditional_names("B|A").unwrap(),
            (vec!["B".into()], vec!["A".into()])
        );
    }
}
