//! Elemental Shannon inequalities, which generate the polymatroid cone.

use crate::model::VarSet;

/// One elemental inequality `sum coeff * h(S) >= 0` (terms with `S = ∅`
/// omitted).
pub type Elemental = Vec<(VarSet, i32)>;

/// All elemental inequalities over `n` variables:
/// `h(N) - h(N - i) >= 0` for each `i`, and
/// `h(K + i) + h(K + j) - h(K) - h(K + i + j) >= 0` for `i < j`, `K ⊆ N - {i, j}`.
pub fn elemental_inequalities(n: usize) -> Vec<Elemental> {
    let full = VarSet::full(n);
    let mut out = Vec::new();
    for i in 0..n {
        let mut e = vec![(full, 1)];
        let rest = full.without(i);
        if !rest.is_empty() {
            e.push((rest, -1));
        }
        out.push(e);
    }
    for i in 0..n {
        for j in i + 1..n {
            let others = full.without(i).without(j);
            for k in others.subsets() {
                let mut e = vec![(k.with(i), 1), (k.with(j), 1)];
                if !k.is_empty() {
                    e.push((k, -1));
                }
                e.push((k.with(i).with(j), -1));
                out.push(e);
            }
        }
    }
    out
}

/// Number of elemental inequalities: `n + C(n,2) 2^(n-2)`.
pub fn elemental_count(n: usize) -> usize {
    if n < 2 {
        return n;
    }
    n + n * (n - 1) / 2 * (1usize << (n - 2))
}

/// LP column of a non-empty set when `h(∅)` is dropped.
pub(crate) fn column(set: VarSet) -> usize {
    set.bits() as usize - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for n in 0..7 {
            assert_eq!(
                elemental_inequalities(n).len(),
                elemental_count(n),
                "n = {n}"
            );
        }
        assert_eq!(elemental_count(3), 9);
    }

    #[test]
    fn one_variable() {
        assert_eq!(elemental_inequalities(1), vec![vec![(VarSet::full(1), 1)]]);
    }
}
