use entroplex::reductions::{
    coloring_oracle, decode_assignment, decode_coloring, decode_split, from_3coloring,
    from_3dmonsat, from_partition, partition_oracle, sat_oracle, Graph, MonSat3Instance,
    PartitionInstance,
};
use entroplex::validity::check_step;
use entroplex::{VarSet, Verdict, Witness};
use proptest::prelude::*;

fn step_witness(v: &Verdict) -> Option<VarSet> {
    match v {
        Verdict::Invalid(Some(Witness::StepFn(s))) => Some(*s),
        Verdict::Invalid(other) => panic!("unexpected witness {other:?}"),
        Verdict::Valid(_) => None,
    }
}

fn clause(n: usize) -> impl Strategy<Value = [usize; 3]> {
    proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 3)
        .prop_shuffle()
        .prop_map(|v| [v[0], v[1], v[2]])
}

fn monsat() -> impl Strategy<Value = MonSat3Instance> {
    (3usize..=8).prop_flat_map(|n| {
        (
            proptest::collection::vec(clause(n), 0..=6),
            proptest::collection::vec(clause(n), 0..=6),
        )
            .prop_filter("needs a clause", |(p, q)| !p.is_empty() || !q.is_empty())
            .prop_map(move |(p, q)| {
                MonSat3Instance::new((1..=n).map(|i| format!("x{i}")).collect(), p, q).unwrap()
            })
    })
}

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            let edges = pairs
                .zip(bits)
                .filter(|(_, b)| *b)
                .map(|(e, _)| e)
                .collect();
            Graph::new((0..n).map(|i| format!("v{i}")).collect(), edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monsat_round_trip(phi in monsat()) {
        let e = from_3dmonsat(&phi).unwrap();
        let v = check_step(&e).unwrap();
        prop_assert_eq!(sat_oracle(&phi).unwrap(), !v.is_valid());
        if let Some(w) = step_witness(&v) {
            let a = decode_assignment(&phi, w);
            let ones = VarSet::from_indices((0..a.len()).filter(|&i| a[i]));
            prop_assert!(phi.satisfied_by(ones));
        }
    }

    #[test]
    fn coloring_round_trip(g in graph()) {
        let e = from_3coloring(&g).unwrap();
        let v = check_step(&e).unwrap();
        prop_assert_eq!(coloring_oracle(&g).unwrap(), !v.is_valid());
        if let Some(w) = step_witness(&v) {
            let colors = decode_coloring(&g, w);
            prop_assert!(colors.is_some_and(|c| g.is_proper(&c)));
        }
    }
}

/// Non-decreasing sequences of length `len` over `1..=max`.
fn multisets(len: usize, max: u64) -> Vec<Vec<u64>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mut prefix in multisets(len - 1, max) {
        let lo = prefix.last().copied().unwrap_or(1);
        for x in lo..=max {
            prefix.push(x);
            out.push(prefix.clone());
            prefix.pop();
        }
    }
    out
}

#[test]
fn partition_round_trip_exhaustive() {
    let mut seen = 0;
    for len in 1..=6 {
        for items in multisets(len, 6) {
            let total: u64 = items.iter().sum();
            let Ok(inst) = PartitionInstance::new(items.clone()) else {
                assert_eq!(total % 2, 1);
                continue;
            };
            seen += 1;
            let e = from_partition(&inst).unwrap();
            assert!(e.two_sided().rhs.iter().all(|(s, _)| s.len() <= 2));
            let v = check_step(&e).unwrap();
            assert_eq!(partition_oracle(&inst).unwrap(), !v.is_valid(), "{items:?}");
            if let Some(w) = step_witness(&v) {
                let (a, b) = decode_split(&inst, w);
                assert_eq!(a.iter().sum::<u64>(), b.iter().sum::<u64>(), "{items:?}");
            }
        }
    }
    assert!(seen > 400);
}

#[test]
fn fano_plane_is_unsatisfiable_and_valid() {
    let lines = vec![
        [0, 1, 2],
        [0, 3, 4],
        [0, 5, 6],
        [1, 3, 5],
        [1, 4, 6],
        [2, 3, 6],
        [2, 4, 5],
    ];
    let phi = MonSat3Instance::new(
        (1..=7).map(|i| format!("x{i}")).collect(),
        lines.clone(),
        lines,
    )
    .unwrap();
    assert!(!sat_oracle(&phi).unwrap());
    assert!(check_step(&from_3dmonsat(&phi).unwrap())
        .unwrap()
        .is_valid());
}
