mod common;

use entroplex::model::set_representation;
use entroplex::validity::{
    a_reduction, brute_force_monotone, check_modular, check_monotone_fixpoint, check_monotone_lp,
    check_polymatroid, check_simple_sigma, check_step, fixpoint_run, is_simple_form,
};
use entroplex::{check, rat, InequalityExpr, Semantics, VarSet, Verdict};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Witnesses are negative and certificates add up to the input.
fn assert_sound(expr: &InequalityExpr, v: &Verdict, separable: bool) -> Result<(), TestCaseError> {
    match v {
        Verdict::Invalid(Some(w)) => {
            prop_assert!(w.is_well_formed(expr.universe()), "{:?}", w);
            prop_assert!(w.evaluate(expr) < rat(0), "witness {:?} is not negative", w);
        }
        Verdict::Valid(Some(d)) => {
            prop_assert_eq!(&d.recombine(expr.universe()).unwrap(), expr);
            if separable {
                prop_assert!(d.is_separable());
            }
        }
        _ => {}
    }
    Ok(())
}

/// Random inequality whose right-hand sets are singletons or the full set.
fn random_simple_form(r: &mut ChaCha8Rng, n: usize) -> InequalityExpr {
    let u = common::universe(n);
    let mut e = InequalityExpr::zero(&u);
    for _ in 0..r.gen_range(1..=6) {
        let s = VarSet::from_bits(r.gen_range(1..1u64 << n));
        e.add_term(s, rat(r.gen_range(1..=3))).unwrap();
    }
    for _ in 0..r.gen_range(1..=4) {
        let s = if r.gen_bool(0.3) {
            u.full()
        } else {
            VarSet::singleton(r.gen_range(0..n))
        };
        e.add_term(s, rat(-r.gen_range(1..=3))).unwrap();
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn validity_chain_and_oracles(seed in any::<u64>(), n in 1usize..=4) {
        let e = common::random_inequality(&mut rng(seed), n, 3);
        let mono = check_monotone_lp(&e).unwrap();
        let poly = check_polymatroid(&e).unwrap();
        let step = check_step(&e).unwrap();
        let modular = check_modular(&e);
        prop_assert!(!mono.is_valid() || poly.is_valid());
        prop_assert!(!poly.is_valid() || step.is_valid());
        prop_assert!(!step.is_valid() || modular.is_valid());
        prop_assert_eq!(step.is_valid(), common::step_oracle(&e));
        prop_assert_eq!(modular.is_valid(), common::modular_oracle(&e));
        for v in [&poly, &step, &modular] {
            assert_sound(&e, v, false)?;
        }
    }

    #[test]
    fn monotone_checkers_agree(seed in any::<u64>(), n in 1usize..=4) {
        let e = common::random_inequality(&mut rng(seed), n, 3);
        let truth = common::monotone_oracle(&e);
        let fix = check_monotone_fixpoint(&e).unwrap();
        let lp = check_monotone_lp(&e).unwrap();
        let brute = brute_force_monotone(&e).unwrap();
        prop_assert_eq!(fix.is_valid(), truth);
        prop_assert_eq!(lp.is_valid(), truth);
        prop_assert_eq!(brute.is_none(), truth);
        assert_sound(&e, &fix, true)?;
        assert_sound(&e, &lp, true)?;
    }

    #[test]
    fn fixpoint_iterations_bounded_by_negative_copies(seed in any::<u64>(), n in 1usize..=4) {
        let e = common::random_inequality(&mut rng(seed), n, 3);
        let run = fixpoint_run(&e).unwrap();
        let negatives = set_representation(&e, 100_000).unwrap().negative_total();
        prop_assert!(run.iterations as u64 <= negatives);
    }

    #[test]
    fn a_reduction_characterises_step_validity(seed in any::<u64>(), n in 2usize..=5) {
        let e = common::random_inequality(&mut rng(seed), n, 3);
        let by_parts = (0..n).all(|a| {
            let r = a_reduction(&e, a).unwrap();
            r.c_a >= r.d_a && check_step(&r.reduced).unwrap().is_valid()
        });
        prop_assert_eq!(check_step(&e).unwrap().is_valid(), by_parts);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simple_form_classes_coincide(seed in any::<u64>(), n in 1usize..=6) {
        let e = random_simple_form(&mut rng(seed), n);
        prop_assert!(is_simple_form(&e));
        let simple = check_simple_sigma(&e).unwrap();
        let step = check_step(&e).unwrap();
        let poly = check_polymatroid(&e).unwrap();
        prop_assert_eq!(simple.is_valid(), step.is_valid());
        prop_assert_eq!(simple.is_valid(), poly.is_valid());
        prop_assert_eq!(step.is_valid(), common::step_oracle(&e));
        assert_sound(&e, &simple, false)?;
        assert_sound(&e, &poly, false)?;
        let auto = check(&e, Semantics::Auto).unwrap();
        prop_assert_eq!(auto.verdict.is_valid(), simple.is_valid());
    }
}

#[test]
fn dispatch_agrees_with_direct_checkers() {
    let mut r = rng(7);
    for _ in 0..200 {
        let n = r.gen_range(1..=4);
        let e = common::random_inequality(&mut r, n, 2);
        let cases = [
            (Semantics::Modular, check_modular(&e).is_valid()),
            (Semantics::Step, check_step(&e).unwrap().is_valid()),
            (
                Semantics::Polymatroid,
                check_polymatroid(&e).unwrap().is_valid(),
            ),
            (
                Semantics::Monotone,
                check_monotone_lp(&e).unwrap().is_valid(),
            ),
        ];
        for (sem, expected) in cases {
            assert_eq!(
                check(&e, sem).unwrap().verdict.is_valid(),
                expected,
                "{sem:?}"
            );
        }
    }
}
