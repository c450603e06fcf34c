use kdiff::bq::zero_identity;
use kdiff::taut::{Evaluator, Psi};
use kdiff::validate;
use num_traits::Zero;
use proptest::prelude::*;

/// k and leg orders of a connected genus-zero stratum with n legs.
fn stratum(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (i64, Vec<i64>)> {
    (1i64..=4, n).prop_flat_map(|(k, n)| {
        prop::collection::vec(-2 * k..=k, n - 1).prop_filter_map("last order out of range", move |mut v| {
            let last = -2 * k - v.iter().sum::<i64>();
            (-3 * k..=2 * k).contains(&last).then(|| {
                v.push(last);
                (k, v)
            })
        })
    })
}

/// Ordered positive 5-tuples with sum 2k.
fn weights() -> impl Strategy<Value = (i64, [i64; 5])> {
    (3i64..=20).prop_flat_map(|k| {
        prop::collection::vec(1i64..2 * k, 4).prop_filter_map("sum too large", move |v| {
            let last = 2 * k - v.iter().sum::<i64>();
            (last >= 1).then(|| (k, [v[0], v[1], v[2], v[3], last]))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn zero_identity_holds((k, a) in weights()) {
        prop_assert!(zero_identity(k, a).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dimension_is_invariant_under_relabeling(
        (k, original, shuffled) in stratum(3..=6).prop_flat_map(|(k, v)| (Just(k), Just(v.clone()), Just(v).prop_shuffle()))
    ) {
        let a = validate(k, std::slice::from_ref(&original)).unwrap();
        let b = validate(k, &[shuffled]).unwrap();
        prop_assert_eq!(a.dimension().unwrap(), b.dimension().unwrap());
        let split = validate(k, &[original.clone(), vec![0, -k, -k]]).unwrap();
        let swapped = validate(k, &[vec![0, -k, -k], original]).unwrap();
        prop_assert_eq!(split.dimension().unwrap(), swapped.dimension().unwrap());
    }

    #[test]
    fn level_dimensions_sum_to_codimension((k, orders) in stratum(4..=5)) {
        let spec = validate(k, &[orders]).unwrap();
        let d = spec.dimension().unwrap();
        let ev = Evaluator::new();
        for depth in 1..=d as usize {
            for g in ev.graphs(&spec, depth, false).unwrap().iter() {
                let dims = g.level_dimensions(&spec).unwrap();
                prop_assert_eq!(dims.iter().sum::<i64>(), d - depth as i64, "{}", g.encode());
            }
        }
    }

    #[test]
    fn stabilizer_identity_on_random_strata((k, orders) in stratum(4..=5)) {
        let spec = validate(k, &[orders]).unwrap();
        let ev = Evaluator::new();
        for depth in 1..=spec.dimension().unwrap() as usize {
            for g in ev.graphs(&spec, depth, depth == 1).unwrap().iter() {
                for c in ev.covers(g) {
                    let (lhs, rhs) = c.stabilizer_identity();
                    prop_assert_eq!(lhs, rhs, "{}", c.encode());
                }
            }
        }
    }

    #[test]
    fn zeta_integrals_do_not_depend_on_the_leg((k, orders) in stratum(4..=5)) {
        let spec = validate(k, &[orders]).unwrap();
        let d = spec.dimension().unwrap() as u32;
        let reference = Evaluator::new().eval_via_leg(&spec, d, &Psi::new(), 1).unwrap();
        for i in spec.leg_ids() {
            prop_assert_eq!(Evaluator::new().eval_via_leg(&spec, d, &Psi::new(), i).unwrap(), reference.clone(), "leg {}", i);
        }
    }

    #[test]
    fn memo_is_transparent((k, orders) in stratum(4..=5)) {
        let spec = validate(k, &[orders]).unwrap();
        let d = spec.dimension().unwrap() as u32;
        let memo = Evaluator::new();
        let first = memo.eval(&spec, d, &Psi::new()).unwrap();
        let again = memo.eval(&spec, d, &Psi::new()).unwrap();
        let plain = Evaluator::new().without_memo().eval(&spec, d, &Psi::new()).unwrap();
        prop_assert_eq!(&first, &again);
        prop_assert_eq!(first, plain);
    }
}
