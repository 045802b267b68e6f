use hyperorbit::sequence_spaces::{ball_contains, SpaceSpec, SparseVec};
use hyperorbit::weighted_shifts::{ShiftOperator, WeightSequence};
use proptest::prelude::*;

fn space() -> impl Strategy<Value = SpaceSpec> {
    prop_oneof![
        Just(SpaceSpec::l2()),
        Just(SpaceSpec::lp(1.0).unwrap()),
        Just(SpaceSpec::lp(3.5).unwrap()),
        Just(SpaceSpec::c0()),
    ]
}

fn vec_in(space: SpaceSpec) -> impl Strategy<Value = SparseVec> {
    proptest::collection::vec((0i64..40, -8.0f64..8.0), 0..10)
        .prop_map(move |e| SparseVec::from_entries(space, e).unwrap())
}

fn pair() -> impl Strategy<Value = (SparseVec, SparseVec)> {
    space().prop_flat_map(|s| (vec_in(s), vec_in(s)))
}

fn weights() -> impl Strategy<Value = WeightSequence> {
    prop_oneof![
        (0.5f64..3.0).prop_map(|c| WeightSequence::constant(c).unwrap()),
        (1.0f64..4.0).prop_map(|p| WeightSequence::ratio_power(p).unwrap()),
        Just(WeightSequence::counterexample()),
    ]
}

fn close(a: &SparseVec, b: &SparseVec) -> bool {
    let scale = 1.0 + a.norm().max(b.norm());
    a.distance(b).unwrap() <= 1e-9 * scale
}

proptest! {
    #[test]
    fn triangle_inequality((x, y) in pair()) {
        prop_assert!(x.add(&y).unwrap().norm() <= x.norm() + y.norm() + 1e-9);
    }

    #[test]
    fn homogeneity((x, _) in pair(), l in -5.0f64..5.0) {
        let lhs = x.scale(l).norm();
        prop_assert!((lhs - l.abs() * x.norm()).abs() <= 1e-9 * (1.0 + lhs));
    }

    #[test]
    fn ball_translation((c, v) in pair(), shift in -3.0f64..3.0, r in 0.1f64..20.0) {
        let t = SparseVec::from_entries(c.space(), [(2, shift), (7, -shift)]).unwrap();
        let moved = ball_contains(&c.add(&t).unwrap(), r, &v.add(&t).unwrap()).unwrap();
        let d = c.distance(&v).unwrap();
        // skip points on the boundary where rounding decides
        prop_assume!((d - r).abs() > 1e-9);
        prop_assert_eq!(moved, ball_contains(&c, r, &v).unwrap());
    }

    #[test]
    fn shift_is_linear(w in weights(), (x, y) in pair(), a in -2.0f64..2.0, n in 0u64..30) {
        let t = ShiftOperator::new(w, x.space());
        let lhs = t.apply_backward(&x.axpy(a, &y).unwrap(), n).unwrap();
        let rhs = t
            .apply_backward(&x, n)
            .unwrap()
            .axpy(a, &t.apply_backward(&y, n).unwrap())
            .unwrap();
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn semigroup(w in weights(), (x, _) in pair(), m in 0u64..20, n in 0u64..20) {
        let t = ShiftOperator::new(w, x.space());
        let twice = t.apply_backward(&t.apply_backward(&x, n).unwrap(), m).unwrap();
        prop_assert!(close(&twice, &t.apply_backward(&x, m + n).unwrap()));
    }

    #[test]
    fn right_inverse_round_trip(w in weights(), (x, _) in pair(), n in 0u64..30) {
        let t = ShiftOperator::new(w, x.space());
        let s = t.apply_right_inverse(&x, n).unwrap();
        prop_assert!(close(&t.apply_backward(&s, n).unwrap(), &x));
    }

    #[test]
    fn log_norm_matches_direct(w in weights(), (x, _) in pair(), n in 0u64..30) {
        prop_assume!(!x.is_zero());
        let t = ShiftOperator::new(w, x.space());
        let direct = t.apply_right_inverse(&x, n).unwrap().norm().log2();
        prop_assert!((t.log2_norm_right_inverse(&x, n) - direct).abs() < 1e-9);
    }
}

#[test]
fn mixed_spaces_are_rejected() {
    let t = ShiftOperator::rolewicz(2.0, SpaceSpec::l2()).unwrap();
    let v = SparseVec::basis(SpaceSpec::c0(), 3).unwrap();
    assert!(t.apply_backward(&v, 1).is_err());
}
