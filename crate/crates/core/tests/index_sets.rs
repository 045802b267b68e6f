use hyperorbit::index_sets::{
    difference_set, estimate_densities, make_prescribed_density_set, IndexSet, IntervalUnion,
    PeriodicSet,
};
use num_bigint::BigUint;
use num_rational::Ratio;
use proptest::prelude::*;

fn periodic() -> impl Strategy<Value = PeriodicSet> {
    (1u64..40, 0u64..200).prop_flat_map(|(period, start)| {
        proptest::collection::btree_set(0..period, 1..=period as usize).prop_map(move |r| {
            let residues: Vec<u64> = r.into_iter().collect();
            PeriodicSet::new(period, &residues, start).unwrap()
        })
    })
}

fn intervals() -> impl Strategy<Value = IntervalUnion> {
    proptest::collection::vec((0u64..20_000, 0u64..500), 0..30).prop_map(|v| {
        IntervalUnion::from_u64(v.into_iter().map(|(a, len)| (a, a + len)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chain_for_periodic_sets(a in periodic()) {
        let r = estimate_densities(&a, 20_000, &[50, 400]).unwrap();
        prop_assert!(r.chain_holds());
    }

    #[test]
    fn chain_for_interval_unions(a in intervals()) {
        let r = estimate_densities(&a, 20_000, &[50, 400]).unwrap();
        prop_assert!(r.chain_holds());
    }

    // every window of length s holds between floor and ceil of s·|R|/q
    #[test]
    fn periodic_density_within_one_over_s(a in periodic()) {
        let s = 400u64;
        let r = estimate_densities(&a, 20_000, &[s]).unwrap();
        let rho = Ratio::new(a.residues().len() as u64, a.period());
        let slack = Ratio::new(1, s) + Ratio::new(a.period(), s);
        let (lo, hi) = (rho - slack.min(rho), rho + slack);
        prop_assert!(r.upper_banach <= hi);
        if a.start() == 0 {
            prop_assert!(r.lower_banach >= lo);
        }
        prop_assert!(r.upper_density <= hi);
    }

    #[test]
    fn count_matches_enumeration(a in periodic(), lo in 0u64..5000, len in 0u64..3000) {
        let (x, y) = (BigUint::from(lo), BigUint::from(lo + len));
        let listed = a.enumerate(&x, &y);
        prop_assert_eq!(a.count_window(&x, &y), BigUint::from(listed.len()));
        let brute: Vec<BigUint> = (lo..=lo + len)
            .filter(|&n| a.contains_u64(n))
            .map(BigUint::from)
            .collect();
        prop_assert_eq!(listed, brute);
    }

    #[test]
    fn interval_count_matches_scan(a in intervals(), lo in 0u64..20_000, len in 0u64..2000) {
        let brute = (lo..=lo + len).filter(|&n| a.contains_u64(n)).count();
        prop_assert_eq!(a.members_u64(lo, lo + len).len(), brute);
        prop_assert_eq!(
            a.count_window(&BigUint::from(lo), &BigUint::from(lo + len)),
            BigUint::from(brute)
        );
    }

    #[test]
    fn difference_set_holds_zero(a in periodic()) {
        let d = difference_set(&a, 2000);
        prop_assert!(d.contains_u64(0));
    }
}

#[test]
fn prescribed_chain_and_targets() {
    let targets = [
        Ratio::new(0, 1),
        Ratio::new(1, 5),
        Ratio::new(1, 2),
        Ratio::new(1, 1),
    ];
    let a = make_prescribed_density_set(targets[0], targets[1], targets[2], targets[3]).unwrap();
    let r = estimate_densities(&a, a.advertised_horizon(), &[a.advertised_window()]).unwrap();
    assert!(r.chain_holds());
    let got = [r.lower_banach, r.lower_density, r.upper_density, r.upper_banach];
    for (g, t) in got.iter().zip(targets) {
        let diff = if *g > t { *g - t } else { t - *g };
        assert!(diff <= Ratio::new(1, 20), "{g} vs {t}");
    }
}

#[test]
fn rejects_unordered_targets() {
    let r = |n, d| Ratio::new(n, d);
    assert!(make_prescribed_density_set(r(1, 2), r(1, 4), r(1, 2), r(1, 1)).is_err());
}
