//! Algebraic identities and the independence characterization on random laws.

use infotopo_core::exec::Sequential;
use infotopo_core::identities::check_identities;
use infotopo_core::info::{general_information, markov_check, mutual_information};
use infotopo_core::oracle::{
    independence_grid_search, make_named, random_distribution, random_product, Family,
};
use infotopo_core::{compute_landscape, JointDistribution, LandscapeOptions, SubsetMask};
use proptest::prelude::*;

fn joint_strategy() -> impl Strategy<Value = JointDistribution> {
    (1usize..=5)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(1u32..=3, n)))
        .prop_flat_map(|(n, bins)| {
            let row = bins.iter().map(|&b| 1..=b).collect::<Vec<_>>();
            (Just(bins), proptest::collection::vec(row, 1..60), Just(n))
        })
        .prop_map(|(bins, rows, _)| JointDistribution::from_counts(bins, rows.into_iter().map(|r| (r, 1))).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn identities_hold(j in joint_strategy()) {
        let r = check_identities(&j).unwrap();
        prop_assert!(r.max() < 1e-9, "{:?}", r);
    }

    #[test]
    fn symmetric_under_relabelling(j in joint_strategy()) {
        let n = j.n();
        let l = compute_landscape(&j, LandscapeOptions::new(n), &Sequential).unwrap();
        // reverse the variable order
        let bins: Vec<u32> = j.bins().iter().rev().copied().collect();
        let rev = JointDistribution::from_counts(bins, j.iter().map(|(a, c)| (a.iter().rev().copied().collect(), c))).unwrap();
        let lr = compute_landscape(&rev, LandscapeOptions::new(n), &Sequential).unwrap();
        for s in SubsetMask::full(n).subsets() {
            let mirrored = SubsetMask::from_indices(&s.iter().map(|i| n - 1 - i).collect::<Vec<_>>()).unwrap();
            prop_assert!((l.information(s) - lr.information(mirrored)).abs() < 1e-9);
        }
    }
}

#[test]
fn products_have_no_interaction() {
    for case in 0..200u64 {
        let n = 2 + (case % 4) as usize;
        let bins: Vec<u32> = (0..n).map(|i| 2 + ((case + i as u64) % 3) as u32).collect();
        let j = random_product(&bins, 3, &[case]).unwrap().to_joint();
        let l = compute_landscape(&j, LandscapeOptions::new(n), &Sequential).unwrap();
        for r in l.records().filter(|r| r.k >= 2) {
            assert!(r.information.abs() < 1e-9, "case {case}: {r:?}");
        }
    }
}

#[test]
fn vanishing_interactions_imply_product_on_a_coarse_grid() {
    let r = independence_grid_search(12, 1e-12, 1e-6).unwrap();
    assert_eq!(r.counterexamples, 0);
    assert!(r.vanishing > 0);
}

#[test]
fn information_is_not_additive() {
    // I(X;(Y,Z)) = I(X;Y) + I(X;Z) fails in general; find a witness
    let (x, y, z) = (SubsetMask::singleton(0), SubsetMask::singleton(1), SubsetMask::singleton(2));
    let e = SubsetMask::EMPTY;
    let witness = (0..50u64).find(|&case| {
        let j = random_distribution(&[2, 2, 2], 9, &[case]).unwrap().to_joint();
        let joint = general_information(&j, &[x, y.union(z)], e).unwrap();
        let split = general_information(&j, &[x, y], e).unwrap() + general_information(&j, &[x, z], e).unwrap();
        (joint - split).abs() > 1e-3
    });
    assert!(witness.is_some());
}

#[test]
fn markov_chains() {
    let copied = make_named(&Family::IdenticalCoins(3)).unwrap().to_joint();
    assert!(markov_check(&copied, &[0, 1, 2], 1e-9).unwrap().holds);
    let parity = make_named(&Family::EvenParity(3)).unwrap().to_joint();
    for order in [[0, 1, 2], [1, 0, 2], [2, 0, 1]] {
        let c = markov_check(&parity, &order, 1e-9).unwrap();
        assert!(!c.holds);
        assert!((c.worst_violation - 1.0).abs() < 1e-12);
    }
    let pair = make_named(&Family::OddParity(2)).unwrap().to_joint();
    assert!(markov_check(&pair, &[1, 0], 1e-9).unwrap().holds);
    assert!(markov_check(&pair, &[0, 0], 1e-9).is_err());
}

#[test]
fn extremal_three_way_values() {
    let full = SubsetMask::full(3);
    let cases = [
        (Family::IdenticalCoins(3), 1.0),
        (Family::OppositeCoins(3), 1.0),
        (Family::EvenParity(3), -1.0),
        (Family::OddParity(3), -1.0),
    ];
    for (family, want) in cases {
        let j = make_named(&family).unwrap().to_joint();
        assert!((mutual_information(&j, full).unwrap() - want).abs() < 1e-12, "{}", family.name());
    }
}
