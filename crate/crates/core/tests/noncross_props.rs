use std::collections::BTreeSet;

use pathalg::noncross::*;
use proptest::prelude::*;

#[test]
fn partition_and_complement_sizes_sum_to_n_plus_one() {
    for n in 1..=7 {
        for p in enumerate_nc(n) {
            assert_eq!(p.block_count() + kreweras(&p).block_count(), n + 1, "{p}");
        }
    }
}

#[test]
fn double_bijection_is_onto_pairings() {
    for n in 1..=6 {
        let images: BTreeSet<String> = enumerate_nc(n).iter().map(|p| double_bijection(p).to_string()).collect();
        let pairings: BTreeSet<String> = enumerate_tl(2 * n).iter().map(|t| t.to_string()).collect();
        assert_eq!(images.len(), catalan(n) as usize, "not injective at n={n}");
        assert_eq!(images, pairings);
    }
}

fn nc_pair() -> impl Strategy<Value = (Partition, Partition)> {
    (1usize..=6, any::<u64>(), any::<u64>()).prop_map(|(n, a, b)| {
        let all = enumerate_nc(n);
        let p = all[(a % all.len() as u64) as usize].clone();
        let above: Vec<&Partition> = all.iter().filter(|t| p.refines(t)).collect();
        let t = above[(b % above.len() as u64) as usize].clone();
        (p, t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mobius_sums_to_delta_over_intervals((p, t) in nc_pair()) {
        let all = enumerate_nc(p.size());
        let total: i64 = all
            .iter()
            .filter(|s| p.refines(s) && s.refines(&t))
            .map(|s| mobius_nc(s, &t).unwrap())
            .sum();
        prop_assert_eq!(total, i64::from(p == t));
    }

    #[test]
    fn complement_twice_is_a_rotation((p, _) in nc_pair()) {
        // K∘K is the shift i ↦ i − 1, that is n − 1 forward rotations.
        let mut shifted = p.clone();
        for _ in 1..p.size() {
            shifted = shifted.rotate();
        }
        prop_assert_eq!(kreweras(&kreweras(&p)), shifted);
    }

    #[test]
    fn complement_is_order_reversing((p, t) in nc_pair()) {
        prop_assert!(kreweras(&t).refines(&kreweras(&p)));
    }

    #[test]
    fn extremes_bound_every_partition((p, _) in nc_pair()) {
        prop_assert!(Partition::singletons(p.size()).refines(&p));
        prop_assert!(p.refines(&Partition::full(p.size())));
        prop_assert!(p.is_noncrossing());
    }
}
