use std::collections::BTreeSet;

use planar_cumulants::gjdm::{gjdm_count, is_gj_pair};
use planar_cumulants::maps::{enumerate_maps, generates_transitive};
use planar_cumulants::perm::{NumericalPartition, Permutation};
use proptest::prelude::*;

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn sized_pair(max: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (1..=max).prop_flat_map(|n| (permutation(n), permutation(n)))
}

proptest! {
    #[test]
    fn composition_is_right_to_left((p, q) in sized_pair(9)) {
        let pq = p.compose(&q).unwrap();
        for i in 0..p.n() {
            prop_assert_eq!(pq.image(i), p.image(q.image(i)));
        }
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert_eq!(pq.inverse(), q.inverse().compose(&p.inverse()).unwrap());
    }

    #[test]
    fn cycle_notation_round_trips(p in (1usize..=9).prop_flat_map(permutation)) {
        let again = Permutation::parse_cycles(&p.to_cycle_string(), p.n()).unwrap();
        prop_assert_eq!(&again, &p);
        prop_assert_eq!(p.cycle_type().size(), p.n());
    }

    #[test]
    fn riemann_hurwitz((s, t) in sized_pair(8)) {
        prop_assume!(generates_transitive(&s, &t));
        let st = s.compose(&t).unwrap();
        prop_assert!(s.num_orbits() + t.num_orbits() + st.num_orbits() <= s.n() + 2);
    }

    #[test]
    fn strike_skips_removed_points(
        (p, mask) in (2usize..=9).prop_flat_map(|n| (permutation(n), proptest::collection::vec(any::<bool>(), n)))
    ) {
        let removed: BTreeSet<usize> = (0..p.n()).filter(|&i| mask[i]).collect();
        let struck = p.strike(&removed);
        for &label in struck.labels() {
            let mut j = p.image(label);
            while removed.contains(&j) {
                j = p.image(j);
            }
            prop_assert_eq!(struck.image(label), Some(j));
        }
        let kept: Vec<usize> = (0..p.n()).filter(|i| !removed.contains(i)).collect();
        prop_assert_eq!(struck.labels(), &kept[..]);
    }

    #[test]
    fn gj_pairs_are_conjugation_invariant(
        (s, t, rho) in (1usize..=6).prop_flat_map(|n| (permutation(n), permutation(n), permutation(n)))
    ) {
        let a = s.conjugate_by(&rho).unwrap();
        let b = t.conjugate_by(&rho).unwrap();
        prop_assert_eq!(is_gj_pair(&s, &t), is_gj_pair(&a, &b));
        prop_assert_eq!(a.cycle_type(), s.cycle_type());
    }
}

#[test]
fn counts_depend_only_on_cycle_type() {
    let rho = Permutation::parse_cycles("(1,5,2)(3,6)", 6).unwrap();
    for lambda in NumericalPartition::all(6) {
        let theta = lambda.representative();
        let conj = theta.conjugate_by(&rho).unwrap();
        assert_eq!(gjdm_count(&theta), gjdm_count(&conj), "{lambda}");
        assert_eq!(enumerate_maps(&theta).len(), enumerate_maps(&conj).len(), "{lambda}");
    }
}

#[test]
fn classes_are_counted_by_partition_numbers() {
    let counts: Vec<usize> = (1..=8).map(|n| NumericalPartition::all(n).len()).collect();
    assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
}
