use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use planar_cumulants::gjdm::{
    antiderivative, color_tree, count_with_green_set, enumerate_dmotz, enumerate_gj, enumerate_gjdm, gj_count,
    increments, is_dmotz, is_motz, j_set, mobile, motz_functions, snip, unsnip, Color,
};
use planar_cumulants::perm::{cycle_cuttings, NumericalPartition, Permutation};
use planar_cumulants::poly::{ratio, rational};

fn classes(n_max: usize) -> impl Iterator<Item = NumericalPartition> {
    (1..=n_max).flat_map(NumericalPartition::all)
}

fn eulerian(n_max: usize) -> impl Iterator<Item = NumericalPartition> {
    (2..=n_max).step_by(2).flat_map(NumericalPartition::all).filter(NumericalPartition::is_eulerian)
}

fn factorial(m: u128) -> u128 {
    (1..=m).product()
}

fn binomial(a: u128, b: u128) -> u128 {
    factorial(a) / (factorial(b) * factorial(a - b))
}

#[test]
fn gj_counts_match_formula() {
    for lambda in classes(7) {
        assert_eq!(enumerate_gj(&lambda.representative()).len() as u128, gj_count(&lambda), "{lambda}");
    }
}

#[test]
fn height_functions_have_bounded_spread() {
    for lambda in classes(6) {
        let theta = lambda.representative();
        let n = theta.n() as i64;
        for sigma in enumerate_gj(&theta) {
            for h in motz_functions(&theta, &sigma, true).unwrap() {
                assert!((0..theta.n()).all(|i| h[sigma.image(i)] == h[i]));
                let spread = h.iter().max().unwrap() - h.iter().min().unwrap();
                let step = increments(&theta, &h).iter().map(|d| d.abs()).max().unwrap();
                assert!(spread <= (n - 1) * step, "{theta} {sigma} {h:?}");
                assert!(spread < n);
            }
        }
    }
}

#[test]
fn motz_sets_are_shift_invariant() {
    for lambda in classes(6) {
        let theta = lambda.representative();
        for sigma in enumerate_gj(&theta) {
            for tilde in [false, true] {
                for h in motz_functions(&theta, &sigma, tilde).unwrap() {
                    for c in -2..=2 {
                        let shifted: Vec<i64> = h.iter().map(|x| x + c).collect();
                        assert!(is_motz(&theta, &sigma, &shifted, tilde));
                    }
                }
            }
        }
    }
}

#[test]
fn plain_motz_is_tilde_motz_with_level_points_in_the_support() {
    for lambda in classes(6) {
        let theta = lambda.representative();
        for sigma in enumerate_gj(&theta) {
            let support: BTreeSet<usize> = sigma.support().into_iter().collect();
            let plain: BTreeSet<Vec<i64>> = motz_functions(&theta, &sigma, false).unwrap().into_iter().collect();
            let filtered: BTreeSet<Vec<i64>> = motz_functions(&theta, &sigma, true)
                .unwrap()
                .into_iter()
                .filter(|h| j_set(&theta, h, 0).is_subset(&support))
                .collect();
            assert_eq!(plain, filtered, "{theta} {sigma}");
        }
    }
}

#[test]
fn balance_books_and_spin_up() {
    let mut checked = 0;
    for lambda in classes(6) {
        let theta = lambda.representative();
        let n = theta.n() as i64;
        let ell = theta.num_orbits() as i64;
        for sigma in enumerate_gj(&theta) {
            let support: BTreeSet<usize> = sigma.support().into_iter().collect();
            let hs = motz_functions(&theta, &sigma, true).unwrap();
            for cutting in cycle_cuttings(&sigma) {
                let a: BTreeSet<usize> = cutting.points().iter().copied().collect();
                let m_total: i64 = a.iter().map(|&x| sigma.orbit_size(x) as i64).product();
                for h in &hs {
                    let j0 = j_set(&theta, h, 0);
                    let j1 = j_set(&theta, h, 1);
                    let s0 = j0.difference(&support).count() as i64;
                    let s1 = j1.difference(&support).count() as i64;
                    let a1: Vec<usize> = j1.intersection(&a).copied().collect();
                    assert_eq!(n - 2 * ell + 2, s0 + 2 * s1 + 2 * a1.len() as i64, "{theta} {sigma} {h:?}");
                    let spin: BigRational = a1.iter().map(|&x| ratio(2, sigma.orbit_size(x) as i64)).product::<BigRational>()
                        * ratio(1, 1 << a.len());
                    assert_eq!(spin, ratio(1, m_total));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000, "{checked}");
}

#[test]
fn all_even_orbits_force_no_blue() {
    for lambda in eulerian(8) {
        let theta = lambda.representative();
        for (sigma, g) in enumerate_gjdm(&theta) {
            let tree = color_tree(&theta, &sigma, &g).unwrap();
            assert_eq!(tree.count_color(Color::Blue), 0, "{theta} {sigma} {g:?}");
            for orbit in theta.orbits() {
                assert_eq!(orbit.iter().filter(|&&i| g[i] == -1).count() * 2, orbit.len());
            }
            assert!((0..g.len()).filter(|&i| g[i] == -1).all(|i| sigma.image(i) == i));
        }
    }
}

#[test]
fn snipping_round_trips_and_counts() {
    for lambda in eulerian(8) {
        let theta = lambda.representative();
        let n = theta.n() as u128;
        let ell = theta.num_orbits() as u128;
        let per_set = if n / 2 + 1 >= ell {
            let halves: u128 = lambda.parts().iter().map(|&p| p as u128 / 2).product();
            let value = ratio(factorial(n / 2 - 1) as i64, factorial(n / 2 + 1 - ell) as i64) * rational(halves as i64);
            assert!(value.is_integer());
            value.to_integer().try_into().unwrap()
        } else {
            0
        };
        let mut by_set: BTreeMap<BTreeSet<usize>, u128> = BTreeMap::new();
        for (sigma, g) in enumerate_gjdm(&theta) {
            let tree = color_tree(&theta, &sigma, &g).unwrap();
            let s = snip(&tree).unwrap();
            assert_eq!(s.tree.read_off().0, theta.strike(&s.removed));
            assert!(s.tree.vertices().iter().all(|v| matches!(v.color, Color::White | Color::Black)));
            assert_eq!(unsnip(&s).unwrap(), tree);
            *by_set.entry(s.removed).or_default() += 1;
        }
        for (x, count) in &by_set {
            assert_eq!(*count, per_set, "{lambda} {x:?}");
        }
        let sets: u128 = lambda.parts().iter().map(|&p| binomial(p as u128, p as u128 / 2)).product();
        assert_eq!(by_set.len() as u128, if per_set == 0 { 0 } else { sets }, "{lambda}");
    }
}

#[test]
fn green_set_count_for_two_transpositions() {
    let theta = Permutation::parse_cycles("(1,2)(3,4)", 4).unwrap();
    for x in [[0usize, 2], [0, 3], [1, 2], [1, 3]] {
        assert_eq!(count_with_green_set(&theta, &x.into_iter().collect()), 1);
    }
}

#[test]
fn mobiles_round_trip() {
    let mut total = 0;
    for lambda in (2..=8).step_by(2).flat_map(NumericalPartition::all) {
        let theta = lambda.representative();
        for (sigma, g) in enumerate_gjdm(&theta) {
            let m = mobile(&theta, &sigma, &g).unwrap();
            let colored = m.to_colored_tree().unwrap();
            assert_eq!(colored, color_tree(&theta, &sigma, &g).unwrap());
            assert_eq!(colored.decode().unwrap(), (theta.clone(), sigma.clone(), g.clone()));
            assert_eq!(m.labels().into_iter().min(), Some(0), "{theta} {sigma} {g:?}");
            total += 1;
        }
    }
    assert!(total > 1000, "{total}");
}

#[test]
fn colored_trees_obey_the_coloring_rules() {
    for lambda in classes(7) {
        let theta = lambda.representative();
        for sigma in enumerate_gj(&theta) {
            for g in enumerate_dmotz(&theta, &sigma) {
                assert!(is_dmotz(&theta, &sigma, &g, false));
                let tree = color_tree(&theta, &sigma, &g).unwrap();
                assert!(tree.satisfies_coloring_rules());
                let h = antiderivative(&theta, &sigma, &g).unwrap();
                assert_eq!(increments(&theta, &h), g.iter().map(|&x| i64::from(x)).collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn gjdm_vanishes_beyond_the_balance_bound() {
    for lambda in classes(8).filter(|l| l.size() % 2 == 0) {
        let theta = lambda.representative();
        if theta.n() as i64 / 2 - theta.num_orbits() as i64 + 2 <= 0 {
            assert!(enumerate_gjdm(&theta).is_empty(), "{lambda}");
        }
    }
}
