use std::collections::BTreeSet;

use num_rational::BigRational;
use planar_cumulants::bkar::{
    bkar_check, enumerate_trees, geodesic_min, integrate_interpolation, linear_forest_of, sample_interpolation,
    sample_interpolation_geodesic, BondSet,
};
use planar_cumulants::gjdm::is_gj_pair;
use planar_cumulants::partition::SetPartition;
use planar_cumulants::perm::{all_permutations, cycle_cuttings, CycleCutting, NumericalPartition, Permutation};
use planar_cumulants::poly::{ratio, rational, Monomial, Polynomial, Var};
use planar_cumulants::report::random_bkar_instance;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cycling_instance() -> (SetPartition, CycleCutting, BondSet) {
    let sigma = Permutation::parse_cycles("(1,4,5,2,6)(7,9,8)(10,11)", 11).unwrap();
    let theta = Permutation::parse_cycles("(3,11,4)(6,7)", 11).unwrap();
    let cutting = CycleCutting::new(sigma, vec![4, 7, 9]).unwrap();
    let gamma = linear_forest_of(&cutting).bonds().clone();
    (SetPartition::from_orbits(&theta), cutting, gamma)
}

#[test]
fn cut_cycle_endpoints_have_reciprocal_orbit_means() {
    let (theta, cutting, gamma) = cycling_instance();
    assert!(gamma.is_tree_over(&theta));
    let sigma = cutting.base();
    let points = cutting.points().to_vec();
    for mask in 1..1u32 << points.len() {
        let chosen: Vec<usize> = (0..points.len()).filter(|k| mask >> k & 1 == 1).map(|k| points[k]).collect();
        let f = Polynomial::term(rational(1), Monomial::from_powers(chosen.iter().map(|&a| (Var::q(a, sigma.image(a)), 1))));
        let want: BigRational = chosen.iter().map(|&a| ratio(1, sigma.orbit_size(a) as i64)).product();
        assert_eq!(integrate_interpolation(&theta, &gamma, &f).unwrap(), want, "{chosen:?}");
    }
}

#[test]
fn cut_cycle_endpoints_sampled() {
    let (theta, cutting, gamma) = cycling_instance();
    let sigma = cutting.base();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples = 20_000;
    let mut sums = vec![(0.0f64, 0.0f64); cutting.points().len()];
    for _ in 0..samples {
        let x = sample_interpolation(&theta, &gamma, &mut rng).unwrap();
        assert!(x.is_admissible());
        for (k, &a) in cutting.points().iter().enumerate() {
            let v = x.get(a, sigma.image(a));
            sums[k].0 += v;
            sums[k].1 += v * v;
        }
    }
    for (k, &a) in cutting.points().iter().enumerate() {
        let mean = sums[k].0 / samples as f64;
        let var = sums[k].1 / samples as f64 - mean * mean;
        let se = (var / samples as f64).sqrt();
        let want = 1.0 / sigma.orbit_size(a) as f64;
        assert!((mean - want).abs() < 3.0 * se, "a={} mean {mean} want {want} se {se}", a + 1);
    }
}

#[test]
fn ordering_and_geodesic_samplers_agree_in_mean() {
    let theta = SetPartition::parse("{1,2|3|4,5|6}").unwrap();
    let gamma = BondSet::parse("{2-3,3-4,5-6}", 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let samples = 20_000;
    let mut a = vec![0.0; 36];
    let mut b = vec![0.0; 36];
    for _ in 0..samples {
        let x = sample_interpolation(&theta, &gamma, &mut rng).unwrap();
        let y = sample_interpolation_geodesic(&theta, &gamma, &mut rng).unwrap();
        assert!(x.is_admissible() && y.is_admissible());
        for k in 0..36 {
            a[k] += x.get(k / 6, k % 6);
            b[k] += y.get(k / 6, k % 6);
        }
    }
    for k in 0..36 {
        let (i, j) = (k / 6, k % 6);
        let f = Polynomial::var(Var::q(i.min(j), i.max(j)));
        let exact = if i == j { 1.0 } else { planar_cumulants::poly::to_f64(&integrate_interpolation(&theta, &gamma, &f).unwrap()) };
        assert!((a[k] / samples as f64 - exact).abs() < 0.015, "ordering ({i},{j})");
        assert!((b[k] / samples as f64 - exact).abs() < 0.015, "geodesic ({i},{j})");
    }
}

#[test]
fn geodesic_min_on_a_path() {
    let theta = SetPartition::finest(3);
    let gamma = BondSet::parse("{1-2,2-3}", 3).unwrap();
    let x = geodesic_min(&theta, &gamma, |a, _| if a == 0 { 0.25 } else { 0.75 }).unwrap();
    assert_eq!((x.get(0, 1), x.get(1, 2), x.get(0, 2), x.get(2, 2)), (0.25, 0.75, 0.25, 1.0));
}

#[test]
fn cayley_counts() {
    for (k, want) in [(1usize, 1usize), (2, 1), (3, 3), (4, 16), (5, 125)] {
        assert_eq!(enumerate_trees(&SetPartition::finest(k)).len(), want);
    }
    assert_eq!(enumerate_trees(&SetPartition::parse("{1,2|3}").unwrap()).len(), 2);
}

/// `∫_0^1 du ∫_0^u dv u^p v^q`.
fn simplex_moment(p: u32, q: u32) -> BigRational {
    ratio(1, i64::from((q + 1) * (p + q + 2)))
}

#[test]
fn three_point_calculus_exercise() {
    // f(x, y, z) with x = q(1,2), y = q(1,3), z = q(2,3), monomials of degree ≤ 3.
    let theta = SetPartition::finest(3);
    for a in 0..=3u32 {
        for b in 0..=3 - a {
            for c in 0..=3 - a - b {
                let f = Polynomial::term(
                    rational(1),
                    Monomial::from_powers([(Var::q(0, 1), a), (Var::q(0, 2), b), (Var::q(1, 2), c)]),
                );
                let eval = |x: i64, y: i64, z: i64| rational(x.pow(a) * y.pow(b) * z.pow(c));
                let corners = eval(1, 1, 1) - eval(1, 0, 0) - eval(0, 1, 0) - eval(0, 0, 1) + eval(0, 0, 0) * rational(2);
                // f_xy + f_xz at (u,v,v), f_yx + f_yz at (v,u,v), f_zx + f_zy at (v,v,u).
                let mixed = |e: [u32; 3], i: usize, j: usize, lead: usize| -> BigRational {
                    if e[i] == 0 || e[j] == 0 {
                        return rational(0);
                    }
                    let mut d = e;
                    d[i] -= 1;
                    d[j] -= 1;
                    let coeff = rational(i64::from(e[i] * e[j]));
                    let p = d[lead];
                    let q = d.iter().sum::<u32>() - p;
                    coeff * simplex_moment(p, q)
                };
                let e = [a, b, c];
                let integral = mixed(e, 0, 1, 0) + mixed(e, 0, 2, 0) + mixed(e, 1, 0, 1) + mixed(e, 1, 2, 1)
                    + mixed(e, 2, 0, 2)
                    + mixed(e, 2, 1, 2);
                let check = bkar_check(&theta, &f).unwrap();
                assert_eq!(check.lhs, corners, "x^{a} y^{b} z^{c}");
                assert_eq!(check.rhs, integral, "x^{a} y^{b} z^{c}");
                assert!(check.holds());
            }
        }
    }
}

#[test]
fn cut_cycles_are_trees_exactly_for_gj_pairs() {
    for n in 1..=6 {
        for lambda in NumericalPartition::all(n) {
            let theta = lambda.representative();
            let orbits = SetPartition::from_orbits(&theta);
            for sigma in all_permutations(n) {
                let gj = is_gj_pair(&theta, &sigma);
                let cuttings = cycle_cuttings(&sigma);
                let all = n <= 5;
                for cutting in cuttings.iter().take(if all { usize::MAX } else { 1 }) {
                    let forest = linear_forest_of(cutting);
                    assert_eq!(forest.bonds().is_tree_over(&orbits), gj, "{theta} {sigma}");
                    assert_eq!(forest.bonds().len(), n - sigma.num_orbits());
                    let support: BTreeSet<usize> = forest.bonds().bonds().iter().flat_map(|&(a, b)| [a, b]).collect();
                    assert_eq!(support, sigma.support().into_iter().collect::<BTreeSet<_>>());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn tree_formula_on_random_polynomials(n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (theta, f) = random_bkar_instance(n, &mut rng);
        let check = bkar_check(&theta, &f).unwrap();
        prop_assert!(check.holds(), "{} {} {:?}", theta, f, check);
    }

    #[test]
    fn interpolation_is_a_probability(n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let theta = SetPartition::from_labels(&labels);
        let trees = enumerate_trees(&theta);
        let gamma = &trees[rng.gen_range(0..trees.len())];
        prop_assert_eq!(integrate_interpolation(&theta, gamma, &Polynomial::one()).unwrap(), rational(1));
    }
}
