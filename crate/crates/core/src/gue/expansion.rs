//! Motzkin index sets, the polynomials `f^h`, and exact checks of the tree
//! expansion of joint cumulants of Gaussian polynomials and of tridiagonal traces.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::bkar::{enumerate_trees, integrate_interpolation, linear_forest_of, BondSet};
use crate::error::{Error, Result};
use crate::gauss::{d_gamma, evaluate_at, natural, natural_by_pairings, CovarianceSpec, Matrix};
use crate::gjdm::{enumerate_gj, j_set, motz_functions_bounded};
use crate::maps::cumulant_polynomial;
use crate::partition::{joint_cumulant, SetPartition};
use crate::perm::{cycle_cuttings, CycleCutting, NumericalPartition, Permutation};
use crate::poly::{ratio, rational, Monomial, Polynomial, Var};

/// Every `h : ⟨n⟩ → {1,…,levels}` with `|h(θ(i)) − h(i)| ≤ 1`, in
/// lexicographic order, built as one closed Motzkin loop per θ-orbit.
pub fn motzkin_assignments(theta: &Permutation, levels: i64) -> Vec<Vec<i64>> {
    fn walk(cycle: &[usize], pos: usize, levels: i64, h: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, rest: &[Vec<usize>]) {
        if pos == cycle.len() {
            if (h[cycle[0]] - h[cycle[cycle.len() - 1]]).abs() <= 1 {
                match rest.split_first() {
                    Some((next, tail)) => walk(next, 0, levels, h, out, tail),
                    None => out.push(h.clone()),
                }
            }
            return;
        }
        let (lo, hi) = if pos == 0 { (1, levels) } else {
            let prev = h[cycle[pos - 1]];
            ((prev - 1).max(1), (prev + 1).min(levels))
        };
        for v in lo..=hi {
            h[cycle[pos]] = v;
            walk(cycle, pos + 1, levels, h, out, rest);
        }
    }
    let n = theta.n();
    let mut out = Vec::new();
    if levels < 1 || n == 0 {
        return out;
    }
    let orbits = theta.orbits();
    walk(&orbits[0], 0, levels, &mut vec![0; n], &mut out, &orbits[1..]);
    out.sort();
    out
}

/// `Σ_{j=1}^{2k} z_{ij}²/2`.
fn half_square_sum(i: usize, k: i64) -> Polynomial {
    let mut p = Polynomial::zero();
    for j in 1..=(2 * k) as usize {
        p.add_term(Monomial::from_powers([(Var::z(i, j), 2)]), ratio(1, 2));
    }
    p
}

/// `f^h_A` for each θ-orbit `A`, in the order of `theta.orbits()`.
pub fn build_fh_blocks(theta: &Permutation, h: &[i64]) -> Vec<Polynomial> {
    theta
        .orbits()
        .iter()
        .map(|orbit| {
            orbit.iter().fold(Polynomial::one(), |acc, &i| match h[theta.image(i)] - h[i] {
                0 => &acc * &Polynomial::var(Var::z(i, 0)),
                1 => &acc * &half_square_sum(i, h[i]),
                _ => acc,
            })
        })
        .collect()
}

/// `f^h = ∏_{J_h(0)} z_{i0} ∏_{J_h(1)} Σ_{j=1}^{2h(i)} z_{ij}²/2`.
pub fn build_fh(theta: &Permutation, h: &[i64]) -> Polynomial {
    build_fh_blocks(theta, h).iter().fold(Polynomial::one(), |acc, f| &acc * f)
}

/// The covariance `δ_{h(i),h(i')}` of `ζ^h`, with `2N+1` replicas.
pub fn fh_covariance(h: &[i64], levels: i64) -> CovarianceSpec {
    let c: Matrix = h.iter().map(|a| h.iter().map(|b| rational(i64::from(a == b))).collect()).collect();
    CovarianceSpec::new(c, (2 * levels + 1) as usize).expect("a block indicator matrix is positive semidefinite")
}

/// Both sides of the tree expansion of a joint cumulant of Gaussian polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct MainToolCheck {
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl MainToolCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn all_ones(n: usize) -> Matrix {
    vec![vec![BigRational::one(); n]; n]
}

/// `lhs`: the joint cumulant of `{f_A(ζ)}` from moments computed by Wick
/// pairings; `rhs`: `Σ_Γ ∏_{e∈Γ} C(e) ∫ E[(D^Γ f)(ζ⋆Q)] dℙ^Θ_Γ`.
/// `polys[k]` is `f_A` for the `k`-th block of `theta`.
pub fn maintool_check(theta: &SetPartition, polys: &[Polynomial], c: &CovarianceSpec) -> Result<MainToolCheck> {
    let blocks = theta.blocks();
    if polys.len() != blocks.len() {
        return Err(Error::SizeMismatch(blocks.len(), polys.len()));
    }
    if c.n() != theta.n() {
        return Err(Error::SizeMismatch(theta.n(), c.n()));
    }
    for (block, f) in blocks.iter().zip(polys) {
        if !f.uses_only(|v| matches!(v, Var::Z(i, _) if block.contains(i))) {
            return Err(Error::Invalid("each f_A may only involve the variables of its block".into()));
        }
    }
    let ones = all_ones(theta.n());
    let lhs = joint_cumulant(theta, |pi| {
        let mut moment = BigRational::one();
        for outer in pi.blocks() {
            let product = blocks
                .iter()
                .zip(polys)
                .filter(|(b, _)| pi.block_of(b[0]) == pi.block_of(outer[0]))
                .fold(Polynomial::one(), |acc, (_, f)| &acc * f);
            moment *= evaluate_at(&natural_by_pairings(&product, c), &ones)?;
        }
        Ok(moment)
    })?;
    let f = polys.iter().fold(Polynomial::one(), |acc, p| &acc * p);
    let mut rhs = BigRational::zero();
    for gamma in enumerate_trees(theta) {
        let weight: BigRational = gamma.bonds().iter().map(|&(a, b)| c.get(a, b).clone()).product();
        if weight.is_zero() {
            continue;
        }
        let d = d_gamma(&f, &gamma);
        if d.is_zero() {
            continue;
        }
        rhs += weight * integrate_interpolation(theta, &gamma, &natural(&d, c))?;
    }
    Ok(MainToolCheck { lhs, rhs })
}

/// A random instance: `n ≤ 4` points, a random partition, `N ≤ 2`, a random
/// rational positive semidefinite covariance and one random polynomial per block,
/// each with a quadratic term in the first replica so that cumulants rarely vanish.
pub fn random_maintool_instance<R: Rng + ?Sized>(rng: &mut R) -> (SetPartition, Vec<Polynomial>, CovarianceSpec) {
    let n = rng.gen_range(2..=4);
    let levels = rng.gen_range(1..=2usize);
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let theta = SetPartition::from_labels(&labels);
    let b: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    let scale = ratio(1, rng.gen_range(1..=4));
    let c: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rational((0..n).map(|k| b[i][k] * b[j][k]).sum::<i64>()) * &scale)
                .collect()
        })
        .collect();
    let spec = CovarianceSpec::new(c, 2 * levels + 1).expect("B·Bᵀ is positive semidefinite");
    let polys = theta
        .blocks()
        .iter()
        .map(|block| {
            let mut f = Polynomial::zero();
            for t in 0..rng.gen_range(1..=3) {
                let mut powers = Vec::new();
                let (degree, j) = if t == 0 { (2, 0) } else { (rng.gen_range(1..=3), rng.gen_range(0..=1)) };
                for _ in 0..degree {
                    let i = block[rng.gen_range(0..block.len())];
                    powers.push((Var::z(i, j), 1));
                }
                f.add_term(Monomial::from_powers(powers), rational(rng.gen_range(1..=3)));
            }
            f
        })
        .collect();
    (theta, polys, spec)
}

/// Which of the four vanishing conditions a pair `(Γ, h)` satisfies: `h`
/// constant on each bond; each bond inside `J_h(0)` or inside `J_h(1)`; points
/// of `J_h(0)` in at most one bond; every point in at most two bonds.
pub fn redux_conditions(theta: &Permutation, gamma: &BondSet, h: &[i64]) -> [bool; 4] {
    let j0 = j_set(theta, h, 0);
    let j1 = j_set(theta, h, 1);
    let mut degree = vec![0usize; h.len()];
    for &(a, b) in gamma.bonds() {
        degree[a] += 1;
        degree[b] += 1;
    }
    let bonds = gamma.bonds();
    [
        bonds.iter().all(|&(a, b)| h[a] == h[b]),
        bonds.iter().all(|&(a, b)| (j0.contains(&a) && j0.contains(&b)) || (j1.contains(&a) && j1.contains(&b))),
        j0.iter().all(|&i| degree[i] <= 1),
        degree.iter().all(|&d| d <= 2),
    ]
}

/// `S_0 = J_h(0) ∖ supp σ`, `S_1 = J_h(1) ∖ supp σ`, `A_1 = J_h(1) ∩ A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CullSets {
    pub s0: BTreeSet<usize>,
    pub s1: BTreeSet<usize>,
    pub a1: BTreeSet<usize>,
}

pub fn cull_sets(theta: &Permutation, cutting: &CycleCutting, h: &[i64]) -> CullSets {
    let support: BTreeSet<usize> = cutting.base().support().into_iter().collect();
    let j0 = j_set(theta, h, 0);
    let j1 = j_set(theta, h, 1);
    CullSets {
        s0: j0.difference(&support).copied().collect(),
        s1: j1.difference(&support).copied().collect(),
        a1: j1.iter().copied().filter(|&i| cutting.contains(i)).collect(),
    }
}

/// `∏_{S_0} z_{i0} · ∏_{S_1} Σ_{j≤2h(i)} z_{ij}²/2 · ∏_{A_1} Σ_{j≤2h(i)} z_{ij} z_{σ(i)j}`.
pub fn cull_closed_form(theta: &Permutation, cutting: &CycleCutting, h: &[i64]) -> Polynomial {
    let sets = cull_sets(theta, cutting, h);
    let sigma = cutting.base();
    let mut f = Polynomial::one();
    for &i in &sets.s0 {
        f = &f * &Polynomial::var(Var::z(i, 0));
    }
    for &i in &sets.s1 {
        f = &f * &half_square_sum(i, h[i]);
    }
    for &i in &sets.a1 {
        let mut s = Polynomial::zero();
        for j in 1..=(2 * h[i]) as usize {
            s.add_term(Monomial::from_powers([(Var::z(i, j), 1), (Var::z(sigma.image(i), j), 1)]), BigRational::one());
        }
        f = &f * &s;
    }
    f
}

/// `1{S_0 = ∅} · ∏_{A_1} 2Q(i,σ(i)) · ∏_{S_1 ∪ A_1} h(i)` as a polynomial in `q`.
pub fn kill_zero_leading(theta: &Permutation, cutting: &CycleCutting, h: &[i64]) -> Polynomial {
    let sets = cull_sets(theta, cutting, h);
    if !sets.s0.is_empty() {
        return Polynomial::zero();
    }
    let sigma = cutting.base();
    let mut f = Polynomial::one();
    for &i in &sets.a1 {
        f = &f * &Polynomial::var(Var::q(i, sigma.image(i))).scale(&rational(2 * h[i]));
    }
    for &i in &sets.s1 {
        f = f.scale(&rational(h[i]));
    }
    f
}

/// The exact value of `𝔐_{λ,N}` beside its two tree-indexed expansions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinedExpansion {
    pub lambda: Vec<usize>,
    #[serde(rename = "N")]
    pub levels: i64,
    /// The exact cumulant `𝔐_{λ,N}`.
    #[serde(serialize_with = "crate::poly::serialize_rational")]
    pub exact: BigRational,
    /// Sum over trees `Γ` of the orbit partition and all Motzkin assignments `h`.
    #[serde(serialize_with = "crate::poly::serialize_rational")]
    pub tree_sum: BigRational,
    /// Sum over `(σ, A, h)` with `Γ` the linear forest of the cycle-cutting.
    #[serde(serialize_with = "crate::poly::serialize_rational")]
    pub quadruple_sum: BigRational,
    /// Number of `(Γ, h)` failing one of the vanishing conditions.
    pub culled: usize,
    /// How many of those nevertheless had a nonzero term.
    pub culled_nonzero: usize,
}

impl RefinedExpansion {
    pub fn holds(&self) -> bool {
        self.exact == self.tree_sum && self.exact == self.quadruple_sum && self.culled_nonzero == 0
    }
}

/// `∫ E[(D^Γ f^h)(ζ^h⋆Q)] dℙ^Θ_Γ`, exactly.
pub fn expansion_term(theta: &Permutation, gamma: &BondSet, h: &[i64], levels: i64) -> Result<BigRational> {
    let d = d_gamma(&build_fh(theta, h), gamma);
    if d.is_zero() {
        return Ok(BigRational::zero());
    }
    let partition = SetPartition::from_orbits(theta);
    integrate_interpolation(&partition, gamma, &natural(&d, &fh_covariance(h, levels)))
}

pub fn refined_expansion_check(lambda: &NumericalPartition, levels: i64) -> Result<RefinedExpansion> {
    if lambda.size() > 6 || levels > 4 {
        return Err(Error::SizeLimit(format!("refined expansion limited to n ≤ 6 and N ≤ 4, got {lambda} and {levels}")));
    }
    if levels < 1 {
        return Err(Error::Invalid("N must be positive".into()));
    }
    let theta = lambda.representative();
    let partition = SetPartition::from_orbits(&theta);
    let exact = BigRational::from_integer(cumulant_polynomial(lambda)?.evaluate(i128::from(levels)).into());
    let assignments = motzkin_assignments(&theta, levels);
    let mut tree_sum = BigRational::zero();
    let mut culled = 0;
    let mut culled_nonzero = 0;
    for gamma in enumerate_trees(&partition) {
        for h in &assignments {
            let conditions = redux_conditions(&theta, &gamma, h);
            let delta = conditions[0];
            let term = if delta { expansion_term(&theta, &gamma, h, levels)? } else { BigRational::zero() };
            if conditions.contains(&false) {
                culled += 1;
                culled_nonzero += usize::from(!term.is_zero());
            }
            tree_sum += term;
        }
    }
    let mut quadruple_sum = BigRational::zero();
    for sigma in enumerate_gj(&theta) {
        let hs = motz_functions_bounded(&theta, &sigma, true, levels)?;
        for cutting in cycle_cuttings(&sigma) {
            let gamma = linear_forest_of(&cutting).bonds().clone();
            let weight = ratio(1, 1 << cutting.points().len());
            for h in &hs {
                quadruple_sum += expansion_term(&theta, &gamma, h, levels)? * &weight;
            }
        }
    }
    Ok(RefinedExpansion {
        lambda: lambda.parts().to_vec(),
        levels,
        exact,
        tree_sum,
        quadruple_sum,
        culled,
        culled_nonzero,
    })
}
