//! Goulden-Jackson pairs, dMotz sign functions, their height functions and the
//! count identity `|Map_n(θ)| · (n/2 − ℓ(θ) + 2) = |GJdM_n(θ)|`.

mod mobile;
mod tree;

pub use mobile::{mobile, Flag, FlagDirection, Mobile};
pub use tree::{color_tree, count_with_green_set, snip, sv_tree, sv_tree_labeled, unsnip, Color, ColoredTree, Edge, Snipped, Vertex};

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::enumerate_maps;
use crate::perm::{for_each_long_cycle, LabeledPermutation, NumericalPartition, Permutation};

/// A pair `(θ, σ)` with `ℓ(θ) + ℓ(σ) = n + 1` and `θσ` an `n`-cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GjPair {
    pub theta: Permutation,
    pub sigma: Permutation,
}

impl GjPair {
    pub fn new(theta: Permutation, sigma: Permutation) -> Result<Self> {
        if theta.n() != sigma.n() {
            return Err(Error::SizeMismatch(theta.n(), sigma.n()));
        }
        if !is_gj_pair(&theta, &sigma) {
            return Err(Error::NotGouldenJackson(format!("({theta}, {sigma})")));
        }
        Ok(GjPair { theta, sigma })
    }
}

pub fn is_gj_pair(theta: &Permutation, sigma: &Permutation) -> bool {
    let n = theta.n();
    n > 0
        && sigma.n() == n
        && theta.num_orbits() + sigma.num_orbits() == n + 1
        && theta.compose_unchecked(sigma).num_orbits() == 1
}

/// The same condition for permutations of a common label set.
pub fn is_gj_pair_labeled(theta: &LabeledPermutation, sigma: &LabeledPermutation) -> bool {
    let n = theta.labels().len();
    n > 0
        && theta.labels() == sigma.labels()
        && theta.num_orbits() + sigma.num_orbits() == n + 1
        && theta.permutation().compose_unchecked(sigma.permutation()).num_orbits() == 1
}

/// All `σ` with `(θ, σ)` a Goulden-Jackson pair, sorted.
pub fn enumerate_gj(theta: &Permutation) -> Vec<Permutation> {
    let n = theta.n();
    if n == 0 {
        return Vec::new();
    }
    let target = n + 1 - theta.num_orbits();
    let inv = theta.inverse();
    let mut out = Vec::new();
    for_each_long_cycle(n, |c| {
        let sigma = inv.compose_unchecked(c);
        if sigma.num_orbits() == target {
            out.push(sigma);
        }
    });
    out.sort();
    out
}

/// `(n−1)!/(n−ℓ+1)! · ∏ λ_i`, the number of Goulden-Jackson partners of any
/// `θ` of cycle type `λ`. Exact for `n ≤ 30`.
pub fn gj_count(lambda: &NumericalPartition) -> u128 {
    let n = lambda.size() as u128;
    let l = lambda.len() as u128;
    if n == 0 {
        return 0;
    }
    // (n−1)!/(n−ℓ+1)! = ∏_{k=n−ℓ+2}^{n−1} k when ℓ ≥ 2, and 1/n when ℓ = 1.
    if l == 1 {
        return lambda.product() / n;
    }
    let falling: u128 = (n + 2 - l..n).product();
    falling * lambda.product()
}

/// Allowed values of `g` on a σ-orbit of the given size.
fn allowed_values(orbit_size: usize, tilde: bool) -> &'static [i8] {
    match orbit_size {
        1 if tilde => &[-1, 0, 1],
        1 => &[-1, 1],
        2 => &[0, 1],
        _ => &[1],
    }
}

/// Direct check of the defining conditions of `dMotz_n(θ, σ)`; with `tilde`
/// the condition `{g = 0} ⊂ supp σ` is dropped.
pub fn is_dmotz(theta: &Permutation, sigma: &Permutation, g: &[i8], tilde: bool) -> bool {
    let n = theta.n();
    if g.len() != n || sigma.n() != n || g.iter().any(|v| v.abs() > 1) {
        return false;
    }
    if theta.orbits().iter().any(|orbit| orbit.iter().map(|&i| g[i] as i64).sum::<i64>() != 0) {
        return false;
    }
    (0..n).all(|i| {
        let s = sigma.image(i);
        g[s] == g[i]
            && (g[i] != -1 || s == i)
            && (g[i] != 0 || sigma.image(s) == i)
            && (tilde || g[i] != 0 || s != i)
    })
}

/// `dMotz_n(θ, σ)`, built σ-orbit by σ-orbit with θ-orbit sums pruned.
pub fn enumerate_dmotz(theta: &Permutation, sigma: &Permutation) -> Vec<Vec<i8>> {
    dmotz_search(theta, sigma, false)
}

/// The relaxed family allowing `g = 0` at fixed points of `σ`.
pub fn enumerate_dmotz_tilde(theta: &Permutation, sigma: &Permutation) -> Vec<Vec<i8>> {
    dmotz_search(theta, sigma, true)
}

fn dmotz_search(theta: &Permutation, sigma: &Permutation, tilde: bool) -> Vec<Vec<i8>> {
    struct Search<'a> {
        orbits: Vec<Vec<usize>>,
        block: Vec<usize>,
        sums: Vec<i64>,
        remaining: Vec<i64>,
        g: Vec<i8>,
        tilde: bool,
        out: &'a mut Vec<Vec<i8>>,
    }
    impl Search<'_> {
        fn run(&mut self, k: usize) {
            if k == self.orbits.len() {
                self.out.push(self.g.clone());
                return;
            }
            let orbit = std::mem::take(&mut self.orbits[k]);
            for &v in allowed_values(orbit.len(), self.tilde) {
                for &i in &orbit {
                    self.g[i] = v;
                    self.sums[self.block[i]] += v as i64;
                    self.remaining[self.block[i]] -= 1;
                }
                if orbit.iter().all(|&i| self.sums[self.block[i]].abs() <= self.remaining[self.block[i]]) {
                    self.run(k + 1);
                }
                for &i in &orbit {
                    self.sums[self.block[i]] -= v as i64;
                    self.remaining[self.block[i]] += 1;
                }
            }
            self.orbits[k] = orbit;
        }
    }
    let n = theta.n();
    let mut out = Vec::new();
    if sigma.n() != n {
        return out;
    }
    let block = theta.orbit_index();
    let mut remaining = vec![0i64; theta.num_orbits()];
    for &b in &block {
        remaining[b] += 1;
    }
    let mut search = Search {
        orbits: sigma.orbits(),
        sums: vec![0; remaining.len()],
        block,
        remaining,
        g: vec![0; n],
        tilde,
        out: &mut out,
    };
    search.run(0);
    out.sort();
    out
}

/// The unique `h` with `h∘θ − h = g`, `h∘σ = h` and `h(1) = 0`.
pub fn antiderivative(theta: &Permutation, sigma: &Permutation, g: &[i8]) -> Result<Vec<i64>> {
    let n = theta.n();
    if sigma.n() != n || g.len() != n {
        return Err(Error::SizeMismatch(n, g.len()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let theta_inv = theta.inverse();
    let mut h: Vec<Option<i64>> = vec![None; n];
    h[0] = Some(0);
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let hi = h[i].expect("queued points are assigned");
        let j = theta_inv.image(i);
        let steps = [
            (theta.image(i), hi + g[i] as i64),
            (j, hi - g[j] as i64),
            (sigma.image(i), hi),
        ];
        for (k, value) in steps {
            if h[k].is_none() {
                h[k] = Some(value);
                queue.push_back(k);
            }
        }
    }
    let h: Vec<i64> = h
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Constraint("θ and σ do not act transitively".into()))?;
    for i in 0..n {
        if h[theta.image(i)] - h[i] != g[i] as i64 || h[sigma.image(i)] != h[i] {
            return Err(Error::Constraint("g has no antiderivative constant on σ-orbits".into()));
        }
    }
    Ok(h)
}

/// Shifts `h` so that its minimum is `0`.
pub fn normalize_min_zero(h: &[i64]) -> Vec<i64> {
    let m = h.iter().copied().min().unwrap_or(0);
    h.iter().map(|x| x - m).collect()
}

/// `h∘θ − h`.
pub fn increments(theta: &Permutation, h: &[i64]) -> Vec<i64> {
    (0..h.len()).map(|i| h[theta.image(i)] - h[i]).collect()
}

/// `J_h(ε) = {i : h(θ(i)) = h(i) + ε}`.
pub fn j_set(theta: &Permutation, h: &[i64], eps: i64) -> BTreeSet<usize> {
    (0..h.len()).filter(|&i| h[theta.image(i)] - h[i] == eps).collect()
}

/// Membership in `Motz_n(θ, σ)` (or its relaxed version with `tilde`).
pub fn is_motz(theta: &Permutation, sigma: &Permutation, h: &[i64], tilde: bool) -> bool {
    if h.len() != theta.n() || (0..h.len()).any(|i| h[sigma.image(i)] != h[i]) {
        return false;
    }
    let d = increments(theta, h);
    if d.iter().any(|x| x.abs() > 1) {
        return false;
    }
    let g: Vec<i8> = d.iter().map(|&x| x as i8).collect();
    is_dmotz(theta, sigma, &g, tilde)
}

/// Representatives of `Motz_n(θ, σ)` modulo constants, normalized by `h(1) = 0`.
pub fn motz_functions(theta: &Permutation, sigma: &Permutation, tilde: bool) -> Result<Vec<Vec<i64>>> {
    dmotz_search(theta, sigma, tilde).iter().map(|g| antiderivative(theta, sigma, g)).collect()
}

/// All `h ∈ Motz_n(θ, σ)` (or the relaxed family) with values in `1..=levels`.
pub fn motz_functions_bounded(
    theta: &Permutation,
    sigma: &Permutation,
    tilde: bool,
    levels: i64,
) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for h in motz_functions(theta, sigma, tilde)? {
        let lo = h.iter().copied().min().unwrap_or(0);
        let hi = h.iter().copied().max().unwrap_or(0);
        for shift in (1 - lo)..=(levels - hi) {
            out.push(h.iter().map(|x| x + shift).collect());
        }
    }
    out.sort();
    Ok(out)
}

/// All `(σ, g)` with `σ ∈ GJ_n(θ)` and `g ∈ dMotz_n(θ, σ)`.
pub fn enumerate_gjdm(theta: &Permutation) -> Vec<(Permutation, Vec<i8>)> {
    enumerate_gj(theta)
        .into_par_iter()
        .flat_map_iter(|sigma| {
            let gs = enumerate_dmotz(theta, &sigma);
            gs.into_iter().map(move |g| (sigma.clone(), g))
        })
        .collect()
}

pub fn gjdm_count(theta: &Permutation) -> u128 {
    enumerate_gj(theta).par_iter().map(|sigma| enumerate_dmotz(theta, sigma).len() as u128).sum()
}

/// Both sides of `|Map_n(θ)| = |GJdM_n(θ)| / (n/2 − ℓ(θ) + 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainTheoremCheck {
    pub lambda: Vec<usize>,
    pub maps: u128,
    pub gjdm: u128,
    pub denominator: i64,
}

impl MainTheoremCheck {
    /// `|GJdM| / denominator`, or `None` when the denominator is not positive.
    pub fn rhs(&self) -> Option<BigRational> {
        (self.denominator > 0).then(|| BigRational::new(BigInt::from(self.gjdm), BigInt::from(self.denominator)))
    }

    /// Equality when the denominator is positive, emptiness of both sets otherwise.
    pub fn holds(&self) -> bool {
        if self.denominator > 0 {
            self.gjdm == self.maps * self.denominator as u128
        } else {
            self.gjdm == 0 && self.maps == 0
        }
    }
}

pub fn main_theorem_check(theta: &Permutation) -> MainTheoremCheck {
    let n = theta.n() as i64;
    let l = theta.num_orbits() as i64;
    // 2·(n/2 − ℓ + 2) is an integer; odd n gives no maps and no GJdM triples.
    let twice = n - 2 * l + 4;
    let (maps, gjdm) = if n % 2 == 1 {
        (0, 0)
    } else {
        (enumerate_maps(theta).len() as u128, gjdm_count(theta))
    };
    MainTheoremCheck {
        lambda: theta.cycle_type().parts().to_vec(),
        maps,
        gjdm,
        denominator: if twice % 2 == 0 { twice / 2 } else { 0 },
    }
}
