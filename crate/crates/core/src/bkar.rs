//! Bond sets, spanning trees over a partition, linear forests, the forest
//! interpolation measure `ℙ^Θ_Γ` and the tree form of the BKAR identity.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gauss::partial_sym_gamma;
use crate::partition::{cumulant_terms, join_bonds, DisjointSets, SetPartition};
use crate::perm::{all_permutations, CycleCutting};
use crate::poly::{rational, Polynomial, Var};

/// A set of 2-subsets of `0..n`, each stored as `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BondSet {
    n: usize,
    bonds: BTreeSet<(usize, usize)>,
}

impl BondSet {
    pub fn empty(n: usize) -> Self {
        BondSet { n, bonds: BTreeSet::new() }
    }

    pub fn new(n: usize, bonds: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in bonds {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidBond(a + 1, b + 1));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(BondSet { n, bonds: set })
    }

    /// Parses `"{1-5,4-6}"` (1-based).
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected braces: {text:?}")))?;
        let mut bonds = Vec::new();
        for item in inner.split(',').filter(|s| !s.is_empty()) {
            let (a, b) = item.split_once('-').ok_or_else(|| Error::Parse(format!("bad bond {item:?}")))?;
            let parse = |s: &str| match s.parse::<usize>() {
                Ok(x) if x > 0 => Ok(x - 1),
                _ => Err(Error::Parse(format!("bad point {s:?}"))),
            };
            bonds.push((parse(a)?, parse(b)?));
        }
        BondSet::new(n, bonds)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bonds(&self) -> &BTreeSet<(usize, usize)> {
        &self.bonds
    }

    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bonds.contains(&(a.min(b), a.max(b)))
    }

    /// True when 𝔊(Θ,Γ) is a tree: `Γ∨Θ = 𝟏` and `|Γ| + 1 = |Θ|`.
    pub fn is_tree_over(&self, theta: &SetPartition) -> bool {
        theta.n() == self.n
            && self.len() + 1 == theta.num_blocks()
            && join_bonds(theta, self).map(|p| p.num_blocks() == 1).unwrap_or(false)
    }

    /// Circuitless with every vertex of degree at most 2 in 𝔊(𝟎,Γ).
    pub fn is_linear_forest(&self) -> bool {
        LinearForest::new(self.clone()).is_ok()
    }

    pub fn to_dot(&self, theta: &SetPartition) -> String {
        let mut out = String::from("graph G {\n");
        for (b, block) in theta.blocks().iter().enumerate() {
            let label: Vec<String> = block.iter().map(|x| (x + 1).to_string()).collect();
            out += &format!("  b{b} [shape=box,label=\"{}\"];\n", label.join(","));
        }
        for &(a, c) in &self.bonds {
            out += &format!("  b{} -- b{} [label=\"{}-{}\"];\n", theta.block_of(a), theta.block_of(c), a + 1, c + 1);
        }
        out += "}\n";
        out
    }
}

impl fmt::Display for BondSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.bonds.iter().map(|(a, b)| format!("{}-{}", a + 1, b + 1)).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Tree_n(Θ): every Γ for which 𝔊(Θ,Γ) is a tree.
pub fn enumerate_trees(theta: &SetPartition) -> Vec<BondSet> {
    let n = theta.n();
    let k = theta.num_blocks();
    let candidates: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| !theta.same_block(a, b)).collect();
    let mut out = Vec::new();
    fn rec(
        start: usize,
        need: usize,
        cands: &[(usize, usize)],
        theta: &SetPartition,
        ds: &DisjointSets,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<BondSet>,
    ) {
        if need == 0 {
            out.push(BondSet { n: theta.n(), bonds: cur.iter().copied().collect() });
            return;
        }
        for idx in start..cands.len() {
            if cands.len() - idx < need {
                return;
            }
            let (a, b) = cands[idx];
            let mut next = ds.clone();
            if next.union(theta.block_of(a), theta.block_of(b)) {
                cur.push((a, b));
                rec(idx + 1, need - 1, cands, theta, &next, cur, out);
                cur.pop();
            }
        }
    }
    rec(0, k.saturating_sub(1), &candidates, theta, &DisjointSets::new(k), &mut Vec::new(), &mut out);
    out
}

/// A bond set whose graph is a disjoint union of paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForest {
    bonds: BondSet,
    components: Vec<Vec<usize>>,
}

impl LinearForest {
    pub fn new(bonds: BondSet) -> Result<Self> {
        let n = bonds.n();
        let mut adj = vec![Vec::new(); n];
        let mut ds = DisjointSets::new(n);
        for &(a, b) in bonds.bonds() {
            adj[a].push(b);
            adj[b].push(a);
            if !ds.union(a, b) {
                return Err(Error::NotALinearForest(format!("circuit through {}-{}", a + 1, b + 1)));
            }
        }
        if let Some(v) = (0..n).find(|&v| adj[v].len() > 2) {
            return Err(Error::NotALinearForest(format!("vertex {} has degree {}", v + 1, adj[v].len())));
        }
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] || adj[start].len() != 1 {
                continue;
            }
            let mut path = vec![start];
            seen[start] = true;
            let mut prev = start;
            let mut cur = adj[start][0];
            loop {
                seen[cur] = true;
                path.push(cur);
                match adj[cur].iter().find(|&&x| x != prev) {
                    Some(&next) => {
                        prev = cur;
                        cur = next;
                    }
                    None => break,
                }
            }
            components.push(path);
        }
        Ok(LinearForest { bonds, components })
    }

    pub fn bonds(&self) -> &BondSet {
        &self.bonds
    }

    /// Each component as its vertex path, starting from the smaller endpoint.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// ∂Γ: the endpoint pair of every component.
    pub fn boundary(&self) -> BondSet {
        let ends = self.components.iter().map(|p| (p[0], *p.last().expect("nonempty path")));
        BondSet::new(self.bonds.n(), ends).expect("endpoints are distinct")
    }
}

/// LF(σ,A) = {{i,σ(i)} : i ∈ supp σ ∖ A}.
pub fn linear_forest_of(cutting: &CycleCutting) -> LinearForest {
    let sigma = cutting.base();
    let bonds = sigma
        .support()
        .into_iter()
        .filter(|&i| !cutting.contains(i))
        .map(|i| (i, sigma.image(i)));
    LinearForest::new(BondSet::new(sigma.n(), bonds).expect("support bonds are proper")).expect("cut cycles are paths")
}

/// A matrix in 𝔔_n with floating-point entries.
#[derive(Clone, Debug, PartialEq)]
pub struct InterpolationMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl InterpolationMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Entries in `[0,1]`, unit diagonal, symmetric.
    pub fn is_admissible(&self) -> bool {
        (0..self.n).all(|i| {
            self.get(i, i) == 1.0
                && (0..self.n).all(|j| (0.0..=1.0).contains(&self.get(i, j)) && self.get(i, j) == self.get(j, i))
        })
    }
}

fn require_tree(theta: &SetPartition, gamma: &BondSet) -> Result<()> {
    if gamma.is_tree_over(theta) {
        Ok(())
    } else {
        Err(Error::NotATree(gamma.to_string()))
    }
}

/// `β(i,j)`: 0 when `i,j` share a block of Θ, else the least α such that
/// `{e_1..e_α}∨Θ` joins them.
pub fn join_times(theta: &SetPartition, ordered: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let n = theta.n();
    let mut ds = DisjointSets::new(theta.num_blocks());
    let mut beta = vec![vec![usize::MAX; n]; n];
    let fill = |ds: &mut DisjointSets, alpha: usize, beta: &mut [Vec<usize>]| {
        for i in 0..n {
            for j in 0..n {
                if beta[i][j] == usize::MAX && ds.find(theta.block_of(i)) == ds.find(theta.block_of(j)) {
                    beta[i][j] = alpha;
                }
            }
        }
    };
    fill(&mut ds, 0, &mut beta);
    for (alpha, &(a, b)) in ordered.iter().enumerate() {
        ds.union(theta.block_of(a), theta.block_of(b));
        fill(&mut ds, alpha + 1, &mut beta);
    }
    beta
}

fn matrix_from_times(beta: &[Vec<usize>], t: &[f64]) -> InterpolationMatrix {
    let n = beta.len();
    let entries = beta.iter().flatten().map(|&b| if b == 0 { 1.0 } else { t[b - 1] }).collect();
    InterpolationMatrix { n, entries }
}

/// Draws from ℙ^Θ_Γ as a random edge ordering combined with sorted uniforms.
pub fn sample_interpolation<R: Rng + ?Sized>(
    theta: &SetPartition,
    gamma: &BondSet,
    rng: &mut R,
) -> Result<InterpolationMatrix> {
    require_tree(theta, gamma)?;
    let mut edges: Vec<(usize, usize)> = gamma.bonds().iter().copied().collect();
    edges.shuffle(rng);
    let mut t: Vec<f64> = (0..edges.len()).map(|_| rng.gen::<f64>()).collect();
    t.sort_by(|a, b| b.partial_cmp(a).expect("uniforms are finite"));
    Ok(matrix_from_times(&join_times(theta, &edges), &t))
}

/// X(i,j) = min of the edge weights along the geodesic joining the blocks of
/// `i` and `j` in the tree 𝔊(Θ,Γ), and 1 within a block.
pub fn geodesic_min(theta: &SetPartition, gamma: &BondSet, weight: impl Fn(usize, usize) -> f64) -> Result<InterpolationMatrix> {
    require_tree(theta, gamma)?;
    let k = theta.num_blocks();
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in gamma.bonds() {
        let w = weight(a, b);
        adj[theta.block_of(a)].push((theta.block_of(b), w));
        adj[theta.block_of(b)].push((theta.block_of(a), w));
    }
    let mut block_min = vec![vec![1.0f64; k]; k];
    for src in 0..k {
        let mut stack = vec![(src, usize::MAX, 1.0f64)];
        while let Some((v, parent, m)) = stack.pop() {
            block_min[src][v] = m;
            for &(u, w) in &adj[v] {
                if u != parent {
                    stack.push((u, v, m.min(w)));
                }
            }
        }
    }
    let n = theta.n();
    let entries = (0..n * n).map(|x| block_min[theta.block_of(x / n)][theta.block_of(x % n)]).collect();
    Ok(InterpolationMatrix { n, entries })
}

/// Draws from ℙ^Θ_Γ by i.i.d. uniform edge weights and geodesic minima.
pub fn sample_interpolation_geodesic<R: Rng + ?Sized>(
    theta: &SetPartition,
    gamma: &BondSet,
    rng: &mut R,
) -> Result<InterpolationMatrix> {
    let weights: std::collections::BTreeMap<(usize, usize), f64> = gamma.bonds().iter().map(|&e| (e, rng.gen::<f64>())).collect();
    geodesic_min(theta, gamma, |a, b| weights[&(a, b)])
}

/// Exact ∫ f dℙ^Θ_Γ for a polynomial in the `q` variables.
pub fn integrate_interpolation(theta: &SetPartition, gamma: &BondSet, f: &Polynomial) -> Result<BigRational> {
    require_tree(theta, gamma)?;
    if let Some(v) = f.variables().into_iter().find(|v| !matches!(v, Var::Q(..))) {
        return Err(Error::UnexpectedVariable(v.to_string()));
    }
    let edges: Vec<(usize, usize)> = gamma.bonds().iter().copied().collect();
    let m = edges.len();
    let mut total = BigRational::zero();
    for order in all_permutations(m) {
        let ordered: Vec<(usize, usize)> = order.images().iter().map(|&k| edges[k]).collect();
        let beta = join_times(theta, &ordered);
        for (mono, coeff) in f.terms() {
            // exponent of t_α for α = 1..m
            let mut a = vec![0u64; m + 1];
            for &(v, e) in mono.powers() {
                if let Var::Q(i, j) = v {
                    a[beta[i][j]] += u64::from(e);
                }
            }
            let mut denom = BigRational::one();
            let mut tail = 0u64;
            for alpha in (1..=m).rev() {
                tail += a[alpha];
                denom *= rational((tail + (m - alpha + 1) as u64) as i64);
            }
            total += coeff / denom;
        }
    }
    Ok(total)
}

/// The two sides of the BKAR identity, plus the closed product form.
#[derive(Clone, Debug, PartialEq)]
pub struct BkarCheck {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub closed_form: BigRational,
}

impl BkarCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs && self.rhs == self.closed_form
    }
}

/// Σ_{Π∈[Θ:𝟏]} μ(Π:𝟏) f([Π]).
pub fn bkar_lhs(theta: &SetPartition, f: &Polynomial) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for (p, mu) in cumulant_terms(theta)? {
        let value = f.evaluate(|v| match *v {
            Var::Q(i, j) => Some(rational(i64::from(p.same_block(i, j)))),
            _ => None,
        })?;
        acc += value * rational(mu as i64);
    }
    Ok(acc)
}

/// Σ_{Γ∈Tree(Θ)} ∫ ∂^Γ f dℙ^Θ_Γ.
pub fn bkar_rhs(theta: &SetPartition, f: &Polynomial) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for gamma in enumerate_trees(theta) {
        let d = partial_sym_gamma(f, &gamma);
        if !d.is_zero() {
            acc += integrate_interpolation(theta, &gamma, &d)?;
        }
    }
    Ok(acc)
}

/// Sum over bond sequences drawn from the support of each monomial of
/// ∏ ν(e_α)/N({e_1..e_{α−1}}∨Θ).
pub fn bkar_closed_form(theta: &SetPartition, f: &Polynomial) -> Result<BigRational> {
    let k = theta.num_blocks();
    let mut total = BigRational::zero();
    for (mono, coeff) in f.terms() {
        let mut nu = Vec::new();
        for &(v, e) in mono.powers() {
            match v {
                Var::Q(i, j) if i != j => nu.push(((i, j), u64::from(e))),
                Var::Q(..) => {}
                other => return Err(Error::UnexpectedVariable(other.to_string())),
            }
        }
        total += coeff * sequence_sum(theta, &nu, &DisjointSets::new(k), k - 1);
    }
    Ok(total)
}

fn sequence_sum(theta: &SetPartition, nu: &[((usize, usize), u64)], ds: &DisjointSets, remaining: usize) -> BigRational {
    if remaining == 0 {
        return BigRational::one();
    }
    let mut probe = ds.clone();
    let crossing: Vec<&((usize, usize), u64)> =
        nu.iter().filter(|((a, b), _)| probe.find(theta.block_of(*a)) != probe.find(theta.block_of(*b))).collect();
    let weight: u64 = crossing.iter().map(|x| x.1).sum();
    if weight == 0 {
        return BigRational::zero();
    }
    let mut acc = BigRational::zero();
    for &&((a, b), v) in &crossing {
        let mut next = ds.clone();
        next.union(theta.block_of(a), theta.block_of(b));
        acc += sequence_sum(theta, nu, &next, remaining - 1) * BigRational::new((v as i64).into(), (weight as i64).into());
    }
    acc
}

pub fn bkar_check(theta: &SetPartition, f: &Polynomial) -> Result<BkarCheck> {
    Ok(BkarCheck { lhs: bkar_lhs(theta, f)?, rhs: bkar_rhs(theta, f)?, closed_form: bkar_closed_form(theta, f)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{cycle_cuttings, Permutation};
    use crate::poly::{ratio, Monomial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sp(s: &str) -> SetPartition {
        SetPartition::parse(s).unwrap()
    }

    fn q(i: usize, j: usize) -> Polynomial {
        Polynomial::var(Var::q(i, j))
    }

    #[test]
    fn trees_small() {
        let t = enumerate_trees(&SetPartition::finest(2));
        assert_eq!(t, vec![BondSet::parse("{1-2}", 2).unwrap()]);
        assert_eq!(enumerate_trees(&SetPartition::coarsest(4)), vec![BondSet::empty(4)]);
        // Cayley: k^{k-2}
        assert_eq!(enumerate_trees(&SetPartition::finest(4)).len(), 16);
        assert_eq!(enumerate_trees(&SetPartition::finest(5)).len(), 125);
        // blocks of sizes a_i: a_1..a_k * n^{k-2}
        assert_eq!(enumerate_trees(&sp("{1,2|3,4,5}")).len(), 6);
    }

    #[test]
    fn tree_figure_member() {
        let theta = sp("{1,2|3,4|5,6|7|8,9}");
        let gamma = BondSet::parse("{2-4,3-5,5-7,6-9}", 9).unwrap();
        assert!(gamma.is_tree_over(&theta));
        assert!(enumerate_trees(&theta).contains(&gamma));
        assert!(!BondSet::parse("{2-4,3-5,5-7}", 9).unwrap().is_tree_over(&theta));
    }

    #[test]
    fn forest_of_cutting_figure() {
        let sigma = Permutation::parse_cycles("(1,4,5,2,6)(7,9,8)(10,11)", 11).unwrap();
        let cut = CycleCutting::new(sigma, vec![4, 7, 9]).unwrap();
        let lf = linear_forest_of(&cut);
        assert_eq!(lf.bonds().to_string(), "{1-4,1-6,2-6,4-5,7-9,8-9,10-11}");
        assert_eq!(lf.boundary().to_string(), "{2-5,7-8,10-11}");
        assert_eq!(lf.components().len(), 3);
    }

    #[test]
    fn forest_small_cases() {
        let id = Permutation::identity(3);
        assert!(linear_forest_of(&cycle_cuttings(&id)[0]).bonds().is_empty());
        let sigma = Permutation::parse_cycles("(1,2)", 2).unwrap();
        let lf = linear_forest_of(&CycleCutting::new(sigma, vec![0]).unwrap());
        assert_eq!(lf.bonds().to_string(), "{1-2}");
        assert_eq!(lf.boundary().to_string(), "{1-2}");
        assert!(!BondSet::parse("{1-2,2-3,1-3}", 3).unwrap().is_linear_forest());
        assert!(!BondSet::parse("{1-2,1-3,1-4}", 4).unwrap().is_linear_forest());
    }

    #[test]
    fn integration_examples() {
        let theta = SetPartition::finest(2);
        let g = BondSet::parse("{1-2}", 2).unwrap();
        assert_eq!(integrate_interpolation(&theta, &g, &Polynomial::one()).unwrap(), rational(1));
        assert_eq!(integrate_interpolation(&theta, &g, &q(0, 1)).unwrap(), ratio(1, 2));
        let bad = BondSet::empty(2);
        assert!(integrate_interpolation(&theta, &bad, &q(0, 1)).is_err());
    }

    #[test]
    fn bkar_two_points() {
        let theta = SetPartition::finest(2);
        for f in [q(0, 1), q(0, 1).pow(2)] {
            let c = bkar_check(&theta, &f).unwrap();
            assert_eq!(c.lhs, rational(1));
            assert!(c.holds());
        }
    }

    #[test]
    fn bkar_three_points_matches_calculus_identity() {
        // f(x,y,z) with x = q12, y = q13, z = q23
        let theta = SetPartition::finest(3);
        let vars = [Var::q(0, 1), Var::q(0, 2), Var::q(1, 2)];
        for a in 0..=3u32 {
            for b in 0..=3 - a {
                for c in 0..=3 - a - b {
                    let f = Polynomial::term(rational(1), Monomial::from_powers([(vars[0], a), (vars[1], b), (vars[2], c)]));
                    let at = |x: i64, y: i64, z: i64| {
                        f.evaluate(|v| Some(rational(if *v == vars[0] { x } else if *v == vars[1] { y } else { z }))).unwrap()
                    };
                    let expected = at(1, 1, 1) - at(1, 0, 0) - at(0, 1, 0) - at(0, 0, 1) + at(0, 0, 0) * rational(2);
                    let check = bkar_check(&theta, &f).unwrap();
                    assert_eq!(check.lhs, expected);
                    assert!(check.holds(), "{f}");
                }
            }
        }
    }

    #[test]
    fn sampler_agrees_with_geodesic_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let theta = sp("{1,2|3|4,5|6}");
        for gamma in enumerate_trees(&theta) {
            let mut edges: Vec<(usize, usize)> = gamma.bonds().iter().copied().collect();
            edges.shuffle(&mut rng);
            let mut t: Vec<f64> = (0..edges.len()).map(|_| rng.gen()).collect();
            t.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let x = matrix_from_times(&join_times(&theta, &edges), &t);
            let pos = |a: usize, b: usize| edges.iter().position(|&e| e == (a, b)).unwrap();
            let y = geodesic_min(&theta, &gamma, |a, b| t[pos(a, b)]).unwrap();
            assert_eq!(x, y);
            assert!(x.is_admissible());
        }
    }

    #[test]
    fn dot_export() {
        let theta = sp("{1,2|3}");
        let dot = BondSet::parse("{2-3}", 3).unwrap().to_dot(&theta);
        assert!(dot.contains("b0 [shape=box,label=\"1,2\"]"));
        assert!(dot.contains("b0 -- b1 [label=\"2-3\"]"));
    }
}
