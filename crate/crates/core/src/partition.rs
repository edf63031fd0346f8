//! Set partitions of `0..n`, the interval `[Θ:𝟏]`, the Möbius function,
//! joint cumulants and perfect matchings.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bkar::BondSet;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default cap on `|Θ|` when enumerating `[Θ:𝟏]` (Bell-number growth).
pub const DEFAULT_INTERVAL_CAP: usize = 10;

#[derive(Clone, Debug)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// A set partition stored as a restricted growth string: `block_of[i]` is the
/// index of the block of `i`, blocks numbered by least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SetPartition {
    block_of: Vec<usize>,
}

impl SetPartition {
    /// 𝟎_n
    pub fn finest(n: usize) -> Self {
        SetPartition { block_of: (0..n).collect() }
    }

    /// 𝟏_n
    pub fn coarsest(n: usize) -> Self {
        SetPartition { block_of: vec![0; n] }
    }

    /// Relabels an arbitrary block labelling into canonical form.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let block_of = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        SetPartition { block_of }
    }

    /// Builds from 0-based blocks, which must cover `0..n` disjointly.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Parse("empty block".into()));
            }
            for &x in block {
                if x >= n {
                    return Err(Error::Parse(format!("point {} exceeds ground size {n}", x + 1)));
                }
                if labels[x] != usize::MAX {
                    return Err(Error::Parse(format!("point {} in two blocks", x + 1)));
                }
                labels[x] = b;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Parse(format!("point {} is in no block", x + 1)));
        }
        Ok(SetPartition::from_labels(&labels))
    }

    /// Parses `"{1,2|3,4,5|6}"` (1-based); the ground size is the largest point.
    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected braces: {text:?}")))?;
        let mut blocks = Vec::new();
        for part in inner.split('|') {
            let block = part
                .split(',')
                .map(|t| match t.parse::<usize>() {
                    Ok(x) if x > 0 => Ok(x - 1),
                    _ => Err(Error::Parse(format!("bad point {t:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let n = blocks.iter().flatten().max().map_or(0, |m| m + 1);
        SetPartition::from_blocks(n, &blocks)
    }

    /// The orbit partition `Orb_n(θ)`.
    pub fn from_orbits(p: &Permutation) -> Self {
        SetPartition::from_labels(&p.orbit_index())
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.block_of.iter().enumerate() {
            out[b].push(i);
        }
        out
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of[i] == self.block_of[j]
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let mut image = vec![usize::MAX; self.num_blocks()];
        for (i, &b) in self.block_of.iter().enumerate() {
            let target = other.block_of[i];
            if image[b] == usize::MAX {
                image[b] = target;
            } else if image[b] != target {
                return false;
            }
        }
        true
    }

    /// Least common coarsening.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        let mut ds = DisjointSets::new(self.n());
        for p in [self, other] {
            for block in p.blocks() {
                for w in block.windows(2) {
                    ds.union(w[0], w[1]);
                }
            }
        }
        let labels: Vec<usize> = (0..self.n()).map(|i| ds.find(i)).collect();
        Ok(SetPartition::from_labels(&labels))
    }

    /// Coarsens `self` by a partition of its own block indices.
    pub fn merge_blocks(&self, of_blocks: &SetPartition) -> SetPartition {
        let labels: Vec<usize> = self.block_of.iter().map(|&b| of_blocks.block_of[b]).collect();
        SetPartition::from_labels(&labels)
    }

    pub fn matrix(&self) -> PartitionMatrix {
        PartitionMatrix::from_partition(self)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{{{}}}", blocks.join("|"))
    }
}

/// The 0/1 matrix `[Π]` with `[Π](i,j) = 1` iff `i` and `j` share a block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl PartitionMatrix {
    pub fn from_partition(p: &SetPartition) -> Self {
        let n = p.n();
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = u8::from(p.same_block(i, j));
            }
        }
        PartitionMatrix { n, entries }
    }

    /// Recovers the partition, rejecting matrices that do not represent one.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidMatrix("not square".into()));
            }
            entries.extend_from_slice(row);
        }
        let m = PartitionMatrix { n, entries };
        let p = m.to_partition()?;
        if p.matrix() != m {
            return Err(Error::InvalidMatrix("not block-constant".into()));
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn to_partition(&self) -> Result<SetPartition> {
        let mut ds = DisjointSets::new(self.n);
        for i in 0..self.n {
            if self.get(i, i) != 1 {
                return Err(Error::InvalidMatrix("diagonal entry is not 1".into()));
            }
            for j in 0..self.n {
                match (self.get(i, j), self.get(j, i)) {
                    (1, 1) => {
                        ds.union(i, j);
                    }
                    (0, 0) => {}
                    _ => return Err(Error::InvalidMatrix("not a symmetric 0/1 matrix".into())),
                }
            }
        }
        let labels: Vec<usize> = (0..self.n).map(|i| ds.find(i)).collect();
        Ok(SetPartition::from_labels(&labels))
    }
}

/// All set partitions of `0..k` as restricted growth strings.
pub fn all_set_partitions(k: usize) -> Vec<SetPartition> {
    fn rec(pos: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        if pos == cur.len() {
            out.push(SetPartition { block_of: cur.clone() });
            return;
        }
        for b in 0..=max {
            cur[pos] = b;
            rec(pos + 1, max.max(b + 1), cur, out);
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        out.push(SetPartition { block_of: Vec::new() });
    } else {
        rec(0, 0, &mut vec![0; k], &mut out);
    }
    out
}

/// The interval `[Θ:𝟏_n]`, enumerated as coarsenings of the blocks of Θ.
pub fn interval_to_top(theta: &SetPartition) -> Result<Vec<SetPartition>> {
    interval_to_top_capped(theta, DEFAULT_INTERVAL_CAP)
}

pub fn interval_to_top_capped(theta: &SetPartition, cap: usize) -> Result<Vec<SetPartition>> {
    let k = theta.num_blocks();
    if k > cap {
        return Err(Error::SizeLimit(format!("interval over {k} blocks exceeds cap {cap}")));
    }
    Ok(all_set_partitions(k).iter().map(|q| theta.merge_blocks(q)).collect())
}

/// The interval `[Π1:Π2]`.
pub fn interval(p1: &SetPartition, p2: &SetPartition) -> Result<Vec<SetPartition>> {
    if !p1.refines(p2) {
        return Err(Error::NotComparable);
    }
    Ok(interval_to_top(p1)?.into_iter().filter(|p| p.refines(p2)).collect())
}

fn factorial(m: usize) -> i128 {
    (1..=m as i128).product()
}

/// μ(Π1:Π2) = ∏_{B∈Π2} (−1)^{k_B−1}(k_B−1)!.
pub fn moebius(p1: &SetPartition, p2: &SetPartition) -> Result<i128> {
    if !p1.refines(p2) {
        return Err(Error::NotComparable);
    }
    let mut inner = vec![std::collections::BTreeSet::new(); p2.num_blocks()];
    for i in 0..p1.n() {
        inner[p2.block_of(i)].insert(p1.block_of(i));
    }
    Ok(inner
        .iter()
        .map(|s| {
            let k = s.len();
            let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
            sign * factorial(k - 1)
        })
        .product())
}

/// Pairs `(Π, μ(Π:𝟏))` for `Π ∈ [Θ:𝟏]`; a joint cumulant is `Σ μ·moment(Π)`.
pub fn cumulant_terms(theta: &SetPartition) -> Result<Vec<(SetPartition, i128)>> {
    let top = SetPartition::coarsest(theta.n());
    interval_to_top(theta)?
        .into_iter()
        .map(|p| {
            let mu = moebius(&p, &top)?;
            Ok((p, mu))
        })
        .collect()
}

/// Σ_{Π∈[Θ:𝟏]} μ(Π:𝟏)·moment(Π), with `moment(Π) = ∏_{B∈Π} E∏_{A⊂B} X_A`.
pub fn joint_cumulant<F>(theta: &SetPartition, mut moment: F) -> Result<BigRational>
where
    F: FnMut(&SetPartition) -> Result<BigRational>,
{
    let mut acc = BigRational::zero();
    for (p, mu) in cumulant_terms(theta)? {
        acc += moment(&p)? * BigRational::from_integer(mu.into());
    }
    Ok(acc)
}

/// Every perfect matching of `items`; empty when `items.len()` is odd.
pub fn pair_partitions(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn rec(rest: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(cur.clone());
            return;
        };
        for k in 0..tail.len() {
            let mut remaining = tail.to_vec();
            let partner = remaining.remove(k);
            cur.push((first, partner));
            rec(&remaining, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if items.len() % 2 == 0 {
        rec(items, &mut Vec::new(), &mut out);
    }
    out
}

/// Γ∨Θ: the finest partition above Θ that contains every bond inside a block.
pub fn join_bonds(theta: &SetPartition, gamma: &BondSet) -> Result<SetPartition> {
    if theta.n() != gamma.n() {
        return Err(Error::SizeMismatch(theta.n(), gamma.n()));
    }
    let mut ds = DisjointSets::new(theta.n());
    for block in theta.blocks() {
        for w in block.windows(2) {
            ds.union(w[0], w[1]);
        }
    }
    for &(a, b) in gamma.bonds() {
        ds.union(a, b);
    }
    let labels: Vec<usize> = (0..theta.n()).map(|i| ds.find(i)).collect();
    Ok(SetPartition::from_labels(&labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn sp(s: &str) -> SetPartition {
        SetPartition::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let p = sp("{3,4,5|1,2|6}");
        assert_eq!(p.to_string(), "{1,2|3,4,5|6}");
        assert_eq!(p.num_blocks(), 3);
        assert!(SetPartition::parse("{1,2|2,3}").is_err());
        assert!(SetPartition::parse("{1,3}").is_err());
    }

    #[test]
    fn join_figure() {
        let theta = sp("{1|2,3,4,5|6,7|8,9,10}");
        let gamma = BondSet::parse("{1-5,4-6,5-7,9-10}", 10).unwrap();
        assert_eq!(join_bonds(&theta, &gamma).unwrap(), sp("{1,2,3,4,5,6,7|8,9,10}"));
        assert_eq!(join_bonds(&theta, &BondSet::empty(10)).unwrap(), theta);
        let g = BondSet::parse("{1-2}", 2).unwrap();
        assert_eq!(join_bonds(&SetPartition::finest(2), &g).unwrap(), SetPartition::coarsest(2));
    }

    #[test]
    fn moebius_values() {
        let p = sp("{1,2|3}");
        assert_eq!(moebius(&p, &p).unwrap(), 1);
        assert_eq!(moebius(&SetPartition::finest(3), &SetPartition::coarsest(3)).unwrap(), 2);
        assert_eq!(moebius(&SetPartition::finest(4), &SetPartition::coarsest(4)).unwrap(), -6);
        assert_eq!(moebius(&sp("{1,2|3}"), &sp("{1,3|2}")), Err(Error::NotComparable));
    }

    #[test]
    fn moebius_inversion_small() {
        for n in 1..=5 {
            let all = all_set_partitions(n);
            for p1 in &all {
                for p2 in all.iter().filter(|p2| p1.refines(p2)) {
                    let s: i128 = interval(p1, p2).unwrap().iter().map(|p| moebius(p, p2).unwrap()).sum();
                    assert_eq!(s, i128::from(p1 == p2));
                }
            }
        }
    }

    #[test]
    fn cumulants_of_small_blocks() {
        let r = |x: i64| BigRational::from_integer(BigInt::from(x));
        let k1 = joint_cumulant(&SetPartition::coarsest(2), |_| Ok(r(7))).unwrap();
        assert_eq!(k1, r(7));
        // X = block {1}, Y = block {2}; E XY = 5, E X = 2, E Y = 3
        let cov = joint_cumulant(&SetPartition::finest(2), |p| Ok(if p.num_blocks() == 1 { r(5) } else { r(6) })).unwrap();
        assert_eq!(cov, r(-1));
        assert_eq!(cumulant_terms(&SetPartition::finest(3)).unwrap().len(), 5);
    }

    #[test]
    fn matchings() {
        assert_eq!(pair_partitions(&[0, 1]).len(), 1);
        assert_eq!(pair_partitions(&[0, 1, 2, 3]).len(), 3);
        assert!(pair_partitions(&[0, 1, 2]).is_empty());
        assert_eq!(pair_partitions(&[0, 1, 2, 3, 4, 5]).len(), 15);
    }

    #[test]
    fn matrix_roundtrip() {
        let p = sp("{1,2,3|4,5}");
        let m = p.matrix();
        assert_eq!(m.get(0, 2), 1);
        assert_eq!(m.get(2, 3), 0);
        assert_eq!(m.to_partition().unwrap(), p);
        assert!(PartitionMatrix::from_rows(&[vec![1, 1, 0], vec![1, 1, 1], vec![0, 1, 1]]).is_err());
    }
}
