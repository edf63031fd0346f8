//! Permutations of a finite ground set, numerical partitions and cycle-cuttings.
//!
//! Points are 0-based internally. The text form `"(1,8,6)(2,3,9,5)"` is 1-based,
//! with fixed points implied and the ground size supplied separately.
//!
//! Composition is right-to-left: `p.compose(&q)` maps `i` to `p(q(i))`. Every
//! product such as `θι` or `θσ` in this crate uses that convention.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::NotBijective(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 0-based disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(Error::Parse(format!("point {} exceeds ground size {n}", x + 1)));
                }
                if used[x] {
                    return Err(Error::Parse(format!("repeated letter {}", x + 1)));
                }
                used[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation such as `"(1,2)(3,4,5)"`; whitespace is ignored.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self> {
        let cycles = parse_cycle_list(text)?;
        let zero_based: Vec<Vec<usize>> = cycles
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|x| if x == 0 { Err(Error::Parse("point 0 is not allowed".into())) } else { Ok(x - 1) })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Permutation::from_cycles(n, &zero_based)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Self {
        Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() }
    }

    /// `ρ σ ρ⁻¹`.
    pub fn conjugate_by(&self, rho: &Permutation) -> Result<Self> {
        rho.compose(self)?.compose(&rho.inverse())
    }

    /// Orbits, each listed in cycle order starting from its least point, sorted by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            out.push(cyc);
        }
        out
    }

    /// Number of orbits, singletons included.
    pub fn num_orbits(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
            }
        }
        count
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.images[i] != i).collect()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.images[i] == i).collect()
    }

    /// Size of the orbit containing `i`.
    pub fn orbit_size(&self, i: usize) -> usize {
        let mut len = 1;
        let mut x = self.images[i];
        while x != i {
            len += 1;
            x = self.images[x];
        }
        len
    }

    /// Label of the orbit of every point: `orbit_index()[i]` indexes into `orbits()`.
    pub fn orbit_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.n()];
        for (k, orb) in self.orbits().iter().enumerate() {
            for &x in orb {
                idx[x] = k;
            }
        }
        idx
    }

    pub fn cycle_type(&self) -> NumericalPartition {
        NumericalPartition::new(self.orbits().iter().map(Vec::len).collect())
            .expect("orbit sizes are positive")
    }

    pub fn is_fpf_involution(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x != i && self.images[x] == i)
    }

    /// Canonical 1-based cycle notation; the identity prints as `()`.
    pub fn to_cycle_string(&self) -> String {
        let s: String = self
            .orbits()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| format!("({})", c.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        if s.is_empty() {
            "()".to_string()
        } else {
            s
        }
    }

    pub fn strike(&self, removed: &BTreeSet<usize>) -> LabeledPermutation {
        LabeledPermutation::from_permutation(self).strike(removed)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

fn parse_cycle_list(text: &str) -> Result<Vec<Vec<usize>>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cycles = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let body_end = rest
            .strip_prefix('(')
            .and_then(|r| r.find(')'))
            .ok_or_else(|| Error::Parse(format!("malformed cycle notation: {text:?}")))?;
        let body = &rest[1..=body_end];
        rest = &rest[body_end + 2..];
        if body.is_empty() {
            continue;
        }
        let cycle = body
            .split(',')
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad integer {t:?} in {text:?}"))))
            .collect::<Result<Vec<_>>>()?;
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// A permutation of an arbitrary finite label set, stored as a permutation of
/// `0..labels.len()` together with the sorted labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledPermutation {
    labels: Vec<usize>,
    perm: Permutation,
}

impl LabeledPermutation {
    pub fn from_permutation(p: &Permutation) -> Self {
        LabeledPermutation { labels: (0..p.n()).collect(), perm: p.clone() }
    }

    /// Builds from a map `label -> image label`; the labels need not be sorted.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let mut labels: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != pairs.len() {
            return Err(Error::NotBijective("repeated label".into()));
        }
        let pos = |x: usize| labels.binary_search(&x).map_err(|_| Error::NotBijective(format!("image {} outside labels", x + 1)));
        let mut images = vec![0; labels.len()];
        for &(a, b) in pairs {
            images[pos(a)?] = pos(b)?;
        }
        Ok(LabeledPermutation { perm: Permutation::from_images(images)?, labels })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn image(&self, label: usize) -> Option<usize> {
        let k = self.labels.binary_search(&label).ok()?;
        Some(self.labels[self.perm.image(k)])
    }

    pub fn num_orbits(&self) -> usize {
        self.perm.num_orbits()
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.perm.orbits().into_iter().map(|c| c.into_iter().map(|k| self.labels[k]).collect()).collect()
    }

    /// Removes every label in `removed`: each surviving label maps to the first
    /// surviving label along its forward orbit.
    pub fn strike(&self, removed: &BTreeSet<usize>) -> LabeledPermutation {
        let keep: Vec<usize> = (0..self.labels.len()).filter(|&k| !removed.contains(&self.labels[k])).collect();
        let mut new_pos = vec![usize::MAX; self.labels.len()];
        for (p, &k) in keep.iter().enumerate() {
            new_pos[k] = p;
        }
        let images = keep
            .iter()
            .map(|&k| {
                let mut x = self.perm.image(k);
                while new_pos[x] == usize::MAX {
                    x = self.perm.image(x);
                }
                new_pos[x]
            })
            .collect();
        LabeledPermutation {
            labels: keep.iter().map(|&k| self.labels[k]).collect(),
            perm: Permutation { images },
        }
    }

    pub fn to_cycle_string(&self) -> String {
        let s: String = self
            .orbits()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| format!("({})", c.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        if s.is_empty() {
            "()".into()
        } else {
            s
        }
    }
}

impl fmt::Display for LabeledPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

/// A numerical partition, parts weakly decreasing and positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NumericalPartition {
    parts: Vec<usize>,
}

impl NumericalPartition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(NumericalPartition { parts })
    }

    /// Parses `"4,2,2"`, `"(4,2,2)"` or `"4 2 2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts = text
            .trim_matches(|c: char| c == '(' || c == ')' || c == '[' || c == ']' || c.is_whitespace())
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad part {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if parts.is_empty() {
            return Err(Error::Parse("empty partition".into()));
        }
        NumericalPartition::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// |λ|
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// ℓ(λ)
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// m_i(λ)
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// z_λ = ∏ i^{m_i} m_i!
    pub fn z(&self) -> u128 {
        let mut z: u128 = 1;
        let mut k = 0;
        while k < self.parts.len() {
            let part = self.parts[k];
            let m = self.multiplicity(part);
            for j in 1..=m {
                z *= part as u128 * j as u128;
            }
            k += m;
        }
        z
    }

    /// 𝐦(λ) = ∏ λ_i
    pub fn product(&self) -> u128 {
        self.parts.iter().map(|&p| p as u128).product()
    }

    pub fn is_eulerian(&self) -> bool {
        self.parts.iter().all(|p| p % 2 == 0)
    }

    /// The permutation (1..λ₁)(λ₁+1..λ₁+λ₂)… of cycle type λ.
    pub fn representative(&self) -> Permutation {
        let n = self.size();
        let mut images = vec![0; n];
        let mut start = 0;
        for &p in &self.parts {
            for k in 0..p {
                images[start + k] = start + (k + 1) % p;
            }
            start += p;
        }
        Permutation { images }
    }

    /// All partitions of `n`, in reverse lexicographic order (`(n)` first).
    pub fn all(n: usize) -> Vec<NumericalPartition> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<NumericalPartition>) {
            if rem == 0 {
                out.push(NumericalPartition { parts: cur.clone() });
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for NumericalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
    }
}

/// One point chosen from every nontrivial orbit of `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleCutting {
    base: Permutation,
    points: Vec<usize>,
}

impl CycleCutting {
    pub fn new(base: Permutation, mut points: Vec<usize>) -> Result<Self> {
        points.sort_unstable();
        points.dedup();
        let idx = base.orbit_index();
        let mut hit = BTreeSet::new();
        for &a in &points {
            if a >= base.n() || base.image(a) == a {
                return Err(Error::InvalidCutting(format!("point {} is not in the support", a + 1)));
            }
            if !hit.insert(idx[a]) {
                return Err(Error::InvalidCutting(format!("two points in the orbit of {}", a + 1)));
            }
        }
        let nontrivial = base.orbits().iter().filter(|o| o.len() > 1).count();
        if hit.len() != nontrivial {
            return Err(Error::InvalidCutting("some nontrivial orbit has no point".into()));
        }
        Ok(CycleCutting { base, points })
    }

    pub fn base(&self) -> &Permutation {
        &self.base
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn contains(&self, i: usize) -> bool {
        self.points.binary_search(&i).is_ok()
    }
}

/// Every cycle-cutting of `sigma`; there are ∏ (nontrivial orbit sizes) of them.
pub fn cycle_cuttings(sigma: &Permutation) -> Vec<CycleCutting> {
    let orbits: Vec<Vec<usize>> = sigma.orbits().into_iter().filter(|o| o.len() > 1).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; orbits.len()];
    loop {
        let mut points: Vec<usize> = orbits.iter().zip(&choice).map(|(o, &c)| o[c]).collect();
        points.sort_unstable();
        out.push(CycleCutting { base: sigma.clone(), points });
        let mut k = 0;
        loop {
            if k == orbits.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < orbits[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// All permutations of `0..n` in lexicographic order of image lists.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation { images: cur.clone() }];
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(Permutation { images: cur.clone() });
    }
}

/// Calls `visit` on every `n`-cycle of `0..n`, `(n-1)!` of them.
pub fn for_each_long_cycle(n: usize, mut visit: impl FnMut(&Permutation)) {
    if n == 0 {
        return;
    }
    // cycle (0, a_1, ..., a_{n-1}) for every arrangement a of 1..n
    let mut rest: Vec<usize> = (1..n).collect();
    let mut images = vec![0; n];
    loop {
        let mut prev = 0;
        for &x in &rest {
            images[prev] = x;
            prev = x;
        }
        images[prev] = 0;
        visit(&Permutation { images: images.clone() });
        let m = rest.len();
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| rest[i] < rest[i + 1]) else {
            return;
        };
        let j = (i + 1..m).rev().find(|&j| rest[j] > rest[i]).expect("successor exists");
        rest.swap(i, j);
        rest[i + 1..].reverse();
    }
}

/// Fixed-point-free involutions of `0..n`, smallest unmatched point paired first.
pub fn fpf_involutions(n: usize) -> Vec<Permutation> {
    fn rec(images: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        let Some(a) = images.iter().position(|&x| x == usize::MAX) else {
            out.push(Permutation { images: images.clone() });
            return;
        };
        for b in a + 1..images.len() {
            if images[b] == usize::MAX {
                images[a] = b;
                images[b] = a;
                rec(images, out);
                images[a] = usize::MAX;
                images[b] = usize::MAX;
            }
        }
    }
    let mut out = Vec::new();
    if n % 2 == 0 {
        rec(&mut vec![usize::MAX; n], &mut out);
    }
    out
}

/// Builds a point set from 1-based labels.
pub fn points_from_one_based(labels: &[usize]) -> BTreeSet<usize> {
    labels.iter().map(|&x| x - 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn compose_identity() {
        let q = Permutation::identity(4);
        assert_eq!(p("(1,2,3,4)", 4).compose(&q).unwrap(), p("(1,2,3,4)", 4));
    }

    #[test]
    fn compose_convention() {
        let theta = p("(1,2,3,4)", 4);
        let r = theta.compose(&p("(1,2)(3,4)", 4)).unwrap();
        assert_eq!(r, p("(1,3)", 4));
        assert_eq!(r.num_orbits(), 3);
        let r = theta.compose(&p("(1,3)(2,4)", 4)).unwrap();
        assert_eq!(r, p("(1,4,3,2)", 4));
        assert_eq!(r.num_orbits(), 1);
    }

    #[test]
    fn compose_size_mismatch() {
        assert_eq!(
            Permutation::identity(3).compose(&Permutation::identity(4)),
            Err(Error::SizeMismatch(3, 4))
        );
    }

    #[test]
    fn parse_rejects_repeats_and_roundtrips() {
        assert!(Permutation::parse_cycles("(1,2)(2,3)", 3).is_err());
        assert!(Permutation::parse_cycles("(1,5)", 3).is_err());
        assert!(Permutation::parse_cycles("(1,2", 3).is_err());
        let s = p(" (1, 8,6)(2,3,9,5) ", 10);
        assert_eq!(s.to_cycle_string(), "(1,8,6)(2,3,9,5)");
        assert_eq!(Permutation::identity(3).to_cycle_string(), "()");
        assert_eq!(p("()", 3), Permutation::identity(3));
    }

    #[test]
    fn strike_snipping_figure() {
        let theta = p("(1,2)(3,4,5,6,7,8)(9,10,11,12)", 12);
        let x = points_from_one_based(&[1, 3, 4, 6, 9, 10]);
        let struck = theta.strike(&x);
        assert_eq!(struck.to_cycle_string(), "(5,7,8)(11,12)");
        assert_eq!(struck.labels().len(), 6);
    }

    #[test]
    fn strike_small_cases() {
        let tau = p("(1,2,3)", 3);
        assert_eq!(tau.strike(&BTreeSet::new()), LabeledPermutation::from_permutation(&tau));
        assert_eq!(tau.strike(&points_from_one_based(&[2])).to_cycle_string(), "(1,3)");
        let all: BTreeSet<usize> = (0..3).collect();
        assert!(tau.strike(&all).labels().is_empty());
    }

    #[test]
    fn cuttings() {
        let id = Permutation::identity(4);
        let c = cycle_cuttings(&id);
        assert_eq!(c.len(), 1);
        assert!(c[0].points().is_empty());

        let sigma = p("(1,4,5,2,6)(7,9,8)(10,11)", 11);
        let c = cycle_cuttings(&sigma);
        assert_eq!(c.len(), 30);
        let target: Vec<usize> = vec![4, 7, 9];
        assert!(c.iter().any(|cc| cc.points() == target.as_slice()));
        for cc in &c {
            let prod: usize = cc.points().iter().map(|&a| sigma.orbit_size(a)).product();
            assert_eq!(prod as u128, sigma.cycle_type().product());
        }

        let c = cycle_cuttings(&p("(1,2)", 2));
        let pts: Vec<Vec<usize>> = c.iter().map(|cc| cc.points().to_vec()).collect();
        assert_eq!(pts, vec![vec![0], vec![1]]);
    }

    #[test]
    fn cutting_validation() {
        let sigma = p("(1,2)(3,4)", 4);
        assert!(CycleCutting::new(sigma.clone(), vec![0, 2]).is_ok());
        assert!(CycleCutting::new(sigma.clone(), vec![0, 1]).is_err());
        assert!(CycleCutting::new(sigma.clone(), vec![0]).is_err());
        assert!(CycleCutting::new(p("(1,2)", 3), vec![0, 2]).is_err());
    }

    #[test]
    fn partition_statistics() {
        let lam = NumericalPartition::new(vec![2, 4, 2, 1]).unwrap();
        assert_eq!(lam.parts(), &[4, 2, 2, 1]);
        assert_eq!(lam.size(), 9);
        assert_eq!(lam.len(), 4);
        // z = 4^1 1! * 2^2 2! * 1^1 1!
        assert_eq!(lam.z(), 4 * 8);
        assert_eq!(lam.product(), 16);
        assert_eq!(lam.representative().cycle_type(), lam);
        assert_eq!(NumericalPartition::all(5).len(), 7);
        assert_eq!(NumericalPartition::all(8).len(), 22);
        assert_eq!(NumericalPartition::parse("(2,2)").unwrap().parts(), &[2, 2]);
    }

    #[test]
    fn enumerators() {
        assert_eq!(all_permutations(4).len(), 24);
        let mut count = 0;
        for_each_long_cycle(5, |c| {
            assert_eq!(c.num_orbits(), 1);
            count += 1;
        });
        assert_eq!(count, 24);
        assert_eq!(fpf_involutions(6).len(), 15);
        assert!(fpf_involutions(5).is_empty());
        assert!(fpf_involutions(4).iter().all(Permutation::is_fpf_involution));
    }
}
