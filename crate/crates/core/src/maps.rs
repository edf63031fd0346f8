//! Planar maps as permutation pairs, Tutte's counting formulas and the exact
//! GUE joint cumulant of traces as a polynomial in `N`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{cumulant_terms, DisjointSets, SetPartition};
use crate::perm::{fpf_involutions, NumericalPartition, Permutation};
use crate::poly::rational;

/// An ordered pair `(θ, ι)` encoding a planar map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MapPair {
    pub theta: Permutation,
    pub iota: Permutation,
}

impl MapPair {
    pub fn new(theta: Permutation, iota: Permutation) -> Result<Self> {
        if theta.n() != iota.n() {
            return Err(Error::SizeMismatch(theta.n(), iota.n()));
        }
        if !is_map_pair(&theta, &iota) {
            return Err(Error::Constraint(format!("({theta}, {iota}) is not a planar map")));
        }
        Ok(MapPair { theta, iota })
    }
}

/// True when ⟨a,b⟩ acts transitively on the ground set.
pub fn generates_transitive(a: &Permutation, b: &Permutation) -> bool {
    let n = a.n();
    let mut ds = DisjointSets::new(n);
    let mut components = n;
    for i in 0..n {
        for p in [a, b] {
            if ds.union(i, p.image(i)) {
                components -= 1;
            }
        }
    }
    components <= 1
}

/// ι a fixed-point-free involution, `ℓ(θ) − ℓ(ι) + ℓ(θι) = 2`, and ⟨θ,ι⟩ transitive.
pub fn is_map_pair(theta: &Permutation, iota: &Permutation) -> bool {
    theta.n() == iota.n()
        && iota.is_fpf_involution()
        && theta.num_orbits() + theta.compose_unchecked(iota).num_orbits() == 2 + iota.num_orbits()
        && generates_transitive(theta, iota)
}

/// Map_n(θ), sorted by image list.
pub fn enumerate_maps(theta: &Permutation) -> Vec<Permutation> {
    let mut out: Vec<Permutation> =
        fpf_involutions(theta.n()).into_par_iter().filter(|iota| is_map_pair(theta, iota)).collect();
    out.sort();
    out
}

/// Counts for an Eulerian λ from the two closed forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TutteCounts {
    pub rooted: BigRational,
    pub labeled: BigRational,
}

fn factorial(m: usize) -> BigInt {
    (1..=m).map(BigInt::from).product()
}

fn binomial(a: usize, b: usize) -> BigInt {
    factorial(a) / (factorial(b) * factorial(a - b))
}

/// `1/k!`, read as 0 for negative `k`.
fn inverse_factorial(k: i64) -> BigRational {
    if k < 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::one(), factorial(k as usize))
    }
}

/// Rooted (`𝔐*_λ`) and half-edge-labeled (`𝔐_λ`) counts of planar maps with vertex degrees λ.
pub fn tutte(lambda: &NumericalPartition) -> Result<TutteCounts> {
    if !lambda.is_eulerian() || lambda.is_empty() {
        return Err(Error::NotEulerian(lambda.parts().to_vec()));
    }
    let half = lambda.size() / 2;
    let l = lambda.len() as i64;
    let top = inverse_factorial(half as i64 - l + 2);

    let mut rooted = BigRational::from_integer(BigInt::from(2) * factorial(half)) * &top;
    let mut k = 0;
    while k < lambda.len() {
        let part = lambda.parts()[k];
        let m = lambda.multiplicity(part);
        let i = part / 2;
        rooted *= BigRational::new(binomial(2 * i - 1, i).pow(m as u32), factorial(m));
        k += m;
    }

    let mut labeled = BigRational::from_integer(factorial(half - 1)) * top;
    for &p in lambda.parts() {
        labeled *= BigRational::from_integer(BigInt::from(p / 2) * binomial(p, p / 2));
    }
    Ok(TutteCounts { rooted, labeled })
}

/// `𝔐*_λ = n 𝔐_λ / z_λ`.
pub fn rooted_from_labeled(lambda: &NumericalPartition, labeled: &BigRational) -> BigRational {
    labeled * rational(lambda.size() as i64) / BigRational::from_integer(BigInt::from(lambda.z()))
}

/// A polynomial in `N` with integer coefficients; `coeffs[k]` multiplies `N^k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CumulantPolynomial {
    coeffs: Vec<i128>,
}

impl CumulantPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        CumulantPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> i128 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn evaluate(&self, n: i128) -> i128 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * n + c)
    }

    /// `[exponent, coefficient]` pairs, highest exponent first, zeros omitted.
    pub fn pairs(&self) -> Vec<[i128; 2]> {
        self.coeffs.iter().enumerate().rev().filter(|(_, &c)| c != 0).map(|(k, &c)| [k as i128, c]).collect()
    }

    fn mul(&self, other: &CumulantPolynomial) -> CumulantPolynomial {
        if self.is_zero() || other.is_zero() {
            return CumulantPolynomial::default();
        }
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            for (b, y) in other.coeffs.iter().enumerate() {
                out[a + b] += x * y;
            }
        }
        CumulantPolynomial::from_coeffs(out)
    }

    fn add_scaled(&mut self, other: &CumulantPolynomial, s: i128) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0);
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            self.coeffs[k] += s * c;
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }
}

impl fmt::Display for CumulantPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for [k, c] in self.pairs() {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("N")?,
                (1, _) => write!(f, "{a}N")?,
                (_, 1) => write!(f, "N^{k}")?,
                _ => write!(f, "{a}N^{k}")?,
            }
        }
        Ok(())
    }
}

/// E ∏_{A} tr Ξ^{|A|} over the θ-orbits in `points`: Σ_ι N^{ℓ(θι)} over
/// fixed-point-free involutions ι of `points`.
fn block_moment(theta: &Permutation, points: &[usize]) -> CumulantPolynomial {
    let s = points.len();
    let local: HashMap<usize, usize> = points.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let images: Vec<usize> = points.iter().map(|&p| local[&theta.image(p)]).collect();
    let theta_s = Permutation::from_images(images).expect("orbit unions are invariant");
    let mut coeffs = vec![0i128; s + 1];
    for iota in fpf_involutions(s) {
        coeffs[theta_s.compose_unchecked(&iota).num_orbits()] += 1;
    }
    CumulantPolynomial::from_coeffs(coeffs)
}

/// κ(tr Ξ^{λ_1}, …, tr Ξ^{λ_ℓ}) for a standard GUE matrix Ξ of size N.
pub fn cumulant_polynomial(lambda: &NumericalPartition) -> Result<CumulantPolynomial> {
    let n = lambda.size();
    if n % 2 == 1 {
        return Ok(CumulantPolynomial::default());
    }
    if n > 14 {
        return Err(Error::SizeLimit(format!("cumulant polynomial for n = {n} > 14")));
    }
    let theta = lambda.representative();
    let orbits = SetPartition::from_orbits(&theta);
    let mut memo: HashMap<Vec<usize>, CumulantPolynomial> = HashMap::new();
    let mut out = CumulantPolynomial::default();
    for (p, mu) in cumulant_terms(&orbits)? {
        let mut moment = CumulantPolynomial::from_coeffs(vec![1]);
        for block in p.blocks() {
            let factor = memo.entry(block.clone()).or_insert_with(|| block_moment(&theta, &block));
            moment = moment.mul(factor);
        }
        out.add_scaled(&moment, mu);
    }
    Ok(out)
}

/// Coefficient of `N^{n/2+2−ℓ}` in the cumulant polynomial; 0 when that exponent is negative.
pub fn thooft_leading(lambda: &NumericalPartition) -> Result<i128> {
    let poly = cumulant_polynomial(lambda)?;
    let e = (lambda.size() / 2 + 2) as i64 - lambda.len() as i64;
    Ok(if e < 0 { 0 } else { poly.coefficient(e as usize) })
}

/// Row of the `tutte`/`thooft` report.
#[derive(Clone, Debug, Serialize)]
pub struct MapSummary {
    pub lambda: Vec<usize>,
    #[serde(rename = "M")]
    pub m: u128,
    #[serde(rename = "Mstar")]
    pub mstar: u128,
    pub cumulant_poly: Vec<[i128; 2]>,
}

fn integer(x: &BigRational) -> Result<u128> {
    use num_traits::ToPrimitive;
    x.is_integer()
        .then(|| x.to_integer().to_u128())
        .flatten()
        .ok_or_else(|| Error::Invalid(format!("{x} is not a nonnegative integer")))
}

pub fn map_summary(lambda: &NumericalPartition) -> Result<MapSummary> {
    let counts = tutte(lambda)?;
    Ok(MapSummary {
        lambda: lambda.parts().to_vec(),
        m: integer(&counts.labeled)?,
        mstar: integer(&counts.rooted)?,
        cumulant_poly: cumulant_polynomial(lambda)?.pairs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(parts: &[usize]) -> NumericalPartition {
        NumericalPartition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn figure_one_is_a_map() {
        let theta = Permutation::parse_cycles("(1,8,6)(2,3,9,5)(4,7,12,10)", 12).unwrap();
        let iota = Permutation::parse_cycles("(1,9)(2,10)(3,11)(4,7)(5,6)(8,12)", 12).unwrap();
        assert!(MapPair::new(theta, iota).is_ok());
    }

    #[test]
    fn small_map_sets() {
        let theta = Permutation::parse_cycles("(1,2)", 2).unwrap();
        assert_eq!(enumerate_maps(&theta), vec![theta.clone()]);
        let theta = Permutation::parse_cycles("(1,2,3,4)", 4).unwrap();
        let maps = enumerate_maps(&theta);
        assert_eq!(maps.len(), 2);
        assert!(!maps.contains(&Permutation::parse_cycles("(1,3)(2,4)", 4).unwrap()));
        assert!(enumerate_maps(&Permutation::identity(3)).is_empty());
    }

    #[test]
    fn tutte_values() {
        let t = tutte(&lam(&[2])).unwrap();
        assert_eq!((t.rooted, t.labeled), (rational(1), rational(1)));
        for (m, cat) in [(2, 2), (3, 5), (4, 14)] {
            assert_eq!(tutte(&lam(&[2 * m])).unwrap().rooted, rational(cat));
        }
        assert_eq!(tutte(&lam(&[2, 2])).unwrap().labeled, rational(2));
        assert!(tutte(&lam(&[3, 1])).is_err());
        for l in NumericalPartition::all(8).into_iter().filter(NumericalPartition::is_eulerian) {
            let t = tutte(&l).unwrap();
            assert_eq!(rooted_from_labeled(&l, &t.labeled), t.rooted);
        }
    }

    #[test]
    fn cumulant_polynomial_values() {
        assert_eq!(cumulant_polynomial(&lam(&[2])).unwrap().coeffs(), &[0, 0, 1]);
        assert_eq!(cumulant_polynomial(&lam(&[4])).unwrap().coeffs(), &[0, 1, 0, 2]);
        assert_eq!(cumulant_polynomial(&lam(&[2, 2])).unwrap().coeffs(), &[0, 0, 2]);
        assert!(cumulant_polynomial(&lam(&[3])).unwrap().is_zero());
        assert_eq!(thooft_leading(&lam(&[4])).unwrap(), 2);
        assert_eq!(cumulant_polynomial(&lam(&[4])).unwrap().to_string(), "2N^3 + N");
        assert_eq!(cumulant_polynomial(&lam(&[4])).unwrap().pairs(), vec![[3, 2], [1, 1]]);
    }

    #[test]
    fn summary_json() {
        let s = serde_json::to_string(&map_summary(&lam(&[4])).unwrap()).unwrap();
        assert_eq!(s, r#"{"lambda":[4],"M":2,"Mstar":2,"cumulant_poly":[[3,2],[1,1]]}"#);
    }
}
