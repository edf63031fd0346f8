//! Differential operators on polynomials and Gaussian expectations.
//!
//! The Gaussian vector ζ has coordinates `ζ[i,j]`, `j = 0..replicas`, with
//! `E ζ[i,j] ζ[i',j'] = δ_{jj'} C(i,i')`. Recoupling by a matrix `Q` multiplies
//! every covariance by `Q(i,i')`. The natural transform `g ↦ g♮` returns
//! `E g(ζ⋆Q)` as a polynomial in the `q` variables.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bkar::BondSet;
use crate::error::{Error, Result};
use crate::partition::pair_partitions;
use crate::poly::{rational, Monomial, Polynomial, Var};

pub type Matrix = Vec<Vec<BigRational>>;

#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceSpec {
    c: Matrix,
    replicas: usize,
}

impl CovarianceSpec {
    /// `c` must be symmetric positive semidefinite; `replicas` is `2N+1`.
    pub fn new(c: Matrix, replicas: usize) -> Result<Self> {
        let n = c.len();
        for (i, row) in c.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix("covariance is not square".into()));
            }
            for j in 0..i {
                if c[i][j] != c[j][i] {
                    return Err(Error::InvalidMatrix("covariance is not symmetric".into()));
                }
            }
        }
        if !is_positive_semidefinite(&c) {
            return Err(Error::NotPositiveSemidefinite);
        }
        Ok(CovarianceSpec { c, replicas })
    }

    pub fn identity(n: usize, replicas: usize) -> Self {
        let c = (0..n).map(|i| (0..n).map(|j| rational(i64::from(i == j))).collect()).collect();
        CovarianceSpec { c, replicas }
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn replicas(&self) -> usize {
        self.replicas
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.c[i][j]
    }

    pub fn matrix(&self) -> &Matrix {
        &self.c
    }
}

/// Exact test by symmetric pivoted elimination: take a positive diagonal pivot,
/// form the Schur complement, repeat; a zero diagonal needs a zero row.
pub fn is_positive_semidefinite(m: &Matrix) -> bool {
    let mut a = m.clone();
    let mut alive: Vec<usize> = (0..a.len()).collect();
    while !alive.is_empty() {
        if alive.iter().any(|&i| a[i][i].is_negative()) {
            return false;
        }
        let Some(pos) = alive.iter().position(|&i| a[i][i].is_positive()) else {
            return alive.iter().all(|&i| alive.iter().all(|&j| a[i][j].is_zero()));
        };
        let p = alive.remove(pos);
        let pivot = a[p][p].clone();
        for &i in &alive {
            if a[i][p].is_zero() {
                continue;
            }
            let factor = &a[i][p] / &pivot;
            for &j in &alive {
                let delta = &factor * &a[p][j];
                a[i][j] -= delta;
            }
        }
    }
    true
}

fn replicas_of(g: &Polynomial, i: usize) -> BTreeSet<usize> {
    g.variables()
        .into_iter()
        .filter_map(|v| match v {
            Var::Z(a, j) if a == i => Some(j),
            _ => None,
        })
        .collect()
}

/// D_e = Σ_j ∂²/∂z[i,j]∂z[i',j] for the bond `e = {i,i'}`.
pub fn d_edge(g: &Polynomial, i: usize, i2: usize) -> Polynomial {
    let shared: Vec<usize> = replicas_of(g, i).intersection(&replicas_of(g, i2)).copied().collect();
    let mut out = Polynomial::zero();
    for j in shared {
        out += &g.derivative(Var::Z(i, j)).derivative(Var::Z(i2, j));
    }
    out
}

/// D^Γ = ∏_{e∈Γ} D_e.
pub fn d_gamma(g: &Polynomial, gamma: &BondSet) -> Polynomial {
    gamma.bonds().iter().fold(g.clone(), |acc, &(a, b)| if acc.is_zero() { acc } else { d_edge(&acc, a, b) })
}

/// ∂_e on functions of a symmetric matrix, for `e = {i,j}` with `i ≠ j`.
pub fn partial_sym(f: &Polynomial, i: usize, j: usize) -> Polynomial {
    f.derivative(Var::q(i, j))
}

/// ∂^Γ = ∏_{e∈Γ} ∂_e.
pub fn partial_sym_gamma(f: &Polynomial, gamma: &BondSet) -> Polynomial {
    gamma.bonds().iter().fold(f.clone(), |acc, &(a, b)| partial_sym(&acc, a, b))
}

/// Recoupled covariance `Q(i,i')C(i,i')` as a polynomial (diagonal `Q` is 1).
fn recoupled(c: &CovarianceSpec, i: usize, i2: usize) -> Polynomial {
    let cij = c.get(i, i2);
    if cij.is_zero() {
        Polynomial::zero()
    } else if i == i2 {
        Polynomial::constant(cij.clone())
    } else {
        Polynomial::var(Var::q(i, i2)).scale(cij)
    }
}

/// Groups the z-part of a monomial by replica and returns the remaining factor.
fn slices(m: &Monomial) -> (BTreeMap<usize, Vec<(usize, u32)>>, Monomial) {
    let (zpart, rest) = m.split(|v| matches!(v, Var::Z(..)));
    let mut by_replica: BTreeMap<usize, Vec<(usize, u32)>> = BTreeMap::new();
    for &(v, e) in zpart.powers() {
        if let Var::Z(i, j) = v {
            by_replica.entry(j).or_default().push((i, e));
        }
    }
    for pattern in by_replica.values_mut() {
        pattern.sort_unstable();
    }
    (by_replica, rest)
}

/// Applies `(1/m!)(½ Σ_{i,i'} Q(i,i')C(i,i') ∂²/∂z_i∂z_{i'})^m` to one replica slice.
fn slice_natural(pattern: &[(usize, u32)], c: &CovarianceSpec) -> Polynomial {
    let degree: u32 = pattern.iter().map(|p| p.1).sum();
    if degree % 2 == 1 {
        return Polynomial::zero();
    }
    let m = degree / 2;
    let points: Vec<usize> = pattern.iter().map(|p| p.0).collect();
    let mut cur = Polynomial::term(BigRational::one(), Monomial::from_powers(pattern.iter().map(|&(i, e)| (Var::Z(i, 0), e))));
    let half = BigRational::new(1.into(), 2.into());
    for _ in 0..m {
        let mut next = Polynomial::zero();
        for (a, &i) in points.iter().enumerate() {
            let di = cur.derivative(Var::Z(i, 0));
            if di.is_zero() {
                continue;
            }
            for &i2 in &points[a..] {
                let k = recoupled(c, i, i2);
                if k.is_zero() {
                    continue;
                }
                let second = di.derivative(Var::Z(i2, 0));
                if second.is_zero() {
                    continue;
                }
                // ordered pairs (i,i2),(i2,i) each carry ½
                let k = if i == i2 { k.scale(&half) } else { k };
                next += &(&second * &k);
            }
        }
        cur = next;
    }
    let m_factorial: BigRational = (1..=i64::from(m)).map(rational).fold(BigRational::one(), |a, b| a * b);
    cur.scale(&(BigRational::one() / m_factorial))
}

/// The natural transform `g♮`, a polynomial in the `q` variables (and any
/// non-`z` variables already in `g`).
pub fn natural(g: &Polynomial, c: &CovarianceSpec) -> Polynomial {
    let mut memo: HashMap<Vec<(usize, u32)>, Polynomial> = HashMap::new();
    let mut out = Polynomial::zero();
    'terms: for (m, coeff) in g.terms() {
        if m.z_degree() % 2 == 1 {
            continue;
        }
        let (by_replica, rest) = slices(m);
        let mut acc = Polynomial::term(coeff.clone(), rest);
        for pattern in by_replica.values() {
            let factor = memo.entry(pattern.clone()).or_insert_with(|| slice_natural(pattern, c));
            if factor.is_zero() {
                continue 'terms;
            }
            acc = &acc * factor;
        }
        out += &acc;
    }
    out
}

/// The natural transform computed by summing over perfect matchings of the
/// individual factors of each monomial.
pub fn natural_by_pairings(g: &Polynomial, c: &CovarianceSpec) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, coeff) in g.terms() {
        let (zpart, rest) = m.split(|v| matches!(v, Var::Z(..)));
        let factors: Vec<(usize, usize)> = zpart
            .powers()
            .iter()
            .flat_map(|&(v, e)| match v {
                Var::Z(i, j) => std::iter::repeat((i, j)).take(e as usize),
                _ => unreachable!(),
            })
            .collect();
        let idx: Vec<usize> = (0..factors.len()).collect();
        let mut sum = Polynomial::zero();
        for matching in pair_partitions(&idx) {
            let mut prod = Polynomial::one();
            for (a, b) in matching {
                let ((i, j), (i2, j2)) = (factors[a], factors[b]);
                let k = if j == j2 { recoupled(c, i, i2) } else { Polynomial::zero() };
                prod = &prod * &k;
                if prod.is_zero() {
                    break;
                }
            }
            sum += &prod;
        }
        out += &(&sum * &Polynomial::term(coeff.clone(), rest));
    }
    out
}

/// Checks that `q` is a symmetric matrix with unit diagonal and entries in `[0,1]`.
pub fn check_admissible(q: &Matrix) -> Result<()> {
    let n = q.len();
    for i in 0..n {
        if q[i].len() != n {
            return Err(Error::InvalidMatrix("not square".into()));
        }
        if !q[i][i].is_one() {
            return Err(Error::InvalidMatrix(format!("diagonal entry {} is not 1", i + 1)));
        }
        for j in 0..n {
            if q[i][j] != q[j][i] {
                return Err(Error::InvalidMatrix("not symmetric".into()));
            }
            if q[i][j].is_negative() || q[i][j] > BigRational::one() {
                return Err(Error::InvalidMatrix("entry outside [0,1]".into()));
            }
        }
    }
    Ok(())
}

/// Evaluates the `q` variables of `f` at the matrix `q`.
pub fn evaluate_at(f: &Polynomial, q: &Matrix) -> Result<BigRational> {
    f.evaluate(|v| match *v {
        Var::Q(i, j) if i < q.len() && j < q.len() => Some(q[i][j].clone()),
        _ => None,
    })
}

/// E g(ζ⋆Q) via the natural transform.
pub fn gaussian_expectation(g: &Polynomial, c: &CovarianceSpec, q: &Matrix) -> Result<BigRational> {
    check_admissible(q)?;
    evaluate_at(&natural(g, c), q)
}

/// E g(ζ⋆Q) via the direct matching sum.
pub fn gaussian_expectation_by_pairings(g: &Polynomial, c: &CovarianceSpec, q: &Matrix) -> Result<BigRational> {
    check_admissible(q)?;
    evaluate_at(&natural_by_pairings(g, c), q)
}
