//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables come in three families: `z[i,j]` (Gaussian coordinates, point `i`,
//! replica `j`), `q[i,j] = q[j,i]` (entries of a symmetric matrix) and the scalar `N`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Z(usize, usize),
    Q(usize, usize),
    N,
}

impl Var {
    pub fn z(i: usize, j: usize) -> Var {
        Var::Z(i, j)
    }

    /// Symmetric matrix entry; the index pair is stored sorted.
    pub fn q(i: usize, j: usize) -> Var {
        Var::Q(i.min(j), i.max(j))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(i, j) => write!(f, "z[{},{}]", i + 1, j),
            Var::Q(i, j) => write!(f, "q[{},{}]", i + 1, j + 1),
            Var::N => f.write_str("N"),
        }
    }
}

/// A product of variable powers, kept sorted with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            if e > 0 {
                *map.entry(v).or_default() += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |p| p.1)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn z_degree(&self) -> u32 {
        self.0.iter().filter(|p| matches!(p.0, Var::Z(..))).map(|p| p.1).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    std::cmp::Ordering::Less => out.push(*a.next().unwrap()),
                    std::cmp::Ordering::Greater => out.push(*b.next().unwrap()),
                    std::cmp::Ordering::Equal => {
                        out.push((x.0, x.1 + y.1));
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => out.push(*a.next().unwrap()),
                (None, Some(_)) => out.push(*b.next().unwrap()),
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Lowers the exponent of `v` by one, returning the old exponent (0 if absent).
    pub fn reduce(&self, v: Var) -> Option<(u32, Monomial)> {
        let k = self.0.iter().position(|p| p.0 == v)?;
        let e = self.0[k].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(k);
        } else {
            out[k].1 -= 1;
        }
        Some((e, Monomial(out)))
    }

    /// Splits off the factor whose variables satisfy `pred`.
    pub fn split(&self, pred: impl Fn(&Var) -> bool) -> (Monomial, Monomial) {
        let (yes, no): (Vec<_>, Vec<_>) = self.0.iter().partition(|p| pred(&p.0));
        (Monomial(yes), Monomial(no))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

pub fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        Polynomial::term(BigRational::one(), Monomial(vec![(v, 1)]))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The constant term when no variables remain.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// ∂/∂v
    pub fn derivative(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.reduce(v) {
                out.add_term(rest, c * rational(i64::from(e)));
            }
        }
        out
    }

    /// Keeps the terms whose monomial satisfies `pred`.
    pub fn filter_terms(&self, pred: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial { terms: self.terms.iter().filter(|(m, _)| pred(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Replaces each variable for which `value` returns `Some` by that constant.
    pub fn substitute(&self, value: impl Fn(&Var) -> Option<BigRational>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.powers() {
                match value(&v) {
                    Some(x) => coeff *= num_traits::pow(x, e as usize),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Full evaluation; fails on the first variable without a value.
    pub fn evaluate(&self, value: impl Fn(&Var) -> Option<BigRational>) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.powers() {
                let x = value(&v).ok_or_else(|| Error::UnexpectedVariable(v.to_string()))?;
                t *= num_traits::pow(x, e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.powers().iter().map(|p| p.0)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn uses_only(&self, pred: impl Fn(&Var) -> bool) -> bool {
        self.terms.keys().all(|m| m.powers().iter().all(|p| pred(&p.0)))
    }

    /// Parses the debug form written by `Display`: one `c * var^e * ...` term per line.
    pub fn parse(text: &str) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line == "0" {
                continue;
            }
            let mut factors = line.split('*').map(str::trim);
            let coeff = parse_rational(factors.next().unwrap_or(""))?;
            let mut powers = Vec::new();
            for f in factors {
                let (base, exp) = match f.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {f:?}")))?),
                    None => (f, 1),
                };
                powers.push((parse_var(base)?, exp));
            }
            out.add_term(Monomial::from_powers(powers), coeff);
        }
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad coefficient {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p.parse().map_err(|_| bad())?, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_var(s: &str) -> Result<Var> {
    if s == "N" {
        return Ok(Var::N);
    }
    let bad = || Error::Parse(format!("bad variable {s:?}"));
    let (family, rest) = s.split_at(1);
    let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    match family {
        "z" if a > 0 => Ok(Var::Z(a - 1, b)),
        "q" if a > 0 && b > 0 => Ok(Var::q(a - 1, b - 1)),
        _ => Err(bad()),
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let lines: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if m.0.is_empty() { c.to_string() } else { format!("{c} * {m}") })
            .collect();
        f.write_str(&lines.join("\n"))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

/// Nearest f64, for reporting only.
/// Serializes a rational as the string `"p/q"` (or `"p"` when integral).
pub fn serialize_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}
