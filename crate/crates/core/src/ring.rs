//! Coefficient rings: Laurent polynomials (torus model) and polynomials
//! (affine model) in `N` variables over the rationals.
//!
//! Both models share one representation, a sorted list of
//! `(MultiIndex, Rational)` terms. They differ in the frame derivation:
//! on the torus `E_j = t_j ∂/∂t_j` acts by `E_j t^m = m_j t^m`, on affine
//! space `E_j = ∂/∂x_j` acts by the power rule.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Which coefficient ring (and frame) is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Laurent polynomials on `T^N`, frame `E_i = t_i ∂/∂t_i`, coframe `κ_i = dt_i/t_i`.
    Torus,
    /// Polynomials on `R^N`, frame `∂/∂x_i`, coframe `dx_i`.
    Affine,
}

impl Model {
    pub fn variable(self) -> &'static str {
        match self {
            Model::Torus => "t",
            Model::Affine => "x",
        }
    }

    pub fn coframe(self) -> &'static str {
        match self {
            Model::Torus => "κ",
            Model::Affine => "dx",
        }
    }

    pub fn frame(self) -> &'static str {
        match self {
            Model::Torus => "E",
            Model::Affine => "∂",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "torus" | "t" => Ok(Model::Torus),
            "affine" | "formal" | "r" => Ok(Model::Affine),
            other => Err(Error::Parse(format!("unknown model `{other}`"))),
        }
    }
}

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(SmallVec<[i32; 4]>);

impl MultiIndex {
    pub fn new(exps: &[i32]) -> Self {
        MultiIndex(SmallVec::from_slice(exps))
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    /// The `j`-th unit vector.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.0[j] = 1;
        m
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Sum of exponents (total degree in the affine model).
    pub fn total(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// Index of the first nonzero entry.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0)
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn negated(&self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| -a).collect())
    }

    fn with_entry_shifted(&self, j: usize, delta: i32) -> MultiIndex {
        let mut m = self.clone();
        m.0[j] += delta;
        m
    }
}

impl Index<usize> for MultiIndex {
    type Output = i32;
    fn index(&self, i: usize) -> &i32 {
        &self.0[i]
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i32>::deserialize(d)?;
        Ok(MultiIndex::new(&v))
    }
}

/// Merges two sorted term lists, adding coefficients and dropping zeros.
pub(crate) fn merge_sorted<K: Ord + Clone>(
    a: &[(K, Rational)],
    b: &[(K, Rational)],
    b_sign: bool,
) -> Vec<(K, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let c = if b_sign { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if b_sign { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(k, c)| (k.clone(), if b_sign { -c } else { c.clone() })));
    out
}

/// Sorts terms, combines equal keys and drops zeros.
pub(crate) fn normalize_terms<K: Ord>(mut terms: Vec<(K, Rational)>) -> Vec<(K, Rational)> {
    terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(K, Rational)> = Vec::with_capacity(terms.len());
    for (k, c) in terms {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += &c,
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// A Laurent polynomial or polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    n: usize,
    model: Model,
    terms: Vec<(MultiIndex, Rational)>,
}

impl RingElement {
    pub fn zero(n: usize, model: Model) -> Self {
        RingElement { n, model, terms: Vec::new() }
    }

    pub fn constant(n: usize, model: Model, c: Rational) -> Self {
        Self::monomial_unchecked(model, MultiIndex::zero(n), c)
    }

    pub fn one(n: usize, model: Model) -> Self {
        Self::constant(n, model, Rational::one())
    }

    /// `c * t^m` (or `c * x^m`); rejects negative exponents in the affine model.
    pub fn monomial(model: Model, exps: &[i32], c: Rational) -> Result<Self> {
        if model == Model::Affine && exps.iter().any(|&e| e < 0) {
            return Err(Error::NegativeExponent(exps.to_vec()));
        }
        Ok(Self::monomial_unchecked(model, MultiIndex::new(exps), c))
    }

    pub(crate) fn monomial_unchecked(model: Model, m: MultiIndex, c: Rational) -> Self {
        let n = m.len();
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        RingElement { n, model, terms }
    }

    /// Builds an element from arbitrary terms (combined and sorted).
    pub fn from_terms(n: usize, model: Model, terms: Vec<(MultiIndex, Rational)>) -> Result<Self> {
        for (m, _) in &terms {
            if m.len() != n {
                return Err(Error::DimensionMismatch(n, m.len()));
            }
            if model == Model::Affine && !m.is_nonnegative() {
                return Err(Error::NegativeExponent(m.as_slice().to_vec()));
            }
        }
        Ok(RingElement { n, model, terms: normalize_terms(terms) })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn terms(&self) -> &[(MultiIndex, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(MultiIndex, Rational)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Rational {
        self.terms
            .binary_search_by(|(k, _)| k.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// True if the element is a constant (possibly zero).
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.model != other.model {
            return Err(Error::ModelMismatch(self.model, other.model));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(RingElement {
            n: self.n,
            model: self.model,
            terms: merge_sorted(&self.terms, &other.terms, false),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(RingElement {
            n: self.n,
            model: self.model,
            terms: merge_sorted(&self.terms, &other.terms, true),
        })
    }

    /// Exact product; the support lies in the Minkowski sum of supports.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.n, self.model));
        }
        // a monomial factor shifts exponents uniformly, which preserves the order
        let (mono, poly) = if self.terms.len() == 1 {
            (&self.terms[0], other)
        } else if other.terms.len() == 1 {
            (&other.terms[0], self)
        } else {
            let mut prods = Vec::with_capacity(self.terms.len() * other.terms.len());
            for (ma, ca) in &self.terms {
                for (mb, cb) in &other.terms {
                    prods.push((ma.plus(mb), ca * cb));
                }
            }
            return Ok(RingElement { n: self.n, model: self.model, terms: normalize_terms(prods) });
        };
        let terms = poly
            .terms
            .iter()
            .map(|(m, c)| (m.plus(&mono.0), c * &mono.1))
            .collect();
        Ok(RingElement { n: self.n, model: self.model, terms })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.model);
        }
        RingElement {
            n: self.n,
            model: self.model,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Frame derivation `E_j` (0-based index).
    pub fn derive(&self, j: usize) -> Result<Self> {
        if j >= self.n {
            return Err(Error::IndexOutOfRange { index: j, dim: self.n });
        }
        Ok(self.partial(j))
    }

    pub(crate) fn partial(&self, j: usize) -> Self {
        let terms = match self.model {
            Model::Torus => self
                .terms
                .iter()
                .filter(|(m, _)| m[j] != 0)
                .map(|(m, c)| (m.clone(), c * &Rational::from(m[j])))
                .collect(),
            // lowering one exponent keeps the lexicographic order intact
            Model::Affine => self
                .terms
                .iter()
                .filter(|(m, _)| m[j] > 0)
                .map(|(m, c)| (m.with_entry_shifted(j, -1), c * &Rational::from(m[j])))
                .collect(),
        };
        RingElement { n: self.n, model: self.model, terms }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&MultiIndex::zero(self.n))
    }

    /// Largest `|m_i|` over the support (torus) or largest total degree (affine).
    pub fn spread(&self) -> i32 {
        self.terms
            .iter()
            .map(|(m, _)| match self.model {
                Model::Torus => m.as_slice().iter().map(|e| e.abs()).max().unwrap_or(0),
                Model::Affine => m.total(),
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for RingElement {
    /// Canonical text form: `coef * t^(m1,...,mN)` joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} * {}^{m}", self.model.variable())?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RingElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &'a RingElement) -> RingElement {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &'a RingElement) -> RingElement {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &'a RingElement) -> RingElement {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            n: self.n,
            model: self.model,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}
