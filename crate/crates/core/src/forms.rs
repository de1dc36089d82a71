//! Differential forms in the global coframe, the exterior differential and
//! the canonical normal form for `Ω^p / dΩ^{p-1}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::VectorField;
use crate::linalg::RationalMatrix;
use crate::rational::Rational;
use crate::ring::{merge_sorted, normalize_terms, Model, MultiIndex, RingElement};

/// A strictly increasing set of coframe indices, stored as a bitmask.
///
/// Ordered lexicographically by the sorted index list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_indices(idx: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &i in idx {
            if i >= 32 {
                return Err(Error::IndexOutOfRange { index: i, dim: 32 });
            }
            if bits & (1 << i) != 0 {
                return Err(Error::InvalidArgument(format!("repeated index {i}")));
            }
            bits |= 1 << i;
        }
        Ok(Subset(bits))
    }

    pub fn single(i: usize) -> Self {
        Subset(1 << i)
    }

    /// `{0, …, n-1}`.
    pub fn full(n: usize) -> Self {
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut b = self.0;
        std::iter::from_fn(move || {
            if b == 0 {
                return None;
            }
            let i = b.trailing_zeros() as usize;
            b &= b - 1;
            Some(i)
        })
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    pub fn insert(self, i: usize) -> Self {
        Subset(self.0 | (1 << i))
    }

    pub fn remove(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    /// Number of elements strictly below `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u32 << i) - 1)).count_ones() as usize
    }

    /// Sign of `κ_I ∧ κ_J` relative to `κ_{I∪J}`; `None` if they overlap.
    pub fn wedge_sign(self, other: Subset) -> Option<bool> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0;
        for j in other.indices() {
            inversions += (self.0 >> j).count_ones();
        }
        Some(inversions % 2 == 1)
    }

    /// All subsets of `{0..n-1}` of size `p`, in lexicographic order.
    pub fn all(n: usize, p: usize) -> Vec<Subset> {
        (0..n).combinations(p).map(|c| Subset::from_indices(&c).unwrap()).collect()
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.indices().cmp(other.indices())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices().map(|i| i + 1)).finish()
    }
}

pub(crate) type FormKey = (MultiIndex, Subset);

/// A differential `p`-form `Σ c t^m κ_I`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PForm {
    n: usize,
    model: Model,
    degree: usize,
    terms: Vec<(FormKey, Rational)>,
}

impl PForm {
    pub fn zero(n: usize, model: Model, degree: usize) -> Self {
        PForm { n, model, degree, terms: Vec::new() }
    }

    /// A function viewed as a 0-form.
    pub fn function(f: &RingElement) -> Self {
        PForm {
            n: f.dim(),
            model: f.model(),
            degree: 0,
            terms: f.terms().iter().map(|(m, c)| ((m.clone(), Subset::EMPTY), c.clone())).collect(),
        }
    }

    /// The coframe 1-form `κ_i` (0-based).
    pub fn coframe(n: usize, model: Model, i: usize) -> Result<Self> {
        Self::basis(n, model, &[i])
    }

    /// The constant-coefficient form `κ_{i1} ∧ … ∧ κ_{ip}` (indices in any order, sign applied).
    pub fn basis(n: usize, model: Model, idx: &[usize]) -> Result<Self> {
        if let Some(&i) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        let s = Subset::from_indices(idx)?;
        let inversions = idx.iter().tuple_combinations().filter(|(a, b)| a > b).count();
        let c = if inversions % 2 == 0 { Rational::one() } else { -Rational::one() };
        Ok(PForm { n, model, degree: idx.len(), terms: vec![((MultiIndex::zero(n), s), c)] })
    }

    /// `f κ_I` for a sorted index set.
    pub fn monomial(f: &RingElement, s: Subset) -> Self {
        let terms = f.terms().iter().map(|(m, c)| ((m.clone(), s), c.clone())).collect();
        PForm { n: f.dim(), model: f.model(), degree: s.len(), terms }
    }

    /// Builds a form from `(exponents, sorted indices, coefficient)` triples.
    pub fn from_terms(
        n: usize,
        model: Model,
        degree: usize,
        terms: Vec<(MultiIndex, Subset, Rational)>,
    ) -> Result<Self> {
        for (m, s, _) in &terms {
            if m.len() != n {
                return Err(Error::DimensionMismatch(n, m.len()));
            }
            if s.len() != degree {
                return Err(Error::InvalidArgument(format!("term of degree {} in a {degree}-form", s.len())));
            }
            if s.max_index().is_some_and(|i| i >= n) {
                return Err(Error::IndexOutOfRange { index: s.max_index().unwrap(), dim: n });
            }
            if model == Model::Affine && !m.is_nonnegative() {
                return Err(Error::NegativeExponent(m.as_slice().to_vec()));
            }
        }
        let terms = normalize_terms(terms.into_iter().map(|(m, s, c)| ((m, s), c)).collect());
        Ok(PForm { n, model, degree, terms })
    }

    pub(crate) fn from_raw(n: usize, model: Model, degree: usize, terms: Vec<(FormKey, Rational)>) -> Self {
        PForm { n, model, degree, terms: normalize_terms(terms) }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn degree(&self) -> usize {
        self.degree
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

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, Subset, &Rational)> {
        self.terms.iter().map(|((m, s), c)| (m, *s, c))
    }

    /// The coefficient function of `κ_I`.
    pub fn component(&self, s: Subset) -> RingElement {
        let terms = self.terms.iter().filter(|((_, t), _)| *t == s).map(|((m, _), c)| (m.clone(), c.clone())).collect();
        RingElement::from_terms(self.n, self.model, terms).expect("consistent form")
    }

    /// The degree-0 form as a function.
    pub fn as_function(&self) -> Result<RingElement> {
        if self.degree != 0 {
            return Err(Error::DegreeOutOfRange { got: self.degree, reason: "expected a 0-form".into() });
        }
        Ok(self.component(Subset::EMPTY))
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
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(format!("adding forms of degree {} and {}", self.degree, other.degree)));
        }
        Ok(PForm { terms: merge_sorted(&self.terms, &other.terms, false), ..self.clone_empty() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(format!("subtracting forms of degree {} and {}", self.degree, other.degree)));
        }
        Ok(PForm { terms: merge_sorted(&self.terms, &other.terms, true), ..self.clone_empty() })
    }

    fn clone_empty(&self) -> Self {
        PForm { n: self.n, model: self.model, degree: self.degree, terms: Vec::new() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.clone_empty();
        }
        PForm { terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect(), ..self.clone_empty() }
    }

    pub fn neg(&self) -> Self {
        PForm { terms: self.terms.iter().map(|(k, a)| (k.clone(), -a)).collect(), ..self.clone_empty() }
    }

    /// Pointwise product with a function.
    pub fn mul_function(&self, f: &RingElement) -> Result<Self> {
        self.wedge(&PForm::function(f))
    }

    /// Exterior differential `d(f κ_I) = Σ_j (E_j f) κ_j ∧ κ_I`.
    pub fn ext_d(&self) -> PForm {
        let mut out = Vec::new();
        for ((m, s), c) in &self.terms {
            for j in 0..self.n {
                if s.contains(j) {
                    continue;
                }
                let (m2, factor) = match self.model {
                    Model::Torus if m[j] != 0 => (m.clone(), m[j]),
                    Model::Affine if m[j] > 0 => {
                        let mut e = m.as_slice().to_vec();
                        e[j] -= 1;
                        (MultiIndex::new(&e), m[j])
                    }
                    _ => continue,
                };
                let mut coef = c * &Rational::from(factor);
                if s.count_below(j) % 2 == 1 {
                    coef = -coef;
                }
                out.push(((m2, s.insert(j)), coef));
            }
        }
        PForm::from_raw(self.n, self.model, self.degree + 1, out)
    }

    /// Exterior product; forms of degree above `N` are zero.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let degree = self.degree + other.degree;
        if degree > self.n {
            return Ok(PForm::zero(self.n, self.model, degree));
        }
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for ((ma, sa), ca) in &self.terms {
            for ((mb, sb), cb) in &other.terms {
                let Some(neg) = sa.wedge_sign(*sb) else { continue };
                let c = ca * cb;
                out.push(((ma.plus(mb), Subset(sa.0 | sb.0)), if neg { -c } else { c }));
            }
        }
        Ok(PForm::from_raw(self.n, self.model, degree, out))
    }

    /// Insertion `i_X`; the matched factor is removed with sign `(-1)^{position-1}`.
    pub fn contract(&self, x: &VectorField) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeOutOfRange { got: 0, reason: "cannot contract a 0-form".into() });
        }
        if self.model != x.model() {
            return Err(Error::ModelMismatch(self.model, x.model()));
        }
        if self.n != x.dim() {
            return Err(Error::DimensionMismatch(self.n, x.dim()));
        }
        let mut out = Vec::new();
        for ((m, s), c) in &self.terms {
            for (pos, i) in s.indices().enumerate() {
                let coef = if pos % 2 == 0 { c.clone() } else { -c };
                let rest = s.remove(i);
                for (mf, cf) in x.coeff(i).terms() {
                    out.push(((m.plus(mf), rest), &coef * cf));
                }
            }
        }
        Ok(PForm::from_raw(self.n, self.model, self.degree - 1, out))
    }

    /// Lie derivative, expanded as `X(f) κ_I + f Σ κ_{i1} ∧ … ∧ d(f_{ik}) ∧ … ∧ κ_{ip}`.
    ///
    /// Agrees with the Cartan formula `i_X d + d i_X`.
    pub fn lie_derive(&self, x: &VectorField) -> Result<Self> {
        if self.model != x.model() {
            return Err(Error::ModelMismatch(self.model, x.model()));
        }
        if self.n != x.dim() {
            return Err(Error::DimensionMismatch(self.n, x.dim()));
        }
        let dfs: Vec<PForm> = (0..self.n).map(|i| PForm::function(x.coeff(i)).ext_d()).collect();
        let mut out = Vec::new();
        for ((m, s), c) in &self.terms {
            let f = RingElement::monomial_unchecked(self.model, m.clone(), c.clone());
            let xf = x.apply(&f)?;
            out.extend(xf.into_terms().into_iter().map(|(mm, cc)| ((mm, *s), cc)));
            for i in s.indices() {
                // κ_I = ± κ_i ∧ κ_{I∖i}; replace κ_i by d f_i
                let rest = s.remove(i);
                let neg = s.count_below(i) % 2 == 1;
                for ((md, sd), cd) in &dfs[i].terms {
                    let Some(neg2) = sd.wedge_sign(rest) else { continue };
                    let coef = c * cd;
                    let coef = if neg ^ neg2 { -coef } else { coef };
                    out.push(((m.plus(md), Subset(sd.0 | rest.0)), coef));
                }
            }
        }
        Ok(PForm::from_raw(self.n, self.model, self.degree, out))
    }

    /// Evaluation on vector fields: `ω(X_1, …, X_p) = i_{X_p} … i_{X_1} ω`.
    pub fn evaluate(&self, xs: &[VectorField]) -> Result<RingElement> {
        if xs.len() != self.degree {
            return Err(Error::LengthMismatch { expected: self.degree, got: xs.len() });
        }
        let mut w = self.clone();
        for x in xs {
            w = w.contract(x)?;
        }
        w.as_function()
    }

    /// Splits into Fourier/monomial modes.
    pub fn modes(&self) -> Vec<MultiIndex> {
        self.terms.iter().map(|((m, _), _)| m.clone()).dedup().collect()
    }

    /// Canonical representative of the class in `Ω^p / dΩ^{p-1}`.
    pub fn reduce_mod_exact(&self) -> FormClass {
        FormClass(match self.model {
            Model::Torus => self.reduce_torus(),
            Model::Affine => self.reduce_affine(),
        })
    }

    fn reduce_torus(&self) -> PForm {
        if self.degree == 0 {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for ((m, s), c) in &self.terms {
            let Some(js) = m.first_nonzero() else {
                out.push(((m.clone(), *s), c.clone()));
                continue;
            };
            if !s.contains(js) {
                out.push(((m.clone(), *s), c.clone()));
                continue;
            }
            // c t^m κ_I = ± c t^m κ_{j*} ∧ α, replaced by ∓ (c/m_{j*}) Σ_{j≠j*} m_j κ_j ∧ α
            let rest = s.remove(js);
            let sign_neg = s.count_below(js) % 2 == 1;
            let base = c / &Rational::from(m[js]);
            let base = if sign_neg { base } else { -base };
            for j in 0..self.n {
                if j == js || m[j] == 0 || rest.contains(j) {
                    continue;
                }
                let mut coef = &base * &Rational::from(m[j]);
                if rest.count_below(j) % 2 == 1 {
                    coef = -coef;
                }
                out.push(((m.clone(), rest.insert(j)), coef));
            }
        }
        PForm::from_raw(self.n, self.model, self.degree, out)
    }

    fn reduce_affine(&self) -> PForm {
        if self.degree == 0 || self.degree > self.n {
            return self.clone();
        }
        let p = self.degree as i32;
        let mut by_weight: Vec<(i32, Vec<(FormKey, Rational)>)> = Vec::new();
        for (k, c) in &self.terms {
            let w = k.0.total() + p;
            match by_weight.iter_mut().find(|(x, _)| *x == w) {
                Some((_, v)) => v.push((k.clone(), c.clone())),
                None => by_weight.push((w, vec![(k.clone(), c.clone())])),
            }
        }
        let mut out = Vec::new();
        for (w, terms) in by_weight {
            let ech = affine_exact_echelon(self.n, self.degree, w);
            out.extend(ech.reduce(&terms));
        }
        PForm::from_raw(self.n, self.model, self.degree, out)
    }
}

/// Row-reduced basis of the exact `p`-forms of one weight (affine model).
pub(crate) struct GradedEchelon {
    keys: Vec<FormKey>,
    index: HashMap<FormKey, usize>,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl GradedEchelon {
    fn reduce(&self, terms: &[(FormKey, Rational)]) -> Vec<(FormKey, Rational)> {
        let mut v = vec![Rational::zero(); self.keys.len()];
        for (k, c) in terms {
            v[self.index[k]] += c;
        }
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(&f * r);
                }
            }
        }
        self.keys.iter().cloned().zip(v).filter(|(_, c)| !c.is_zero()).collect()
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Monomial exponents of total degree `d` in `n` variables, ascending.
pub(crate) fn exponents_of_degree(n: usize, d: i32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0i32; n];
    fn rec(i: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<MultiIndex>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(MultiIndex::new(cur));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    if d >= 0 && n > 0 {
        rec(0, d, &mut cur, &mut out);
    }
    out.sort();
    out
}

type EchelonCache = RwLock<HashMap<(usize, usize, i32), Arc<GradedEchelon>>>;

static AFFINE_ECHELONS: LazyLock<EchelonCache> = LazyLock::new(Default::default);

/// Echelon data for `d(Ω^{p-1}_w) ⊂ Ω^p_w`, the weight being polynomial degree plus `p`.
pub(crate) fn affine_exact_echelon(n: usize, p: usize, w: i32) -> Arc<GradedEchelon> {
    if let Some(e) = AFFINE_ECHELONS.read().unwrap().get(&(n, p, w)) {
        return e.clone();
    }
    let keys: Vec<FormKey> = exponents_of_degree(n, w - p as i32)
        .into_iter()
        .flat_map(|m| Subset::all(n, p).into_iter().map(move |s| (m.clone(), s)))
        .sorted()
        .collect();
    let index: HashMap<FormKey, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let mut mat = RationalMatrix::zeros(0, keys.len());
    for m in exponents_of_degree(n, w - p as i32 + 1) {
        for s in Subset::all(n, p - 1) {
            let f = RingElement::monomial_unchecked(Model::Affine, m.clone(), Rational::one());
            let dw = PForm::monomial(&f, s).ext_d();
            let mut row = vec![Rational::zero(); keys.len()];
            for (key, c) in &dw.terms {
                row[index[key]] = c.clone();
            }
            mat.push_row(row);
        }
    }
    let pivots = mat.rref();
    let rows = pivots.iter().enumerate().map(|(r, &p)| (p, mat.row(r).to_vec())).collect();
    let ech = Arc::new(GradedEchelon { keys, index, rows });
    AFFINE_ECHELONS.write().unwrap().insert((n, p, w), ech.clone());
    ech
}

/// An element of `Ω^p / dΩ^{p-1}`, held as its canonical representative.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormClass(PForm);

impl FormClass {
    pub fn zero(n: usize, model: Model, degree: usize) -> Self {
        FormClass(PForm::zero(n, model, degree))
    }

    pub fn representative(&self) -> &PForm {
        &self.0
    }

    pub fn into_representative(self) -> PForm {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn dim(&self) -> usize {
        self.0.n
    }

    pub fn model(&self) -> Model {
        self.0.model
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    // canonical representatives form a linear complement, so sums stay canonical
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(FormClass(self.0.try_add(&other.0)?))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(FormClass(self.0.try_sub(&other.0)?))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FormClass(self.0.scale(c))
    }

    pub fn neg(&self) -> Self {
        FormClass(self.0.neg())
    }

    /// The action of a vector field by Lie derivative, descended to the quotient.
    pub fn lie_derive(&self, x: &VectorField) -> Result<Self> {
        Ok(self.0.lie_derive(x)?.reduce_mod_exact())
    }

    /// `d` descends to `Ω^p/B^p → Ω^{p+1}`.
    pub fn ext_d(&self) -> PForm {
        self.0.ext_d()
    }
}

/// de Rham cohomology dimensions `H^0..H^N` of the model space.
///
/// On the torus the mode-0 part carries the cohomology; exactness of every
/// other mode complex in the box `‖m‖_∞ ≤ 1` is checked by rank computation.
/// In the affine model the graded complexes of weight `≤ N + 1` are computed.
pub fn de_rham_dims(model: Model, n: usize) -> Vec<usize> {
    match model {
        Model::Torus => {
            for m in crate::sampling::mode_box(n, 1) {
                if m.is_zero() {
                    continue;
                }
                let dims = mode_complex_cohomology(&m);
                assert!(dims.iter().all(|&d| d == 0), "mode complex at {m} is not exact");
            }
            (0..=n).map(|p| binomial(n, p)).collect()
        }
        Model::Affine => {
            let mut h = vec![0usize; n + 1];
            for w in 0..=(n as i32 + 1) {
                for (p, hp) in h.iter_mut().enumerate() {
                    let dim_p = exponents_of_degree(n, w - p as i32).len() * binomial(n, p);
                    let rank_in = if p == 0 { 0 } else { affine_exact_echelon(n, p, w).rank() };
                    let rank_out = if p == n { 0 } else { affine_exact_echelon(n, p + 1, w).rank() };
                    *hp += dim_p - rank_in - rank_out;
                }
            }
            h
        }
    }
}

/// Cohomology of `Λ(κ)` with differential `μ_m ∧ ·`.
fn mode_complex_cohomology(m: &MultiIndex) -> Vec<usize> {
    let n = m.len();
    let rank = |p: usize| -> usize {
        if p >= n {
            return 0;
        }
        let src = Subset::all(n, p);
        let tgt = Subset::all(n, p + 1);
        let mut mat = RationalMatrix::zeros(src.len(), tgt.len());
        for (r, s) in src.iter().enumerate() {
            for j in 0..n {
                if s.contains(j) || m[j] == 0 {
                    continue;
                }
                let c = tgt.iter().position(|t| *t == s.insert(j)).unwrap();
                let v = Rational::from(if s.count_below(j) % 2 == 1 { -m[j] } else { m[j] });
                mat.set(r, c, v);
            }
        }
        mat.rank()
    };
    (0..=n).map(|p| binomial(n, p) - rank(p) - if p == 0 { 0 } else { rank(p - 1) }).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl fmt::Display for PForm {
    /// `coef * t^(m) κ_1∧κ_2` joined by ` + `; indices are 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((m, s), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} * {}^{m}", self.model.variable())?;
            if !s.is_empty() {
                let idx = s.indices().map(|j| format!("{}_{}", self.model.coframe(), j + 1)).join("∧");
                write!(f, " {idx}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

impl fmt::Debug for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// JSON shape of a form: coframe indices are 1-based.
#[derive(Serialize, Deserialize)]
struct FormJson {
    model: Model,
    dim: usize,
    degree: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exponents: MultiIndex,
    indices: Vec<usize>,
    coef: Rational,
}

impl Serialize for PForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormJson {
            model: self.model,
            dim: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|((m, sub), c)| TermJson {
                    exponents: m.clone(),
                    indices: sub.indices().map(|i| i + 1).collect(),
                    coef: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = FormJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            if t.indices.contains(&0) {
                return Err(D::Error::custom("coframe indices are 1-based"));
            }
            let idx: Vec<usize> = t.indices.iter().map(|i| i - 1).collect();
            if !idx.windows(2).all(|w| w[0] < w[1]) {
                return Err(D::Error::custom("coframe indices must be strictly increasing"));
            }
            let s = Subset::from_indices(&idx).map_err(D::Error::custom)?;
            terms.push((t.exponents, s, t.coef));
        }
        PForm::from_terms(j.dim, j.model, j.degree, terms).map_err(D::Error::custom)
    }
}

impl Serialize for FormClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::VectorField;
    use proptest::prelude::*;

    fn t(exps: &[i32]) -> RingElement {
        RingElement::monomial(Model::Torus, exps, Rational::one()).unwrap()
    }

    fn k(n: usize, idx: &[usize]) -> PForm {
        PForm::basis(n, Model::Torus, idx).unwrap()
    }

    #[test]
    fn differential_examples() {
        assert_eq!(PForm::function(&t(&[1, 0])).ext_d(), PForm::monomial(&t(&[1, 0]), Subset::single(0)));
        assert!(k(2, &[0, 1]).ext_d().is_zero());
        let w = PForm::monomial(&t(&[1, 1]), Subset::single(1));
        assert_eq!(w.ext_d(), PForm::monomial(&t(&[1, 1]), Subset::full(2)));
    }

    #[test]
    fn wedge_signs_and_overflow() {
        assert_eq!(k(2, &[1]).wedge(&k(2, &[0])).unwrap(), k(2, &[0, 1]).neg());
        assert_eq!(k(2, &[1, 0]), k(2, &[0, 1]).neg());
        let a = PForm::monomial(&t(&[1, 0]), Subset::single(0));
        let b = PForm::monomial(&t(&[0, 1]), Subset::single(1));
        assert_eq!(a.wedge(&b).unwrap(), PForm::monomial(&t(&[1, 1]), Subset::full(2)));
        let top = k(2, &[0, 1]).wedge(&k(2, &[0])).unwrap();
        assert!(top.is_zero());
        assert_eq!(top.degree(), 3);
    }

    #[test]
    fn contraction_examples() {
        let e1 = VectorField::frame(2, Model::Torus, 0);
        assert_eq!(k(2, &[0, 1]).contract(&e1).unwrap(), k(2, &[1]));
        assert!(k(3, &[0, 1]).contract(&VectorField::frame(3, Model::Torus, 2)).unwrap().is_zero());
        let x = VectorField::basis(Model::Torus, &[2, -1], 1).unwrap();
        assert_eq!(k(2, &[0, 1]).contract(&x).unwrap(), PForm::monomial(&t(&[2, -1]), Subset::single(0)).neg());
        assert!(PForm::function(&t(&[1, 0])).contract(&e1).is_err());
    }

    #[test]
    fn lie_derivative_examples() {
        let e1 = VectorField::frame(2, Model::Torus, 0);
        let w = PForm::monomial(&t(&[1, 0]), Subset::single(1));
        assert_eq!(w.lie_derive(&e1).unwrap(), w);
        let x = VectorField::basis(Model::Torus, &[1, 0], 0).unwrap();
        assert_eq!(k(2, &[0]).lie_derive(&x).unwrap(), PForm::monomial(&t(&[1, 0]), Subset::single(0)));
        assert!(PForm::function(&RingElement::one(2, Model::Torus)).lie_derive(&x).unwrap().is_zero());
    }

    #[test]
    fn torus_reduction_examples() {
        assert!(PForm::function(&t(&[1, 0])).ext_d().reduce_mod_exact().is_zero());
        assert_eq!(k(2, &[0]).reduce_mod_exact().representative(), &k(2, &[0]));
        let w2 = PForm::monomial(&t(&[1, 1]), Subset::single(1));
        assert_eq!(w2.reduce_mod_exact().representative(), &w2);
        let w1 = PForm::monomial(&t(&[1, 1]), Subset::single(0));
        assert_eq!(w1.reduce_mod_exact().representative(), &w2.neg());
    }

    #[test]
    fn de_rham_dimensions() {
        assert_eq!(de_rham_dims(Model::Torus, 2), vec![1, 2, 1]);
        assert_eq!(de_rham_dims(Model::Torus, 3), vec![1, 3, 3, 1]);
        assert_eq!(de_rham_dims(Model::Affine, 3), vec![1, 0, 0, 0]);
        assert_eq!(de_rham_dims(Model::Affine, 2), vec![1, 0, 0]);
    }

    #[test]
    fn json_roundtrip() {
        let w = PForm::monomial(&t(&[1, -2]).scale(&Rational::new(3, 4)), Subset::single(1));
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.contains("\"indices\":[2]"));
        let back: PForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        assert_eq!(w.to_string(), "3/4 * t^(1,-2) κ_2");
    }

    fn form(model: Model, n: usize, p: usize) -> impl Strategy<Value = PForm> {
        let lo = if model == Model::Torus { -2 } else { 0 };
        let subsets = Subset::all(n, p);
        prop::collection::vec((prop::collection::vec(lo..=2i32, n), 0..subsets.len(), -3i64..=3), 0..4).prop_map(
            move |ts| {
                let terms = ts.into_iter().map(|(m, s, c)| (MultiIndex::new(&m), subsets[s], Rational::from(c))).collect();
                PForm::from_terms(n, model, p, terms).unwrap()
            },
        )
    }

    fn field(model: Model, n: usize) -> impl Strategy<Value = VectorField> {
        let lo = if model == Model::Torus { -2 } else { 0 };
        prop::collection::vec((prop::collection::vec(lo..=2i32, n), 0..n, -2i64..=2), 1..3).prop_map(move |ts| {
            ts.into_iter().fold(VectorField::zero(n, model), |acc, (m, j, c)| {
                acc.try_add(&VectorField::basis(model, &m, j).unwrap().scale(&Rational::from(c))).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn d_squared_zero(w in form(Model::Torus, 3, 1), a in form(Model::Affine, 3, 1)) {
            prop_assert!(w.ext_d().ext_d().is_zero());
            prop_assert!(a.ext_d().ext_d().is_zero());
        }

        #[test]
        fn graded_leibniz(a in form(Model::Torus, 3, 1), b in form(Model::Torus, 3, 1)) {
            let lhs = a.wedge(&b).unwrap().ext_d();
            let rhs = a.ext_d().wedge(&b).unwrap().try_sub(&a.wedge(&b.ext_d()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().neg());
        }

        #[test]
        fn cartan_formula(w in form(Model::Torus, 3, 2), a in form(Model::Affine, 2, 1),
                          x in field(Model::Torus, 3), y in field(Model::Affine, 2)) {
            for (w, x) in [(&w, &x), (&a, &y)] {
                let cartan = w.ext_d().contract(x).unwrap().try_add(&w.contract(x).unwrap().ext_d()).unwrap();
                prop_assert_eq!(w.lie_derive(x).unwrap(), cartan);
            }
        }

        #[test]
        fn lie_derivative_is_derivation_and_rep(a in form(Model::Torus, 2, 1), b in form(Model::Torus, 2, 0),
                                                x in field(Model::Torus, 2), y in field(Model::Torus, 2)) {
            let lhs = a.wedge(&b).unwrap().lie_derive(&x).unwrap();
            let rhs = a.lie_derive(&x).unwrap().wedge(&b).unwrap()
                .try_add(&a.wedge(&b.lie_derive(&x).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let xy = x.bracket(&y).unwrap();
            let comm = a.lie_derive(&y).unwrap().lie_derive(&x).unwrap()
                .try_sub(&a.lie_derive(&x).unwrap().lie_derive(&y).unwrap()).unwrap();
            prop_assert_eq!(a.lie_derive(&xy).unwrap(), comm);
            prop_assert_eq!(a.ext_d().lie_derive(&x).unwrap(), a.lie_derive(&x).unwrap().ext_d());
        }

        #[test]
        fn reduction_is_canonical(w in form(Model::Torus, 3, 1), eta in form(Model::Torus, 3, 0),
                                  a in form(Model::Affine, 3, 2), b in form(Model::Affine, 3, 1)) {
            for (w, eta) in [(&w, &eta), (&a, &b)] {
                let r = w.reduce_mod_exact();
                prop_assert_eq!(&w.try_add(&eta.ext_d()).unwrap().reduce_mod_exact(), &r);
                prop_assert_eq!(&r.representative().reduce_mod_exact(), &r);
                // ω − reduce(ω) is exact, hence closed with no cohomological part
                let diff = w.try_sub(r.representative()).unwrap();
                prop_assert!(diff.ext_d().is_zero());
            }
        }

        #[test]
        fn reduced_zero_iff_exact(w in form(Model::Torus, 2, 1), a in form(Model::Affine, 2, 1)) {
            for w in [&w, &a] {
                // closed forms are exact except for constant torus coefficients
                let exact = w.ext_d().is_zero()
                    && (w.model() == Model::Affine || w.terms().all(|(m, _, _)| !m.is_zero()));
                prop_assert_eq!(w.reduce_mod_exact().is_zero(), exact);
            }
        }
    }
}
