//! Lie algebras acting in cochain computations: finite-dimensional algebras
//! given by structure constants, their matrix representations, vector
//! fields, and gauge algebras `F ⊗ g`.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::fields::{MatrixFunction, VectorField};
use crate::forms::{PForm, Subset};
use crate::linalg::RationalMatrix;
use crate::rational::Rational;
use crate::report::{CheckReport, Witness};
use crate::ring::{Model, RingElement};

/// A Lie algebra whose elements can be bracketed and combined linearly.
pub trait LieAlgebra: Send + Sync {
    type Elem: Clone + Send + Sync + fmt::Display;

    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn scale(&self, a: &Self::Elem, c: &Rational) -> Self::Elem;
}

/// Lie algebra with basis `x_0..x_{d-1}` and `[x_i, x_j] = Σ_k c_{ij}^k x_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLieAlgebra {
    name: String,
    dim: usize,
    labels: Vec<String>,
    /// `consts[i * dim + j]` lists the nonzero `(k, c_{ij}^k)`.
    consts: Vec<Vec<(usize, Rational)>>,
}

impl FiniteLieAlgebra {
    /// Builds the algebra from `(i, j, k, c_{ij}^k)` entries (only `i < j` needed;
    /// entries with `i > j` must agree with antisymmetry). Jacobi is checked.
    pub fn new(name: &str, labels: Vec<String>, entries: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        let dim = labels.len();
        let mut dense = vec![Rational::zero(); dim * dim * dim];
        let mut given = vec![false; dim * dim];
        for (i, j, k, c) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::IndexOutOfRange { index: i.max(j).max(k), dim });
            }
            if i == j && !c.is_zero() {
                return Err(Error::NotAntisymmetric(i, j));
            }
            dense[(i * dim + j) * dim + k] += c;
            given[i * dim + j] = true;
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let a = &dense[(i * dim + j) * dim + k];
                    let b = &dense[(j * dim + i) * dim + k];
                    if given[j * dim + i] && given[i * dim + j] && *a != -b {
                        return Err(Error::NotAntisymmetric(i, j));
                    }
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                if given[i * dim + j] && !given[j * dim + i] {
                    for k in 0..dim {
                        dense[(j * dim + i) * dim + k] = -&dense[(i * dim + j) * dim + k];
                    }
                }
            }
        }
        let consts = (0..dim * dim)
            .map(|ij| (0..dim).filter_map(|k| {
                let c = &dense[ij * dim + k];
                (!c.is_zero()).then(|| (k, c.clone()))
            }).collect())
            .collect();
        let alg = FiniteLieAlgebra { name: name.to_string(), dim, labels, consts };
        alg.check_jacobi()?;
        Ok(alg)
    }

    /// `gl_n` with basis `E_ij` at index `i*n + j`.
    pub fn gl(n: usize) -> Self {
        let mut entries = Vec::new();
        let idx = |i: usize, j: usize| i * n + j;
        for (i, j, k, l) in (0..4).map(|_| 0..n).multi_cartesian_product().map(|v| (v[0], v[1], v[2], v[3])) {
            // [E_ij, E_kl] = δ_jk E_il - δ_li E_kj
            if idx(i, j) >= idx(k, l) {
                continue;
            }
            if j == k {
                entries.push((idx(i, j), idx(k, l), idx(i, l), Rational::one()));
            }
            if l == i {
                entries.push((idx(i, j), idx(k, l), idx(k, j), -Rational::one()));
            }
        }
        let labels = (0..n).cartesian_product(0..n).map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect();
        Self::new(&format!("gl_{n}"), labels, &entries).expect("gl_n structure constants")
    }

    /// `sl_2` with basis `(e, h, f)`.
    pub fn sl2() -> Self {
        let one = Rational::one();
        let two = Rational::from(2);
        let entries = [(1, 0, 0, two.clone()), (1, 2, 2, -two), (0, 2, 1, one)];
        Self::new("sl_2", vec!["e".into(), "h".into(), "f".into()], &entries).expect("sl_2 structure constants")
    }

    pub fn abelian(n: usize) -> Self {
        Self::new(&format!("abelian_{n}"), (1..=n).map(|i| format!("x{i}")).collect(), &[]).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// `[x_i, x_j]` as sparse coordinates.
    pub fn structure(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.consts[i * self.dim + j]
    }

    pub fn check_jacobi(&self) -> Result<()> {
        let d = self.dim;
        for (a, b, c) in (0..d).tuple_combinations() {
            let mut total = vec![Rational::zero(); d];
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                for (k, ck) in self.structure(y, z) {
                    for (l, cl) in self.structure(x, *k) {
                        total[*l] += &(ck * cl);
                    }
                }
            }
            if total.iter().any(|v| !v.is_zero()) {
                return Err(Error::Jacobi(format!("({}, {}, {})", self.labels[a], self.labels[b], self.labels[c])));
            }
        }
        Ok(())
    }

    /// Bracket of coordinate vectors.
    pub fn bracket_coords(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, ai) in a.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let ab = ai * bj;
                for (k, c) in self.structure(i, j) {
                    out[*k] += &(&ab * c);
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    /// Matrix of `ad x_i` in the basis.
    pub fn ad(&self, i: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (k, c) in self.structure(i, j) {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    /// `K(x, y) = Tr(ad x ∘ ad y)`, with invariance verified.
    pub fn killing_form(&self) -> Result<InvariantForm> {
        let ads: Vec<RationalMatrix> = (0..self.dim).map(|i| self.ad(i)).collect();
        let mut m = RationalMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let p = ads[i].mul(&ads[j]);
                m.set(i, j, (0..self.dim).map(|k| p.get(k, k).clone()).sum());
            }
        }
        InvariantForm::new(self, m)
    }

    /// Betti numbers `dim H^p(g, R)` for `p = 0..dim` from ranks of the CE differential.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let d = self.dim;
        let ranks: Vec<usize> = (0..=d).map(|p| self.ce_matrix(p).rank()).collect();
        (0..=d)
            .map(|p| crate::forms::binomial(d, p) - ranks[p] - if p == 0 { 0 } else { ranks[p - 1] })
            .collect()
    }

    /// Matrix of `d: Λ^p g* → Λ^{p+1} g*` (rows: `(p+1)`-subsets, cols: `p`-subsets).
    pub fn ce_matrix(&self, p: usize) -> RationalMatrix {
        let d = self.dim;
        let src = Subset::all(d, p);
        let tgt = Subset::all(d, p + 1);
        let col = |s: Subset| src.binary_search(&s).unwrap();
        let mut m = RationalMatrix::zeros(tgt.len(), src.len());
        if p >= d {
            return m;
        }
        for (r, t) in tgt.iter().enumerate() {
            let ts: Vec<usize> = t.indices().collect();
            for (i, j) in (0..ts.len()).tuple_combinations() {
                let rest = t.remove(ts[i]).remove(ts[j]);
                let sign_ij = (i + j) % 2 == 1;
                for (k, c) in self.structure(ts[i], ts[j]) {
                    if rest.contains(*k) {
                        continue;
                    }
                    let neg = sign_ij ^ (rest.count_below(*k) % 2 == 1);
                    let cidx = col(rest.insert(*k));
                    let v = if neg { m.get(r, cidx) - c } else { m.get(r, cidx) + c };
                    m.set(r, cidx, v);
                }
            }
        }
        m
    }

    /// The defining matrix representation of the built-in algebras.
    pub fn defining_representation(self: &Arc<Self>) -> Result<Representation> {
        let mats = if let Some(n) = self.name.strip_prefix("gl_").and_then(|s| s.parse::<usize>().ok()) {
            (0..n)
                .cartesian_product(0..n)
                .map(|(i, j)| {
                    let mut m = RationalMatrix::zeros(n, n);
                    m.set(i, j, Rational::one());
                    m
                })
                .collect()
        } else if self.name == "sl_2" {
            let q = |r: [[i64; 2]; 2]| RationalMatrix::from_rows(r.iter().map(|row| row.iter().map(|&x| Rational::from(x)).collect()).collect());
            vec![q([[0, 1], [0, 0]]), q([[1, 0], [0, -1]]), q([[0, 0], [1, 0]])]
        } else {
            return Err(Error::InvalidArgument(format!("no defining representation for {}", self.name)));
        };
        Representation::new(self.clone(), mats)
    }
}

/// A symmetric invariant bilinear form on a finite Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantForm {
    matrix: RationalMatrix,
}

impl InvariantForm {
    /// Checks symmetry and `([x,y]|z) + (y|[x,z]) = 0` on basis triples.
    pub fn new(g: &FiniteLieAlgebra, matrix: RationalMatrix) -> Result<Self> {
        let d = g.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::DimensionMismatch(d, matrix.rows()));
        }
        if matrix != matrix.transpose() {
            return Err(Error::InvalidArgument("form is not symmetric".into()));
        }
        let form = InvariantForm { matrix };
        for (x, y, z) in (0..3).map(|_| 0..d).multi_cartesian_product().map(|v| (v[0], v[1], v[2])) {
            let xy = g.bracket_coords(&g.basis_vector(x), &g.basis_vector(y));
            let xz = g.bracket_coords(&g.basis_vector(x), &g.basis_vector(z));
            let s = &form.eval(&xy, &g.basis_vector(z)) + &form.eval(&g.basis_vector(y), &xz);
            if !s.is_zero() {
                return Err(Error::InvalidArgument(format!("form is not invariant at ({x}, {y}, {z})")));
            }
        }
        Ok(form)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        self.matrix.get(i, j)
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn eval(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                acc += &(&(ai * bj) * self.get(i, j));
            }
        }
        acc
    }
}

/// A matrix representation `ρ: g → gl(V)` given on the basis.
#[derive(Debug, Clone)]
pub struct Representation {
    alg: Arc<FiniteLieAlgebra>,
    mats: Vec<RationalMatrix>,
}

impl Representation {
    /// Verifies `ρ([x_i, x_j]) = [ρ(x_i), ρ(x_j)]` on basis pairs.
    pub fn new(alg: Arc<FiniteLieAlgebra>, mats: Vec<RationalMatrix>) -> Result<Self> {
        if mats.len() != alg.dim() {
            return Err(Error::LengthMismatch { expected: alg.dim(), got: mats.len() });
        }
        let size = mats.first().map_or(0, RationalMatrix::rows);
        for (i, j) in (0..alg.dim()).tuple_combinations() {
            let mut lhs = RationalMatrix::zeros(size, size);
            for (k, c) in alg.structure(i, j) {
                for r in 0..size {
                    for s in 0..size {
                        let v = lhs.get(r, s) + &(c * mats[*k].get(r, s));
                        lhs.set(r, s, v);
                    }
                }
            }
            let ab = mats[i].mul(&mats[j]);
            let ba = mats[j].mul(&mats[i]);
            for r in 0..size {
                for s in 0..size {
                    let res = &(lhs.get(r, s) - ab.get(r, s)) + ba.get(r, s);
                    if !res.is_zero() {
                        return Err(Error::NotRepresentation(format!(
                            "ρ([{}, {}]) - [ρ{}, ρ{}] has entry ({}, {}) = {res}",
                            alg.label(i), alg.label(j), alg.label(i), alg.label(j), r + 1, s + 1
                        )));
                    }
                }
            }
        }
        Ok(Representation { alg, mats })
    }

    pub fn algebra(&self) -> &Arc<FiniteLieAlgebra> {
        &self.alg
    }

    pub fn matrix(&self, i: usize) -> &RationalMatrix {
        &self.mats[i]
    }

    pub fn size(&self) -> usize {
        self.mats.first().map_or(0, RationalMatrix::rows)
    }

    /// `Tr(ρ(x_{i1}) ⋯ ρ(x_{ik}))`.
    pub fn trace_of_product(&self, idx: &[usize]) -> Rational {
        let Some((&first, rest)) = idx.split_first() else {
            return Rational::from(self.size() as i64);
        };
        let prod = rest.iter().fold(self.mats[first].clone(), |acc, &i| acc.mul(&self.mats[i]));
        (0..self.size()).map(|k| prod.get(k, k).clone()).sum()
    }
}

/// The finite-dimensional algebra acting on coordinate vectors.
impl LieAlgebra for FiniteLieAlgebra {
    type Elem = Coords;

    fn bracket(&self, a: &Coords, b: &Coords) -> Result<Coords> {
        Ok(Coords(self.bracket_coords(&a.0, &b.0)))
    }

    fn add(&self, a: &Coords, b: &Coords) -> Result<Coords> {
        Ok(Coords(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect()))
    }

    fn scale(&self, a: &Coords, c: &Rational) -> Coords {
        Coords(a.0.iter().map(|x| x * c).collect())
    }
}

/// Coordinates of a finite Lie algebra element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coords(pub Vec<Rational>);

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(", "))
    }
}

/// The Lie algebra of vector fields in one model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorFieldAlgebra {
    pub n: usize,
    pub model: Model,
}

impl LieAlgebra for VectorFieldAlgebra {
    type Elem = VectorField;

    fn bracket(&self, a: &VectorField, b: &VectorField) -> Result<VectorField> {
        a.bracket(b)
    }

    fn add(&self, a: &VectorField, b: &VectorField) -> Result<VectorField> {
        a.try_add(b)
    }

    fn scale(&self, a: &VectorField, c: &Rational) -> VectorField {
        a.scale(c)
    }
}

/// `F ⊗ g` with the pointwise bracket; `g` comes with a matrix representation.
#[derive(Debug, Clone)]
pub struct GaugeAlgebra {
    pub n: usize,
    pub model: Model,
    rep: Arc<Representation>,
}

/// `Σ_a f_a ⊗ x_a`, one coefficient function per basis element of `g`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaugeElement {
    coeffs: Vec<RingElement>,
    labels: Arc<Vec<String>>,
}

impl GaugeAlgebra {
    pub fn new(n: usize, model: Model, rep: Arc<Representation>) -> Self {
        GaugeAlgebra { n, model, rep }
    }

    pub fn representation(&self) -> &Arc<Representation> {
        &self.rep
    }

    pub fn g(&self) -> &FiniteLieAlgebra {
        self.rep.algebra()
    }

    fn labels(&self) -> Arc<Vec<String>> {
        Arc::new((0..self.g().dim()).map(|i| self.g().label(i).to_string()).collect())
    }

    pub fn zero(&self) -> GaugeElement {
        GaugeElement { coeffs: vec![RingElement::zero(self.n, self.model); self.g().dim()], labels: self.labels() }
    }

    /// The pure tensor `f ⊗ x_a`.
    pub fn pure(&self, f: RingElement, a: usize) -> Result<GaugeElement> {
        if a >= self.g().dim() {
            return Err(Error::IndexOutOfRange { index: a, dim: self.g().dim() });
        }
        if f.model() != self.model {
            return Err(Error::ModelMismatch(self.model, f.model()));
        }
        let mut z = self.zero();
        z.coeffs[a] = f;
        Ok(z)
    }

    pub fn from_coeffs(&self, coeffs: Vec<RingElement>) -> Result<GaugeElement> {
        if coeffs.len() != self.g().dim() {
            return Err(Error::LengthMismatch { expected: self.g().dim(), got: coeffs.len() });
        }
        Ok(GaugeElement { coeffs, labels: self.labels() })
    }

    /// The matrix function `Σ_a f_a ρ(x_a)`.
    pub fn to_matrix(&self, y: &GaugeElement) -> MatrixFunction {
        let size = self.rep.size();
        let mut entries = vec![RingElement::zero(self.n, self.model); size * size];
        for (a, f) in y.coeffs.iter().enumerate().filter(|(_, f)| !f.is_zero()) {
            let m = self.rep.matrix(a);
            for r in 0..size {
                for s in 0..size {
                    if !m.get(r, s).is_zero() {
                        entries[r * size + s] = &entries[r * size + s] + &f.scale(m.get(r, s));
                    }
                }
            }
        }
        MatrixFunction::from_entries(size, entries).expect("square")
    }

    /// The action of a vector field on coefficients.
    pub fn act(&self, x: &VectorField, y: &GaugeElement) -> Result<GaugeElement> {
        let coeffs = y.coeffs.iter().map(|f| x.apply(f)).collect::<Result<Vec<_>>>()?;
        Ok(GaugeElement { coeffs, labels: y.labels.clone() })
    }

    /// `θ(X)` as the gauge element `Σ_{ij} θ_ij ⊗ E_ij` of `F ⊗ gl_N`.
    pub fn theta_hat(&self, x: &VectorField) -> Result<GaugeElement> {
        let n = x.dim();
        if self.g().name() != format!("gl_{n}") {
            return Err(Error::InvalidArgument(format!("θ takes values in gl_{n}, not {}", self.g().name())));
        }
        let th = x.theta();
        self.from_coeffs(th.entries().to_vec())
    }
}

impl GaugeElement {
    pub fn coeff(&self, a: usize) -> &RingElement {
        &self.coeffs[a]
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RingElement::is_zero)
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaugeElement { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(), labels: self.labels.clone() }
    }
}

impl fmt::Display for GaugeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| format!("({c})⊗{}", self.labels[a]))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for GaugeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl LieAlgebra for GaugeAlgebra {
    type Elem = GaugeElement;

    fn bracket(&self, a: &GaugeElement, b: &GaugeElement) -> Result<GaugeElement> {
        let mut out = self.zero();
        for (i, fi) in a.coeffs.iter().enumerate().filter(|(_, f)| !f.is_zero()) {
            for (j, gj) in b.coeffs.iter().enumerate().filter(|(_, f)| !f.is_zero()) {
                let s = self.g().structure(i, j);
                if s.is_empty() {
                    continue;
                }
                let prod = fi.try_mul(gj)?;
                for (k, c) in s {
                    out.coeffs[*k] = &out.coeffs[*k] + &prod.scale(c);
                }
            }
        }
        Ok(out)
    }

    fn add(&self, a: &GaugeElement, b: &GaugeElement) -> Result<GaugeElement> {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.try_add(y)).collect::<Result<Vec<_>>>()?;
        Ok(GaugeElement { coeffs, labels: a.labels.clone() })
    }

    fn scale(&self, a: &GaugeElement, c: &Rational) -> GaugeElement {
        GaugeElement { coeffs: a.coeffs.iter().map(|f| f.scale(c)).collect(), labels: a.labels.clone() }
    }
}

/// Checks `θ([x,y]) = [θx, θy] + x.θy - y.θx` for a map into a gauge algebra.
pub fn check_crossed_hom_gauge<F>(
    name: &str,
    gauge: &GaugeAlgebra,
    theta: F,
    pairs: &[(VectorField, VectorField)],
) -> CheckReport
where
    F: Fn(&VectorField) -> Result<GaugeElement>,
{
    let mut report = CheckReport::new(name);
    for (x, y) in pairs {
        report.tuples_checked += 1;
        let residual = (|| -> Result<GaugeElement> {
            let (tx, ty) = (theta(x)?, theta(y)?);
            let lhs = theta(&x.bracket(y)?)?;
            let rhs = gauge.add(&gauge.bracket(&tx, &ty)?, &gauge.act(x, &ty)?)?.sub(&gauge.act(y, &tx)?);
            Ok(lhs.sub(&rhs))
        })();
        match residual {
            Ok(r) if r.is_zero() => {}
            Ok(r) => {
                report.fail(Witness::new(&[x, y], r.to_string()));
                break;
            }
            Err(e) => {
                report.fail(Witness::new(&[x, y], e.to_string()));
                break;
            }
        }
    }
    report
}

/// Checks `dκ̂ + ½[κ̂, κ̂] = 0` for a 1-form `κ̂ = Σ_a κ̂^a x_a` with values in `g`.
///
/// `[κ̂, κ̂]^k = Σ_{a,b} c_{ab}^k κ̂^a ∧ κ̂^b`.
pub fn check_maurer_cartan(name: &str, g: &FiniteLieAlgebra, kappa: &[PForm]) -> CheckReport {
    let mut report = CheckReport::new(name).with_param("algebra", g.name());
    if kappa.len() != g.dim() {
        report.fail_with(vec![], format!("expected {} components, got {}", g.dim(), kappa.len()));
        return report;
    }
    let Some(first) = kappa.first() else { return report };
    let (n, model) = (first.dim(), first.model());
    let half = Rational::new(1, 2);
    for k in 0..g.dim() {
        report.tuples_checked += 1;
        let mut res = kappa[k].ext_d();
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                for (kk, c) in g.structure(a, b) {
                    if *kk == k {
                        let w = kappa[a].wedge(&kappa[b]).unwrap_or_else(|_| PForm::zero(n, model, 2));
                        res = res.try_add(&w.scale(&(c * &half))).expect("2-forms");
                    }
                }
            }
        }
        if !res.is_zero() {
            report.fail_with(vec![format!("component {}", g.label(k))], res.to_string());
            break;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_algebras_satisfy_jacobi() {
        for g in [FiniteLieAlgebra::gl(1), FiniteLieAlgebra::gl(2), FiniteLieAlgebra::gl(3), FiniteLieAlgebra::sl2()] {
            g.check_jacobi().unwrap();
        }
        let bad = FiniteLieAlgebra::new(
            "bad",
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1, 2, Rational::one()), (1, 2, 0, Rational::one()), (0, 2, 0, Rational::one())],
        );
        assert!(matches!(bad, Err(Error::Jacobi(_))));
    }

    #[test]
    fn betti_numbers_of_small_algebras() {
        assert_eq!(FiniteLieAlgebra::gl(1).betti_numbers(), vec![1, 1]);
        assert_eq!(FiniteLieAlgebra::abelian(2).betti_numbers(), vec![1, 2, 1]);
        assert_eq!(FiniteLieAlgebra::gl(2).betti_numbers(), vec![1, 1, 0, 1, 1]);
        assert_eq!(FiniteLieAlgebra::sl2().betti_numbers(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn ce_matrices_square_to_zero() {
        let g = FiniteLieAlgebra::gl(2);
        for p in 0..3 {
            assert!(g.ce_matrix(p + 1).mul(&g.ce_matrix(p)).is_zero());
        }
    }

    #[test]
    fn killing_forms() {
        let k = FiniteLieAlgebra::sl2().killing_form().unwrap();
        assert_eq!(k.get(1, 1), &Rational::from(8));
        assert_eq!(k.get(0, 2), &Rational::from(4));
        assert_eq!(k.get(0, 0), &Rational::zero());
        let ab = FiniteLieAlgebra::abelian(2).killing_form().unwrap();
        assert!(ab.matrix().is_zero());
    }

    #[test]
    fn representations_are_checked() {
        let sl2 = Arc::new(FiniteLieAlgebra::sl2());
        let rep = sl2.defining_representation().unwrap();
        assert_eq!(rep.trace_of_product(&[0, 2]), Rational::one());
        let mut mats: Vec<RationalMatrix> = (0..3).map(|i| rep.matrix(i).clone()).collect();
        mats[1] = mats[1].transpose().mul(&RationalMatrix::from_rows(vec![
            vec![Rational::from(2), Rational::zero()],
            vec![Rational::zero(), Rational::from(2)],
        ]));
        assert!(matches!(Representation::new(sl2, mats), Err(Error::NotRepresentation(_))));
        let gl3 = Arc::new(FiniteLieAlgebra::gl(3));
        assert!(gl3.defining_representation().is_ok());
    }

    #[test]
    fn maurer_cartan_for_coframe() {
        let n = 2;
        let ab = FiniteLieAlgebra::abelian(n);
        let kappa: Vec<PForm> = (0..n).map(|i| PForm::coframe(n, Model::Torus, i).unwrap()).collect();
        assert!(check_maurer_cartan("flat", &ab, &kappa).passed());
        let f = RingElement::monomial(Model::Torus, &[1, 0], Rational::one()).unwrap();
        let bent: Vec<PForm> = kappa.iter().map(|k| k.mul_function(&f).unwrap()).collect();
        let r = check_maurer_cartan("bent", &ab, &bent);
        assert!(!r.passed() && r.witness.is_some());
    }

    #[test]
    fn theta_is_crossed_hom_into_gauge_gl() {
        let n = 2;
        let gl = Arc::new(FiniteLieAlgebra::gl(n));
        let gauge = GaugeAlgebra::new(n, Model::Torus, Arc::new(gl.defining_representation().unwrap()));
        let fields = crate::sampling::basis_fields(Model::Torus, n, 1);
        let pairs: Vec<_> = fields.iter().cloned().tuple_combinations().collect();
        let r = check_crossed_hom_gauge("theta", &gauge, |x| gauge.theta_hat(x), &pairs);
        assert!(r.passed(), "{r:?}");
        let flipped = |x: &VectorField| gauge.theta_hat(x).map(|y| gauge.scale(&y, &Rational::from(-1)));
        assert!(!check_crossed_hom_gauge("flipped", &gauge, flipped, &pairs).passed());
    }
}
