//! Vector fields in the global frame, their bracket, divergence and the
//! matrix-valued crossed homomorphism `θ` with `L_X κ = -θ(X) κ`.

use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::forms::PForm;
use crate::rational::Rational;
use crate::report::{CheckReport, Witness};
use crate::ring::{Model, MultiIndex, RingElement};

/// `X = Σ f_i E_i` with coefficients in the model ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    model: Model,
    coeffs: Vec<RingElement>,
}

impl VectorField {
    pub fn zero(n: usize, model: Model) -> Self {
        VectorField { model, coeffs: vec![RingElement::zero(n, model); n] }
    }

    /// The frame field `E_j` (0-based).
    pub fn frame(n: usize, model: Model, j: usize) -> Self {
        let mut x = Self::zero(n, model);
        x.coeffs[j] = RingElement::one(n, model);
        x
    }

    /// The basis field `t^m E_j` (or `x^m ∂_j`).
    pub fn basis(model: Model, exps: &[i32], j: usize) -> Result<Self> {
        let n = exps.len();
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, dim: n });
        }
        let mut x = Self::zero(n, model);
        x.coeffs[j] = RingElement::monomial(model, exps, Rational::one())?;
        Ok(x)
    }

    pub fn from_coeffs(coeffs: Vec<RingElement>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidArgument("a vector field needs at least one coefficient".into()));
        };
        let (n, model) = (first.dim(), first.model());
        if coeffs.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: coeffs.len() });
        }
        for c in &coeffs {
            if c.model() != model {
                return Err(Error::ModelMismatch(model, c.model()));
            }
            if c.dim() != n {
                return Err(Error::DimensionMismatch(n, c.dim()));
            }
        }
        Ok(VectorField { model, coeffs })
    }

    /// The divergence-free field `t^m (m_2 E_1 - m_1 E_2)` on a torus of dimension ≥ 2.
    pub fn divergence_free(m: &MultiIndex) -> Result<Self> {
        if m.len() < 2 {
            return Err(Error::InvalidArgument("needs N ≥ 2".into()));
        }
        let mut x = Self::zero(m.len(), Model::Torus);
        let t = |c: i32| RingElement::monomial_unchecked(Model::Torus, m.clone(), Rational::from(c));
        x.coeffs[0] = t(m[1]);
        x.coeffs[1] = t(-m[0]);
        Ok(x)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn coeff(&self, i: usize) -> &RingElement {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RingElement::is_zero)
    }

    /// True if every coefficient is constant.
    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(RingElement::is_constant)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.model != other.model {
            return Err(Error::ModelMismatch(self.model, other.model));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(VectorField { model: self.model, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(VectorField { model: self.model, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VectorField { model: self.model, coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    /// `X·f = Σ f_i E_i f`.
    pub fn apply(&self, f: &RingElement) -> Result<RingElement> {
        if f.model() != self.model {
            return Err(Error::ModelMismatch(self.model, f.model()));
        }
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), f.dim()));
        }
        let mut acc = RingElement::zero(self.dim(), self.model);
        for (i, fi) in self.coeffs.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            let d = f.partial(i);
            if !d.is_zero() {
                acc = &acc + &(fi * &d);
            }
        }
        Ok(acc)
    }

    /// `[X,Y]_j = Σ_i (f_i E_i g_j - g_i E_i f_j)`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = (0..self.dim())
            .map(|j| Ok(&self.apply(&other.coeffs[j])? - &other.apply(&self.coeffs[j])?))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField { model: self.model, coeffs })
    }

    /// `θ(X)_{ij} = -E_j f_i`.
    pub fn theta(&self) -> MatrixFunction {
        let n = self.dim();
        let mut m = MatrixFunction::zero(n, self.model);
        for i in 0..n {
            for j in 0..n {
                m.entries[i * n + j] = -&self.coeffs[i].partial(j);
            }
        }
        m
    }

    /// `div X = Σ_j E_j f_j`.
    pub fn divergence(&self) -> RingElement {
        self.coeffs
            .iter()
            .enumerate()
            .fold(RingElement::zero(self.dim(), self.model), |acc, (j, f)| &acc + &f.partial(j))
    }
}

impl fmt::Display for VectorField {
    /// `(f_1)·E_1 + … + (f_N)·E_N`, zero coefficients omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})·{}_{}", self.model.frame(), i + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for VectorField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

/// Square matrix of ring elements, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixFunction {
    n: usize,
    model: Model,
    entries: Vec<RingElement>,
}

impl MatrixFunction {
    /// The `n × n` zero matrix over a ring in `n` variables.
    pub fn zero(n: usize, model: Model) -> Self {
        Self::zero_sized(n, n, model)
    }

    /// A `size × size` zero matrix over a ring in `vars` variables.
    pub fn zero_sized(size: usize, vars: usize, model: Model) -> Self {
        MatrixFunction { n: size, model, entries: vec![RingElement::zero(vars, model); size * size] }
    }

    pub fn from_entries(size: usize, entries: Vec<RingElement>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::LengthMismatch { expected: size * size, got: entries.len() });
        }
        let model = entries.first().map(RingElement::model).unwrap_or(Model::Torus);
        Ok(MatrixFunction { n: size, model, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    pub fn trace(&self) -> RingElement {
        (1..self.n).fold(self.get(0, 0).clone(), |acc, i| &acc + self.get(i, i))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                let mut acc = RingElement::zero(self.entries[0].dim(), self.model);
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.entries[i * n + j] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|a| a.scale(c))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Entrywise action of a vector field.
    pub fn derive_by(&self, x: &VectorField) -> Result<Self> {
        let entries = self.entries.iter().map(|e| x.apply(e)).collect::<Result<Vec<_>>>()?;
        Ok(MatrixFunction { entries, ..self.clone() })
    }

    /// Entrywise exterior differential.
    pub fn ext_d(&self) -> FormMatrix {
        FormMatrix { n: self.n, entries: self.entries.iter().map(|e| PForm::function(e).ext_d()).collect() }
    }

    pub fn as_forms(&self) -> FormMatrix {
        FormMatrix { n: self.n, entries: self.entries.iter().map(PForm::function).collect() }
    }

    fn map(&self, f: impl Fn(&RingElement) -> RingElement) -> Self {
        MatrixFunction { entries: self.entries.iter().map(f).collect(), ..self.clone() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&RingElement, &RingElement) -> RingElement) -> Self {
        MatrixFunction { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(), ..self.clone() }
    }
}

impl fmt::Display for MatrixFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).join(", "));
        write!(f, "[{}]", rows.map(|r| format!("[{r}]")).join(", "))
    }
}

impl fmt::Debug for MatrixFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for MatrixFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Square matrix of differential forms, multiplied with the wedge product.
#[derive(Clone, PartialEq, Eq)]
pub struct FormMatrix {
    n: usize,
    entries: Vec<PForm>,
}

impl FormMatrix {
    pub fn get(&self, i: usize, j: usize) -> &PForm {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let a0 = self.get(i, 0);
                let mut acc = PForm::zero(a0.dim(), a0.model(), a0.degree() + other.get(0, j).degree());
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.try_add(&a.wedge(b)?)?;
                    }
                }
                entries.push(acc);
            }
        }
        Ok(FormMatrix { n, entries })
    }

    pub fn trace(&self) -> Result<PForm> {
        (1..self.n).try_fold(self.get(0, 0).clone(), |acc, i| acc.try_add(self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(PForm::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(FormMatrix { n: self.n, entries })
    }

    pub fn neg(&self) -> Self {
        FormMatrix { n: self.n, entries: self.entries.iter().map(PForm::neg).collect() }
    }
}

/// Checks `θ([x,y]) = [θx, θy] + x.θy - y.θx` on every pair.
pub fn check_crossed_hom<F>(name: &str, theta: F, pairs: &[(VectorField, VectorField)]) -> CheckReport
where
    F: Fn(&VectorField) -> MatrixFunction,
{
    let mut report = CheckReport::new(name);
    for (x, y) in pairs {
        report.tuples_checked += 1;
        let residual = crossed_hom_residual(&theta, x, y);
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

fn crossed_hom_residual<F>(theta: &F, x: &VectorField, y: &VectorField) -> Result<MatrixFunction>
where
    F: Fn(&VectorField) -> MatrixFunction,
{
    let (tx, ty) = (theta(x), theta(y));
    let lhs = theta(&x.bracket(y)?);
    let rhs = tx.commutator(&ty).add(&ty.derive_by(x)?).sub(&tx.derive_by(y)?);
    Ok(lhs.sub(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(exps: &[i32]) -> RingElement {
        RingElement::monomial(Model::Torus, exps, Rational::one()).unwrap()
    }

    fn tf(exps: &[i32], j: usize) -> VectorField {
        VectorField::basis(Model::Torus, exps, j).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let (e1, e2) = (VectorField::frame(2, Model::Torus, 0), VectorField::frame(2, Model::Torus, 1));
        assert!(e1.bracket(&e2).unwrap().is_zero());
        assert_eq!(e1.bracket(&tf(&[1, 0], 0)).unwrap(), tf(&[1, 0], 0));
        let (a, b, c) = (e1.clone(), tf(&[1, 0], 1), tf(&[0, 1], 0));
        let jac = a
            .bracket(&b.bracket(&c).unwrap())
            .unwrap()
            .try_add(&b.bracket(&c.bracket(&a).unwrap()).unwrap())
            .unwrap()
            .try_add(&c.bracket(&a.bracket(&b).unwrap()).unwrap())
            .unwrap();
        assert!(jac.is_zero());
        assert!(e1.bracket(&VectorField::frame(2, Model::Affine, 0)).is_err());
    }

    #[test]
    fn theta_examples() {
        assert!(VectorField::frame(2, Model::Torus, 0).theta().is_zero());
        let th = tf(&[2, 1], 0).theta();
        assert_eq!(th.get(0, 0), &t(&[2, 1]).scale(&Rational::from(-2)));
        assert_eq!(th.get(0, 1), &t(&[2, 1]).scale(&Rational::from(-1)));
        assert!(th.get(1, 0).is_zero() && th.get(1, 1).is_zero());
        let ax = VectorField::basis(Model::Affine, &[2, 0], 0).unwrap().theta();
        assert_eq!(ax.get(0, 0), &RingElement::monomial(Model::Affine, &[1, 0], Rational::from(-2)).unwrap());
    }

    #[test]
    fn divergence_examples() {
        assert!(VectorField::frame(2, Model::Torus, 0).divergence().is_zero());
        assert_eq!(tf(&[2, 1], 0).divergence(), t(&[2, 1]).scale(&Rational::from(2)));
        for m in [[1, 0], [2, -1], [-2, 2]] {
            assert!(VectorField::divergence_free(&MultiIndex::new(&m)).unwrap().divergence().is_zero());
        }
    }

    #[test]
    fn flipped_sign_is_not_crossed_hom() {
        let x = VectorField::basis(Model::Affine, &[1, 0], 0).unwrap();
        let y = VectorField::basis(Model::Affine, &[2, 0], 0).unwrap();
        let good = check_crossed_hom("theta", VectorField::theta, &[(x.clone(), y.clone())]);
        assert!(good.passed());
        let plus_j = |v: &VectorField| v.theta().scale(&Rational::from(-1));
        // diagonal Jacobians commute, so this pair cannot see the sign
        assert!(check_crossed_hom("plus-jacobian", plus_j, &[(x, y)]).passed());
        let u = VectorField::basis(Model::Affine, &[0, 1], 0).unwrap();
        let v = VectorField::basis(Model::Affine, &[1, 0], 1).unwrap();
        let bad = check_crossed_hom("plus-jacobian", plus_j, &[(u, v)]);
        assert!(!bad.passed());
        assert!(bad.witness.is_some());
        let zero = check_crossed_hom("zero", |v: &VectorField| MatrixFunction::zero(v.dim(), v.model()), &[]);
        assert!(zero.passed());
    }

    pub(crate) fn field(model: Model, n: usize) -> impl Strategy<Value = VectorField> {
        let lo = if model == Model::Torus { -2 } else { 0 };
        prop::collection::vec((prop::collection::vec(lo..=2i32, n), 0..n, -2i64..=2), 1..3).prop_map(move |ts| {
            ts.into_iter().fold(VectorField::zero(n, model), |acc, (m, j, c)| {
                acc.try_add(&VectorField::basis(model, &m, j).unwrap().scale(&Rational::from(c))).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn lie_algebra_axioms(x in field(Model::Torus, 2), y in field(Model::Torus, 2), z in field(Model::Torus, 2)) {
            prop_assert_eq!(x.bracket(&y).unwrap(), y.bracket(&x).unwrap().scale(&Rational::from(-1)));
            let jac = x.bracket(&y.bracket(&z).unwrap()).unwrap()
                .try_add(&y.bracket(&z.bracket(&x).unwrap()).unwrap()).unwrap()
                .try_add(&z.bracket(&x.bracket(&y).unwrap()).unwrap()).unwrap();
            prop_assert!(jac.is_zero());
        }

        #[test]
        fn theta_is_crossed_hom(x in field(Model::Torus, 3), y in field(Model::Torus, 3),
                                a in field(Model::Affine, 2), b in field(Model::Affine, 2)) {
            prop_assert!(crossed_hom_residual(&VectorField::theta, &x, &y).unwrap().is_zero());
            prop_assert!(crossed_hom_residual(&VectorField::theta, &a, &b).unwrap().is_zero());
        }

        #[test]
        fn theta_matches_lie_derivative(x in field(Model::Torus, 3), a in field(Model::Affine, 3)) {
            for x in [&x, &a] {
                let n = x.dim();
                let th = x.theta();
                for i in 0..n {
                    let lhs = PForm::coframe(n, x.model(), i).unwrap().lie_derive(x).unwrap();
                    let mut rhs = PForm::zero(n, x.model(), 1);
                    for j in 0..n {
                        let term = PForm::monomial(th.get(i, j), crate::forms::Subset::single(j));
                        rhs = rhs.try_sub(&term).unwrap();
                    }
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }

        #[test]
        fn divergence_is_cocycle_and_minus_trace(x in field(Model::Torus, 2), y in field(Model::Torus, 2)) {
            prop_assert_eq!(x.divergence(), -&x.theta().trace());
            let lhs = x.bracket(&y).unwrap().divergence();
            let rhs = &x.apply(&y.divergence()).unwrap() - &y.apply(&x.divergence()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn theta_kernel_is_constant_fields(x in field(Model::Torus, 2), a in field(Model::Affine, 2)) {
            for x in [&x, &a] {
                prop_assert_eq!(x.theta().is_zero(), x.is_constant());
            }
        }
    }
}
