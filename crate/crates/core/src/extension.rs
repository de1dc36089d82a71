//! Central extensions of gauge algebras on the torus by `Ω̄^1` and their
//! twisted semidirect products with vector fields.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;
use serde_json::json;

use crate::cochain::{search_tuples, Cochain, Value};
use crate::error::{Error, Result};
use crate::fields::VectorField;
use crate::forms::{FormClass, PForm, Subset};
use crate::lie::{GaugeAlgebra, GaugeElement, InvariantForm, LieAlgebra};
use crate::rational::Rational;
use crate::report::{CheckReport, Witness};
use crate::ring::{Model, MultiIndex, RingElement};
use crate::sampling::{mode_box, random_field, random_form, random_function, SampleRng};

/// `(y, c, X)` with `y ∈ F ⊗ k`, `c ∈ Ω̄^1` and `X` a vector field.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtensionElement {
    pub gauge: GaugeElement,
    pub central: FormClass,
    pub field: VectorField,
}

impl ExtensionElement {
    pub fn is_zero(&self) -> bool {
        self.gauge.is_zero() && self.central.is_zero() && self.field.is_zero()
    }
}

impl fmt::Display for ExtensionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}; {})", self.gauge, self.central, self.field)
    }
}

impl fmt::Debug for ExtensionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ExtensionElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json!({
            "gauge": self.gauge.to_string(),
            "central": self.central,
            "field": self.field.to_string(),
        })
        .serialize(s)
    }
}

/// `g_τ = (F ⊗ k ⊕ Ω̄^1) ⊕_τ V` on `T^N`.
#[derive(Clone)]
pub struct ExtensionAlgebra {
    pub n: usize,
    gauge: Arc<GaugeAlgebra>,
    form: InvariantForm,
    tau: Option<Cochain<VectorField>>,
}

impl ExtensionAlgebra {
    pub fn new(gauge: Arc<GaugeAlgebra>, form: InvariantForm, tau: Option<Cochain<VectorField>>) -> Result<Self> {
        if gauge.model != Model::Torus {
            return Err(Error::UnsupportedModel(format!("{:?}", gauge.model)));
        }
        if let Some(t) = &tau {
            if t.degree() != 2 {
                return Err(Error::DegreeOutOfRange { got: t.degree(), reason: "a twist is a 2-cochain".into() });
            }
        }
        Ok(ExtensionAlgebra { n: gauge.n, gauge, form, tau })
    }

    pub fn gauge(&self) -> &Arc<GaugeAlgebra> {
        &self.gauge
    }

    pub fn tau_name(&self) -> &str {
        self.tau.as_ref().map_or("0", |t| t.name())
    }

    pub fn element(&self, gauge: GaugeElement, central: &PForm, field: VectorField) -> Result<ExtensionElement> {
        if central.degree() != 1 || central.dim() != self.n || field.dim() != self.n {
            return Err(Error::DimensionMismatch(self.n, if field.dim() != self.n { field.dim() } else { central.dim() }));
        }
        Ok(ExtensionElement { gauge, central: central.reduce_mod_exact(), field })
    }

    pub fn zero(&self) -> ExtensionElement {
        ExtensionElement {
            gauge: self.gauge.zero(),
            central: FormClass::zero(self.n, Model::Torus, 1),
            field: VectorField::zero(self.n, Model::Torus),
        }
    }

    pub fn from_gauge(&self, y: GaugeElement) -> ExtensionElement {
        ExtensionElement { gauge: y, ..self.zero() }
    }

    pub fn from_central(&self, c: &PForm) -> ExtensionElement {
        ExtensionElement { central: c.reduce_mod_exact(), ..self.zero() }
    }

    pub fn from_field(&self, x: VectorField) -> ExtensionElement {
        ExtensionElement { field: x, ..self.zero() }
    }

    /// `([y_1, y_2], Σ (x_a|x_b) [f_{2,b} d f_{1,a}])`.
    pub fn central_cocycle(&self, y1: &GaugeElement, y2: &GaugeElement) -> Result<(GaugeElement, FormClass)> {
        let br = self.gauge.bracket(y1, y2)?;
        let mut c = PForm::zero(self.n, Model::Torus, 1);
        for (a, f1) in y1.coeffs().iter().enumerate().filter(|(_, f)| !f.is_zero()) {
            let df1 = PForm::function(f1).ext_d();
            for (b, f2) in y2.coeffs().iter().enumerate().filter(|(_, f)| !f.is_zero()) {
                let k = self.form.get(a, b);
                if !k.is_zero() {
                    c = c.try_add(&df1.mul_function(f2)?.scale(k))?;
                }
            }
        }
        Ok((br, c.reduce_mod_exact()))
    }

    fn twist(&self, x: &VectorField, y: &VectorField) -> Result<FormClass> {
        let Some(t) = &self.tau else { return Ok(FormClass::zero(self.n, Model::Torus, 1)) };
        match t.eval(&[x.clone(), y.clone()])? {
            Value::Class(c) if c.degree() == 1 => Ok(c),
            Value::Form(w) if w.degree() == 1 => Ok(w.reduce_mod_exact()),
            other => Err(Error::InvalidArgument(format!("twist must take values in Ω̄^1, got {other}"))),
        }
    }

    /// `[(y,c,X), (y',c',X')] = ([y,y'] + X.y' - X'.y, ω(y,y') + X.c' - X'.c + τ(X,X'), [X,X'])`.
    pub fn bracket(&self, a: &ExtensionElement, b: &ExtensionElement) -> Result<ExtensionElement> {
        let (gy, cy) = self.central_cocycle(&a.gauge, &b.gauge)?;
        let gauge = self.gauge.add(&gy, &self.gauge.act(&a.field, &b.gauge)?.sub(&self.gauge.act(&b.field, &a.gauge)?))?;
        let central = cy
            .try_add(&b.central.lie_derive(&a.field)?)?
            .try_sub(&a.central.lie_derive(&b.field)?)?
            .try_add(&self.twist(&a.field, &b.field)?)?;
        Ok(ExtensionElement { gauge, central, field: a.field.bracket(&b.field)? })
    }

    pub fn add(&self, a: &ExtensionElement, b: &ExtensionElement) -> Result<ExtensionElement> {
        Ok(ExtensionElement {
            gauge: self.gauge.add(&a.gauge, &b.gauge)?,
            central: a.central.try_add(&b.central)?,
            field: a.field.try_add(&b.field)?,
        })
    }

    /// `[[a,b],c] + [[b,c],a] + [[c,a],b]`.
    pub fn jacobiator(&self, a: &ExtensionElement, b: &ExtensionElement, c: &ExtensionElement) -> Result<ExtensionElement> {
        let t1 = self.bracket(&self.bracket(a, b)?, c)?;
        let t2 = self.bracket(&self.bracket(b, c)?, a)?;
        let t3 = self.bracket(&self.bracket(c, a)?, b)?;
        self.add(&self.add(&t1, &t2)?, &t3)
    }

    /// Basis elements with modes in `window`: `t^m ⊗ x_a`, reduced classes `[t^m κ_j]`, and `t^m E_j`.
    pub fn basis_window(&self, window: &[MultiIndex]) -> Vec<ExtensionElement> {
        let n = self.n;
        let mut out = Vec::new();
        for m in window {
            let t = RingElement::monomial(Model::Torus, m.as_slice(), Rational::one()).expect("torus monomial");
            for a in 0..self.gauge.g().dim() {
                out.push(self.from_gauge(self.gauge.pure(t.clone(), a).expect("basis index")));
            }
        }
        for m in window {
            let t = RingElement::monomial(Model::Torus, m.as_slice(), Rational::one()).expect("torus monomial");
            for j in (0..n).filter(|&j| m.first_nonzero() != Some(j)) {
                out.push(self.from_central(&PForm::monomial(&t, Subset::single(j))));
            }
        }
        for m in window {
            for j in 0..n {
                out.push(self.from_field(VectorField::basis(Model::Torus, m.as_slice(), j).expect("torus field")));
            }
        }
        out
    }

    pub fn random_element(&self, rng: &mut SampleRng, r: i32, terms: usize) -> ExtensionElement {
        let coeffs = (0..self.gauge.g().dim()).map(|_| random_function(rng, Model::Torus, self.n, r, terms)).collect();
        ExtensionElement {
            gauge: self.gauge.from_coeffs(coeffs).expect("one coefficient per basis element"),
            central: random_form(rng, Model::Torus, self.n, 1, r, terms).reduce_mod_exact(),
            field: random_field(rng, Model::Torus, self.n, r, terms),
        }
    }

    /// Exact Jacobi check on every 3-subset of `base` plus the `extra` triples.
    pub fn jacobi_check(&self, base: &[ExtensionElement], extra: &[Vec<ExtensionElement>]) -> CheckReport {
        let start = std::time::Instant::now();
        let mut report = CheckReport::new(format!("jacobi:g_tau[{}]", self.tau_name()))
            .with_param("N", self.n)
            .with_param("k", self.gauge.g().name())
            .with_param("basis_elements", base.len())
            .with_param("extra_triples", extra.len());
        let (count, witness) = search_tuples(base, 3, true, extra, |t| {
            let j = self.jacobiator(&t[0], &t[1], &t[2])?;
            Ok((!j.is_zero()).then(|| j.to_string()))
        });
        report.tuples_checked = count;
        if let Some(w) = witness {
            report.fail(w);
        }
        report.wall_time_ms = start.elapsed().as_millis() as u64;
        report
    }

    /// Antisymmetry `[a,b] + [b,a] = 0` on the given pairs.
    pub fn antisymmetry_check(&self, pairs: &[(ExtensionElement, ExtensionElement)]) -> CheckReport {
        let mut report = CheckReport::new(format!("antisymmetry:g_tau[{}]", self.tau_name())).with_param("N", self.n);
        for (a, b) in pairs {
            report.tuples_checked += 1;
            let s = self.bracket(a, b).and_then(|x| self.add(&x, &self.bracket(b, a)?));
            match s {
                Ok(s) if s.is_zero() => {}
                Ok(s) => {
                    report.fail(Witness::new(&[a, b], s.to_string()));
                    break;
                }
                Err(e) => {
                    report.fail(Witness::new(&[a, b], format!("error: {e}")));
                    break;
                }
            }
        }
        report
    }

    /// Brackets of all pairs of window basis elements, as JSON.
    pub fn structure_constants(&self, window: &[MultiIndex]) -> Result<serde_json::Value> {
        let basis = self.basis_window(window);
        let mut brackets = Vec::new();
        for ((i, a), (j, b)) in basis.iter().enumerate().tuple_combinations() {
            let c = self.bracket(a, b)?;
            if !c.is_zero() {
                brackets.push(json!({ "i": i, "j": j, "bracket": c }));
            }
        }
        Ok(json!({
            "N": self.n,
            "k": self.gauge.g().name(),
            "tau": self.tau_name(),
            "basis": basis,
            "brackets": brackets,
        }))
    }
}

/// `τ(X,Y) = [κ_1(X) κ_2(Y) κ_1]`, deliberately not alternating and not a cocycle.
pub fn planted_twist(n: usize) -> Result<Cochain<VectorField>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("needs N ≥ 2, got {n}")));
    }
    let k1 = PForm::coframe(n, Model::Torus, 0)?;
    Ok(Cochain::new("planted", 2, move |args: &[VectorField]| {
        let f = args[0].coeff(0).try_mul(args[1].coeff(1))?;
        Ok(Value::Class(k1.mul_function(&f)?.reduce_mod_exact()))
    }))
}

/// The Virasoro cocycle `τ(t^a E_1, t^b E_1) = δ_{a+b,0} a^3 [κ_1]` on `T^1`.
pub fn virasoro_twist() -> Cochain<VectorField> {
    let k1 = PForm::coframe(1, Model::Torus, 0).expect("N = 1");
    Cochain::new("virasoro", 2, move |args: &[VectorField]| {
        let (f, g) = (args[0].coeff(0), args[1].coeff(0));
        if args[0].dim() != 1 {
            return Err(Error::DimensionMismatch(1, args[0].dim()));
        }
        let mut v = Rational::zero();
        for (m, c) in f.terms() {
            let a = Rational::from(m[0] as i64);
            v += &(&(c * &g.coefficient(&m.negated())) * &a.pow(3));
        }
        Ok(Value::Class(k1.scale(&v).reduce_mod_exact()))
    })
}

/// Modes in `{0, 1}^n`.
pub fn unit_window(n: usize) -> Vec<MultiIndex> {
    mode_box(n, 1).into_iter().filter(|m| m.is_nonnegative()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{is_cocycle, FieldAction, Samples, Trivial};
    use crate::cocycles::psibar_k;
    use crate::lie::{FiniteLieAlgebra, VectorFieldAlgebra};
    use crate::sampling::{basis_fields, rng};

    fn sl2_ext(n: usize, tau: Option<Cochain<VectorField>>) -> ExtensionAlgebra {
        let g = Arc::new(FiniteLieAlgebra::sl2());
        let rep = Arc::new(g.defining_representation().unwrap());
        let k = g.killing_form().unwrap();
        ExtensionAlgebra::new(Arc::new(GaugeAlgebra::new(n, Model::Torus, rep)), k, tau).unwrap()
    }

    fn mono(m: &[i32]) -> RingElement {
        RingElement::monomial(Model::Torus, m, Rational::one()).unwrap()
    }

    #[test]
    fn central_cocycle_examples() {
        let e = sl2_ext(2, None);
        let g = e.gauge().clone();
        let (br, c) = e.central_cocycle(&g.pure(mono(&[1, 0]), 0).unwrap(), &g.pure(mono(&[-1, 0]), 2).unwrap()).unwrap();
        assert_eq!(br, g.pure(mono(&[0, 0]), 1).unwrap());
        assert_eq!(c.representative(), &PForm::coframe(2, Model::Torus, 0).unwrap().scale(&Rational::from(4)));
        let (_, c0) = e.central_cocycle(&g.pure(RingElement::one(2, Model::Torus), 1).unwrap(), &g.pure(mono(&[1, 1]), 0).unwrap()).unwrap();
        assert!(c0.is_zero());
        let (y1, y2) = (g.pure(mono(&[2, 1]), 1).unwrap(), g.pure(mono(&[-1, 1]), 1).unwrap());
        let (_, c12) = e.central_cocycle(&y1, &y2).unwrap();
        let (_, c21) = e.central_cocycle(&y2, &y1).unwrap();
        assert!(c12.try_add(&c21).unwrap().is_zero());
    }

    #[test]
    fn twisted_bracket_on_fields() {
        let e = sl2_ext(2, Some(psibar_k(2, 2, Model::Torus).unwrap()));
        let x = VectorField::basis(Model::Torus, &[1, 0], 0).unwrap();
        let y = VectorField::basis(Model::Torus, &[0, 1], 1).unwrap();
        let a = e.from_field(x.clone());
        assert!(e.bracket(&a, &a).unwrap().is_zero());
        let br = e.bracket(&a, &e.from_field(y.clone())).unwrap();
        let Value::Class(c) = psibar_k(2, 2, Model::Torus).unwrap().eval(&[x.clone(), y.clone()]).unwrap() else { panic!() };
        assert_eq!(br.central, c);
        assert_eq!(br.field, x.bracket(&y).unwrap());
    }

    #[test]
    fn jacobi_small_and_planted() {
        let window = mode_box(2, 1);
        for tau in [None, Some(psibar_k(2, 2, Model::Torus).unwrap())] {
            let e = sl2_ext(2, tau);
            let base: Vec<_> = e.basis_window(&unit_window(2));
            assert!(e.jacobi_check(&base, &[]).passed());
        }
        let e = sl2_ext(2, Some(planted_twist(2).unwrap()));
        let base = e.basis_window(&window);
        let r = e.jacobi_check(&base, &[]);
        assert!(!r.passed());
        assert!(r.witness.is_some());
    }

    #[test]
    fn virasoro_values_and_cocycle() {
        let v = virasoro_twist();
        let f = |a: i32| VectorField::basis(Model::Torus, &[a], 0).unwrap();
        assert!(v.eval(&[f(0), f(0)]).unwrap().is_zero());
        let Value::Class(c) = v.eval(&[f(1), f(-1)]).unwrap() else { panic!() };
        assert_eq!(c.representative(), &PForm::coframe(1, Model::Torus, 0).unwrap());
        let alg = VectorFieldAlgebra { n: 1, model: Model::Torus };
        let s = Samples::exhaustive(basis_fields(Model::Torus, 1, 4));
        assert!(is_cocycle(&alg, &FieldAction, &v, &s).passed());
        assert!(is_cocycle(&alg, &Trivial, &v, &s).passed());
        let e = sl2_ext(1, Some(v));
        let base = e.basis_window(&mode_box(1, 2));
        assert!(e.jacobi_check(&base, &[]).passed());
    }

    #[test]
    fn virasoro_coboundary_shift() {
        // β(X) = mode-0 coefficient of X, so dβ(X,Y) = -β([X,Y])
        let k1 = PForm::coframe(1, Model::Torus, 0).unwrap();
        let shift = Cochain::new("dβ", 2, move |args: &[VectorField]| {
            let br = args[0].bracket(&args[1])?;
            Ok(Value::Class(k1.scale(&-br.coeff(0).coefficient(&MultiIndex::zero(1))).reduce_mod_exact()))
        });
        let shifted = virasoro_twist().try_sum(&shift).unwrap();
        let f = |a: i32| VectorField::basis(Model::Torus, &[a], 0).unwrap();
        assert_ne!(shifted.eval(&[f(1), f(-1)]).unwrap(), virasoro_twist().eval(&[f(1), f(-1)]).unwrap());
        let alg = VectorFieldAlgebra { n: 1, model: Model::Torus };
        assert!(is_cocycle(&alg, &FieldAction, &shifted, &Samples::exhaustive(basis_fields(Model::Torus, 1, 3))).passed());
    }

    #[test]
    fn central_action_is_well_defined() {
        let mut r = rng(3);
        for _ in 0..20 {
            let x = random_field(&mut r, Model::Torus, 2, 2, 3);
            let w = random_form(&mut r, Model::Torus, 2, 1, 2, 3);
            let eta = random_function(&mut r, Model::Torus, 2, 2, 3);
            let shifted = w.try_add(&PForm::function(&eta).ext_d()).unwrap();
            assert_eq!(w.reduce_mod_exact().lie_derive(&x).unwrap(), shifted.reduce_mod_exact().lie_derive(&x).unwrap());
        }
    }

    #[test]
    fn structure_constant_export() {
        let e = sl2_ext(1, Some(virasoro_twist()));
        let j = e.structure_constants(&[MultiIndex::new(&[0]), MultiIndex::new(&[1])]).unwrap();
        assert_eq!(j["basis"].as_array().unwrap().len(), 2 * 3 + 1 + 2);
        assert!(!j["brackets"].as_array().unwrap().is_empty());
    }
}
