//! Constructors for the trace cocycles on vector fields and gauge algebras.
//!
//! On vector fields the families are evaluated through the matrix functions
//! `θ(X)` and `dθ(X)`. On gauge algebras `F ⊗ g` they are evaluated by
//! expanding each argument into pure tensors `f ⊗ x_a` and looking up the
//! trace factor on basis tuples.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cochain::{cochain_wedge, Cochain, Value};
use crate::error::{Error, Result};
use crate::fields::{FormMatrix, MatrixFunction, VectorField};
use crate::forms::{PForm, Subset};
use crate::lie::{Coords, FiniteLieAlgebra, GaugeElement, Representation};
use crate::linalg::{EchelonBasis, RationalMatrix};
use crate::rational::Rational;
use crate::ring::{Model, RingElement};

/// `Σ_{σ} sgn(σ) M_{σ(1)} ⋯ M_{σ(k)}` for every subset of `items`, indexed by bitmask.
///
/// Uses `Alt(S) = Σ_{i ∈ S} (-1)^{rank_S(i)} M_i · Alt(S ∖ i)`.
fn alternating_products<M: Clone>(
    items: &[M],
    mul: impl Fn(&M, &M) -> Result<M>,
    add: impl Fn(&M, &M) -> Result<M>,
    neg: impl Fn(&M) -> M,
) -> Result<Vec<Option<M>>> {
    let k = items.len();
    let mut table: Vec<Option<M>> = vec![None; 1 << k];
    for size in 1..=k {
        for mask in 0usize..(1 << k) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut acc: Option<M> = None;
            for (rank, i) in (0..k).filter(|i| mask & (1 << i) != 0).enumerate() {
                let rest = mask & !(1 << i);
                let term = if rest == 0 {
                    items[i].clone()
                } else {
                    mul(&items[i], table[rest].as_ref().expect("smaller subsets first"))?
                };
                let term = if rank % 2 == 1 { neg(&term) } else { term };
                acc = Some(match acc {
                    None => term,
                    Some(a) => add(&a, &term)?,
                });
            }
            table[mask] = acc;
        }
    }
    Ok(table)
}

fn alt_forms(items: &[FormMatrix]) -> Result<Vec<Option<FormMatrix>>> {
    alternating_products(items, |a, b| a.mul(b), |a, b| a.add(b), FormMatrix::neg)
}

fn alt_functions(items: &[MatrixFunction]) -> Result<Vec<Option<MatrixFunction>>> {
    alternating_products(items, |a, b| Ok(a.mul(b)), |a, b| Ok(a.add(b)), |a| a.scale(&-Rational::one()))
}

fn check_fields(args: &[VectorField]) -> Result<(usize, Model)> {
    let first = args.first().ok_or_else(|| Error::InvalidArgument("no arguments".into()))?;
    for x in args {
        if x.model() != first.model() {
            return Err(Error::ModelMismatch(first.model(), x.model()));
        }
    }
    Ok((first.dim(), first.model()))
}

fn family_name(base: &str, model: Model, k: usize) -> String {
    match model {
        Model::Torus => format!("{base}_{k}"),
        Model::Affine => format!("{base}^W_{k}"),
    }
}

/// `Ψ_k(X_1..X_k) = Σ sgn(σ) Tr(dθ(X_σ1) ∧ … ∧ dθ(X_σk))`, values in `Ω^k`.
pub fn psi_k(k: usize, n: usize, model: Model) -> Result<Cochain<VectorField>> {
    if k == 0 || k > n {
        return Err(Error::DegreeOutOfRange { got: k, reason: format!("Ψ_k needs 1 ≤ k ≤ N = {n}") });
    }
    Ok(Cochain::new(family_name("Psi", model, k), k, move |args: &[VectorField]| {
        check_fields(args)?;
        let dth: Vec<FormMatrix> = args.iter().map(|x| x.theta().ext_d()).collect();
        let table = alt_forms(&dth)?;
        Ok(Value::Form(table[(1 << k) - 1].as_ref().unwrap().trace()?))
    }))
}

/// The form `Σ sgn(σ) Tr(θ(X_σ1) dθ(X_σ2) ∧ … ∧ dθ(X_σk))` before reduction.
pub fn psibar_representative(args: &[VectorField]) -> Result<PForm> {
    let (n, model) = check_fields(args)?;
    let k = args.len();
    let th: Vec<MatrixFunction> = args.iter().map(VectorField::theta).collect();
    if k == 1 {
        return Ok(PForm::function(&th[0].trace()));
    }
    let dth: Vec<FormMatrix> = th.iter().map(MatrixFunction::ext_d).collect();
    let table = alt_forms(&dth)?;
    let full = (1usize << k) - 1;
    let mut acc = PForm::zero(n, model, k - 1);
    for (i, t) in th.iter().enumerate() {
        let rest = full & !(1 << i);
        let term = t.as_forms().mul(table[rest].as_ref().unwrap())?.trace()?;
        acc = if i % 2 == 1 { acc.try_sub(&term)? } else { acc.try_add(&term)? };
    }
    Ok(acc)
}

/// `Ψ̄_k`, the class of [`psibar_representative`], values in `Ω^{k-1}/dΩ^{k-2}`.
pub fn psibar_k(k: usize, n: usize, model: Model) -> Result<Cochain<VectorField>> {
    if k == 0 || k > n + 1 {
        return Err(Error::DegreeOutOfRange { got: k, reason: format!("Ψ̄_k needs 1 ≤ k ≤ N + 1 = {}", n + 1) });
    }
    Ok(Cochain::new(family_name("Psibar", model, k), k, |args: &[VectorField]| {
        Ok(Value::Class(psibar_representative(args)?.reduce_mod_exact()))
    }))
}

/// `Φ_k(X_1..X_{2k-1}) = Σ sgn(σ) Tr(θ(X_σ1) ⋯ θ(X_σ(2k-1)))`, function values.
pub fn phi_k(k: usize, n: usize, model: Model) -> Result<Cochain<VectorField>> {
    if k == 0 || k > n {
        return Err(Error::DegreeOutOfRange { got: k, reason: format!("Φ_k needs 1 ≤ k ≤ N = {n}") });
    }
    let deg = 2 * k - 1;
    Ok(Cochain::new(family_name("Phi", model, k), deg, move |args: &[VectorField]| {
        check_fields(args)?;
        let th: Vec<MatrixFunction> = args.iter().map(VectorField::theta).collect();
        let table = alt_functions(&th)?;
        Ok(Value::Function(table[(1 << deg) - 1].as_ref().unwrap().trace()))
    }))
}

/// The divergence `X ↦ div X`.
pub fn divergence() -> Cochain<VectorField> {
    Cochain::new("div", 1, |args: &[VectorField]| Ok(Value::Function(args[0].divergence())))
}

/// `ω^{[p]}(X_1..X_p) = [i_{X_p} ⋯ i_{X_1} ω]` for a closed form `ω`.
pub fn omega_bracket(omega: &PForm, p: usize) -> Result<Cochain<VectorField>> {
    let d = omega.ext_d();
    if !d.is_zero() {
        return Err(Error::NotClosed(d.to_string()));
    }
    if p > omega.degree() {
        return Err(Error::DegreeOutOfRange { got: p, reason: format!("form has degree {}", omega.degree()) });
    }
    let w = omega.clone();
    Ok(Cochain::new(format!("({w})^[{p}]"), p, move |args: &[VectorField]| {
        let mut c = w.clone();
        for x in args {
            c = c.contract(x)?;
        }
        Ok(Value::Class(c.reduce_mod_exact()))
    }))
}

/// `(X, Y) ↦ α(X,Y) + β(X) Ψ̄_1(Y) - β(Y) Ψ̄_1(X)` for closed `α ∈ Ω^2`, `β ∈ Ω^1`.
pub fn f_valued_2cocycle(alpha: &PForm, beta: &PForm) -> Result<Cochain<VectorField>> {
    for (w, deg) in [(alpha, 2), (beta, 1)] {
        if w.degree() != deg {
            return Err(Error::DegreeOutOfRange { got: w.degree(), reason: format!("expected a {deg}-form") });
        }
        let d = w.ext_d();
        if !d.is_zero() {
            return Err(Error::NotClosed(d.to_string()));
        }
    }
    let (a, b) = (alpha.clone(), beta.clone());
    Ok(Cochain::new(format!("F2[{a}; {b}]"), 2, move |args: &[VectorField]| {
        let (x, y) = (&args[0], &args[1]);
        let mut v = a.evaluate(&[x.clone(), y.clone()])?;
        let bx = b.evaluate(std::slice::from_ref(x))?;
        let by = b.evaluate(std::slice::from_ref(y))?;
        let trx = x.theta().trace();
        let try_ = y.theta().trace();
        v = &v + &(&(&bx * &try_) - &(&by * &trx));
        Ok(Value::Function(v))
    }))
}

/// `Ψ̄_1 ∧ Ψ_1` with values reduced in `Ω^1/dΩ^0`.
pub fn psibar1_wedge_psi1(n: usize, model: Model) -> Result<Cochain<VectorField>> {
    let w = cochain_wedge(&psibar_k(1, n, model)?, &psi_k(1, n, model)?);
    Ok(w.map_values("Psibar_1∧Psi_1", |v| Ok(v.reduced())))
}

/// Generators of the second cohomology with values in `Ω^1/dΩ^0`:
/// `ω^{[2]}` for each constant 3-form `κ_I`, then `Ψ̄_1 ∧ Ψ_1` and `Ψ̄_2`.
pub fn h2_omega1_generators(n: usize) -> Result<Vec<Cochain<VectorField>>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("needs N ≥ 2, got {n}")));
    }
    let mut out = Vec::new();
    for s in Subset::all(n, 3) {
        let idx: Vec<usize> = s.indices().collect();
        out.push(omega_bracket(&PForm::basis(n, Model::Torus, &idx)?, 2)?);
    }
    out.push(psibar1_wedge_psi1(n, Model::Torus)?);
    out.push(psibar_k(2, n, Model::Torus)?);
    Ok(out)
}

/// Declarative description of a named cocycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleSpec {
    pub name: String,
    pub k: usize,
    pub model: Model,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default)]
    pub parameters: serde_json::Map<String, serde_json::Value>,
}

impl CocycleSpec {
    /// Builds the vector-field cochain for `psi`, `psibar`, `phi`, `div`.
    pub fn build(&self) -> Result<Cochain<VectorField>> {
        match self.name.as_str() {
            "psi" => psi_k(self.k, self.n, self.model),
            "psibar" => psibar_k(self.k, self.n, self.model),
            "phi" => phi_k(self.k, self.n, self.model),
            "div" => Ok(divergence()),
            other => Err(Error::InvalidArgument(format!("unknown cocycle family `{other}`"))),
        }
    }
}

/// Trace data of a representation: symmetric and alternating trace factors on basis tuples.
pub struct TraceTables {
    rep: Arc<Representation>,
    dim: usize,
    symmetric: HashMap<usize, Vec<Rational>>,
    alternating: HashMap<usize, HashMap<Vec<usize>, Rational>>,
}

impl TraceTables {
    pub fn new(rep: Arc<Representation>) -> Self {
        let dim = rep.algebra().dim();
        TraceTables { rep, dim, symmetric: HashMap::new(), alternating: HashMap::new() }
    }

    /// `T(b) = Σ_{σ ∈ S_k} Tr(ρ(x_{b_σ1}) ⋯ ρ(x_{b_σk}))` for all `b ∈ {0..dim}^k`.
    pub fn with_symmetric(mut self, k: usize) -> Self {
        let d = self.dim;
        let mut table = vec![Rational::zero(); d.pow(k as u32)];
        let mut cache: HashMap<Vec<usize>, Rational> = HashMap::new();
        for (flat, b) in (0..k).map(|_| 0..d).multi_cartesian_product().enumerate() {
            let key: Vec<usize> = b.iter().copied().sorted().collect();
            let v = cache
                .entry(key)
                .or_insert_with(|| {
                    (0..k).permutations(k).map(|p| self.rep.trace_of_product(&p.iter().map(|&i| b[i]).collect::<Vec<_>>())).sum()
                })
                .clone();
            table[flat] = v;
        }
        self.symmetric.insert(k, table);
        self
    }

    /// `Φ(b) = Σ_σ sgn(σ) Tr(ρ(x_{b_σ1}) ⋯)` on sorted tuples of distinct indices.
    pub fn with_alternating(mut self, n: usize) -> Self {
        let mut table = HashMap::new();
        for b in (0..self.dim).combinations(n) {
            let mats: Vec<RationalMatrix> = b.iter().map(|&i| self.rep.matrix(i).clone()).collect();
            let alt = alternating_products(&mats, |x, y| Ok(x.mul(y)), |x, y| Ok(x.add(y)), |x| x.scale(&-Rational::one()))
                .expect("matrix products");
            let tr = alt[(1 << n) - 1].as_ref().unwrap().trace();
            if !tr.is_zero() {
                table.insert(b, tr);
            }
        }
        self.alternating.insert(n, table);
        self
    }

    fn symmetric(&self, k: usize, b: &[usize]) -> &Rational {
        let flat = b.iter().fold(0, |acc, &i| acc * self.dim + i);
        &self.symmetric[&k][flat]
    }

    fn alternating(&self, b: &[usize]) -> Option<Rational> {
        let mut sorted = b.to_vec();
        let mut neg = false;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] == sorted[j + 1] {
                    return None;
                }
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    neg = !neg;
                }
            }
        }
        self.alternating[&b.len()].get(&sorted).map(|v| if neg { -v } else { v.clone() })
    }
}

fn gauge_supports(args: &[GaugeElement]) -> Vec<Vec<usize>> {
    args.iter()
        .map(|y| (0..y.coeffs().len()).filter(|&a| !y.coeff(a).is_zero()).collect())
        .collect()
}

fn gauge_dims(args: &[GaugeElement]) -> Result<(usize, Model)> {
    let y = args.first().ok_or_else(|| Error::InvalidArgument("no arguments".into()))?;
    let f = y.coeff(0);
    Ok((f.dim(), f.model()))
}

/// `ψ_k(f_1⊗x_1, …) = T(x_1..x_k) df_1 ∧ ⋯ ∧ df_k`, extended linearly.
pub fn gauge_psi_k(k: usize, tables: Arc<TraceTables>) -> Cochain<GaugeElement> {
    let name = format!("psi_{k}[{}]", tables.rep.algebra().name());
    assert!(tables.symmetric.contains_key(&k), "symmetric table for k = {k} missing");
    Cochain::new(name, k, move |args: &[GaugeElement]| {
        let (n, model) = gauge_dims(args)?;
        let supports = gauge_supports(args);
        let dfs: Vec<Vec<PForm>> = args.iter().map(|y| y.coeffs().iter().map(|f| PForm::function(f).ext_d()).collect()).collect();
        let mut acc = PForm::zero(n, model, k);
        for b in supports.iter().map(|s| s.iter().copied()).multi_cartesian_product() {
            let t = tables.symmetric(k, &b);
            if t.is_zero() {
                continue;
            }
            let mut w = dfs[0][b[0]].clone();
            for a in 1..k {
                w = w.wedge(&dfs[a][b[a]])?;
            }
            acc = acc.try_add(&w.scale(t))?;
        }
        Ok(Value::Form(acc))
    })
}

/// `ψ̄_k(f_1⊗x_1, …) = T(x_1..x_k) [f_1 df_2 ∧ ⋯ ∧ df_k]`, extended linearly.
pub fn gauge_psibar_k(k: usize, tables: Arc<TraceTables>) -> Cochain<GaugeElement> {
    let name = format!("psibar_{k}[{}]", tables.rep.algebra().name());
    assert!(tables.symmetric.contains_key(&k), "symmetric table for k = {k} missing");
    Cochain::new(name, k, move |args: &[GaugeElement]| {
        let (n, model) = gauge_dims(args)?;
        let supports = gauge_supports(args);
        let dfs: Vec<Vec<PForm>> = args.iter().map(|y| y.coeffs().iter().map(|f| PForm::function(f).ext_d()).collect()).collect();
        let mut acc = PForm::zero(n, model, k - 1);
        for b in supports.iter().map(|s| s.iter().copied()).multi_cartesian_product() {
            let t = tables.symmetric(k, &b);
            if t.is_zero() {
                continue;
            }
            let mut w = PForm::function(args[0].coeff(b[0]));
            for a in 1..k {
                w = w.wedge(&dfs[a][b[a]])?;
            }
            acc = acc.try_add(&w.scale(t))?;
        }
        Ok(Value::Class(acc.reduce_mod_exact()))
    })
}

/// `φ_k(f_1⊗x_1, …) = Φ(x_1..x_{2k-1}) f_1 ⋯ f_{2k-1}`, extended linearly.
pub fn gauge_phi_k(k: usize, tables: Arc<TraceTables>) -> Cochain<GaugeElement> {
    let deg = 2 * k - 1;
    let name = format!("phi_{k}[{}]", tables.rep.algebra().name());
    assert!(tables.alternating.contains_key(&deg), "alternating table for degree {deg} missing");
    Cochain::new(name, deg, move |args: &[GaugeElement]| {
        let (n, model) = gauge_dims(args)?;
        let supports = gauge_supports(args);
        let mut acc = RingElement::zero(n, model);
        for b in supports.iter().map(|s| s.iter().copied()).multi_cartesian_product() {
            let Some(t) = tables.alternating(&b) else { continue };
            let mut f = args[0].coeff(b[0]).scale(&t);
            for a in 1..deg {
                f = f.try_mul(args[a].coeff(b[a]))?;
            }
            acc = &acc + &f;
        }
        Ok(Value::Function(acc))
    })
}

/// `φ_k(x_1..x_{2k-1}) = Σ sgn(σ) Tr(x_σ1 ⋯ x_σ(2k-1))` on `g` through a representation.
pub fn gl_phi_k(k: usize, rep: Arc<Representation>) -> Cochain<Coords> {
    let deg = 2 * k - 1;
    Cochain::new(format!("phi_{k}[{}]", rep.algebra().name()), deg, move |args: &[Coords]| {
        let size = rep.size();
        let mats: Vec<RationalMatrix> = args
            .iter()
            .map(|x| {
                let mut m = RationalMatrix::zeros(size, size);
                for (a, c) in x.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let ra = rep.matrix(a);
                    for r in 0..size {
                        for s in 0..size {
                            let v = m.get(r, s) + &(c * ra.get(r, s));
                            m.set(r, s, v);
                        }
                    }
                }
                m
            })
            .collect();
        let alt = alternating_products(&mats, |x, y| Ok(x.mul(y)), |x, y| Ok(x.add(y)), |x| x.scale(&-Rational::one()))?;
        Ok(Value::Scalar(alt[(1 << deg) - 1].as_ref().unwrap().trace()))
    })
}

/// Whether a scalar `p`-cochain on `g`, given by its values on sorted basis
/// tuples, is a coboundary (lies in the image of `d: Λ^{p-1} → Λ^p`).
pub fn is_coboundary(g: &FiniteLieAlgebra, psi: &Cochain<Coords>) -> Result<bool> {
    let p = psi.degree();
    let values = Subset::all(g.dim(), p)
        .into_iter()
        .map(|s| {
            let args: Vec<Coords> = s.indices().map(|i| Coords(g.basis_vector(i))).collect();
            match psi.eval(&args)? {
                Value::Scalar(r) => Ok(r),
                other => Err(Error::InvalidArgument(format!("expected a scalar, got {other}"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if p == 0 {
        return Ok(values.iter().all(Rational::is_zero));
    }
    let d = g.ce_matrix(p - 1).transpose();
    let mut basis = EchelonBasis::new();
    for r in 0..d.rows() {
        basis.insert(d.row(r));
    }
    Ok(basis.contains(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{is_cocycle, FieldAction, Samples};
    use crate::lie::VectorFieldAlgebra;
    use crate::ring::MultiIndex;
    use crate::sampling::basis_fields;

    fn tf(m: &[i32], j: usize) -> VectorField {
        VectorField::basis(Model::Torus, m, j).unwrap()
    }

    #[test]
    fn psi1_on_basis_fields() {
        let psi1 = psi_k(1, 2, Model::Torus).unwrap();
        let v = psi1.eval(&[tf(&[2, -1], 0)]).unwrap();
        let f = RingElement::monomial(Model::Torus, &[2, -1], Rational::from(-2)).unwrap();
        assert_eq!(v, Value::Form(PForm::function(&f).ext_d()));
        assert!(psi1.eval(&[VectorField::frame(2, Model::Torus, 1)]).unwrap().is_zero());
        let psi2 = psi_k(2, 2, Model::Torus).unwrap();
        assert!(psi2.eval(&[VectorField::frame(2, Model::Torus, 0), tf(&[1, 1], 1)]).unwrap().is_zero());
        assert!(psi_k(3, 2, Model::Torus).is_err());
    }

    #[test]
    fn phi1_is_minus_divergence() {
        let phi1 = phi_k(1, 2, Model::Torus).unwrap();
        for x in basis_fields(Model::Torus, 2, 1) {
            assert_eq!(phi1.eval(std::slice::from_ref(&x)).unwrap(), Value::Function(-&x.divergence()));
        }
        let a = phi_k(1, 2, Model::Affine).unwrap();
        let x = VectorField::basis(Model::Affine, &[1, 0], 0).unwrap();
        assert_eq!(a.eval(&[x]).unwrap(), Value::Function(RingElement::constant(2, Model::Affine, Rational::from(-1))));
    }

    #[test]
    fn omega_bracket_examples() {
        let w = PForm::basis(3, Model::Torus, &[0, 1, 2]).unwrap();
        let c = omega_bracket(&w, 2).unwrap();
        let e = |j| VectorField::frame(3, Model::Torus, j);
        assert_eq!(c.eval(&[e(0), e(1)]).unwrap(), Value::Class(PForm::coframe(3, Model::Torus, 2).unwrap().reduce_mod_exact()));
        assert!(c.eval(&[e(0), e(0)]).unwrap().is_zero());
        let f = RingElement::monomial(Model::Torus, &[1, 0], Rational::one()).unwrap();
        let not_closed = PForm::monomial(&f, Subset::single(1));
        assert!(matches!(omega_bracket(&not_closed, 1), Err(Error::NotClosed(_))));
    }

    #[test]
    fn divergence_free_pairs() {
        let p2 = psibar_k(2, 2, Model::Torus).unwrap();
        let a = MultiIndex::new(&[1, 0]);
        let x = VectorField::divergence_free(&a).unwrap();
        let y = VectorField::divergence_free(&a.negated()).unwrap();
        assert!(p2.eval(&[x.clone(), y]).unwrap().is_zero());
        let z = VectorField::divergence_free(&MultiIndex::new(&[0, 1])).unwrap();
        assert!(!p2.eval(&[x.clone(), z.clone()]).unwrap().is_zero());
        let w = psibar1_wedge_psi1(2, Model::Torus).unwrap();
        assert!(w.eval(&[x, z]).unwrap().is_zero());
    }

    #[test]
    fn relation_d_psibar_is_psi() {
        let fields = basis_fields(Model::Torus, 2, 1);
        let psi2 = psi_k(2, 2, Model::Torus).unwrap();
        for pair in fields.iter().cloned().combinations(2) {
            let rep = psibar_representative(&pair).unwrap();
            assert_eq!(Value::Form(rep.ext_d()), psi2.eval(&pair).unwrap());
            let Value::Class(c) = psibar_k(2, 2, Model::Torus).unwrap().eval(&pair).unwrap() else { panic!() };
            assert_eq!(Value::Form(c.ext_d()), psi2.eval(&pair).unwrap());
        }
    }

    #[test]
    fn low_degree_cocycles_on_small_box() {
        let v = VectorFieldAlgebra { n: 2, model: Model::Torus };
        let samples = Samples::exhaustive(basis_fields(Model::Torus, 2, 1));
        for c in [psi_k(1, 2, Model::Torus).unwrap(), psibar_k(1, 2, Model::Torus).unwrap(), psi_k(2, 2, Model::Torus).unwrap(),
                  psibar_k(2, 2, Model::Torus).unwrap(), divergence()] {
            let r = is_cocycle(&v, &FieldAction, &c, &samples);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn gl_phi_classes() {
        let gl2 = Arc::new(FiniteLieAlgebra::gl(2));
        let rep = Arc::new(gl2.defining_representation().unwrap());
        let phi1 = gl_phi_k(1, rep.clone());
        assert!(!is_coboundary(&gl2, &phi1).unwrap());
        let phi2 = gl_phi_k(2, rep.clone());
        assert!(!is_coboundary(&gl2, &phi2).unwrap());
        // φ_1 kills commutators
        let b = Coords(gl2.bracket_coords(&gl2.basis_vector(1), &gl2.basis_vector(2)));
        assert!(phi1.eval(&[b]).unwrap().is_zero());
        let args: Vec<Coords> = [0, 1, 2].iter().map(|&i| Coords(gl2.basis_vector(i))).collect();
        assert_eq!(phi2.eval(&args).unwrap(), Value::Scalar(Rational::from(3)));
    }

    #[test]
    fn cocycle_spec_roundtrip() {
        let spec: CocycleSpec = serde_json::from_str(r#"{"name":"psibar","k":2,"model":"torus","N":2}"#).unwrap();
        assert_eq!(spec.build().unwrap().degree(), 2);
        assert!(CocycleSpec { name: "nope".into(), ..spec }.build().is_err());
    }
}
