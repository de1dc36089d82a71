//! Lie algebra cochains as evaluators, the Chevalley–Eilenberg differential,
//! cochain products and the exact verification routines built on them.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{MatrixFunction, VectorField};
use crate::forms::{FormClass, PForm};
use crate::lie::{check_crossed_hom_gauge, Coords, FiniteLieAlgebra, GaugeAlgebra, GaugeElement, LieAlgebra};
use crate::rational::Rational;
use crate::report::{CheckReport, Witness};
use crate::ring::RingElement;

/// A cochain value: an element of one of the coefficient modules.
#[derive(Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Value {
    Scalar(Rational),
    Vector(Vec<Rational>),
    Function(RingElement),
    Form(PForm),
    Class(FormClass),
    Matrix(MatrixFunction),
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Scalar(r) => r.is_zero(),
            Value::Vector(v) => v.iter().all(Rational::is_zero),
            Value::Function(f) => f.is_zero(),
            Value::Form(w) => w.is_zero(),
            Value::Class(c) => c.is_zero(),
            Value::Matrix(m) => m.is_zero(),
        }
    }

    /// The zero of the same module.
    pub fn zero_like(&self) -> Value {
        self.scale(&Rational::zero())
    }

    pub fn scale(&self, c: &Rational) -> Value {
        match self {
            Value::Scalar(r) => Value::Scalar(r * c),
            Value::Vector(v) => Value::Vector(v.iter().map(|x| x * c).collect()),
            Value::Function(f) => Value::Function(f.scale(c)),
            Value::Form(w) => Value::Form(w.scale(c)),
            Value::Class(k) => Value::Class(k.scale(c)),
            Value::Matrix(m) => Value::Matrix(m.scale(c)),
        }
    }

    pub fn neg(&self) -> Value {
        self.scale(&-Rational::one())
    }

    pub fn try_add(&self, other: &Value) -> Result<Value> {
        Ok(match (self, other) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a + b),
            (Value::Vector(a), Value::Vector(b)) if a.len() == b.len() => {
                Value::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Value::Function(a), Value::Function(b)) => Value::Function(a.try_add(b)?),
            (Value::Form(a), Value::Form(b)) => Value::Form(a.try_add(b)?),
            (Value::Class(a), Value::Class(b)) => Value::Class(a.try_add(b)?),
            (Value::Matrix(a), Value::Matrix(b)) if a.size() == b.size() => Value::Matrix(a.add(b)),
            _ => return Err(self.mismatch(other, "add")),
        })
    }

    pub fn try_sub(&self, other: &Value) -> Result<Value> {
        self.try_add(&other.neg())
    }

    /// Product used by the cochain wedge: scalars scale, functions and
    /// forms multiply by the exterior product, matrices multiply. A class
    /// of degree 0 is a function.
    pub fn product(&self, other: &Value) -> Result<Value> {
        let as_form = |v: &Value| -> Option<PForm> {
            match v {
                Value::Function(f) => Some(PForm::function(f)),
                Value::Form(w) => Some(w.clone()),
                Value::Class(c) if c.degree() == 0 => Some(c.representative().clone()),
                _ => None,
            }
        };
        match (self, other) {
            (Value::Scalar(a), v) | (v, Value::Scalar(a)) => Ok(v.scale(a)),
            (Value::Matrix(a), Value::Matrix(b)) if a.size() == b.size() => Ok(Value::Matrix(a.mul(b))),
            (Value::Function(a), Value::Function(b)) => Ok(Value::Function(a.try_mul(b)?)),
            _ => match (as_form(self), as_form(other)) {
                (Some(a), Some(b)) => Ok(Value::Form(a.wedge(&b)?)),
                _ => Err(self.mismatch(other, "multiply")),
            },
        }
    }

    /// The class of a form value (identity on classes and functions).
    pub fn reduced(&self) -> Value {
        match self {
            Value::Form(w) => Value::Class(w.reduce_mod_exact()),
            v => v.clone(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Vector(_) => "vector",
            Value::Function(_) => "function",
            Value::Form(_) => "form",
            Value::Class(_) => "class",
            Value::Matrix(_) => "matrix",
        }
    }

    fn mismatch(&self, other: &Value, op: &str) -> Error {
        Error::InvalidArgument(format!("cannot {op} {} and {} values", self.kind(), other.kind()))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(r) => write!(f, "{r}"),
            Value::Vector(v) => write!(f, "({})", v.iter().join(", ")),
            Value::Function(g) => write!(f, "{g}"),
            Value::Form(w) => write!(f, "{w}"),
            Value::Class(c) => write!(f, "{c}"),
            Value::Matrix(m) => write!(f, "{m}"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A module over a Lie algebra with elements of type `E`.
pub trait Module<E>: Send + Sync {
    fn act(&self, x: &E, v: &Value) -> Result<Value>;
}

/// The trivial module.
#[derive(Debug, Clone, Copy, Default)]
pub struct Trivial;

impl<E> Module<E> for Trivial {
    fn act(&self, _: &E, v: &Value) -> Result<Value> {
        Ok(v.zero_like())
    }
}

/// Vector fields acting on functions, forms and classes by Lie derivative.
/// Scalars form the trivial module.
#[derive(Debug, Clone, Copy, Default)]
pub struct FieldAction;

impl Module<VectorField> for FieldAction {
    fn act(&self, x: &VectorField, v: &Value) -> Result<Value> {
        Ok(match v {
            Value::Scalar(_) | Value::Vector(_) => v.zero_like(),
            Value::Function(f) => Value::Function(x.apply(f)?),
            Value::Form(w) => Value::Form(w.lie_derive(x)?),
            Value::Class(c) => Value::Class(c.lie_derive(x)?),
            Value::Matrix(m) => Value::Matrix(m.derive_by(x)?),
        })
    }
}

/// A gauge algebra acting on matrix functions through its representation by commutators.
pub struct GaugeAdjoint(pub Arc<GaugeAlgebra>);

impl Module<GaugeElement> for GaugeAdjoint {
    fn act(&self, x: &GaugeElement, v: &Value) -> Result<Value> {
        match v {
            Value::Matrix(m) => Ok(Value::Matrix(self.0.to_matrix(x).commutator(m))),
            _ => Ok(v.zero_like()),
        }
    }
}

/// The adjoint module of a finite-dimensional Lie algebra.
pub struct Adjoint(pub Arc<FiniteLieAlgebra>);

impl Module<Coords> for Adjoint {
    fn act(&self, x: &Coords, v: &Value) -> Result<Value> {
        match v {
            Value::Vector(w) => Ok(Value::Vector(self.0.bracket_coords(&x.0, w))),
            _ => Err(Error::InvalidArgument("adjoint module takes vector values".into())),
        }
    }
}

type Evaluator<E> = dyn Fn(&[E]) -> Result<Value> + Send + Sync;

/// An alternating multilinear map, given by its evaluator.
pub struct Cochain<E> {
    name: String,
    degree: usize,
    eval: Arc<Evaluator<E>>,
}

impl<E> Clone for Cochain<E> {
    fn clone(&self) -> Self {
        Cochain { name: self.name.clone(), degree: self.degree, eval: self.eval.clone() }
    }
}

impl<E> fmt::Debug for Cochain<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain({}, degree {})", self.name, self.degree)
    }
}

impl<E: 'static> Cochain<E> {
    pub fn new<F>(name: impl Into<String>, degree: usize, eval: F) -> Self
    where
        F: Fn(&[E]) -> Result<Value> + Send + Sync + 'static,
    {
        Cochain { name: name.into(), degree, eval: Arc::new(eval) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn eval(&self, args: &[E]) -> Result<Value> {
        if args.len() != self.degree {
            return Err(Error::Arity { degree: self.degree, expected: self.degree, got: args.len() });
        }
        (self.eval)(args)
    }

    /// Composes the evaluator's output with `f`.
    pub fn map_values<F>(&self, name: impl Into<String>, f: F) -> Self
    where
        F: Fn(Value) -> Result<Value> + Send + Sync + 'static,
    {
        let inner = self.eval.clone();
        Cochain::new(name, self.degree, move |args| f(inner(args)?))
    }

    pub fn scaled(&self, c: Rational) -> Self {
        self.map_values(format!("{}*{}", c, self.name), move |v| Ok(v.scale(&c)))
    }

    pub fn try_sum(&self, other: &Cochain<E>) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(format!("degrees {} and {} differ", self.degree, other.degree)));
        }
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Ok(Cochain::new(format!("{}+{}", self.name, other.name), self.degree, move |args| a(args)?.try_add(&b(args)?)))
    }
}

/// Value of `dψ` on `p + 1` arguments:
/// `Σ_i (-1)^i x_i·ψ(…x̂_i…) + Σ_{i<j} (-1)^{i+j} ψ([x_i,x_j], …x̂_i…x̂_j…)`.
pub fn ce_apply<A, M>(alg: &A, module: &M, psi: &Cochain<A::Elem>, args: &[A::Elem]) -> Result<Value>
where
    A: LieAlgebra + ?Sized,
    A::Elem: 'static,
    M: Module<A::Elem> + ?Sized,
{
    let p = psi.degree();
    if args.len() != p + 1 {
        return Err(Error::Arity { degree: p, expected: p + 1, got: args.len() });
    }
    let mut acc: Option<Value> = None;
    let mut push = |v: Value, neg: bool| -> Result<()> {
        let v = if neg { v.neg() } else { v };
        acc = Some(match acc.take() {
            None => v,
            Some(a) => a.try_add(&v)?,
        });
        Ok(())
    };
    let mut rest: Vec<A::Elem> = Vec::with_capacity(p);
    for i in 0..=p {
        rest.clear();
        rest.extend(args.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, x)| x.clone()));
        let v = module.act(&args[i], &psi.eval(&rest)?)?;
        push(v, i % 2 == 1)?;
    }
    for (i, j) in (0..=p).tuple_combinations() {
        rest.clear();
        rest.push(alg.bracket(&args[i], &args[j])?);
        rest.extend(args.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, x)| x.clone()));
        push(psi.eval(&rest)?, (i + j) % 2 == 1)?;
    }
    Ok(acc.expect("at least one term"))
}

/// `dψ` as a cochain of degree `p + 1`.
pub fn ce_differential<A, M>(alg: Arc<A>, module: Arc<M>, psi: &Cochain<A::Elem>) -> Cochain<A::Elem>
where
    A: LieAlgebra + 'static,
    A::Elem: 'static,
    M: Module<A::Elem> + 'static,
{
    let psi2 = psi.clone();
    Cochain::new(format!("d({})", psi.name()), psi.degree() + 1, move |args| {
        ce_apply(alg.as_ref(), module.as_ref(), &psi2, args)
    })
}

const CHUNK: usize = 1024;

/// Runs `check` over all sorted `k`-subsets of `base` and then over `extra`.
///
/// Returns the number of tuples checked and the first failure in enumeration
/// order, as `(inputs, residual)`.
pub fn search_tuples<E, F>(base: &[E], k: usize, exhaustive: bool, extra: &[Vec<E>], check: F) -> (u64, Option<Witness>)
where
    E: Clone + Send + Sync + fmt::Display,
    F: Fn(&[E]) -> Result<Option<String>> + Send + Sync,
{
    let run = |tuple: &[E]| -> Option<Witness> {
        match check(tuple) {
            Ok(None) => None,
            Ok(Some(residual)) => Some(Witness::new(tuple, residual)),
            Err(e) => Some(Witness::new(tuple, format!("error: {e}"))),
        }
    };
    let mut count = 0u64;
    if exhaustive {
        let mut combos = (0..base.len()).combinations(k);
        loop {
            let chunk: Vec<Vec<usize>> = combos.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            let found = chunk.par_iter().find_map_first(|idx| {
                let tuple: Vec<E> = idx.iter().map(|&i| base[i].clone()).collect();
                run(&tuple)
            });
            if let Some(w) = found {
                let pos = chunk
                    .iter()
                    .position(|idx| idx.iter().map(|&i| base[i].to_string()).collect::<Vec<_>>() == w.inputs)
                    .unwrap_or(chunk.len() - 1);
                return (count + pos as u64 + 1, Some(w));
            }
            count += chunk.len() as u64;
        }
    }
    for (i, tuple) in extra.iter().enumerate() {
        if let Some(w) = run(tuple) {
            return (count + i as u64 + 1, Some(w));
        }
    }
    (count + extra.len() as u64, None)
}

/// Tuples for a check: exhaustive sorted combinations of `base` plus explicit extras.
pub struct Samples<E> {
    pub base: Vec<E>,
    pub exhaustive: bool,
    pub extra: Vec<Vec<E>>,
}

impl<E> Samples<E> {
    pub fn exhaustive(base: Vec<E>) -> Self {
        Samples { base, exhaustive: true, extra: Vec::new() }
    }

    pub fn explicit(extra: Vec<Vec<E>>) -> Self {
        Samples { base: Vec::new(), exhaustive: false, extra }
    }

    pub fn with_extra(mut self, extra: Vec<Vec<E>>) -> Self {
        self.extra.extend(extra);
        self
    }
}

/// Verifies `dψ = 0` exactly on the samples; the first nonzero residual is the witness.
pub fn is_cocycle<A, M>(alg: &A, module: &M, psi: &Cochain<A::Elem>, samples: &Samples<A::Elem>) -> CheckReport
where
    A: LieAlgebra + ?Sized,
    A::Elem: 'static,
    M: Module<A::Elem> + ?Sized,
{
    let start = Instant::now();
    let mut report = CheckReport::new(format!("cocycle:{}", psi.name())).with_param("degree", psi.degree());
    let (count, witness) = search_tuples(&samples.base, psi.degree() + 1, samples.exhaustive, &samples.extra, |t| {
        let v = ce_apply(alg, module, psi, t)?;
        Ok((!v.is_zero()).then(|| v.to_string()))
    });
    report.tuples_checked = count;
    if let Some(w) = witness {
        report.fail(w);
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    report
}

/// Spot-checks that `ψ` is alternating: a repeated argument gives zero and a
/// transposition negates the value.
pub fn check_alternating<E: Clone + fmt::Display + 'static>(psi: &Cochain<E>, tuples: &[Vec<E>]) -> CheckReport {
    let mut report = CheckReport::new(format!("alternating:{}", psi.name()));
    for t in tuples.iter().filter(|t| t.len() >= 2) {
        report.tuples_checked += 1;
        let outcome = (|| -> Result<Option<String>> {
            let v = psi.eval(t)?;
            let mut swapped = t.clone();
            swapped.swap(0, 1);
            let s = v.try_add(&psi.eval(&swapped)?)?;
            if !s.is_zero() {
                return Ok(Some(format!("ψ(x,y,…) + ψ(y,x,…) = {s}")));
            }
            let mut rep = t.clone();
            rep[1] = rep[0].clone();
            let r = psi.eval(&rep)?;
            Ok((!r.is_zero()).then(|| format!("ψ(x,x,…) = {r}")))
        })();
        match outcome {
            Ok(None) => {}
            Ok(Some(res)) => {
                report.fail(Witness::new(t, res));
                break;
            }
            Err(e) => {
                report.fail(Witness::new(t, e.to_string()));
                break;
            }
        }
    }
    report
}

/// `(α ∧ β)(x_1..x_{p+q}) = Σ_{(p,q)-shuffles σ} sgn(σ) α(x_σ(1..p)) · β(x_σ(p+1..p+q))`.
pub fn cochain_wedge<E: Clone + Send + Sync + 'static>(alpha: &Cochain<E>, beta: &Cochain<E>) -> Cochain<E> {
    let (p, q) = (alpha.degree(), beta.degree());
    let (a, b) = (alpha.clone(), beta.clone());
    let shuffles: Vec<(Vec<usize>, Vec<usize>, bool)> = (0..p + q)
        .combinations(p)
        .map(|left| {
            let right: Vec<usize> = (0..p + q).filter(|i| !left.contains(i)).collect();
            let inversions: usize = left.iter().map(|&l| right.iter().filter(|&&r| r < l).count()).sum();
            (left, right, inversions % 2 == 1)
        })
        .collect();
    Cochain::new(format!("({})∧({})", alpha.name(), beta.name()), p + q, move |args: &[E]| {
        let mut acc: Option<Value> = None;
        for (left, right, neg) in &shuffles {
            let la: Vec<E> = left.iter().map(|&i| args[i].clone()).collect();
            let rb: Vec<E> = right.iter().map(|&i| args[i].clone()).collect();
            let mut v = a.eval(&la)?.product(&b.eval(&rb)?)?;
            if *neg {
                v = v.neg();
            }
            acc = Some(match acc {
                None => v,
                Some(x) => x.try_add(&v)?,
            });
        }
        Ok(acc.expect("at least one shuffle"))
    })
}

/// Verifies `x·φ(y_1..y_k) = Σ_j φ(y_1, …, x.y_j, …, y_k)` on samples.
pub fn is_equivariant<M>(
    phi: &Cochain<GaugeElement>,
    gauge: &GaugeAlgebra,
    values: &M,
    samples: &[(VectorField, Vec<GaugeElement>)],
) -> CheckReport
where
    M: Module<VectorField> + ?Sized,
{
    let start = Instant::now();
    let mut report = CheckReport::new(format!("equivariant:{}", phi.name()));
    for (x, ys) in samples {
        report.tuples_checked += 1;
        let outcome = (|| -> Result<Value> {
            let mut res = values.act(x, &phi.eval(ys)?)?;
            for j in 0..ys.len() {
                let mut moved = ys.clone();
                moved[j] = gauge.act(x, &ys[j])?;
                res = res.try_sub(&phi.eval(&moved)?)?;
            }
            Ok(res)
        })();
        let residual = match outcome {
            Ok(v) if v.is_zero() => continue,
            Ok(v) => v.to_string(),
            Err(e) => format!("error: {e}"),
        };
        let mut inputs = vec![x.to_string()];
        inputs.extend(ys.iter().map(|y| y.to_string()));
        report.fail(Witness { inputs, residual });
        break;
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    report
}

pub type GaugeMap = Arc<dyn Fn(&VectorField) -> Result<GaugeElement> + Send + Sync>;

/// `θ*φ = φ ∘ (θ × … × θ)`, after checking that `θ` is a crossed
/// homomorphism on `check_pairs`.
pub fn pullback_by_crossed_hom(
    phi: &Cochain<GaugeElement>,
    gauge: &GaugeAlgebra,
    theta: GaugeMap,
    check_pairs: &[(VectorField, VectorField)],
) -> Result<Cochain<VectorField>> {
    let report = check_crossed_hom_gauge("crossed-hom", gauge, |x| theta(x), check_pairs);
    if let Some(w) = report.witness {
        return Err(Error::NotCrossedHomomorphism(format!("{} on ({})", w.residual, w.inputs.join(", "))));
    }
    let phi = phi.clone();
    Ok(Cochain::new(format!("θ*{}", phi.name()), phi.degree(), move |args| {
        let ys = args.iter().map(|x| theta(x)).collect::<Result<Vec<_>>>()?;
        phi.eval(&ys)
    }))
}
