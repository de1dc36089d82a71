//! Python bindings: fields, forms, cocycles, Weil tables and the verification harness.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use vfc::cochain::Cochain;
use vfc::cocycles::CocycleSpec;
use vfc::harness::{run, RunConfig, Suite};
use vfc::lie::FiniteLieAlgebra;
use vfc::{weil, Model, PForm, Rational, RingElement, Subset};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn model(name: &str) -> PyResult<Model> {
    name.parse().map_err(err)
}

fn rational(s: &str) -> PyResult<Rational> {
    s.parse().map_err(err)
}

fn ring(model: Model, n: usize, terms: &[(Vec<i32>, String)]) -> PyResult<RingElement> {
    let mut f = RingElement::zero(n, model);
    for (exps, c) in terms {
        if exps.len() != n {
            return Err(err(format!("exponent {exps:?} has length {}, expected {n}", exps.len())));
        }
        f = f.try_add(&RingElement::monomial(model, exps, rational(c)?).map_err(err)?).map_err(err)?;
    }
    Ok(f)
}

/// A vector field `Σ f_j ∂_j` (affine) or `Σ f_j E_j` (torus).
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
pub struct VectorField(pub vfc::VectorField);

#[pymethods]
impl VectorField {
    /// `components[j]` lists `(exponents, coefficient)` terms of the j-th coefficient function.
    #[new]
    #[pyo3(signature = (components, model = "torus"))]
    pub fn new(components: Vec<Vec<(Vec<i32>, String)>>, model: &str) -> PyResult<Self> {
        let m = self::model(model)?;
        let n = components.len();
        let coeffs = components.iter().map(|c| ring(m, n, c)).collect::<PyResult<Vec<_>>>()?;
        Ok(VectorField(vfc::VectorField::from_coeffs(coeffs).map_err(err)?))
    }

    /// `t^m E_j` on the torus or `x^m ∂_j` on affine space (`j` is 1-based).
    #[staticmethod]
    #[pyo3(signature = (exponents, j, model = "torus"))]
    pub fn basis(exponents: Vec<i32>, j: usize, model: &str) -> PyResult<Self> {
        if j == 0 {
            return Err(err("frame index is 1-based"));
        }
        Ok(VectorField(vfc::VectorField::basis(self::model(model)?, &exponents, j - 1).map_err(err)?))
    }

    #[getter]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn bracket(&self, other: &VectorField) -> PyResult<VectorField> {
        Ok(VectorField(self.0.bracket(&other.0).map_err(err)?))
    }

    /// The matrix θ(X) as a string.
    pub fn theta(&self) -> String {
        self.0.theta().to_string()
    }

    pub fn divergence(&self) -> String {
        self.0.divergence().to_string()
    }

    pub fn __eq__(&self, other: &VectorField) -> bool {
        self.0 == other.0
    }

    pub fn __str__(&self) -> String {
        self.0.to_string()
    }

    pub fn __repr__(&self) -> String {
        format!("VectorField({})", self.0)
    }
}

/// A differential form with Laurent or polynomial coefficients.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
pub struct Form(pub PForm);

#[pymethods]
impl Form {
    /// `c · t^m κ_I` (torus) or `c · x^m dx_I` (affine); indices are 1-based.
    #[staticmethod]
    #[pyo3(signature = (exponents, indices, coefficient = "1", model = "torus"))]
    pub fn monomial(exponents: Vec<i32>, indices: Vec<usize>, coefficient: &str, model: &str) -> PyResult<Self> {
        if indices.contains(&0) {
            return Err(err("form indices are 1-based"));
        }
        let f = RingElement::monomial(self::model(model)?, &exponents, rational(coefficient)?).map_err(err)?;
        let idx: Vec<usize> = indices.iter().map(|i| i - 1).collect();
        let s = Subset::from_indices(&idx).map_err(err)?;
        Ok(Form(PForm::monomial(&f, s)))
    }

    #[getter]
    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    pub fn d(&self) -> Form {
        Form(self.0.ext_d())
    }

    pub fn wedge(&self, other: &Form) -> PyResult<Form> {
        Ok(Form(self.0.wedge(&other.0).map_err(err)?))
    }

    pub fn __add__(&self, other: &Form) -> PyResult<Form> {
        Ok(Form(self.0.try_add(&other.0).map_err(err)?))
    }

    pub fn __sub__(&self, other: &Form) -> PyResult<Form> {
        Ok(Form(self.0.try_sub(&other.0).map_err(err)?))
    }

    pub fn lie_derive(&self, x: &VectorField) -> PyResult<Form> {
        Ok(Form(self.0.lie_derive(&x.0).map_err(err)?))
    }

    /// Evaluate on vector fields, giving a function.
    pub fn evaluate(&self, fields: Vec<VectorField>) -> PyResult<String> {
        let xs: Vec<_> = fields.into_iter().map(|x| x.0).collect();
        Ok(self.0.evaluate(&xs).map_err(err)?.to_string())
    }

    /// Canonical representative of the class modulo exact forms.
    pub fn reduce_mod_exact(&self) -> Form {
        Form(self.0.reduce_mod_exact().into_representative())
    }

    pub fn is_exact(&self) -> bool {
        self.0.reduce_mod_exact().is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn __eq__(&self, other: &Form) -> bool {
        self.0 == other.0
    }

    pub fn __str__(&self) -> String {
        self.0.to_string()
    }

    pub fn __repr__(&self) -> String {
        format!("Form({})", self.0)
    }
}

/// A named cochain family on vector fields: psi, psibar, phi or div.
#[pyclass(frozen)]
pub struct Cocycle(pub Cochain<vfc::VectorField>);

#[pymethods]
impl Cocycle {
    #[new]
    #[pyo3(signature = (name, k, dim, model = "torus"))]
    pub fn new(name: &str, k: usize, dim: usize, model: &str) -> PyResult<Self> {
        let spec = CocycleSpec { name: name.into(), k, model: self::model(model)?, n: dim, parameters: Default::default() };
        Ok(Cocycle(spec.build().map_err(err)?))
    }

    #[getter]
    pub fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    /// Value on the given fields, reduced modulo exact forms where applicable.
    pub fn evaluate(&self, fields: Vec<VectorField>) -> PyResult<String> {
        let xs: Vec<_> = fields.into_iter().map(|x| x.0).collect();
        Ok(self.0.eval(&xs).map_err(err)?.reduced().to_string())
    }

    pub fn __repr__(&self) -> String {
        format!("Cocycle({}, degree {})", self.0.name(), self.0.degree())
    }
}

/// Nonzero cohomology dimensions of the truncated Weil algebra.
#[pyfunction]
pub fn weil_betti(n: usize) -> BTreeMap<usize, usize> {
    weil::weil_betti(n)
}

/// Vey basis monomials of degree `q`, as strings like `u1 | c1^2`.
#[pyfunction]
pub fn vey_basis(n: usize, q: usize) -> Vec<String> {
    weil::vey_basis(n, q).iter().map(ToString::to_string).collect()
}

#[pyfunction]
pub fn partition(n: usize) -> u128 {
    weil::partition(n)
}

/// `dim H^s` for vector fields on `M × R^N`; `betti` defaults to the N-torus.
#[pyfunction]
#[pyo3(signature = (n, betti = None))]
pub fn haefliger_table(n: usize, betti: Option<Vec<usize>>) -> PyResult<BTreeMap<usize, usize>> {
    weil::haefliger_table(n, betti.as_deref()).map_err(err)
}

#[pyfunction]
pub fn gl_betti(m: usize) -> Vec<usize> {
    FiniteLieAlgebra::gl(m).betti_numbers()
}

/// Run verification suites and return the JSON report.
#[pyfunction]
#[pyo3(signature = (suites = "all", dim = 2, model = "torus", radius = 2, samples = 100, seed = 7, budget = 500_000, planted = false, timing = false))]
#[allow(clippy::too_many_arguments)]
pub fn verify(
    suites: &str,
    dim: usize,
    model: &str,
    radius: i32,
    samples: usize,
    seed: u64,
    budget: u64,
    planted: bool,
    timing: bool,
) -> PyResult<String> {
    let list = if suites.is_empty() { Vec::new() } else { Suite::parse_list(suites).map_err(err)? };
    let cfg = RunConfig { dim, model: self::model(model)?, radius, samples, seed, budget, planted, timing, ..RunConfig::default() };
    Ok(run(&list, &cfg).map_err(err)?.to_json())
}

#[pymodule]
fn pyvfc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<VectorField>()?;
    m.add_class::<Form>()?;
    m.add_class::<Cocycle>()?;
    m.add_function(wrap_pyfunction!(weil_betti, m)?)?;
    m.add_function(wrap_pyfunction!(vey_basis, m)?)?;
    m.add_function(wrap_pyfunction!(partition, m)?)?;
    m.add_function(wrap_pyfunction!(haefliger_table, m)?)?;
    m.add_function(wrap_pyfunction!(gl_betti, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
