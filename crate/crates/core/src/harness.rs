//! Named verification suites and the consolidated JSON report.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cochain::{is_cocycle, is_equivariant, pullback_by_crossed_hom, Cochain, FieldAction, GaugeMap, Samples, Trivial, Value};
use crate::cocycles::*;
use crate::error::{Error, Result};
use crate::extension::{planted_twist, unit_window, virasoro_twist, ExtensionAlgebra, ExtensionElement};
use crate::fields::{check_crossed_hom, VectorField};
use crate::forms::{exponents_of_degree, PForm, Subset};
use crate::lie::{check_crossed_hom_gauge, check_maurer_cartan, FiniteLieAlgebra, GaugeAlgebra, GaugeElement, VectorFieldAlgebra};
use crate::linalg::in_span;
use crate::rational::Rational;
use crate::report::{CheckReport, Witness};
use crate::ring::{Model, MultiIndex, RingElement};
use crate::sampling::{
    basis_fields, choose, divergence_free_fields, exponent_window, mode_box, random_field, random_form, random_function, rng,
    SampleRng,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Polynomial degree of the field window used by the formal (affine) suite.
pub const FORMAL_DEGREE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub dim: usize,
    pub model: Model,
    pub radius: i32,
    /// Random multi-term tuples added to every check.
    pub samples: usize,
    pub seed: u64,
    /// Largest number of basis tuples a single check enumerates exhaustively.
    pub budget: u64,
    /// Seeded basis tuples drawn when the exhaustive count exceeds `budget`.
    pub sampled: usize,
    /// Adds deliberately broken checks that must fail.
    pub planted: bool,
    /// Records wall times; off for byte-comparable reports.
    #[serde(skip)]
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { dim: 2, model: Model::Torus, radius: 2, samples: 100, seed: 7, budget: 500_000, sampled: 300, planted: false, timing: true }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > 8 {
            return Err(Error::InvalidArgument(format!("--dim must be in 1..=8, got {}", self.dim)));
        }
        if self.radius < 1 {
            return Err(Error::InvalidArgument(format!("--radius must be ≥ 1, got {}", self.radius)));
        }
        Ok(())
    }

    fn rng_for(&self, check: &str) -> SampleRng {
        // FNV-1a of the check name keeps each check's samples independent of suite order
        let h = check.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
        rng(self.seed ^ h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    CrossedHom,
    Cocycles,
    Relations,
    Gauge,
    Formal,
    Extensions,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::CrossedHom, Suite::Cocycles, Suite::Relations, Suite::Gauge, Suite::Formal, Suite::Extensions];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CrossedHom => "crossed-hom",
            Suite::Cocycles => "cocycles",
            Suite::Relations => "relations",
            Suite::Gauge => "gauge",
            Suite::Formal => "formal",
            Suite::Extensions => "extensions",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`; expected one of crossed-hom, cocycles, relations, gauge, formal, extensions, all")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub suites: Vec<Suite>,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: RunConfig, suites: Vec<Suite>, mut checks: Vec<CheckReport>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        if !config.timing {
            for c in &mut checks {
                c.wall_time_ms = 0;
            }
        }
        let passed = checks.iter().filter(|c| c.passed()).count();
        let summary = Summary { checks: checks.len(), passed, failed: checks.len() - passed };
        Report { schema_version: SCHEMA_VERSION, tool: "vfc".into(), version: env!("CARGO_PKG_VERSION").into(), config, suites, checks, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Aligned plain-text summary, one line per check.
    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            let pad = width - c.name.chars().count();
            out += &format!("{status}  {}{}  {:>10} tuples\n", c.name, " ".repeat(pad), c.tuples_checked);
            if let Some(w) = &c.witness {
                out += &format!("      witness: {}\n      residual: {}\n", w.inputs.join(" | "), w.residual);
            }
            for n in &c.notes {
                out += &format!("      note: {n}\n");
            }
        }
        out += &format!("{} checks, {} passed, {} failed\n", self.summary.checks, self.summary.passed, self.summary.failed);
        out
    }
}

/// Runs the suites and assembles the report.
pub fn run(suites: &[Suite], cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mut checks = Vec::new();
    for &s in suites {
        checks.extend(run_suite(s, cfg)?);
    }
    Ok(Report::new(cfg.clone(), suites.to_vec(), checks))
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    match suite {
        Suite::CrossedHom => crossed_hom_suite(cfg),
        Suite::Cocycles => cocycle_suite(cfg),
        Suite::Relations => relation_suite(cfg),
        Suite::Gauge => gauge_suite(cfg),
        Suite::Formal => formal_suite(cfg),
        Suite::Extensions => extension_suite(cfg),
    }
}

/// Exhaustive `k`-subsets of `base` when within budget, else seeded random `k`-subsets.
fn basis_tuples<E: Clone>(base: &[E], k: usize, cfg: &RunConfig, rng: &mut SampleRng) -> (Samples<E>, bool) {
    let total = choose(base.len(), k);
    if total <= cfg.budget as u128 {
        return (Samples::exhaustive(base.to_vec()), true);
    }
    let tuples = (0..cfg.sampled)
        .map(|_| {
            rand::seq::index::sample(rng, base.len(), k).into_iter().sorted().map(|i| base[i].clone()).collect()
        })
        .collect();
    (Samples::explicit(tuples), false)
}

fn annotate(mut r: CheckReport, base_len: usize, k: usize, exhaustive: bool, cfg: &RunConfig) -> CheckReport {
    let total = choose(base_len, k);
    r = r
        .with_param("basis_size", base_len)
        .with_param("coverage", if exhaustive { "exhaustive" } else { "sampled" })
        .with_param("random_tuples", cfg.samples);
    if !exhaustive {
        r.note(format!("{total} basis {k}-tuples exceed the budget of {}; {} seeded basis tuples checked instead", cfg.budget, cfg.sampled));
    }
    r
}

/// `is_cocycle` on the field basis of the window plus `cfg.samples` random tuples.
fn field_cocycle_check(
    psi: &Cochain<VectorField>,
    base: &[VectorField],
    model: Model,
    r: i32,
    cfg: &RunConfig,
) -> CheckReport {
    let name = format!("cocycle:{}", psi.name());
    let mut g = cfg.rng_for(&name);
    let k = psi.degree() + 1;
    let n = cfg.dim;
    let (samples, exhaustive) = basis_tuples(base, k, cfg, &mut g);
    let extra: Vec<Vec<VectorField>> = (0..cfg.samples).map(|_| (0..k).map(|_| random_field(&mut g, model, n, r, 3)).collect()).collect();
    let alg = VectorFieldAlgebra { n, model };
    let start = Instant::now();
    let mut rep = is_cocycle(&alg, &FieldAction, psi, &samples.with_extra(extra));
    rep.wall_time_ms = start.elapsed().as_millis() as u64;
    annotate(rep.with_param("N", n).with_param("model", model).with_param("radius", r), base.len(), k, exhaustive, cfg)
}

/// Monomial closed forms `t^m κ_I` of degree ≥ `min_degree` with `m` in the window.
pub fn basis_closed_forms(model: Model, n: usize, min_degree: usize) -> Vec<PForm> {
    let window = match model {
        Model::Torus => mode_box(n, 1),
        Model::Affine => exponent_window(model, n, 1),
    };
    let mut out = Vec::new();
    for p in min_degree..=n {
        for s in Subset::all(n, p) {
            for m in &window {
                if (0..n).any(|j| m[j] != 0 && !s.contains(j)) {
                    continue;
                }
                let f = RingElement::monomial(model, m.as_slice(), Rational::one()).expect("window exponent");
                let w = PForm::monomial(&f, s);
                if w.ext_d().is_zero() {
                    out.push(w);
                }
            }
        }
    }
    out
}

fn closed_form_label(w: &PForm) -> String {
    w.to_string().replace("1 * ", "").replace(' ', "")
}

/// The two-cocycle family with `α` a closed 2-form and `β` a closed 1-form.
fn f_valued_family(model: Model, n: usize) -> Result<Vec<(String, Cochain<VectorField>)>> {
    let mut alphas = vec![PForm::zero(n, model, 2)];
    alphas.extend(Subset::all(n, 2).into_iter().map(|s| PForm::basis(n, model, &s.indices().collect::<Vec<_>>()).unwrap()));
    let mut betas = vec![PForm::zero(n, model, 1)];
    betas.extend((0..n).map(|j| PForm::coframe(n, model, j).unwrap()));
    let mut out = Vec::new();
    for ((i, a), (j, b)) in alphas.iter().enumerate().cartesian_product(betas.iter().enumerate()) {
        if i == 0 && j == 0 {
            continue;
        }
        out.push((format!("F2[α={}, β={}]", closed_form_label(a), closed_form_label(b)), f_valued_2cocycle(a, b)?));
    }
    if n >= 2 {
        let exps = |e: &[i32]| {
            let mut v = vec![0; n];
            v[..e.len()].copy_from_slice(e);
            v
        };
        let (u, v) = match model {
            Model::Torus => (exps(&[1, 1]), exps(&[1, -1])),
            Model::Affine => (exps(&[1, 1]), exps(&[2, 1])),
        };
        let eta = PForm::monomial(&RingElement::monomial(model, &u, Rational::one())?, Subset::single(0));
        let a = PForm::basis(n, model, &[0, 1])?.try_add(&eta.ext_d())?;
        let g = RingElement::monomial(model, &v, Rational::one())?;
        let b = PForm::coframe(n, model, 0)?.try_add(&PForm::function(&g).ext_d())?;
        out.push(("F2[α=κ_1∧κ_2+dη, β=κ_1+dg]".to_string(), f_valued_2cocycle(&a, &b)?));
    }
    Ok(out)
}

fn torus_families(model: Model, n: usize) -> Result<Vec<Cochain<VectorField>>> {
    let mut cs = Vec::new();
    for k in 1..=n {
        cs.push(psi_k(k, n, model)?);
        cs.push(psibar_k(k, n, model)?);
        cs.push(phi_k(k, n, model)?);
    }
    cs.push(divergence());
    Ok(cs)
}

fn cocycle_suite(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let (n, model, r) = (cfg.dim, cfg.model, cfg.radius);
    let base = basis_fields(model, n, r);
    let mut cs = torus_families(model, n)?;
    for p in 1..=2.min(n) {
        for w in basis_closed_forms(model, n, p) {
            cs.push(omega_bracket(&w, p)?.renamed(format!("omega^[{p}]({})", closed_form_label(&w))));
        }
    }
    for (name, c) in f_valued_family(model, n)? {
        cs.push(c.renamed(name));
    }
    if model == Model::Torus && n >= 2 {
        cs.push(psibar1_wedge_psi1(n, model)?);
    }
    Ok(cs.iter().map(|c| field_cocycle_check(c, &base, model, r, cfg)).collect())
}

fn formal_suite(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let n = cfg.dim;
    let base = basis_fields(Model::Affine, n, FORMAL_DEGREE);
    let mut cs = Vec::new();
    for k in 1..=2.min(n) {
        cs.push(phi_k(k, n, Model::Affine)?);
        cs.push(psi_k(k, n, Model::Affine)?);
        cs.push(psibar_k(k, n, Model::Affine)?);
    }
    let mut out: Vec<CheckReport> = cs.iter().map(|c| field_cocycle_check(c, &base, Model::Affine, FORMAL_DEGREE, cfg)).collect();
    let mut v = CheckReport::new("value:Phi^W_1(x_1∂_1)").with_param("N", n);
    let x = VectorField::basis(Model::Affine, MultiIndex::unit(n, 0).as_slice(), 0)?;
    let got = phi_k(1, n, Model::Affine)?.eval(std::slice::from_ref(&x))?;
    v.tuples_checked = 1;
    if got != Value::Function(RingElement::constant(n, Model::Affine, Rational::from(-1))) {
        v.fail(Witness::new(&[x], got.to_string()));
    }
    out.push(v);
    Ok(out)
}

fn crossed_hom_pairs(base: &[VectorField], model: Model, r: i32, cfg: &RunConfig, name: &str) -> (Vec<(VectorField, VectorField)>, bool) {
    let mut g = cfg.rng_for(name);
    let (samples, exhaustive) = basis_tuples(base, 2, cfg, &mut g);
    let mut pairs: Vec<(VectorField, VectorField)> = if samples.exhaustive {
        base.iter().cloned().tuple_combinations().collect()
    } else {
        samples.extra.into_iter().map(|t| (t[0].clone(), t[1].clone())).collect()
    };
    pairs.extend((0..cfg.samples).map(|_| (random_field(&mut g, model, cfg.dim, r, 3), random_field(&mut g, model, cfg.dim, r, 3))));
    (pairs, exhaustive)
}

fn crossed_hom_suite(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let n = cfg.dim;
    let mut out = Vec::new();
    for (model, r) in [(Model::Torus, cfg.radius), (Model::Affine, FORMAL_DEGREE)] {
        let base = basis_fields(model, n, r);
        let name = format!("crossed-hom:theta[{model:?}]").to_lowercase();
        let (pairs, exhaustive) = crossed_hom_pairs(&base, model, r, cfg, &name);
        let start = Instant::now();
        let mut rep = check_crossed_hom(&name, VectorField::theta, &pairs);
        rep.wall_time_ms = start.elapsed().as_millis() as u64;
        out.push(annotate(rep.with_param("N", n).with_param("radius", r), base.len(), 2, exhaustive, cfg));

        let gl = Arc::new(FiniteLieAlgebra::gl(n));
        let gauge = GaugeAlgebra::new(n, model, Arc::new(gl.defining_representation()?));
        let gname = format!("crossed-hom:theta-hat[{model:?}, gl_{n}]").to_lowercase();
        let (gpairs, gex) = crossed_hom_pairs(&base, model, r, cfg, &gname);
        let rep = check_crossed_hom_gauge(&gname, &gauge, |x| gauge.theta_hat(x), &gpairs);
        out.push(annotate(rep.with_param("N", n), base.len(), 2, gex, cfg));

        let control_pairs: Vec<_> = pairs.iter().take(2000).cloned().collect();
        let raw = if n == 1 {
            let squared = |x: &VectorField| x.theta().mul(&x.theta());
            check_crossed_hom(&format!("planted:theta-squared[{model:?}]").to_lowercase(), squared, &control_pairs)
        } else {
            let flipped = |x: &VectorField| x.theta().scale(&-Rational::one());
            check_crossed_hom(&format!("planted:theta-sign-flip[{model:?}]").to_lowercase(), flipped, &control_pairs)
        };
        out.push(negative_control(raw, cfg));

        let mut div = CheckReport::new(format!("identity:div=-tr(theta)[{model:?}]").to_lowercase());
        for x in &base {
            div.tuples_checked += 1;
            if x.divergence() != -&x.theta().trace() {
                div.fail(Witness::new(&[x], "div X + Tr θ(X) ≠ 0"));
                break;
            }
        }
        out.push(div);
    }
    Ok(out)
}

/// In normal runs a planted check passes iff it fails with a witness; with `planted` it is reported raw.
fn negative_control(raw: CheckReport, cfg: &RunConfig) -> CheckReport {
    if cfg.planted {
        return raw;
    }
    let name = raw.name.replacen("planted:", "negative-control:", 1);
    let mut r = CheckReport::new(name);
    r.parameters = raw.parameters.clone();
    r.tuples_checked = raw.tuples_checked;
    match raw.witness {
        Some(w) => r.note(format!("detected: {} on ({})", w.residual, w.inputs.join(", "))),
        None => r.fail_with(vec![raw.name.clone()], "planted defect was not detected"),
    }
    r
}

fn relation_suite(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let (n, r) = (cfg.dim, cfg.radius);
    let mut out = Vec::new();
    for (model, radius) in [(Model::Torus, r), (Model::Affine, FORMAL_DEGREE)] {
        let base = basis_fields(model, n, radius);
        let tag = format!("{model:?}").to_lowercase();
        for k in 1..=n {
            out.push(tuple_relation(&format!("relation:d(Psibar_{k})=Psi_{k}[{tag}]"), &base, k, model, radius, cfg, |args| {
                let lhs = psibar_representative(args)?.ext_d();
                let Value::Class(c) = psibar_k(k, n, model)?.eval(args)? else { unreachable!() };
                let rhs = psi_k(k, n, model)?.eval(args)?;
                let a = Value::Form(lhs).try_sub(&rhs)?;
                let b = Value::Form(c.ext_d()).try_sub(&rhs)?;
                Ok(if !a.is_zero() { Some(a) } else if !b.is_zero() { Some(b) } else { None })
            }));
        }
        out.push(tuple_relation(&format!("relation:Phi_1=Psibar_1=-div[{tag}]"), &base, 1, model, radius, cfg, |args| {
            let phi = phi_k(1, n, model)?.eval(args)?;
            let Value::Class(pb) = psibar_k(1, n, model)?.eval(args)? else { unreachable!() };
            let div = Value::Function(-&args[0].divergence());
            let a = phi.try_sub(&div)?;
            let b = Value::Function(pb.representative().as_function()?).try_sub(&div)?;
            Ok(if !a.is_zero() { Some(a) } else if !b.is_zero() { Some(b) } else { None })
        }));
        out.extend(pullback_relations(model, n, radius, &base, cfg)?);
        let kappa: Vec<PForm> = (0..n).map(|j| PForm::coframe(n, model, j)).collect::<Result<_>>()?;
        let mut mc = check_maurer_cartan(&format!("maurer-cartan:flat-coframe[{tag}]"), &FiniteLieAlgebra::abelian(n), &kappa);
        mc = mc.with_param("N", n);
        out.push(mc);
    }
    if n == 2 {
        out.extend(divergence_free_checks(r, cfg)?);
    }
    Ok(out)
}

/// A relation between values on `k`-tuples of basis fields plus random tuples.
fn tuple_relation<F>(name: &str, base: &[VectorField], k: usize, model: Model, r: i32, cfg: &RunConfig, rel: F) -> CheckReport
where
    F: Fn(&[VectorField]) -> Result<Option<Value>> + Send + Sync,
{
    let mut g = cfg.rng_for(name);
    let (samples, exhaustive) = basis_tuples(base, k, cfg, &mut g);
    let extra: Vec<Vec<VectorField>> = (0..cfg.samples).map(|_| (0..k).map(|_| random_field(&mut g, model, cfg.dim, r, 3)).collect()).collect();
    let samples = samples.with_extra(extra);
    let start = Instant::now();
    let (count, witness) = crate::cochain::search_tuples(&samples.base, k, samples.exhaustive, &samples.extra, |t| {
        Ok(rel(t)?.map(|v| v.to_string()))
    });
    let mut rep = CheckReport::new(name).with_param("N", cfg.dim).with_param("model", model).with_param("radius", r);
    rep.tuples_checked = count;
    if let Some(w) = witness {
        rep.fail(w);
    }
    rep.wall_time_ms = start.elapsed().as_millis() as u64;
    annotate(rep, base.len(), k, exhaustive, cfg)
}

/// `θ*φ_k = Φ_k`, `θ*ψ_k = Ψ_k` and `θ*ψ̄_k = Ψ̄_k` through `θ̂: V → F ⊗ gl_N`.
fn pullback_relations(model: Model, n: usize, r: i32, base: &[VectorField], cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let gl = Arc::new(FiniteLieAlgebra::gl(n));
    let rep = Arc::new(gl.defining_representation()?);
    let gauge = Arc::new(GaugeAlgebra::new(n, model, rep.clone()));
    let mut tables = TraceTables::new(rep);
    for k in 1..=n {
        tables = tables.with_symmetric(k).with_alternating(2 * k - 1);
    }
    let tables = Arc::new(tables);
    let g2 = gauge.clone();
    let theta: GaugeMap = Arc::new(move |x: &VectorField| g2.theta_hat(x));
    let check_pairs: Vec<_> = base.iter().take(12).cloned().tuple_combinations().collect();
    let tag = format!("{model:?}").to_lowercase();
    let mut out = Vec::new();
    for k in 1..=n {
        let pairs = [
            (gauge_phi_k(k, tables.clone()), phi_k(k, n, model)?, 2 * k - 1),
            (gauge_psi_k(k, tables.clone()), psi_k(k, n, model)?, k),
            (gauge_psibar_k(k, tables.clone()), psibar_k(k, n, model)?, k),
        ];
        for (gc, fc, deg) in pairs {
            let pulled = pullback_by_crossed_hom(&gc, &gauge, theta.clone(), &check_pairs)?;
            let name = format!("relation:theta*{}={}[{tag}]", gc.name(), fc.name());
            out.push(tuple_relation(&name, base, deg, model, r, cfg, |args| {
                let d = pulled.eval(args)?.try_sub(&fc.eval(args)?)?.reduced();
                Ok((!d.is_zero()).then_some(d))
            }));
        }
    }
    Ok(out)
}

/// On `T^2`: `Ψ̄_1∧Ψ_1` vanishes on divergence-free pairs, and the first pair with `Ψ̄_2 ≠ 0`.
fn divergence_free_checks(r: i32, cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let fields = divergence_free_fields(2, r);
    let w = psibar1_wedge_psi1(2, Model::Torus)?;
    let mut vanish = CheckReport::new("divergence-free:Psibar_1∧Psi_1=0").with_param("radius", r).with_param("fields", fields.len());
    let (count, witness) = crate::cochain::search_tuples(&fields, 2, true, &[], |t| {
        let v = w.eval(t)?;
        Ok((!v.is_zero()).then(|| v.to_string()))
    });
    vanish.tuples_checked = count;
    if let Some(wt) = witness {
        vanish.fail(wt);
    }
    let p2 = psibar_k(2, 2, Model::Torus)?;
    let mut search = CheckReport::new("divergence-free:Psibar_2-witness").with_param("radius", r);
    let mut found = None;
    for (i, j) in (0..fields.len()).tuple_combinations() {
        search.tuples_checked += 1;
        let v = p2.eval(&[fields[i].clone(), fields[j].clone()])?;
        if !v.is_zero() {
            found = Some((fields[i].clone(), fields[j].clone(), v));
            break;
        }
    }
    match found {
        Some((x, y, v)) => {
            search = search.with_param("X", x.to_string()).with_param("Y", y.to_string()).with_param("value", v.to_string());
        }
        None => search.fail_with(vec![], "no divergence-free pair with Ψ̄_2 ≠ 0 in the box"),
    }
    let _ = cfg;
    Ok(vec![vanish, search])
}

fn gauge_basis(gauge: &GaugeAlgebra, window: &[MultiIndex]) -> Vec<GaugeElement> {
    window
        .iter()
        .flat_map(|m| {
            (0..gauge.g().dim()).map(move |a| {
                gauge.pure(RingElement::monomial(gauge.model, m.as_slice(), Rational::one()).expect("window"), a).expect("index")
            })
        })
        .collect()
}

fn random_gauge(g: &mut SampleRng, gauge: &GaugeAlgebra, r: i32) -> GaugeElement {
    let coeffs = (0..gauge.g().dim()).map(|_| random_function(g, gauge.model, gauge.n, r, 2)).collect();
    gauge.from_coeffs(coeffs).expect("dims")
}

fn gauge_suite(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let (n, model, r) = (cfg.dim, cfg.model, cfg.radius);
    let mut out = Vec::new();
    let sl2 = Arc::new(FiniteLieAlgebra::sl2());
    let gl1 = Arc::new(FiniteLieAlgebra::gl(1));
    for g in [sl2, gl1] {
        let rep = Arc::new(g.defining_representation()?);
        let gauge = Arc::new(GaugeAlgebra::new(n, model, rep.clone()));
        let mut tables = TraceTables::new(rep);
        for k in 1..=2.min(n) {
            tables = tables.with_symmetric(k);
        }
        let tables = Arc::new(tables.with_alternating(1));
        let window = exponent_window(model, n, r);
        let base = gauge_basis(&gauge, &window);
        let mut cs = Vec::new();
        for k in 1..=2.min(n) {
            cs.push(gauge_psi_k(k, tables.clone()));
            cs.push(gauge_psibar_k(k, tables.clone()));
        }
        cs.push(gauge_phi_k(1, tables.clone()));
        for c in &cs {
            let name = format!("cocycle:{}[{}]", c.name(), format!("{model:?}").to_lowercase());
            let mut rg = cfg.rng_for(&name);
            let k = c.degree() + 1;
            let (samples, exhaustive) = basis_tuples(&base, k, cfg, &mut rg);
            let extra: Vec<Vec<GaugeElement>> = (0..cfg.samples).map(|_| (0..k).map(|_| random_gauge(&mut rg, &gauge, r)).collect()).collect();
            let start = Instant::now();
            let mut rep = is_cocycle(gauge.as_ref(), &Trivial, c, &samples.with_extra(extra));
            rep.name = name;
            rep.wall_time_ms = start.elapsed().as_millis() as u64;
            out.push(annotate(rep.with_param("N", n).with_param("k", g.name()), base.len(), k, exhaustive, cfg));

            let ename = format!("equivariant:{}[{}]", c.name(), format!("{model:?}").to_lowercase());
            let mut re = cfg.rng_for(&ename);
            let es: Vec<(VectorField, Vec<GaugeElement>)> = (0..cfg.samples.max(1))
                .map(|_| (random_field(&mut re, model, n, r, 2), (0..c.degree()).map(|_| random_gauge(&mut re, &gauge, r)).collect()))
                .collect();
            let values: Box<dyn crate::cochain::Module<VectorField>> = Box::new(FieldAction);
            let mut rep = is_equivariant(c, &gauge, values.as_ref(), &es);
            rep.name = ename;
            out.push(rep.with_param("N", n).with_param("k", g.name()));
        }
    }
    for m in 1..=3 {
        let g = Arc::new(FiniteLieAlgebra::gl(m));
        let betti = g.betti_numbers();
        let expected = exterior_betti(&(1..=m).map(|i| 2 * i - 1).collect::<Vec<_>>());
        let mut rep = CheckReport::new(format!("lie:betti[gl_{m}]")).with_param("betti", &betti);
        rep.tuples_checked = 1;
        if betti != expected {
            rep.fail_with(vec![format!("gl_{m}")], format!("expected {expected:?}"));
        }
        out.push(rep);
        if m <= 2 {
            let rep_g = Arc::new(g.defining_representation()?);
            for k in 1..=m {
                let phi = gl_phi_k(k, rep_g.clone());
                let mut c = CheckReport::new(format!("lie:phi_{k}[gl_{m}]-nontrivial"));
                let coc = is_cocycle(g.as_ref(), &Trivial, &phi, &Samples::exhaustive((0..g.dim()).map(|i| crate::lie::Coords(g.basis_vector(i))).collect()));
                c.absorb(coc);
                if is_coboundary(&g, &phi)? {
                    c.fail_with(vec![phi.name().into()], "class is zero");
                }
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Betti numbers of an exterior algebra on generators of the given odd degrees.
pub fn exterior_betti(degrees: &[usize]) -> Vec<usize> {
    let top: usize = degrees.iter().sum();
    let mut b = vec![0usize; top + 1];
    b[0] = 1;
    for &d in degrees {
        for q in (d..=top).rev() {
            b[q] += b[q - d];
        }
    }
    b
}

/// Basis window for exhaustive Jacobi checks of `g_τ`.
fn extension_window(n: usize) -> Vec<MultiIndex> {
    match n {
        1 => mode_box(1, 2),
        2 => mode_box(2, 1),
        _ => unit_window(n),
    }
}

fn sl2_extension(n: usize, tau: Option<Cochain<VectorField>>) -> Result<ExtensionAlgebra> {
    let g = Arc::new(FiniteLieAlgebra::sl2());
    let rep = Arc::new(g.defining_representation()?);
    let k = g.killing_form()?;
    ExtensionAlgebra::new(Arc::new(GaugeAlgebra::new(n, Model::Torus, rep)), k, tau)
}

fn jacobi_run(e: &ExtensionAlgebra, cfg: &RunConfig) -> CheckReport {
    let n = e.n;
    let window = extension_window(n);
    let base = e.basis_window(&window);
    let name = format!("jacobi:g_tau[{}]", e.tau_name());
    let mut g = cfg.rng_for(&name);
    let extra: Vec<Vec<ExtensionElement>> =
        (0..2 * cfg.samples).map(|_| (0..3).map(|_| e.random_element(&mut g, cfg.radius.min(2), 2)).collect()).collect();
    let start = Instant::now();
    let mut rep = e.jacobi_check(&base, &extra);
    rep.wall_time_ms = start.elapsed().as_millis() as u64;
    rep.with_param("window_modes", window.len())
}

fn extension_suite(cfg: &RunConfig) -> Result<Vec<CheckReport>> {
    let n = cfg.dim;
    let mut out = Vec::new();
    if n == 1 {
        let v = virasoro_twist();
        let base = basis_fields(Model::Torus, 1, cfg.radius.max(3));
        out.push(field_cocycle_check(&v, &base, Model::Torus, cfg.radius.max(3), cfg));
        let e = sl2_extension(1, Some(v.clone()))?;
        out.push(jacobi_run(&e, cfg));
        let f = |a: i32| VectorField::basis(Model::Torus, &[a], 0);
        let mut val = CheckReport::new("value:virasoro(t^1 E_1, t^-1 E_1)=1");
        val.tuples_checked = 1;
        let got = v.eval(&[f(1)?, f(-1)?])?;
        let want = Value::Class(PForm::coframe(1, Model::Torus, 0)?.reduce_mod_exact());
        if got != want {
            val.fail(Witness::new(&[f(1)?, f(-1)?], got.to_string()));
        }
        out.push(val);
        return Ok(out);
    }
    let mut taus: Vec<Option<Cochain<VectorField>>> = vec![None, Some(psibar_k(2, n, Model::Torus)?), Some(psibar1_wedge_psi1(n, Model::Torus)?)];
    if n >= 3 {
        let w = PForm::basis(n, Model::Torus, &[0, 1, 2])?;
        taus.push(Some(omega_bracket(&w, 2)?.renamed("omega^[2](κ_1∧κ_2∧κ_3)")));
    }
    for tau in taus {
        let e = sl2_extension(n, tau)?;
        out.push(jacobi_run(&e, cfg));
        let mut g = cfg.rng_for(&format!("antisymmetry:{}", e.tau_name()));
        let pairs: Vec<_> = (0..cfg.samples).map(|_| (e.random_element(&mut g, 2, 2), e.random_element(&mut g, 2, 2))).collect();
        out.push(e.antisymmetry_check(&pairs));
    }
    let e = sl2_extension(n, Some(planted_twist(n)?))?;
    let mut raw = jacobi_run(&e, cfg);
    raw.name = "planted:jacobi:g_tau[planted]".into();
    out.push(negative_control(raw, cfg));

    let mut wd = CheckReport::new("well-defined:central-action");
    let mut g = cfg.rng_for("well-defined:central-action");
    for _ in 0..cfg.samples {
        wd.tuples_checked += 1;
        let x = random_field(&mut g, Model::Torus, n, 2, 3);
        let w = random_form(&mut g, Model::Torus, n, 1, 2, 3);
        let eta = random_function(&mut g, Model::Torus, n, 2, 3);
        let lhs = w.reduce_mod_exact().lie_derive(&x)?;
        let rhs = w.try_add(&PForm::function(&eta).ext_d())?.reduce_mod_exact().lie_derive(&x)?;
        if lhs != rhs {
            wd.fail(Witness::new(&[x.to_string(), w.to_string(), eta.to_string()], lhs.try_sub(&rhs)?.to_string()));
            break;
        }
    }
    out.push(wd);
    Ok(out)
}

/// Whether `ω` is exact, decided by linear algebra in each graded component:
/// the Fourier mode on the torus, the weight `poly degree + p` on affine space.
pub fn exact_by_span(w: &PForm) -> Result<bool> {
    let (n, model, p) = (w.dim(), w.model(), w.degree());
    if w.is_zero() {
        return Ok(true);
    }
    if p == 0 {
        return Ok(false);
    }
    let mut components: BTreeMap<Vec<i32>, Vec<(MultiIndex, Subset, Rational)>> = BTreeMap::new();
    for (m, s, c) in w.terms() {
        let key = match model {
            Model::Torus => m.as_slice().to_vec(),
            Model::Affine => vec![m.total() + p as i32],
        };
        components.entry(key).or_default().push((m.clone(), s, c.clone()));
    }
    for (key, terms) in components {
        let sources: Vec<PForm> = match model {
            Model::Torus => Subset::all(n, p - 1)
                .into_iter()
                .map(|s| PForm::monomial(&RingElement::monomial(model, &key, Rational::one()).expect("mode"), s))
                .collect(),
            Model::Affine => {
                let deg = key[0] - (p as i32 - 1);
                if deg < 0 {
                    return Ok(false);
                }
                exponents_of_degree(n, deg)
                    .into_iter()
                    .cartesian_product(Subset::all(n, p - 1))
                    .map(|(m, s)| PForm::monomial(&RingElement::monomial(model, m.as_slice(), Rational::one()).expect("exponent"), s))
                    .collect()
            }
        };
        let images: Vec<PForm> = sources.iter().map(PForm::ext_d).collect();
        let mut keys: Vec<(MultiIndex, Subset)> = terms.iter().map(|(m, s, _)| (m.clone(), *s)).collect();
        for d in &images {
            keys.extend(d.terms().map(|(m, s, _)| (m.clone(), s)));
        }
        keys.sort();
        keys.dedup();
        let idx = |m: &MultiIndex, s: Subset| keys.binary_search(&(m.clone(), s)).expect("key");
        let vectors: Vec<Vec<Rational>> = images
            .iter()
            .map(|d| {
                let mut v = vec![Rational::zero(); keys.len()];
                for (m, s, c) in d.terms() {
                    v[idx(m, s)] = c.clone();
                }
                v
            })
            .collect();
        let mut target = vec![Rational::zero(); keys.len()];
        for (m, s, c) in &terms {
            target[idx(m, *s)] = c.clone();
        }
        if !in_span(&vectors, &target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Quotient checks on seeded pairs `(ω, η)`: class invariance under `ω + dη`,
/// idempotence, and `reduce(ω) = 0` iff `ω` is exact by [`exact_by_span`].
pub fn quotient_check(model: Model, n: usize, p: usize, pairs: usize, seed: u64) -> Result<CheckReport> {
    let mut rep = CheckReport::new(format!("quotient:{model:?}[N={n}, p={p}]").to_lowercase()).with_param("pairs", pairs);
    let mut g = rng(seed ^ ((n as u64) << 8) ^ p as u64);
    let r = match model {
        Model::Torus => 2,
        Model::Affine => 3,
    };
    let mut exact_seen = 0usize;
    for i in 0..pairs {
        rep.tuples_checked += 1;
        let w = random_form(&mut g, model, n, p, r, 4);
        let eta = if p == 0 { PForm::zero(n, model, 0) } else { random_form(&mut g, model, n, p - 1, r, 4) };
        let deta = if p == 0 { PForm::zero(n, model, 0) } else { eta.ext_d() };
        // every fourth pair tests a purely exact form
        let w = if i % 4 == 3 { deta.clone() } else { w };
        let a = w.reduce_mod_exact();
        let b = w.try_add(&deta)?.reduce_mod_exact();
        if a != b {
            rep.fail(Witness::new(&[w.to_string(), eta.to_string()], a.try_sub(&b)?.to_string()));
            break;
        }
        if a.representative().reduce_mod_exact() != a {
            rep.fail(Witness::new(&[w.to_string()], "reduce is not idempotent"));
            break;
        }
        let exact = exact_by_span(&w)?;
        exact_seen += exact as usize;
        if exact != a.is_zero() {
            rep.fail(Witness::new(&[w.to_string()], format!("reduce zero: {}, exact by span: {exact}", a.is_zero())));
            break;
        }
    }
    rep.note(format!("{exact_seen} exact forms among the samples"));
    Ok(rep)
}
