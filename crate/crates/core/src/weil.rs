//! The truncated Weil algebra `Ŵ_N = E(u_1..u_N) ⊗ R[c_1..c_N]/(c-weight > N)`,
//! its cohomology, Vey's monomial basis and the derived dimension tables.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::binomial;
use crate::linalg::RationalMatrix;
use crate::rational::Rational;

/// `u_{i_1} ∧ ⋯ ∧ u_{i_r} ⊗ c_{j_1} ⋯ c_{j_s}` with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeilMonomial {
    pub u: Vec<usize>,
    pub c: Vec<usize>,
}

impl WeilMonomial {
    pub fn new(mut u: Vec<usize>, mut c: Vec<usize>) -> Result<Self> {
        u.sort_unstable();
        c.sort_unstable();
        if u.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("repeated u index".into()));
        }
        if u.iter().chain(&c).any(|&i| i == 0) {
            return Err(Error::InvalidArgument("indices start at 1".into()));
        }
        Ok(WeilMonomial { u, c })
    }

    pub fn one() -> Self {
        WeilMonomial { u: vec![], c: vec![] }
    }

    pub fn degree(&self) -> usize {
        self.u.iter().map(|i| 2 * i - 1).sum::<usize>() + self.c.iter().map(|j| 2 * j).sum::<usize>()
    }

    pub fn weight(&self) -> usize {
        self.c.iter().sum()
    }
}

impl fmt::Display for WeilMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.u.is_empty() && self.c.is_empty() {
            return write!(f, "1");
        }
        let u = self.u.iter().map(|i| format!("u{i}")).join(" ");
        let c = self
            .c
            .iter()
            .dedup_with_count()
            .map(|(k, j)| if k == 1 { format!("c{j}") } else { format!("c{j}^{k}") })
            .join(" ");
        match (u.is_empty(), c.is_empty()) {
            (false, false) => write!(f, "{u} | {c}"),
            (false, true) => write!(f, "{u}"),
            _ => write!(f, "| {c}"),
        }
    }
}

impl std::str::FromStr for WeilMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(WeilMonomial::one());
        }
        let (us, cs) = s.split_once('|').unwrap_or((s, ""));
        let bad = || Error::Parse(format!("bad Weil monomial `{s}`"));
        let u = us
            .split_whitespace()
            .map(|t| t.strip_prefix('u').and_then(|i| i.parse().ok()).ok_or_else(bad))
            .collect::<Result<Vec<usize>>>()?;
        let mut c = Vec::new();
        for t in cs.split_whitespace() {
            let t = t.strip_prefix('c').ok_or_else(bad)?;
            let (j, k) = t.split_once('^').unwrap_or((t, "1"));
            let (j, k): (usize, usize) = (j.parse().map_err(|_| bad())?, k.parse().map_err(|_| bad())?);
            c.extend(std::iter::repeat_n(j, k));
        }
        WeilMonomial::new(u, c)
    }
}

/// A rational combination of Weil monomials.
pub type WeilElement = BTreeMap<WeilMonomial, Rational>;

/// `d u_k = c_k`, `d c_k = 0`, extended as a graded derivation; terms of c-weight above `n` are dropped.
pub fn weil_differential(n: usize, x: &WeilElement) -> WeilElement {
    let mut out = WeilElement::new();
    for (m, coef) in x {
        for (pos, &k) in m.u.iter().enumerate() {
            if m.weight() + k > n {
                continue;
            }
            let mut u = m.u.clone();
            u.remove(pos);
            let mut c = m.c.clone();
            c.push(k);
            c.sort_unstable();
            let v = if pos % 2 == 1 { -coef } else { coef.clone() };
            let e = out.entry(WeilMonomial { u, c }).or_insert_with(Rational::zero);
            *e += &v;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Multisets of `{1..n}` with weight at most `n`, sorted.
fn c_monomials(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, min: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for j in min..=n.min(left) {
            cur.push(j);
            rec(n, j, left - j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, n, &mut Vec::new(), &mut out);
    out
}

/// All monomials of `Ŵ_N`, grouped by degree.
pub fn weil_basis(n: usize) -> BTreeMap<usize, Vec<WeilMonomial>> {
    let mut by_degree: BTreeMap<usize, Vec<WeilMonomial>> = BTreeMap::new();
    for r in 0..=n {
        for u in (1..=n).combinations(r) {
            for c in c_monomials(n) {
                let m = WeilMonomial { u: u.clone(), c };
                by_degree.entry(m.degree()).or_default().push(m);
            }
        }
    }
    for v in by_degree.values_mut() {
        v.sort();
    }
    by_degree
}

/// Matrix of `d: Ŵ^q → Ŵ^{q+1}` in the sorted monomial bases (rows = targets).
fn differential_matrix(n: usize, src: &[WeilMonomial], dst: &[WeilMonomial]) -> RationalMatrix {
    let index: BTreeMap<&WeilMonomial, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = RationalMatrix::zeros(dst.len(), src.len());
    for (col, m) in src.iter().enumerate() {
        let dm = weil_differential(n, &WeilElement::from([(m.clone(), Rational::one())]));
        for (t, c) in dm {
            mat.set(index[&t], col, c);
        }
    }
    mat
}

/// Graded dimensions, zero entries omitted.
pub type GradedDims = BTreeMap<usize, usize>;

/// `dim H^q(Ŵ_N)` for every degree `q`.
pub fn weil_betti(n: usize) -> GradedDims {
    let basis = weil_basis(n);
    let top = basis.keys().copied().max().unwrap_or(0);
    let empty = Vec::new();
    let get = |q: usize| basis.get(&q).unwrap_or(&empty);
    let ranks: Vec<usize> = (0..=top).map(|q| differential_matrix(n, get(q), get(q + 1)).rank()).collect();
    let mut out = GradedDims::new();
    for q in 0..=top {
        let dim = get(q).len();
        let incoming = if q == 0 { 0 } else { ranks[q - 1] };
        let b = dim - ranks[q] - incoming;
        if b > 0 {
            out.insert(q, b);
        }
    }
    out
}

/// Vey's monomials of degree `q`: `1`, and `u_I ⊗ c_J` with `r > 0`, `i_1 ≤ j_1`,
/// `Σ j ≤ N` and `i_1 + Σ j > N`.
pub fn vey_basis(n: usize, q: usize) -> Vec<WeilMonomial> {
    let mut out = Vec::new();
    if q == 0 {
        out.push(WeilMonomial::one());
    }
    for m in weil_basis(n).remove(&q).unwrap_or_default() {
        let (Some(&i1), Some(&j1)) = (m.u.first(), m.c.first()) else { continue };
        if i1 <= j1 && m.weight() <= n && i1 + m.weight() > n {
            out.push(m);
        }
    }
    out
}

/// The partition function via Euler's pentagonal recurrence.
pub fn partition(n: usize) -> u128 {
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc = 0i128;
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1];
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                acc += sign * p[m - g2];
            }
        }
        p[m] = acc;
    }
    p[n] as u128
}

/// `dim W̃(N)_q = dim H^{q+1}(Ŵ_N)` on the window `2N ≤ q ≤ (N+1)² - 2`.
pub fn wtilde_dims(n: usize) -> GradedDims {
    let betti = weil_betti(n);
    (2 * n..=(n + 1) * (n + 1) - 2).filter_map(|q| betti.get(&(q + 1)).map(|&d| (q, d))).collect()
}

/// `dim H^s(V_M) = Σ_k b_k(M) · dim W̃(N)_{s+k-1}` for `1 ≤ s ≤ 2N + 1`.
///
/// `betti` defaults to the torus binomials `C(N, k)`.
pub fn haefliger_table(n: usize, betti: Option<&[usize]>) -> Result<GradedDims> {
    let torus: Vec<usize> = (0..=n).map(|k| binomial(n, k)).collect();
    let b = betti.unwrap_or(&torus);
    if b.len() != n + 1 {
        return Err(Error::LengthMismatch { expected: n + 1, got: b.len() });
    }
    let w = wtilde_dims(n);
    let mut out = GradedDims::new();
    for s in 1..=2 * n + 1 {
        let v: usize = b.iter().enumerate().map(|(k, bk)| bk * w.get(&(s + k - 1)).copied().unwrap_or(0)).sum();
        out.insert(s, v);
    }
    Ok(out)
}

/// One row of the declared dimension table for the torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeclaredDimension {
    pub group: String,
    pub dim: usize,
    pub source: &'static str,
}

/// Dimensions of low-degree cohomology of torus vector fields with form coefficients.
///
/// These rows are consequences of structure theorems and are stated, not recomputed.
pub fn declared_dimension_tables(n: usize) -> Vec<DeclaredDimension> {
    let c = binomial;
    let mut rows = Vec::new();
    let mut push = |group: String, dim: usize, source: &'static str| rows.push(DeclaredDimension { group, dim, source });
    for p in 0..=n {
        push(format!("H^0(V, Ω̄^{p})"), c(n, p), "invariant classes are the constant forms");
    }
    for m in 1..=n {
        push(format!("H^1(V, Ω̄^{m})"), c(n, m + 1), "ω ↦ ω^[1] on closed (m+1)-forms");
    }
    push("H^2(V, F)".into(), c(n, 2) + c(n, 1), "α(X,Y) + β(X)Ψ̄_1(Y) - β(Y)Ψ̄_1(X) on H^2 ⊕ H^1");
    push("H^2(V, Ω^1)".into(), c(n, 1) + 1, "b_1 + 1");
    push("H^2(V, Ω̄^1)".into(), c(n, 3) + 2, "ω^[2] on H^3, plus Ψ̄_1∧Ψ_1 and Ψ̄_2");
    if n >= 3 {
        for m in 2..=n {
            push(format!("H^2(V, Ω̄^{m})"), c(n, m + 2), "ω ↦ ω^[2] on closed (m+2)-forms");
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn partitions_brute(n: usize, max: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|k| partitions_brute(n - k, k)).sum()
    }

    #[test]
    fn partition_values() {
        assert_eq!(partition(0), 1);
        assert_eq!(partition(2), 2);
        assert_eq!(partition(5), 7);
        for n in 0..25 {
            assert_eq!(partition(n), partitions_brute(n, n));
        }
    }

    #[test]
    fn differential_examples() {
        let one = |m: WeilMonomial| WeilElement::from([(m, Rational::one())]);
        let u1: WeilMonomial = "u1".parse().unwrap();
        assert_eq!(weil_differential(2, &one(u1)), one("| c1".parse().unwrap()));
        assert!(weil_differential(2, &one("| c2".parse().unwrap())).is_empty());
        assert!(weil_differential(1, &one("u1 | c1".parse().unwrap())).is_empty());
        let d = weil_differential(2, &one("u1 u2".parse().unwrap()));
        assert_eq!(d[&"u2 | c1".parse().unwrap()], Rational::one());
        assert_eq!(d[&"u1 | c2".parse().unwrap()], -Rational::one());
    }

    #[test]
    fn d_squared_vanishes() {
        for n in 1..=5 {
            for (_, ms) in weil_basis(n) {
                for m in ms {
                    let x = WeilElement::from([(m, Rational::one())]);
                    assert!(weil_differential(n, &weil_differential(n, &x)).is_empty());
                }
            }
        }
    }

    #[test]
    fn betti_small() {
        assert_eq!(weil_betti(1), GradedDims::from([(0, 1), (3, 1)]));
        assert_eq!(weil_betti(2)[&5], 2);
        assert_eq!(wtilde_dims(1), GradedDims::from([(2, 1)]));
        assert_eq!(wtilde_dims(2)[&4], 2);
    }

    #[test]
    fn vey_examples() {
        let v: Vec<String> = vey_basis(2, 5).iter().map(ToString::to_string).collect();
        assert_eq!(v, ["u1 | c1^2", "u1 | c2"]);
        assert_eq!(vey_basis(1, 3), vec!["u1 | c1".parse::<WeilMonomial>().unwrap()]);
        assert!(vey_basis(3, 1).is_empty());
    }

    #[test]
    fn haefliger_torus() {
        let t = haefliger_table(2, None).unwrap();
        assert_eq!((t[&1], t[&2], t[&3], t[&4]), (0, 0, 2, 4));
        assert!(haefliger_table(2, Some(&[1, 2])).is_err());
    }

    #[test]
    fn declared_rows() {
        let rows = declared_dimension_tables(3);
        let find = |g: &str| rows.iter().find(|r| r.group == g).unwrap().dim;
        assert_eq!(find("H^2(V, Ω̄^1)"), 3);
        assert_eq!(find("H^2(V, F)"), 6);
        assert_eq!(declared_dimension_tables(2).iter().find(|r| r.group == "H^2(V, Ω̄^1)").unwrap().dim, 2);
    }

    proptest! {
        #[test]
        fn monomial_text_roundtrip(u in proptest::collection::btree_set(1usize..5, 0..4), c in proptest::collection::vec(1usize..5, 0..4)) {
            let m = WeilMonomial::new(u.into_iter().collect(), c).unwrap();
            prop_assert_eq!(m.to_string().parse::<WeilMonomial>().unwrap(), m);
        }
    }
}
