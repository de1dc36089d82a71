//! Deterministic sample sets: exhaustive basis boxes and seeded random
//! combinations (ChaCha8).

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields::VectorField;
use crate::forms::{exponents_of_degree, PForm, Subset};
use crate::rational::Rational;
use crate::ring::{Model, MultiIndex, RingElement};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All `m ∈ Z^n` with `‖m‖_∞ ≤ r`, in lexicographic order.
pub fn mode_box(n: usize, r: i32) -> Vec<MultiIndex> {
    (0..n)
        .map(|_| -r..=r)
        .multi_cartesian_product()
        .map(|v| MultiIndex::new(&v))
        .collect()
}

/// Exponents spanning the model's finite window: the mode box on the torus,
/// monomials of total degree `≤ r` on affine space.
pub fn exponent_window(model: Model, n: usize, r: i32) -> Vec<MultiIndex> {
    match model {
        Model::Torus => mode_box(n, r),
        Model::Affine => (0..=r).flat_map(|d| exponents_of_degree(n, d)).sorted().collect(),
    }
}

/// Basis fields `t^m E_j` over the window, ordered by `(m, j)`.
pub fn basis_fields(model: Model, n: usize, r: i32) -> Vec<VectorField> {
    exponent_window(model, n, r)
        .into_iter()
        .flat_map(|m| (0..n).map(move |j| VectorField::basis(model, m.as_slice(), j).unwrap()))
        .collect()
}

/// Divergence-free fields `t^m (m_2 E_1 - m_1 E_2)` for nonzero modes of the box.
pub fn divergence_free_fields(n: usize, r: i32) -> Vec<VectorField> {
    mode_box(n, r)
        .into_iter()
        .filter(|m| m[0] != 0 || m[1] != 0)
        .map(|m| VectorField::divergence_free(&m).unwrap())
        .collect()
}

/// Number of `k`-element subsets of an `n`-set, saturating.
pub fn choose(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Small nonzero rational with numerator in `[-3,3]` and denominator in `[1,3]`.
pub fn small_rational(rng: &mut SampleRng) -> Rational {
    loop {
        let num = rng.random_range(-3i64..=3);
        if num != 0 {
            return Rational::new(num, rng.random_range(1i64..=3));
        }
    }
}

/// A random rational combination of `1..=terms` basis fields from the window.
pub fn random_field(rng: &mut SampleRng, model: Model, n: usize, r: i32, terms: usize) -> VectorField {
    let window = exponent_window(model, n, r);
    let count = rng.random_range(1..=terms);
    let mut x = VectorField::zero(n, model);
    for _ in 0..count {
        let m = &window[rng.random_range(0..window.len())];
        let j = rng.random_range(0..n);
        let b = VectorField::basis(model, m.as_slice(), j).unwrap();
        x = x.try_add(&b.scale(&small_rational(rng))).unwrap();
    }
    x
}

/// A random function with up to `terms` monomials from the window.
pub fn random_function(rng: &mut SampleRng, model: Model, n: usize, r: i32, terms: usize) -> RingElement {
    let window = exponent_window(model, n, r);
    let count = rng.random_range(0..=terms);
    let ts = (0..count)
        .map(|_| (window[rng.random_range(0..window.len())].clone(), small_rational(rng)))
        .collect();
    RingElement::from_terms(n, model, ts).unwrap()
}

/// A random `p`-form with up to `terms` terms from the window.
pub fn random_form(rng: &mut SampleRng, model: Model, n: usize, p: usize, r: i32, terms: usize) -> PForm {
    let window = exponent_window(model, n, r);
    let subsets = Subset::all(n, p);
    let count = rng.random_range(0..=terms);
    let ts = (0..count)
        .map(|_| {
            (
                window[rng.random_range(0..window.len())].clone(),
                subsets[rng.random_range(0..subsets.len())],
                small_rational(rng),
            )
        })
        .collect();
    PForm::from_terms(n, model, p, ts).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_sizes_and_order() {
        let b = mode_box(2, 1);
        assert_eq!(b.len(), 9);
        assert_eq!(b[0], MultiIndex::new(&[-1, -1]));
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(basis_fields(Model::Torus, 3, 2).len(), 375);
        assert_eq!(basis_fields(Model::Affine, 2, 3).len(), 20);
        assert_eq!(divergence_free_fields(2, 2).len(), 24);
    }

    #[test]
    fn binomials() {
        assert_eq!(choose(375, 3), 8_718_875);
        assert_eq!(choose(5, 7), 0);
        assert_eq!(choose(50, 4), 230_300);
    }

    #[test]
    fn seeded_streams_repeat() {
        let a: Vec<_> = (0..5).map({
            let mut r = rng(7);
            move |_| random_field(&mut r, Model::Torus, 2, 2, 3)
        }).collect();
        let b: Vec<_> = (0..5).map({
            let mut r = rng(7);
            move |_| random_field(&mut r, Model::Torus, 2, 2, 3)
        }).collect();
        assert_eq!(a, b);
    }
}
