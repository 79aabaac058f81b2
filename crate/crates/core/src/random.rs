//! Seeded generators for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{dimension, Form, LinearMap6, MultiIndex, Vector6};
use crate::hessian::BaseMetric3;
use crate::invariants::coords::PrimitiveCoords;
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// p/q with |p| ≤ 6 and 1 ≤ q ≤ 4.
pub fn small_rational(rng: &mut SuiteRng) -> Rational {
    Rational::ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

/// Sparse rational coefficient: zero with probability 1 − density.
fn sparse(rng: &mut SuiteRng, density: f64) -> Rational {
    if rng.gen_bool(density) {
        small_rational(rng)
    } else {
        Rational::int(0)
    }
}

pub fn three_form(rng: &mut SuiteRng) -> Form<Rational> {
    let density = rng.gen_range(0.2..0.9);
    Form::from_coeffs(3, (0..dimension(3)).map(|_| sparse(rng, density)).collect())
}

pub fn primitive_coords(rng: &mut SuiteRng) -> PrimitiveCoords<Rational> {
    let density = rng.gen_range(0.2..0.9);
    PrimitiveCoords(std::array::from_fn(|_| sparse(rng, density)))
}

pub fn float_coords(rng: &mut SuiteRng) -> PrimitiveCoords<f64> {
    PrimitiveCoords(std::array::from_fn(|_| rng.gen_range(-2.0..2.0)))
}

pub fn vector(rng: &mut SuiteRng) -> Vector6<Rational> {
    Vector6(std::array::from_fn(|_| small_rational(rng)))
}

/// Invertible integer matrix with entries in −2..=2.
pub fn gl_map(rng: &mut SuiteRng) -> LinearMap6<Rational> {
    loop {
        let m = Matrix::from_fn(6, 6, |_, _| Rational::int(rng.gen_range(-2..=2)));
        if !num_traits::Zero::is_zero(&m.det()) {
            return LinearMap6::new(m);
        }
    }
}

/// Product of elementary maps preserving e^{12} + e^{34} + e^{56}: shears
/// inside one Darboux pair, and pair-mixing maps diag(A, A^{-T}).
pub fn symplectic_map(rng: &mut SuiteRng) -> LinearMap6<Rational> {
    let mut g = LinearMap6::identity();
    for _ in 0..4 {
        let mut m = Matrix::identity(6);
        if rng.gen_bool(0.5) {
            // x_i ↦ x_i + s y_i (or the transpose) keeps dx∧dy.
            let i = rng.gen_range(0..3);
            let s = small_rational(rng);
            if rng.gen_bool(0.5) {
                m[(2 * i, 2 * i + 1)] = s;
            } else {
                m[(2 * i + 1, 2 * i)] = s;
            }
        } else {
            // x_i ↦ x_i + s x_j with y_j ↦ y_j − s y_i.
            let i = rng.gen_range(0..3);
            let j = (i + rng.gen_range(1..3)) % 3;
            let s = small_rational(rng);
            m[(2 * i, 2 * j)] = s.clone();
            m[(2 * j + 1, 2 * i + 1)] = -s;
        }
        g = g.compose(&LinearMap6::new(m));
    }
    g
}

/// g = LᵀL with L upper triangular and rational, so √det g is rational.
pub fn spd_metric(rng: &mut SuiteRng) -> BaseMetric3<Rational> {
    let l = Matrix::from_fn(3, 3, |i, j| {
        if i == j {
            Rational::ratio(rng.gen_range(2..=8), 4)
        } else if i < j {
            Rational::ratio(rng.gen_range(-4..=4), 4)
        } else {
            Rational::int(0)
        }
    });
    BaseMetric3::new(l.transpose().mul(&l)).expect("LᵀL with nonzero diagonal is positive definite")
}

/// A random combination, with small integer weights, of the given basis.
pub fn sparse_combination(rng: &mut SuiteRng, basis: &[Form<Rational>]) -> Form<Rational> {
    let grade = basis.first().map_or(3, Form::grade);
    basis.iter().fold(Form::zero(grade), |acc, b| {
        let c = if rng.gen_bool(0.3) { rng.gen_range(-2..=2) } else { 0 };
        &acc + &b.scale(&Rational::int(c))
    })
}

pub fn monomial(rng: &mut SuiteRng, grade: usize) -> MultiIndex {
    let basis = MultiIndex::basis(grade);
    basis[rng.gen_range(0..basis.len())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::pullback;
    use crate::invariants::SymplecticForm;

    #[test]
    fn symplectic_maps_preserve_omega() {
        let mut r = rng(3);
        let w = SymplecticForm::<Rational>::standard();
        for _ in 0..50 {
            let g = symplectic_map(&mut r);
            assert_eq!(&pullback(&g, w.omega()), w.omega());
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = three_form(&mut rng(9));
        let b = three_form(&mut rng(9));
        assert_eq!(a, b);
    }

    #[test]
    fn metric_has_rational_root_det() {
        let g = spd_metric(&mut rng(1));
        assert!(g.sqrt_det().is_ok());
    }
}
