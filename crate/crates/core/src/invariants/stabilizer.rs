//! Block conditions for the stabilizers of the O0 normal form and of its
//! image under F.
//!
//! Block matrices act on the coframe (dx^1, dx^2, dx^3, dy^1, dy^2, dy^3)
//! with dx^j = e^{2j-1} and dy^j = e^{2j}.

use serde::Serialize;

use super::{compute_f, SymplecticForm};
use crate::error::Result;
use crate::exterior::{pullback, Form, LinearMap6};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Axis (1-based) of the i-th coframe element dx^1, dx^2, dx^3, dy^1, dy^2, dy^3.
const COFRAME_AXES: [usize; 6] = [1, 3, 5, 2, 4, 6];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizerPredicates {
    pub stabilizes_f_of_o0: bool,
    pub stabilizes_o0: bool,
    pub reason: Option<String>,
}

/// The O0 normal form dx^1∧dy^2∧dy^3 + dx^2∧dy^3∧dy^1 + dx^3∧dy^1∧dy^2.
pub fn o0_normal_form<S: Scalar>() -> Form<S> {
    let mut f = Form::zero(3);
    for axes in [[1, 4, 6], [2, 3, 6], [2, 4, 5]] {
        f = &f + &Form::monomial(&axes);
    }
    f
}

fn block<S: Scalar>(m: &Matrix<S>, r: usize, c: usize) -> Matrix<S> {
    Matrix::from_fn(3, 3, |i, j| m[(3 * r + i, 3 * c + j)].clone())
}

/// Evaluate the block conditions on M = [[A, 0], [B, C]]:
/// F(φ) is fixed iff the upper-right block vanishes and det A · det²C = 1;
/// φ is fixed iff additionally A = C / det C and Tr(B C⁻¹) = 0.
pub fn stabilizer_predicates<S: Scalar>(m: &Matrix<S>) -> StabilizerPredicates {
    let fail = |reason: &str| StabilizerPredicates {
        stabilizes_f_of_o0: false,
        stabilizes_o0: false,
        reason: Some(reason.to_string()),
    };
    if !block(m, 0, 1).is_zero() {
        return fail("upper-right block is nonzero");
    }
    let (a, b, c) = (block(m, 0, 0), block(m, 1, 0), block(m, 1, 1));
    let det_c = c.det();
    let Some(c_inv) = c.inverse() else {
        return fail("C block is singular");
    };
    let det_a = a.det();
    let stab_f = det_a * &det_c * &det_c == S::one();
    let a_matches = a == c.scale(&(S::one() / det_c));
    let traceless = b.mul(&c_inv).trace().is_zero();
    let reason = if !stab_f {
        Some("det A * det(C)^2 != 1".to_string())
    } else if !a_matches {
        Some("A != C / det C".to_string())
    } else if !traceless {
        Some("Tr(B C^-1) != 0".to_string())
    } else {
        None
    };
    StabilizerPredicates {
        stabilizes_f_of_o0: stab_f,
        stabilizes_o0: stab_f && a_matches && traceless,
        reason,
    }
}

/// The vector-space map whose pullback acts on the coframe by M: the
/// coframe element θ^a is sent to Σ_b M_ab θ^b.
pub fn block_to_linear_map<S: Scalar>(m: &Matrix<S>) -> LinearMap6<S> {
    let mut g = Matrix::zeros(6, 6);
    for a in 0..6 {
        for b in 0..6 {
            g[(COFRAME_AXES[b] - 1, COFRAME_AXES[a] - 1)] = m[(a, b)].clone();
        }
    }
    LinearMap6::new(g)
}

/// Direct test by pullback: (φ fixed, F(φ) ⊗ vol fixed). F carries one
/// factor of the volume line, so its invariance reads det(g) · g*F = F.
pub fn direct_stabilizer_check<S: Scalar>(m: &Matrix<S>) -> Result<(bool, bool)> {
    let g = block_to_linear_map(m);
    let phi = o0_normal_form::<S>();
    let f = compute_f(&phi, &SymplecticForm::standard())?;
    let fixes_f = pullback(&g, &f).scale(&g.det()) == f;
    let fixes_phi = pullback(&g, &phi) == phi;
    Ok((fixes_f, fixes_phi))
}
