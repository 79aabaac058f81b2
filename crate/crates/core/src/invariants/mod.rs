//! Equivariant polynomials K, F, Q of a 3-form, the bilinear form q, and
//! Hitchin's data on the stable orbit with Q < 0.
//!
//! Every density is trivialized by a fixed volume form: ω³/3! when a
//! symplectic form is present, otherwise a caller-supplied 6-form.

pub mod classify;
pub mod coords;
pub mod stabilizer;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{interior_basis, pullback, vector_of_five_form, wedge, Form, LinearMap6, MultiIndex, DIM};
use crate::linalg::{Matrix, SignatureTriple};
use crate::scalar::{Scalar, DEFAULT_TOL, RANK_TOL};

pub use classify::{classification_report, classify_gl, classify_sp, ClassificationReport, GlOrbit, SpLabel, SpOrbit};
pub use coords::PrimitiveCoords;

/// Comparison tolerances: `rel` for values, `rank` for eigenvalue and
/// singular-value thresholds. Exact backends ignore both.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub rel: f64,
    pub rank: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: DEFAULT_TOL,
            rank: RANK_TOL,
        }
    }
}

/// A nondegenerate 2-form together with its volume ω³/3! and the matrix
/// W_ij = ω(e_i, e_j).
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticForm<S: Scalar> {
    omega: Form<S>,
    vol: Form<S>,
    matrix: Matrix<S>,
    // (W^{-1})^T, the induced pairing on covectors.
    dual: Matrix<S>,
}

impl<S: Scalar> SymplecticForm<S> {
    pub fn new(omega: Form<S>) -> Result<Self> {
        if omega.grade() != 2 {
            return Err(Error::Grade {
                got: omega.grade(),
                expected: "2".into(),
            });
        }
        let cube = wedge(&wedge(&omega, &omega)?, &omega)?;
        let vol = cube.scale(&(S::one() / S::int(6)));
        if vol.top().is_zero() {
            return Err(Error::Degenerate("omega^3 = 0".into()));
        }
        let mut matrix = Matrix::zeros(DIM, DIM);
        for (idx, c) in omega.terms() {
            let ax = idx.axes();
            matrix[(ax[0] - 1, ax[1] - 1)] = c.clone();
            matrix[(ax[1] - 1, ax[0] - 1)] = -c.clone();
        }
        let dual = matrix
            .inverse()
            .ok_or_else(|| Error::Degenerate("omega matrix is singular".into()))?
            .transpose();
        Ok(Self {
            omega,
            vol,
            matrix,
            dual,
        })
    }

    /// ω = e^{12} + e^{34} + e^{56}.
    pub fn standard() -> Self {
        let omega = &(&Form::monomial(&[1, 2]) + &Form::monomial(&[3, 4])) + &Form::monomial(&[5, 6]);
        Self::new(omega).expect("standard form is nondegenerate")
    }

    pub fn omega(&self) -> &Form<S> {
        &self.omega
    }

    pub fn vol(&self) -> &Form<S> {
        &self.vol
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    /// (W^{-1})^T, the pairing ω induces on covectors.
    pub fn dual(&self) -> &Matrix<S> {
        &self.dual
    }

    /// The pairing ω(a, b) that ω induces on 2-forms.
    pub fn pair2(&self, a: &Form<S>, b: &Form<S>) -> S {
        let p = &self.dual;
        let mut acc = S::zero();
        for (i, ca) in a.terms() {
            let [x, y] = axes2(i);
            for (j, cb) in b.terms() {
                let [z, w] = axes2(j);
                let m = p[(x, z)].clone() * &p[(y, w)] - p[(x, w)].clone() * &p[(y, z)];
                acc += ca.clone() * cb * &m;
            }
        }
        acc
    }

    /// ω ∧ φ, which vanishes exactly when the 3-form φ is primitive.
    pub fn lefschetz_residual(&self, phi: &Form<S>) -> Result<Form<S>> {
        wedge(&self.omega, phi)
    }

    /// Primitivity test relative to the size of φ.
    pub fn is_primitive(&self, phi: &Form<S>, tol: f64) -> Result<bool> {
        let r = self.lefschetz_residual(phi)?;
        let scale = phi.max_abs().max(1.0) * self.omega.max_abs().max(1.0);
        Ok(r.coeffs().iter().all(|c| c.negligible(scale, tol)))
    }

    pub fn require_primitive(&self, phi: &Form<S>, tol: f64) -> Result<()> {
        if self.is_primitive(phi, tol)? {
            Ok(())
        } else {
            let residual = self.lefschetz_residual(phi)?.max_abs();
            Err(Error::NotPrimitive { residual })
        }
    }
}

fn axes2(i: MultiIndex) -> [usize; 2] {
    let ax = i.axes();
    [ax[0] - 1, ax[1] - 1]
}

fn require_grade<S: Scalar>(phi: &Form<S>, grade: usize) -> Result<()> {
    if phi.grade() == grade {
        Ok(())
    } else {
        Err(Error::Grade {
            got: phi.grade(),
            expected: grade.to_string(),
        })
    }
}

/// The endomorphism K(φ) after trivializing by a volume form.
#[derive(Clone, Debug, PartialEq)]
pub struct KEndo<S> {
    map: LinearMap6<S>,
}

impl<S: Scalar> KEndo<S> {
    pub fn map(&self) -> &LinearMap6<S> {
        &self.map
    }

    pub fn matrix(&self) -> &Matrix<S> {
        self.map.matrix()
    }

    pub fn squared(&self) -> Matrix<S> {
        self.matrix().mul(self.matrix())
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.matrix().rank(tol)
    }
}

/// K(φ) defined by ι_{K v} vol = −ι_v φ ∧ φ.
pub fn compute_k_vol<S: Scalar>(phi: &Form<S>, vol: &Form<S>) -> Result<KEndo<S>> {
    require_grade(phi, 3)?;
    let mut m = Matrix::zeros(DIM, DIM);
    for i in 1..=DIM {
        let beta = -wedge(&interior_basis(i, phi)?, phi)?;
        let col = vector_of_five_form(&beta, vol)?;
        for (r, x) in col.0.into_iter().enumerate() {
            m[(r, i - 1)] = x;
        }
    }
    Ok(KEndo {
        map: LinearMap6::new(m),
    })
}

pub fn compute_k<S: Scalar>(phi: &Form<S>, omega: &SymplecticForm<S>) -> Result<KEndo<S>> {
    compute_k_vol(phi, omega.vol())
}

/// φ(e_a, e_b, e_c) for 0-based axes, read off the coefficient with the
/// sign of the sorting permutation.
fn component3<S: Scalar>(phi: &Form<S>, a: usize, b: usize, c: usize) -> S {
    if a == b || b == c || a == c {
        return S::zero();
    }
    let mut v = [a, b, c];
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let mask = (1u8 << v[0]) | (1u8 << v[1]) | (1u8 << v[2]);
    let x = phi.coeff(MultiIndex::from_mask(mask));
    if sign > 0 {
        x.clone()
    } else {
        -x.clone()
    }
}

fn f_entry<S: Scalar>(k: &Matrix<S>, phi: &Form<S>, i: usize, j: usize, l: usize) -> S {
    let mut acc = S::zero();
    for a in 0..DIM {
        if k[(a, i)].is_zero() {
            continue;
        }
        acc += k[(a, i)].clone() * &component3(phi, a, j, l);
    }
    acc * &S::int(-2)
}

/// F(φ)(v1, v2, v3) = −2 φ(K v1, v2, v3), given K already.
pub fn compute_f_from_k<S: Scalar>(phi: &Form<S>, k: &KEndo<S>) -> Result<Form<S>> {
    let km = k.matrix();
    let mut out = Form::zero(3);
    let scale = km.max_abs().max(1.0) * phi.max_abs().max(1.0);
    for idx in MultiIndex::basis(3) {
        let ax = idx.axes();
        let (i, j, l) = (ax[0] - 1, ax[1] - 1, ax[2] - 1);
        let v = f_entry(km, phi, i, j, l);
        // The defining formula is only alternating in its last two slots;
        // swapping the first pair must flip the sign.
        let swapped = f_entry(km, phi, j, i, l);
        if !(v.clone() + swapped).negligible(scale, DEFAULT_TOL) {
            return Err(Error::Internal(format!("F(phi) is not alternating at {idx:?}")));
        }
        out.set(*idx, v);
    }
    Ok(out)
}

pub fn compute_f_vol<S: Scalar>(phi: &Form<S>, vol: &Form<S>) -> Result<Form<S>> {
    compute_f_from_k(phi, &compute_k_vol(phi, vol)?)
}

pub fn compute_f<S: Scalar>(phi: &Form<S>, omega: &SymplecticForm<S>) -> Result<Form<S>> {
    compute_f_vol(phi, omega.vol())
}

/// Q(φ) = −(φ ∧ F(φ)) / vol.
pub fn compute_q_from_f<S: Scalar>(phi: &Form<S>, f: &Form<S>, vol: &Form<S>) -> Result<S> {
    let top = wedge(phi, f)?;
    Ok(-(top.top().clone() / vol.top().clone()))
}

pub fn compute_q_vol<S: Scalar>(phi: &Form<S>, vol: &Form<S>) -> Result<S> {
    let f = compute_f_vol(phi, vol)?;
    compute_q_from_f(phi, &f, vol)
}

pub fn compute_q<S: Scalar>(phi: &Form<S>, omega: &SymplecticForm<S>) -> Result<S> {
    compute_q_vol(phi, omega.vol())
}

/// K, F and Q computed together.
#[derive(Clone, Debug)]
pub struct Invariants<S: Scalar> {
    pub k: KEndo<S>,
    pub f: Form<S>,
    pub q: S,
}

pub fn invariants_vol<S: Scalar>(phi: &Form<S>, vol: &Form<S>) -> Result<Invariants<S>> {
    let k = compute_k_vol(phi, vol)?;
    let f = compute_f_from_k(phi, &k)?;
    let q = compute_q_from_f(phi, &f, vol)?;
    Ok(Invariants { k, f, q })
}

pub fn invariants<S: Scalar>(phi: &Form<S>, omega: &SymplecticForm<S>) -> Result<Invariants<S>> {
    invariants_vol(phi, omega.vol())
}

/// q(v1, v2) = ω(v1, K v2), checked for symmetry.
pub fn q_form<S: Scalar>(phi: &Form<S>, omega: &SymplecticForm<S>) -> Result<Matrix<S>> {
    let k = compute_k(phi, omega)?;
    let q = omega.matrix().mul(k.matrix());
    if !q.is_symmetric(DEFAULT_TOL) {
        return Err(Error::Internal(format!(
            "q-form asymmetric by {}",
            q.max_abs_diff(&q.transpose())
        )));
    }
    Ok(q)
}

/// The three expressions for q: ω(v1, K v2),
/// (ι_{v1}φ ∧ ι_{v2}φ ∧ ω)/vol and −ω(ι_{v1}φ, ι_{v2}φ).
pub fn q_form_routes<S: Scalar>(phi: &Form<S>, omega: &SymplecticForm<S>) -> Result<[Matrix<S>; 3]> {
    let k = compute_k(phi, omega)?;
    let first = omega.matrix().mul(k.matrix());
    let contractions: Vec<Form<S>> = (1..=DIM).map(|i| interior_basis(i, phi)).collect::<Result<_>>()?;
    let vol = omega.vol().top().clone();
    let mut second = Matrix::zeros(DIM, DIM);
    let mut third = Matrix::zeros(DIM, DIM);
    for i in 0..DIM {
        for j in 0..DIM {
            let w = wedge(&wedge(&contractions[i], &contractions[j])?, omega.omega())?;
            second[(i, j)] = w.top().clone() / vol.clone();
            third[(i, j)] = -omega.pair2(&contractions[i], &contractions[j]);
        }
    }
    Ok([first, second, third])
}

/// Inertia (null, positive, negative) of a symmetric matrix.
pub fn signature<S: Scalar>(sym: &Matrix<S>, tol: f64) -> SignatureTriple {
    sym.inertia(tol)
}

/// Dimensions of ker φ, ker K, Im K and (Ann φ)^⊥.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceDims {
    pub ker_phi: usize,
    pub ker_k: usize,
    pub im_k: usize,
    pub ann_perp: usize,
}

impl SubspaceDims {
    pub fn as_array(&self) -> [usize; 4] {
        [self.ker_phi, self.ker_k, self.im_k, self.ann_perp]
    }
}

/// Matrix whose column i holds the coefficients of the form `f(i)`.
fn columns<S: Scalar>(grade: usize, f: impl Fn(usize) -> Result<Form<S>>) -> Result<Matrix<S>> {
    let cols: Vec<Form<S>> = (1..=DIM).map(f).collect::<Result<_>>()?;
    Ok(Matrix::from_fn(crate::exterior::dimension(grade), DIM, |r, c| {
        cols[c].coeffs()[r].clone()
    }))
}

/// Rank of v ↦ ι_v φ; its kernel is ker φ.
pub fn contraction_rank<S: Scalar>(phi: &Form<S>, tol: f64) -> Result<usize> {
    require_grade(phi, 3)?;
    Ok(columns(2, |i| interior_basis(i, phi))?.rank(tol))
}

pub fn subspace_dims_vol<S: Scalar>(phi: &Form<S>, vol: &Form<S>, tol: f64) -> Result<SubspaceDims> {
    let ker_phi = DIM - contraction_rank(phi, tol)?;
    let k_rank = compute_k_vol(phi, vol)?.rank(tol);
    // α ↦ α ∧ φ on covectors; Ann φ is its kernel, so dim (Ann φ)^⊥ = rank.
    let ann_rank = columns(4, |i| wedge(&Form::monomial(&[i]), phi))?.rank(tol);
    Ok(SubspaceDims {
        ker_phi,
        ker_k: DIM - k_rank,
        im_k: k_rank,
        ann_perp: ann_rank,
    })
}

pub fn subspace_dims<S: Scalar>(phi: &Form<S>, omega: &SymplecticForm<S>, tol: f64) -> Result<SubspaceDims> {
    subspace_dims_vol(phi, omega.vol(), tol)
}

/// Hitchin's data for φ with Q(φ) < 0.
#[derive(Clone, Debug)]
pub struct HitchinData<S: Scalar> {
    pub j: LinearMap6<S>,
    /// |φ|² = √(−Q).
    pub normsq: S,
    /// φ̂ = J*φ.
    pub phihat: Form<S>,
    /// λ(φ) = Q/4.
    pub lambda: S,
}

/// Requires the square root of −λ to exist in the backend; rational inputs
/// whose −Q/4 is not a rational square are rejected.
pub fn hitchin_data<S: Scalar>(phi: &Form<S>, omega: &SymplecticForm<S>) -> Result<HitchinData<S>> {
    let inv = invariants(phi, omega)?;
    let scale = phi.max_abs().powi(4).max(f64::MIN_POSITIVE);
    if !inv.q.is_negative() || inv.q.negligible(scale, DEFAULT_TOL) {
        return Err(Error::NotNegative(inv.q.as_f64()));
    }
    let lambda = inv.q.clone() / S::int(4);
    let root = (-lambda.clone())
        .try_sqrt()
        .ok_or_else(|| Error::Domain("sqrt(-lambda) is not representable in this backend".into()))?;
    let j = LinearMap6::new(inv.k.matrix().scale(&(S::one() / root.clone())));
    let phihat = pullback(&j, phi);
    Ok(HitchinData {
        j,
        normsq: root * &S::int(2),
        phihat,
        lambda,
    })
}
