//! The Lagrangian-foliation example on the bundle of 2-forms over a
//! Riemannian 3-manifold: ω and φ_f = d(fα) at a point, and the Hessian
//! metric induced on the fibers.
//!
//! Coordinates (x¹, x², x³, t¹, t², t³) map to axes 1..6 in that order.
//! The base metric enters only through its value at the base point.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{wedge, Form};
use crate::invariants::{compute_f, compute_k, SymplecticForm};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Safety margin above r = (−C)^{2/3} when C < 0.
pub const NEGATIVE_C_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct BaseMetric3<S: Scalar> {
    g: Matrix<S>,
    g_inv: Matrix<S>,
    det: S,
}

impl<S: Scalar> BaseMetric3<S> {
    pub fn new(g: Matrix<S>) -> Result<Self> {
        if g.rows() != 3 || g.cols() != 3 || !g.is_symmetric(1e-12) {
            return Err(Error::Domain("base metric must be a symmetric 3x3 matrix".into()));
        }
        if !g.leading_minors().iter().all(|m| *m > S::zero()) {
            return Err(Error::Domain("base metric is not positive definite".into()));
        }
        let det = g.det();
        let g_inv = g.inverse().ok_or_else(|| Error::Singular("base metric".into()))?;
        Ok(Self { g, g_inv, det })
    }

    pub fn identity() -> Self {
        Self::new(Matrix::identity(3)).expect("identity is positive definite")
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.g
    }

    pub fn inverse(&self) -> &Matrix<S> {
        &self.g_inv
    }

    pub fn det(&self) -> &S {
        &self.det
    }

    pub fn sqrt_det(&self) -> Result<S> {
        self.det
            .try_sqrt()
            .ok_or_else(|| Error::Domain(format!("sqrt(det g) = sqrt({}) is not representable", self.det)))
    }

    /// r = tᵀgt / det g.
    pub fn r(&self, t: &[S; 3]) -> S {
        let gt = self.g.mul_vec(t);
        dot(t, &gt) / self.det.clone()
    }

    /// ∂r/∂t^j = 2(gt)_j / det g.
    pub fn dr(&self, t: &[S; 3]) -> [S; 3] {
        let gt = self.g.mul_vec(t);
        let k = S::int(2) / self.det.clone();
        std::array::from_fn(|j| gt[j].clone() * &k)
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y)
}

/// A point t in the fiber and the constant C of f(r) = r^{−1/2}(r^{3/2} + C)^{1/3}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberPoint<S> {
    pub t: [S; 3],
    pub c: S,
}

/// f, f′ and the coefficient of the cubic term of h_{jkl} at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile<S> {
    pub r: S,
    pub f: S,
    pub fp: S,
    /// C(5r^{3/2} + 2C) / (2r⁴(r^{3/2} + C)^{2/3}).
    pub cubic: S,
}

/// Evaluates f at the point after checking the domain. With C = 0 the
/// profile is f = 1, f′ = 0 in every backend; otherwise it involves
/// fractional powers and is only available in floats.
pub fn profile<S: Scalar>(g: &BaseMetric3<S>, p: &FiberPoint<S>) -> Result<Profile<S>> {
    let r = g.r(&p.t);
    if p.c.is_zero() {
        return Ok(Profile {
            r,
            f: S::one(),
            fp: S::zero(),
            cubic: S::zero(),
        });
    }
    if S::EXACT {
        return Err(Error::Domain(
            "f is irrational for C != 0; use the float backend".into(),
        ));
    }
    let (rf, c) = (r.as_f64(), p.c.as_f64());
    if rf <= 0.0 {
        return Err(Error::Domain("r must be positive when C != 0".into()));
    }
    if c < 0.0 && rf - (-c).powf(2.0 / 3.0) <= NEGATIVE_C_MARGIN {
        return Err(Error::Domain(format!(
            "r = {rf} is not above (-C)^(2/3) + {NEGATIVE_C_MARGIN}"
        )));
    }
    let s = rf.powf(1.5) + c;
    if s <= 0.0 {
        return Err(Error::Domain("r^(3/2) + C must be positive".into()));
    }
    let f = rf.powf(-0.5) * s.cbrt();
    let fp = -0.5 * rf.powf(-1.5) * s.cbrt() + 0.5 * s.powf(-2.0 / 3.0);
    let cubic = c * (5.0 * rf.powf(1.5) + 2.0 * c) / (2.0 * rf.powi(4) * s.powf(2.0 / 3.0));
    Ok(Profile {
        r,
        f: S::real(f),
        fp: S::real(fp),
        cubic: S::real(cubic),
    })
}

#[derive(Clone, Debug)]
pub struct SixForms<S: Scalar> {
    pub omega: SymplecticForm<S>,
    pub alpha: Form<S>,
    pub d_alpha: Form<S>,
    pub phi: Form<S>,
    pub profile: Profile<S>,
}

/// ω = (g_kj/√det g) dx^k∧dt^j and φ_f = f dα + f′ dr∧α at the point.
pub fn build_six_forms<S: Scalar>(g: &BaseMetric3<S>, p: &FiberPoint<S>) -> Result<SixForms<S>> {
    let prof = profile(g, p)?;
    let sd = g.sqrt_det()?;
    let mut omega = Form::zero(2);
    for k in 0..3 {
        for j in 0..3 {
            let term = Form::monomial(&[k + 1, j + 4]).scale(&(g.matrix()[(k, j)].clone() / sd.clone()));
            omega = &omega + &term;
        }
    }
    let omega = SymplecticForm::new(omega)?;
    let dx = |i: usize| Form::<S>::monomial(&[i]);
    let dt = |j: usize| Form::<S>::monomial(&[j + 3]);
    let cyclic = [(1, 2, 3), (2, 3, 1), (3, 1, 2)];
    let mut alpha = Form::zero(2);
    let mut d_alpha = Form::zero(3);
    for (j, (a, b, c)) in cyclic.iter().enumerate() {
        let pair = wedge(&dx(*b), &dx(*c))?;
        alpha = &alpha + &pair.scale(&p.t[j]);
        d_alpha = &d_alpha + &wedge(&dt(*a), &pair)?;
    }
    let drv = g.dr(&p.t);
    let dr = (0..3).fold(Form::zero(1), |acc, j| &acc + &dt(j + 1).scale(&drv[j]));
    let phi = &d_alpha.scale(&prof.f) + &wedge(&dr, &alpha)?.scale(&prof.fp);
    Ok(SixForms {
        omega,
        alpha,
        d_alpha,
        phi,
        profile: prof,
    })
}

/// Residuals of the pointwise claims about φ_f.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointChecks {
    /// max |ω∧φ_f|.
    pub primitivity: f64,
    /// max |F(φ_f) + 4f²(f + 2rf′)√det g dx¹²³|.
    pub f_formula: f64,
    /// |f²(f + 2rf′) − 1|.
    pub fchoice: f64,
    /// max |F(φ_f) + 4√det g dx¹²³|, the normalized form of F.
    pub f_normalized: f64,
    /// max |K(∂/∂t^j)|.
    pub k_fiber: f64,
    /// max |K(∂/∂x^j) − V_j|.
    pub v_frame: f64,
}

pub fn point_checks<S: Scalar>(g: &BaseMetric3<S>, p: &FiberPoint<S>) -> Result<PointChecks> {
    let six = build_six_forms(g, p)?;
    let pr = &six.profile;
    let sd = g.sqrt_det()?;
    let prim = six.omega.lefschetz_residual(&six.phi)?.max_abs();
    let f = compute_f(&six.phi, &six.omega)?;
    let weight = pr.f.clone() * &pr.f * &(pr.f.clone() + S::int(2) * &pr.r * &pr.fp);
    let expected = Form::monomial(&[1, 2, 3]).scale(&(-(S::int(4) * &weight * &sd)));
    let normalized = Form::monomial(&[1, 2, 3]).scale(&(-(S::int(4) * &sd)));
    let k = compute_k(&six.phi, &six.omega)?;
    let km = k.matrix();
    let mut k_fiber = 0.0f64;
    for col in 3..6 {
        for row in 0..6 {
            k_fiber = k_fiber.max(km[(row, col)].as_f64().abs());
        }
    }
    let frame = v_frame(g, p, pr)?;
    let mut v_err = 0.0f64;
    for j in 0..3 {
        for row in 0..6 {
            let want = if row < 3 { S::zero() } else { frame[j][row - 3].clone() };
            v_err = v_err.max((km[(row, j)].clone() - want).as_f64().abs());
        }
    }
    Ok(PointChecks {
        primitivity: prim,
        f_formula: f.max_abs_diff(&expected),
        fchoice: (weight - S::one()).as_f64().abs(),
        f_normalized: f.max_abs_diff(&normalized),
        k_fiber,
        v_frame: v_err,
    })
}

/// V_j = 2f√det g[(f + 2rf′)∂/∂t^j − f′(∂r/∂t^j)ℰ], as fiber components.
fn v_frame<S: Scalar>(g: &BaseMetric3<S>, p: &FiberPoint<S>, pr: &Profile<S>) -> Result<[[S; 3]; 3]> {
    let sd = g.sqrt_det()?;
    let dr = g.dr(&p.t);
    let lead = S::int(2) * &pr.f * &sd;
    let diag = pr.f.clone() + S::int(2) * &pr.r * &pr.fp;
    Ok(std::array::from_fn(|j| {
        std::array::from_fn(|a| {
            let mut x = -(pr.fp.clone() * &dr[j] * &p.t[a]);
            if a == j {
                x += &diag;
            }
            lead.clone() * &x
        })
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HessianLeafData<S: Scalar> {
    pub h: Matrix<S>,
    /// h^{jk} from its closed form, not by inversion.
    pub h_inv: Matrix<S>,
    /// h_{jkl}, indexed [j][k][l].
    pub h3: [[[S; 3]; 3]; 3],
    /// Fiber components of V_1, V_2, V_3.
    pub v_frame: [[S; 3]; 3],
}

/// Evaluates the leaf metric in the affine frame V_j together with its
/// inverse and third derivatives.
pub fn leaf_data<S: Scalar>(g: &BaseMetric3<S>, p: &FiberPoint<S>) -> Result<HessianLeafData<S>> {
    let pr = profile(g, p)?;
    let dr = g.dr(&p.t);
    let det = g.det().clone();
    let sd = g.sqrt_det()?;
    let gm = g.matrix();
    let gi = g.inverse();
    let two = S::int(2);
    let h = Matrix::from_fn(3, 3, |j, k| {
        two.clone() / pr.f.clone() * &gm[(j, k)] - pr.f.clone() * &pr.fp * &det * &dr[j] * &dr[k]
    });
    if h.det().negligible(det.as_f64(), 1e-12) {
        return Err(Error::Singular("leaf metric h".into()));
    }
    let gidr = gi.mul_vec(&dr);
    let c = pr.fp.clone() * &det / (two.clone() * &pr.f);
    let h_inv = Matrix::from_fn(3, 3, |j, k| {
        pr.f.clone() / two.clone() * &(gi[(j, k)].clone() + c.clone() * &gidr[j] * &gidr[k])
    });
    let lin = -(S::int(4) * &pr.fp * &sd);
    let cub = pr.cubic.clone() * &det * &sd;
    let h3 = std::array::from_fn(|j| {
        std::array::from_fn(|k| {
            std::array::from_fn(|l| {
                let sym = gm[(j, k)].clone() * &dr[l] + gm[(k, l)].clone() * &dr[j] + gm[(l, j)].clone() * &dr[k];
                lin.clone() * &sym - cub.clone() * &dr[j] * &dr[k] * &dr[l]
            })
        })
    });
    Ok(HessianLeafData {
        h,
        h_inv,
        h3,
        v_frame: v_frame(g, p, &pr)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Curvature<S: Scalar> {
    /// S = ¼ h^{st}h^{ik}h^{jl}h_{sil}h_{tkj}.
    pub scalar: S,
    /// R_jk = ¼ h^{st}h^{lp}(h_{jps}h_{klt} − h_{jkt}h_{pls}).
    pub ricci: Matrix<S>,
}

pub fn scalar_curvature<S: Scalar>(data: &HessianLeafData<S>) -> Curvature<S> {
    let hi = &data.h_inv;
    let h3 = &data.h3;
    let quarter = S::ratio(1, 4);
    let mut scalar = S::zero();
    for s in 0..3 {
        for t in 0..3 {
            for i in 0..3 {
                for k in 0..3 {
                    for j in 0..3 {
                        for l in 0..3 {
                            scalar += hi[(s, t)].clone() * &hi[(i, k)] * &hi[(j, l)] * &h3[s][i][l] * &h3[t][k][j];
                        }
                    }
                }
            }
        }
    }
    let ricci = Matrix::from_fn(3, 3, |j, k| {
        let mut acc = S::zero();
        for s in 0..3 {
            for t in 0..3 {
                for l in 0..3 {
                    for p in 0..3 {
                        let w = hi[(s, t)].clone() * &hi[(l, p)];
                        let term = h3[j][p][s].clone() * &h3[k][l][t] - h3[j][k][t].clone() * &h3[p][l][s];
                        acc += w * &term;
                    }
                }
            }
        }
        acc * &quarter
    });
    Curvature {
        scalar: scalar * &quarter,
        ricci,
    }
}

/// 5C² / (ρ⁴(ρ³ + C)^{4/3}).
pub fn scalar_curvature_closed_form(rho: f64, c: f64) -> f64 {
    5.0 * c * c / (rho.powi(4) * (rho.powi(3) + c).powf(4.0 / 3.0))
}

/// Central differences of h along each V_l compared with h_{jkl}; returns
/// the largest absolute deviation.
pub fn affine_derivative_check(g: &BaseMetric3<f64>, p: &FiberPoint<f64>, step: f64) -> Result<f64> {
    let data = leaf_data(g, p)?;
    let mut worst = 0.0f64;
    for l in 0..3 {
        let shifted = |sign: f64| -> Result<Matrix<f64>> {
            let t = std::array::from_fn(|a| p.t[a] + sign * step * data.v_frame[l][a]);
            Ok(leaf_data(g, &FiberPoint { t, c: p.c })?.h)
        };
        let (plus, minus) = (shifted(1.0)?, shifted(-1.0)?);
        for j in 0..3 {
            for k in 0..3 {
                let fd = (plus[(j, k)] - minus[(j, k)]) / (2.0 * step);
                worst = worst.max((fd - data.h3[j][k][l]).abs());
            }
        }
    }
    Ok(worst)
}

/// For g = identity, compares h (moved to t-coordinates) with
/// ρ²/(2(ρ³+C)^{2/3}) dρ² + (ρ(ρ³+C)^{1/3}/2) g_{S²}; returns the largest
/// relative deviation over the radial, tangential and mixed entries.
pub fn polar_check(p: &FiberPoint<f64>) -> Result<f64> {
    let g = BaseMetric3::identity();
    let data = leaf_data(&g, p)?;
    let frame = Matrix::from_fn(3, 3, |a, j| data.v_frame[j][a]);
    let fi = frame.inverse().ok_or_else(|| Error::Singular("V frame".into()))?;
    let gt = fi.transpose().mul(&data.h).mul(&fi);
    let rho = dot(&p.t, &p.t).sqrt();
    let n: Vec<f64> = p.t.iter().map(|x| x / rho).collect();
    // Two unit tangents orthogonal to n.
    let pick = if n[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let w1 = normalize(cross(&n, &pick));
    let w2 = cross(&n, &w1);
    let quad = |a: &[f64], b: &[f64]| dot(a, &gt.mul_vec(b));
    let s = rho.powi(3) + p.c;
    let radial = rho * rho / (2.0 * s.powf(2.0 / 3.0));
    let tangential = rho * s.cbrt() / 2.0 / (rho * rho);
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
    let scale = radial.max(tangential);
    Ok([
        rel(quad(&n, &n), radial),
        rel(quad(&w1, &w1), tangential),
        rel(quad(&w2, &w2), tangential),
        quad(&n, &w1).abs() / scale,
        quad(&n, &w2).abs() / scale,
        quad(&w1, &w2).abs() / scale,
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(v: Vec<f64>) -> Vec<f64> {
    let n = dot(&v, &v).sqrt();
    v.into_iter().map(|x| x / n).collect()
}
