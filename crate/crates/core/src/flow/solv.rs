//! The closed ansatz on the solvable algebra and the (u, v) comparison
//! systems used to bound its blow-up time.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::coords::PrimitiveCoords;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Closed invariant primitive forms on the solvable algebra:
/// A = B = α, C = −D = β, E = −F = γ, G = H = −δ, I = J = K = L = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SolvData<S: Scalar> {
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
    pub delta: S,
    pub m: S,
    pub n: S,
    pub lambda: S,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub same_sign: bool,
    pub exceeds_m2: bool,
    pub exceeds_n2: bool,
    pub q_negative: bool,
    /// Leading principal minors of the 6×6 matrix, as floats.
    pub minors: Vec<f64>,
    pub sylvester: bool,
}

impl PositivityReport {
    pub fn holds(&self) -> bool {
        self.same_sign && self.exceeds_m2 && self.exceeds_n2 && self.q_negative
    }

    /// Whether the inequalities and the minors give the same verdict.
    pub fn agrees(&self) -> bool {
        self.holds() == self.sylvester
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.same_sign {
            out.push("alpha, beta, gamma, delta do not share a sign");
        }
        if !self.exceeds_m2 {
            out.push("alpha*delta + beta*gamma <= M^2");
        }
        if !self.exceeds_n2 {
            out.push("alpha*delta + beta*gamma <= N^2");
        }
        if !self.q_negative {
            out.push("Q/16 >= 0");
        }
        out
    }
}

impl<S: Scalar> SolvData<S> {
    pub fn from_coords(c: &PrimitiveCoords<S>, lambda: S, tol: f64) -> Result<Self> {
        let g = |n: &str| c.get(n).clone();
        let scale = c.max_abs().max(1.0);
        let same = |x: S, y: S| (x - y).negligible(scale, tol);
        let checks = [
            ("A = B", same(g("A"), g("B"))),
            ("C = -D", same(g("C"), -g("D"))),
            ("E = -F", same(g("E"), -g("F"))),
            ("G = H", same(g("G"), g("H"))),
            ("I = 0", g("I").negligible(scale, tol)),
            ("J = 0", g("J").negligible(scale, tol)),
            ("K = 0", g("K").negligible(scale, tol)),
            ("L = 0", g("L").negligible(scale, tol)),
        ];
        if let Some((what, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(Error::Domain(format!(
                "coordinates are not of the closed form: {what} fails"
            )));
        }
        Ok(Self {
            alpha: g("A"),
            beta: g("C"),
            gamma: g("E"),
            delta: -g("G"),
            m: g("M"),
            n: g("N"),
            lambda,
        })
    }

    pub fn to_coords(&self) -> PrimitiveCoords<S> {
        let z = S::zero();
        PrimitiveCoords([
            self.alpha.clone(),
            self.alpha.clone(),
            self.beta.clone(),
            -self.beta.clone(),
            self.gamma.clone(),
            -self.gamma.clone(),
            -self.delta.clone(),
            -self.delta.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z,
            self.m.clone(),
            self.n.clone(),
        ])
    }

    /// u = 4αδ.
    pub fn u(&self) -> S {
        S::int(4) * &self.alpha * &self.delta
    }

    /// v = 4βγ.
    pub fn v(&self) -> S {
        S::int(4) * &self.beta * &self.gamma
    }

    fn mn2(&self) -> (S, S) {
        let p = self.m.clone() + self.n.clone();
        let d = self.m.clone() - self.n.clone();
        (p.clone() * &p, d.clone() * &d)
    }

    /// S = max{(M+N)², (M−N)²}.
    pub fn s(&self) -> S {
        let (p, d) = self.mn2();
        if p > d {
            p
        } else {
            d
        }
    }

    /// Q/16 = −4αβγδ + αδ(M−N)² + βγ(M+N)².
    pub fn q_over_16(&self) -> S {
        let (p, d) = self.mn2();
        let ad = self.alpha.clone() * &self.delta;
        let bg = self.beta.clone() * &self.gamma;
        -(S::int(4) * &ad * &bg) + ad * &d + bg * &p
    }

    /// The hand-written four-component system, kept as an oracle for the
    /// generic right side.
    pub fn system_rhs(&self) -> [S; 4] {
        let (p, d) = self.mn2();
        let k = S::int(4) * &self.lambda * &self.lambda;
        let ga = self.v() - d;
        let gb = self.u() - p;
        [
            k.clone() * &self.alpha * &ga,
            k.clone() * &self.beta * &gb,
            k.clone() * &self.gamma * &gb,
            k * &self.delta * &ga,
        ]
    }

    /// The 6×6 matrix whose positivity is the open orbit condition.
    pub fn positivity_matrix(&self) -> Matrix<S> {
        let (a, b, c, d) = (&self.alpha, &self.beta, &self.gamma, &self.delta);
        let (m, n) = (&self.m, &self.n);
        let z = S::zero;
        let two = S::int(2);
        let nm = n.clone() - m.clone();
        let mpn = m.clone() + n.clone();
        let mmn = m.clone() - n.clone();
        let ad = a.clone() * d;
        let bc = b.clone() * c;
        let off = ad.clone() - bc.clone() - m.clone() * n;
        Matrix::from_rows(&[
            vec![two.clone() * a * b, z(), a.clone() * &nm, b.clone() * &mpn, z(), z()],
            vec![z(), two.clone() * c * d, c.clone() * &mpn, d.clone() * &mmn, z(), z()],
            vec![a.clone() * &nm, c.clone() * &mpn, two.clone() * a * c, z(), z(), z()],
            vec![b.clone() * &mpn, d.clone() * &mmn, z(), two * b * d, z(), z()],
            vec![z(), z(), z(), z(), ad.clone() + bc.clone() - m.clone() * m, off.clone()],
            vec![z(), z(), z(), z(), off, ad + bc - n.clone() * n],
        ])
    }

    /// Evaluates the inequality groups and, independently, Sylvester's
    /// criterion on the 6×6 matrix.
    pub fn positivity_check(&self) -> PositivityReport {
        let zero = S::zero();
        let all = [&self.alpha, &self.beta, &self.gamma, &self.delta];
        let same_sign = all.iter().all(|x| **x > zero) || all.iter().all(|x| **x < zero);
        let sum = self.alpha.clone() * &self.delta + self.beta.clone() * &self.gamma;
        let minors = self.positivity_matrix().leading_minors();
        PositivityReport {
            same_sign,
            exceeds_m2: sum > self.m.clone() * &self.m,
            exceeds_n2: sum > self.n.clone() * &self.n,
            q_negative: self.q_over_16() < zero,
            sylvester: minors.iter().all(|x| *x > zero),
            minors: minors.iter().map(|x| x.as_f64()).collect(),
        }
    }

    pub fn to_f64(&self) -> SolvData<f64> {
        SolvData {
            alpha: self.alpha.as_f64(),
            beta: self.beta.as_f64(),
            gamma: self.gamma.as_f64(),
            delta: self.delta.as_f64(),
            m: self.m.as_f64(),
            n: self.n.as_f64(),
            lambda: self.lambda.as_f64(),
        }
    }
}

/// Which rate constant multiplies the (u, v) systems. Differentiating
/// u = 4αδ along the four-component system gives 8λ²; the printed
/// systems carry 2λ².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UvRate {
    Derived,
    Printed,
}

/// The bound T′, or the reason the closed form gives none.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TPrime {
    Finite { value: f64 },
    Unavailable { reason: String },
}

impl TPrime {
    pub fn value(&self) -> Option<f64> {
        match self {
            TPrime::Finite { value } => Some(*value),
            TPrime::Unavailable { .. } => None,
        }
    }

    fn unavailable(reason: &str) -> Self {
        TPrime::Unavailable { reason: reason.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UvSystem {
    /// Rate constant κ in u' = κu(v − ·).
    pub kappa: f64,
    pub m: f64,
    pub n: f64,
}

impl UvSystem {
    pub fn new(lambda: f64, m: f64, n: f64, rate: UvRate) -> Self {
        let c = match rate {
            UvRate::Derived => 8.0,
            UvRate::Printed => 2.0,
        };
        Self {
            kappa: c * lambda * lambda,
            m,
            n,
        }
    }

    pub fn from_solv(sd: &SolvData<f64>, rate: UvRate) -> Self {
        Self::new(sd.lambda, sd.m, sd.n, rate)
    }

    pub fn s(&self) -> f64 {
        (self.m + self.n).powi(2).max((self.m - self.n).powi(2))
    }

    /// u' = κu(v − (M−N)²), v' = κv(u − (M+N)²).
    pub fn uv_rhs(&self, u: f64, v: f64) -> [f64; 2] {
        [
            self.kappa * u * (v - (self.m - self.n).powi(2)),
            self.kappa * v * (u - (self.m + self.n).powi(2)),
        ]
    }

    /// u' = κu(v − S), v' = κv(u − S).
    pub fn comparison_rhs(&self, u: f64, v: f64) -> [f64; 2] {
        let s = self.s();
        [self.kappa * u * (v - s), self.kappa * v * (u - s)]
    }

    /// w(t) = e^{κSt}u(t) for the comparison system, C₀ = u₀ − v₀.
    pub fn w_closed_form(&self, u0: f64, v0: f64, t: f64) -> f64 {
        let (s, c0) = (self.s(), u0 - v0);
        let w0 = u0;
        let e = (-self.kappa * s * t).exp_m1();
        c0 / (1.0 - (w0 - c0) / w0 * (-(c0 / s) * e).exp())
    }

    /// (u, v) of the comparison system recovered from w.
    pub fn comparison_closed_form(&self, u0: f64, v0: f64, t: f64) -> [f64; 2] {
        let decay = (-self.kappa * self.s() * t).exp();
        let u = self.w_closed_form(u0, v0, t) * decay;
        [u, u - (u0 - v0) * decay]
    }

    /// T′ = −(1/(κS)) log[1 + (S/C₀) log((w₀ − C₀)/w₀)].
    pub fn t_prime(&self, u0: f64, v0: f64) -> TPrime {
        let (s, c0) = (self.s(), u0 - v0);
        if !(u0 > 0.0 && v0 > 0.0) {
            return TPrime::unavailable("u0 and v0 must be positive");
        }
        if c0 == 0.0 {
            return TPrime::unavailable("C0 = 0; see symmetric_blow_up_time");
        }
        if s == 0.0 {
            return TPrime::unavailable("S = 0 makes the formula singular");
        }
        let arg = 1.0 + s / c0 * ((u0 - c0) / u0).ln();
        if !(arg > 0.0 && arg < 1.0) {
            return TPrime::unavailable("log argument outside (0, 1): no finite T' from this bound");
        }
        TPrime::Finite {
            value: -arg.ln() / (self.kappa * s),
        }
    }

    /// Blow-up time of the comparison system when u₀ = v₀, where it is the
    /// logistic equation u' = κu(u − S).
    pub fn symmetric_blow_up_time(&self, u0: f64) -> Option<f64> {
        let s = self.s();
        if u0 <= s {
            return None;
        }
        Some(if s == 0.0 {
            1.0 / (self.kappa * u0)
        } else {
            (u0 / (u0 - s)).ln() / (self.kappa * s)
        })
    }
}
