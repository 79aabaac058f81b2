//! Orbit labels under GL(V) and Sp(V, ω), with the table normal forms.

use std::fmt;

use serde::Serialize;

use super::{
    compute_q_vol, contraction_rank, q_form, signature, subspace_dims_vol, SubspaceDims, SymplecticForm, Tolerance,
};
use crate::error::{Error, Result};
use crate::exterior::{Form, DIM};
use crate::linalg::SignatureTriple;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GlOrbit {
    Minus,
    Plus,
    Zero,
    One,
    Three,
    Six,
}

impl GlOrbit {
    pub const ALL: [GlOrbit; 6] = [Self::Minus, Self::Plus, Self::Zero, Self::One, Self::Three, Self::Six];

    pub fn label(self) -> &'static str {
        match self {
            Self::Minus => "O-",
            Self::Plus => "O+",
            Self::Zero => "O0",
            Self::One => "O1",
            Self::Three => "O3",
            Self::Six => "O6",
        }
    }

    /// Row of the dimension table: (ker φ, ker K, Im K, (Ann φ)^⊥).
    pub fn expected_dims(self) -> [usize; 4] {
        match self {
            Self::Minus | Self::Plus => [0, 0, 6, 6],
            Self::Zero => [0, 3, 3, 6],
            Self::One => [1, 5, 1, 5],
            Self::Three => [3, 6, 0, 3],
            Self::Six => [6, 6, 0, 0],
        }
    }

    pub fn normal_form<S: Scalar>(self) -> Form<S> {
        match self {
            Self::Minus => terms(&[(1, &[1, 3, 5]), (-1, &[1, 4, 6]), (-1, &[2, 3, 6]), (-1, &[2, 4, 5])]),
            Self::Plus => terms(&[(1, &[1, 2, 3]), (1, &[4, 5, 6])]),
            Self::Zero => terms(&[(1, &[1, 4, 6]), (1, &[2, 3, 6]), (1, &[2, 4, 5])]),
            Self::One => terms(&[(1, &[1, 3, 5]), (1, &[2, 4, 5])]),
            Self::Three => terms(&[(1, &[1, 3, 5])]),
            Self::Six => Form::zero(3),
        }
    }
}

impl fmt::Display for GlOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpLabel {
    MinusPlus,
    MinusMinus,
    Plus,
    ZeroPlus,
    ZeroMinus,
    OnePlus,
    OneMinus,
    ThreePrimitive,
    Six,
}

impl SpLabel {
    pub const ALL: [SpLabel; 9] = [
        Self::MinusPlus,
        Self::MinusMinus,
        Self::Plus,
        Self::ZeroPlus,
        Self::ZeroMinus,
        Self::OnePlus,
        Self::OneMinus,
        Self::ThreePrimitive,
        Self::Six,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::MinusPlus => "O-+",
            Self::MinusMinus => "O--",
            Self::Plus => "O+",
            Self::ZeroPlus => "O0+",
            Self::ZeroMinus => "O0-",
            Self::OnePlus => "O1+",
            Self::OneMinus => "O1-",
            Self::ThreePrimitive => "O3",
            Self::Six => "O6",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.label() == s)
    }

    pub fn has_mu(self) -> bool {
        matches!(self, Self::MinusPlus | Self::MinusMinus | Self::Plus)
    }

    pub fn gl_orbit(self) -> GlOrbit {
        match self {
            Self::MinusPlus | Self::MinusMinus => GlOrbit::Minus,
            Self::Plus => GlOrbit::Plus,
            Self::ZeroPlus | Self::ZeroMinus => GlOrbit::Zero,
            Self::OnePlus | Self::OneMinus => GlOrbit::One,
            Self::ThreePrimitive => GlOrbit::Three,
            Self::Six => GlOrbit::Six,
        }
    }

    /// Signature of q on this orbit, as (null, positive, negative).
    pub fn expected_signature(self) -> SignatureTriple {
        match self {
            Self::MinusPlus => SignatureTriple::new(0, 6, 0),
            Self::MinusMinus => SignatureTriple::new(0, 2, 4),
            Self::Plus => SignatureTriple::new(0, 3, 3),
            Self::ZeroPlus => SignatureTriple::new(3, 3, 0),
            Self::ZeroMinus => SignatureTriple::new(3, 1, 2),
            Self::OnePlus => SignatureTriple::new(5, 1, 0),
            Self::OneMinus => SignatureTriple::new(5, 0, 1),
            Self::ThreePrimitive | Self::Six => SignatureTriple::new(6, 0, 0),
        }
    }

    /// Normal form relative to ω = e^{12} + e^{34} + e^{56}; `mu` only
    /// matters for the three scaled families.
    ///
    /// The O1 pairing follows the q-signature: (e^{13} − e^{24}) ∧ e^5 has
    /// signature (5,1,0) and (e^{13} + e^{24}) ∧ e^5 has (5,0,1).
    pub fn normal_form<S: Scalar>(self, mu: &S) -> Form<S> {
        match self {
            Self::MinusPlus => {
                terms(&[(1, &[1, 3, 5]), (-1, &[1, 4, 6]), (-1, &[2, 3, 6]), (-1, &[2, 4, 5])]).scale(mu)
            }
            Self::MinusMinus => terms(&[(1, &[1, 3, 5]), (-1, &[1, 4, 6]), (1, &[2, 3, 6]), (1, &[2, 4, 5])]).scale(mu),
            Self::Plus => terms(&[(1, &[1, 3, 5]), (1, &[2, 4, 6])]).scale(mu),
            Self::ZeroPlus => terms(&[(1, &[1, 4, 6]), (1, &[2, 3, 6]), (1, &[2, 4, 5])]),
            Self::ZeroMinus => terms(&[(1, &[1, 4, 6]), (-1, &[2, 3, 6]), (-1, &[2, 4, 5])]),
            Self::OnePlus => terms(&[(1, &[1, 3, 5]), (-1, &[2, 4, 5])]),
            Self::OneMinus => terms(&[(1, &[1, 3, 5]), (1, &[2, 4, 5])]),
            Self::ThreePrimitive => terms(&[(1, &[1, 3, 5])]),
            Self::Six => Form::zero(3),
        }
    }
}

impl fmt::Display for SpLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn terms<S: Scalar>(t: &[(i64, &[usize])]) -> Form<S> {
    t.iter().fold(Form::zero(3), |acc, (c, ax)| {
        &acc + &Form::monomial(ax).scale(&S::int(*c))
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpOrbit {
    pub label: SpLabel,
    pub mu: Option<f64>,
}

/// Tolerance scale for Q: it has degree 4 in φ and −2 in the volume.
fn q_scale<S: Scalar>(phi: &Form<S>, vol: &Form<S>) -> f64 {
    let v = vol.top().as_f64().abs();
    (phi.max_abs().powi(4) / (v * v)).max(f64::MIN_POSITIVE)
}

/// GL orbit from the sign of Q, then dim ker φ on the hypersurface Q = 0.
pub fn classify_gl<S: Scalar>(phi: &Form<S>, vol: &Form<S>, tol: Tolerance) -> Result<GlOrbit> {
    let q = compute_q_vol(phi, vol)?;
    classify_gl_with_q(phi, vol, &q, tol)
}

fn classify_gl_with_q<S: Scalar>(phi: &Form<S>, vol: &Form<S>, q: &S, tol: Tolerance) -> Result<GlOrbit> {
    if !q.negligible(q_scale(phi, vol), tol.rel) {
        return Ok(if q.is_negative() { GlOrbit::Minus } else { GlOrbit::Plus });
    }
    let ker = DIM - contraction_rank(phi, tol.rank)?;
    match ker {
        0 => Ok(GlOrbit::Zero),
        1 => Ok(GlOrbit::One),
        3 => Ok(GlOrbit::Three),
        6 => Ok(GlOrbit::Six),
        d => Err(Error::Classification(format!(
            "dim ker phi = {d} is impossible for a 3-form; tolerance misconfigured?"
        ))),
    }
}

/// Sp orbit of a primitive 3-form: GL label first, then the q-signature
/// separates the ± families and μ comes from Q.
pub fn classify_sp<S: Scalar>(phi: &Form<S>, omega: &SymplecticForm<S>, tol: Tolerance) -> Result<SpOrbit> {
    omega.require_primitive(phi, tol.rel)?;
    let q = compute_q_vol(phi, omega.vol())?;
    let gl = classify_gl_with_q(phi, omega.vol(), &q, tol)?;
    let sig = signature(&q_form(phi, omega)?, tol.rank);
    classify_sp_from(gl, sig, q.as_f64())
}

fn classify_sp_from(gl: GlOrbit, sig: SignatureTriple, q: f64) -> Result<SpOrbit> {
    let candidates: &[SpLabel] = match gl {
        GlOrbit::Minus => &[SpLabel::MinusPlus, SpLabel::MinusMinus],
        GlOrbit::Plus => &[SpLabel::Plus],
        GlOrbit::Zero => &[SpLabel::ZeroPlus, SpLabel::ZeroMinus],
        GlOrbit::One => &[SpLabel::OnePlus, SpLabel::OneMinus],
        GlOrbit::Three => &[SpLabel::ThreePrimitive],
        GlOrbit::Six => &[SpLabel::Six],
    };
    let label = candidates
        .iter()
        .copied()
        .find(|l| l.expected_signature() == sig)
        .ok_or_else(|| Error::Classification(format!("signature {sig} does not match any {gl} sub-orbit")))?;
    let mu = match gl {
        GlOrbit::Minus => Some((-q / 16.0).powf(0.25)),
        GlOrbit::Plus => Some((q / 4.0).powf(0.25)),
        _ => None,
    };
    Ok(SpOrbit { label, mu })
}

/// Classification summary as emitted by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub gl_orbit: String,
    pub sp_orbit: Option<String>,
    pub mu: Option<f64>,
    #[serde(rename = "Q")]
    pub q: f64,
    pub signature: Option<[usize; 3]>,
    pub dims: [usize; 4],
}

/// GL data always; Sp data when ω is given (φ must then be primitive).
/// Without ω the volume e^{123456} trivializes the densities.
pub fn classification_report<S: Scalar>(
    phi: &Form<S>,
    omega: Option<&SymplecticForm<S>>,
    tol: Tolerance,
) -> Result<ClassificationReport> {
    let unit = Form::monomial(&[1, 2, 3, 4, 5, 6]);
    let vol = omega.map_or(&unit, |w| w.vol());
    let q = compute_q_vol(phi, vol)?;
    let gl = classify_gl_with_q(phi, vol, &q, tol)?;
    let dims: SubspaceDims = subspace_dims_vol(phi, vol, tol.rank)?;
    let (sp, mu, sig) = match omega {
        Some(w) => {
            w.require_primitive(phi, tol.rel)?;
            let sig = signature(&q_form(phi, w)?, tol.rank);
            let sp = classify_sp_from(gl, sig, q.as_f64())?;
            (Some(sp.label.label().to_string()), sp.mu, Some(sig.as_array()))
        }
        None => (None, None, None),
    };
    Ok(ClassificationReport {
        gl_orbit: gl.label().to_string(),
        sp_orbit: sp,
        mu,
        q: q.as_f64(),
        signature: sig,
        dims: dims.as_array(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::compute_q;
    use crate::scalar::Rational;

    fn std_vol() -> Form<Rational> {
        Form::monomial(&[1, 2, 3, 4, 5, 6])
    }

    #[test]
    fn gl_table() {
        for orbit in GlOrbit::ALL {
            let phi = orbit.normal_form::<Rational>();
            assert_eq!(classify_gl(&phi, &std_vol(), Tolerance::default()).unwrap(), orbit);
            let dims = subspace_dims_vol(&phi, &std_vol(), 0.0).unwrap();
            assert_eq!(dims.as_array(), orbit.expected_dims(), "{orbit}");
        }
    }

    #[test]
    fn sp_table_exact() {
        let w = SymplecticForm::standard();
        for label in SpLabel::ALL {
            let mu = Rational::ratio(1, 2);
            let phi = label.normal_form(&mu);
            let sp = classify_sp(&phi, &w, Tolerance::default()).unwrap();
            assert_eq!(sp.label, label);
            if label.has_mu() {
                assert!((sp.mu.unwrap() - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn o1_pairing_from_q_signature() {
        // (e13 − e24)∧e5 = e135 − e245 and (e13 + e24)∧e5 = e135 + e245.
        let w = SymplecticForm::<Rational>::standard();
        let minus = SpLabel::OnePlus.normal_form(&Rational::int(1));
        let plus = SpLabel::OneMinus.normal_form(&Rational::int(1));
        let s = |phi| signature(&q_form(phi, &w).unwrap(), 0.0);
        assert_eq!(s(&minus), SignatureTriple::new(5, 1, 0));
        assert_eq!(s(&plus), SignatureTriple::new(5, 0, 1));
    }

    #[test]
    fn mu_from_q() {
        let w = SymplecticForm::<Rational>::standard();
        let mu = Rational::int(2);
        let plus = SpLabel::Plus.normal_form(&mu);
        assert_eq!(compute_q(&plus, &w).unwrap(), Rational::int(4 * 16));
        let sp = classify_sp(&plus, &w, Tolerance::default()).unwrap();
        assert_eq!(
            sp,
            SpOrbit {
                label: SpLabel::Plus,
                mu: Some(2.0)
            }
        );
    }

    #[test]
    fn non_primitive_rejected() {
        let w = SymplecticForm::<Rational>::standard();
        let phi = Form::monomial(&[1, 2, 3]);
        assert!(matches!(
            classify_sp(&phi, &w, Tolerance::default()),
            Err(Error::NotPrimitive { .. })
        ));
    }

    #[test]
    fn report_fields() {
        let w = SymplecticForm::<f64>::standard();
        let phi = SpLabel::ZeroPlus.normal_form(&1.0);
        let r = classification_report(&phi, Some(&w), Tolerance::default()).unwrap();
        assert_eq!(r.gl_orbit, "O0");
        assert_eq!(r.sp_orbit.as_deref(), Some("O0+"));
        assert_eq!(r.signature, Some([3, 3, 0]));
        assert_eq!(r.dims, [0, 3, 3, 6]);
        let r = classification_report(&Form::<f64>::zero(3), None, Tolerance::default()).unwrap();
        assert_eq!(r.gl_orbit, "O6");
    }
}
