//! Closed-form solution of the reduced flow on the nilpotent algebra, where
//! only A moves: A' = −4AH² + R.

use crate::invariants::coords::PrimitiveCoords;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct NilData<S: Scalar> {
    /// The initial coordinates; every slot except A is constant in time.
    pub constants: PrimitiveCoords<S>,
    pub h: S,
    pub r: S,
}

impl<S: Scalar> NilData<S> {
    pub fn from_coords(c: &PrimitiveCoords<S>) -> Self {
        let g = |n: &str| c.get(n).clone();
        let (b, cc, d, e, f, gg, h) = (g("B"), g("C"), g("D"), g("E"), g("F"), g("G"), g("H"));
        let (i, j, k, l, m, n) = (g("I"), g("J"), g("K"), g("L"), g("M"), g("N"));
        let two = S::int(2);
        let quad =
            b * &gg + cc * &f + d.clone() * &e - two.clone() * &i * &j - two.clone() * &k * &l - two.clone() * &m * &n;
        let cubic =
            d.clone() * &j * &j + f.clone() * &l * &l + gg.clone() * &n * &n - d * &f * &gg - two * &j * &l * &n;
        let r = S::int(4) * &h * &quad + S::int(8) * &cubic;
        Self {
            constants: c.clone(),
            h,
            r,
        }
    }

    /// Right side of A' for the given A.
    pub fn a_rate(&self, a: &S) -> S {
        self.r.clone() - S::int(4) * a * &self.h * &self.h
    }

    /// R/(4H²), the stationary value of A when H ≠ 0.
    pub fn stationary_a(&self) -> Option<S> {
        (!self.h.is_zero()).then(|| self.r.clone() / (S::int(4) * &self.h * &self.h))
    }
}

impl NilData<f64> {
    /// A(t) = e^{−4H²t}[R(e^{4H²t} − 1)/(4H²) + A(0)], or A(0) + Rt when H = 0.
    pub fn closed_form(&self, a0: f64, t: f64) -> f64 {
        let k = 4.0 * self.h * self.h;
        if k == 0.0 {
            return a0 + self.r * t;
        }
        // (1 − e^{−kt})/k written to stay accurate for small kt.
        let decay = (-k * t).exp();
        decay * a0 + self.r * (-(-k * t).exp_m1()) / k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::reduced_rhs;
    use crate::liealg::{InvariantSetup, LieAlgebra6};
    use crate::scalar::Rational;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn rate_matches_generic_rhs(v in proptest::collection::vec(-20i64..20, 14)) {
            let setup = InvariantSetup::standard(LieAlgebra6::<Rational>::nil()).unwrap();
            let c = PrimitiveCoords::from_slice(&v.iter().map(|x| Rational::ratio(*x, 3)).collect::<Vec<_>>());
            let nd = NilData::from_coords(&c);
            let rhs = reduced_rhs(&setup, &c).unwrap();
            prop_assert_eq!(rhs.get("A"), &nd.a_rate(c.get("A")));
        }
    }

    #[test]
    fn closed_form_limits() {
        let c = PrimitiveCoords::with(&[("H", 0.5), ("B", 1.0), ("G", 2.0), ("A", 3.0)]);
        let nd = NilData::from_coords(&c);
        assert_eq!(nd.r, 4.0 * 0.5 * 2.0);
        assert_eq!(nd.closed_form(3.0, 0.0), 3.0);
        let inf = nd.stationary_a().unwrap();
        assert!((nd.closed_form(3.0, 200.0) - inf).abs() < 1e-12);
        let flat = NilData::from_coords(&PrimitiveCoords::with(&[("D", 1.0), ("F", 1.0), ("G", -1.0)]));
        assert_eq!(flat.h, 0.0);
        assert_eq!(flat.r, 8.0);
        assert_eq!(flat.closed_form(1.0, 2.0), 17.0);
        assert!(flat.stationary_a().is_none());
    }
}
