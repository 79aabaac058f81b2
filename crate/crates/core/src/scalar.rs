//! The two numeric backends: exact rationals and `f64`.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, Mul, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub type Rational = BigRational;

/// Default relative tolerance for float comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default relative eigenvalue threshold for ranks and signatures.
pub const RANK_TOL: f64 = 1e-8;

/// Field operations shared by both backends.
///
/// Exact backends answer every zero test exactly and ignore tolerances.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Signed
    + Send
    + Sync
    + AddAssign
    + SubAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + 'static
{
    const EXACT: bool;

    fn int(n: i64) -> Self;
    fn ratio(p: i64, q: i64) -> Self;
    /// Exact binary value for rationals; panics on non-finite input.
    fn real(x: f64) -> Self;
    fn as_f64(&self) -> f64;
    /// Square root if representable in the backend.
    fn try_sqrt(&self) -> Option<Self>;

    /// Zero test: exact for rationals, `|x| <= tol * scale` for floats.
    fn negligible(&self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.as_f64().abs() <= tol * scale
        }
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.as_f64().abs().max(other.as_f64().abs()).max(1.0);
        (self.clone() - other.clone()).negligible(scale, tol)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn int(n: i64) -> Self {
        n as f64
    }
    fn ratio(p: i64, q: i64) -> Self {
        p as f64 / q as f64
    }
    fn real(x: f64) -> Self {
        x
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn ratio(p: i64, q: i64) -> Self {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }
    fn real(x: f64) -> Self {
        <Rational as FromPrimitive>::from_f64(x).expect("finite float")
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn try_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| Rational::new(n, d))
    }
}

/// Largest absolute value, as a float scale for tolerance tests.
pub fn max_abs<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> f64 {
    values.into_iter().map(|x| x.as_f64().abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt() {
        let x = Rational::ratio(9, 4);
        assert_eq!(x.try_sqrt(), Some(Rational::ratio(3, 2)));
        assert_eq!(Rational::int(2).try_sqrt(), None);
        assert_eq!(Rational::int(-4).try_sqrt(), None);
    }

    #[test]
    fn negligible_is_exact_for_rationals() {
        let tiny = Rational::ratio(1, 1_000_000_000_000);
        assert!(!tiny.negligible(1.0, 1e-3));
        assert!(1e-12_f64.negligible(1.0, 1e-9));
    }

    #[test]
    fn float_round_trip() {
        let x = Rational::real(0.1);
        assert_eq!(Scalar::as_f64(&x), 0.1);
    }
}
