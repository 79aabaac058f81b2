//! Coordinates A..N on primitive 3-forms relative to ω = e^{12}+e^{34}+e^{56},
//! with the closed formulas for −F/2, Q and the gradient of Q.

use std::fmt;

use super::SymplecticForm;
use crate::error::{Error, Result};
use crate::exterior::{Form, MultiIndex};
use crate::scalar::Scalar;

pub const NAMES: [&str; 14] = ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M", "N"];

/// The 14 primitive basis forms in coordinate order. Each entry lists
/// (sign, axes) terms.
const BASIS: [&[(i64, [usize; 3])]; 14] = [
    &[(1, [1, 3, 5])],
    &[(1, [1, 3, 6])],
    &[(1, [1, 4, 5])],
    &[(1, [1, 4, 6])],
    &[(1, [2, 3, 5])],
    &[(1, [2, 3, 6])],
    &[(1, [2, 4, 5])],
    &[(1, [2, 4, 6])],
    &[(1, [1, 3, 4]), (-1, [1, 5, 6])],
    &[(1, [2, 3, 4]), (-1, [2, 5, 6])],
    &[(1, [1, 2, 3]), (-1, [3, 5, 6])],
    &[(1, [1, 2, 4]), (-1, [4, 5, 6])],
    &[(1, [1, 2, 5]), (-1, [3, 4, 5])],
    &[(1, [1, 2, 6]), (-1, [3, 4, 6])],
];

/// Coefficients (A, B, ..., N) of a primitive 3-form.
#[derive(Clone, PartialEq)]
pub struct PrimitiveCoords<S>(pub [S; 14]);

impl<S: Scalar> fmt::Debug for PrimitiveCoords<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (n, v) in NAMES.iter().zip(&self.0) {
            m.entry(n, &format_args!("{v}"));
        }
        m.finish()
    }
}

impl<S: Scalar> PrimitiveCoords<S> {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| S::zero()))
    }

    pub fn from_slice(v: &[S]) -> Self {
        assert_eq!(v.len(), 14, "14 coordinates expected");
        Self(std::array::from_fn(|k| v[k].clone()))
    }

    /// Set named coordinates, all others zero.
    pub fn with(values: &[(&str, S)]) -> Self {
        let mut c = Self::zero();
        for (name, v) in values {
            let k = Self::index_of(name).unwrap_or_else(|| panic!("unknown coordinate {name}"));
            c.0[k] = v.clone();
        }
        c
    }

    pub fn index_of(name: &str) -> Option<usize> {
        NAMES.iter().position(|n| *n == name)
    }

    pub fn get(&self, name: &str) -> &S {
        &self.0[Self::index_of(name).expect("coordinate name")]
    }

    pub fn values(&self) -> &[S; 14] {
        &self.0
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PrimitiveCoords<T> {
        PrimitiveCoords(std::array::from_fn(|k| f(&self.0[k])))
    }

    pub fn to_f64(&self) -> PrimitiveCoords<f64> {
        self.map(|x| x.as_f64())
    }

    pub fn max_abs(&self) -> f64 {
        crate::scalar::max_abs(&self.0)
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s)
    }
}

/// The k-th primitive basis form.
pub fn basis_form<S: Scalar>(k: usize) -> Form<S> {
    let mut f = Form::zero(3);
    for (sign, axes) in BASIS[k] {
        f.set(MultiIndex::new(axes).expect("valid axes"), S::int(*sign));
    }
    f
}

pub fn coords_to_form<S: Scalar>(c: &PrimitiveCoords<S>) -> Form<S> {
    let mut f = Form::zero(3);
    for (k, value) in c.0.iter().enumerate() {
        for (sign, axes) in BASIS[k] {
            let idx = MultiIndex::new(axes).expect("valid axes");
            let term = if *sign > 0 { value.clone() } else { -value.clone() };
            f.set(idx, term);
        }
    }
    f
}

/// Inverse of [`coords_to_form`]. Each coordinate is the coefficient of the
/// leading monomial of its basis form; the form is then rebuilt and must
/// match, which happens exactly when φ is primitive for the standard ω.
pub fn form_to_coords<S: Scalar>(phi: &Form<S>, tol: f64) -> Result<PrimitiveCoords<S>> {
    if phi.grade() != 3 {
        return Err(Error::Grade {
            got: phi.grade(),
            expected: "3".into(),
        });
    }
    let c = PrimitiveCoords(std::array::from_fn(|k| {
        phi.coeff(MultiIndex::new(&BASIS[k][0].1).expect("valid axes")).clone()
    }));
    if !coords_to_form(&c).approx_eq(phi, tol) {
        let residual = SymplecticForm::<S>::standard().lefschetz_residual(phi)?.max_abs();
        return Err(Error::NotPrimitive { residual });
    }
    Ok(c)
}

/// (Â, ..., N̂) with coords_to_form(ĉ) = −F(φ)/2 for the standard ω.
pub fn hat_map<S: Scalar>(c: &PrimitiveCoords<S>) -> PrimitiveCoords<S> {
    let [a, b, cc, d, e, f, g, h, i, j, k, l, m, n] = c.0.clone();
    let two = S::int(2);
    let ah = a.clone() * &h;
    let bg = b.clone() * &g;
    let cf = cc.clone() * &f;
    let de = d.clone() * &e;
    let ij2 = i.clone() * &j * &two;
    let kl2 = k.clone() * &l * &two;
    let mn2 = m.clone() * &n * &two;
    let sq = |x: &S| x.clone() * x;
    let p = |xs: &[&S]| xs.iter().skip(1).fold(xs[0].clone(), |acc, x| acc * *x);

    let ha = a.clone() * &(ah.clone() - bg.clone() - cf.clone() - de.clone() + ij2.clone() + kl2.clone() + mn2.clone())
        - two.clone()
            * &(b.clone() * &sq(&m) + cc.clone() * &sq(&k) + e.clone() * &sq(&i) - p(&[&b, &cc, &e])
                + p(&[&i, &k, &m]) * &two);
    let hb = b.clone() * &(ah.clone() - bg.clone() + cf.clone() + de.clone() + ij2.clone() + kl2.clone() - mn2.clone())
        - two.clone()
            * &(-(a.clone() * &sq(&n))
                + d.clone() * &sq(&k)
                + f.clone() * &sq(&i)
                + p(&[&a, &d, &f])
                + p(&[&i, &k, &n]) * &two);
    let hc = cc.clone()
        * &(ah.clone() + bg.clone() - cf.clone() + de.clone() + ij2.clone() - kl2.clone() + mn2.clone())
        - two.clone()
            * &(-(a.clone() * &sq(&l))
                + d.clone() * &sq(&m)
                + g.clone() * &sq(&i)
                + p(&[&a, &d, &g])
                + p(&[&i, &l, &m]) * &two);
    let hd = d.clone()
        * &(-ah.clone() - bg.clone() - cf.clone() + de.clone() + ij2.clone() - kl2.clone() - mn2.clone())
        - two.clone()
            * &(-(b.clone() * &sq(&l)) - cc.clone() * &sq(&n) + h.clone() * &sq(&i) - p(&[&b, &cc, &h])
                + p(&[&i, &l, &n]) * &two);
    let he = e.clone() * &(ah.clone() + bg.clone() + cf.clone() - de.clone() - ij2.clone() + kl2.clone() + mn2.clone())
        - two.clone()
            * &(-(a.clone() * &sq(&j))
                + f.clone() * &sq(&m)
                + g.clone() * &sq(&k)
                + p(&[&a, &f, &g])
                + p(&[&j, &k, &m]) * &two);
    let hf = f.clone()
        * &(-ah.clone() - bg.clone() + cf.clone() - de.clone() - ij2.clone() + kl2.clone() - mn2.clone())
        - two.clone()
            * &(-(b.clone() * &sq(&j)) + h.clone() * &sq(&k) - e.clone() * &sq(&n) - p(&[&b, &e, &h])
                + p(&[&j, &k, &n]) * &two);
    let hg = g.clone()
        * &(-ah.clone() + bg.clone() - cf.clone() - de.clone() - ij2.clone() - kl2.clone() + mn2.clone())
        - two.clone()
            * &(-(cc.clone() * &sq(&j)) - e.clone() * &sq(&l) + h.clone() * &sq(&m) - p(&[&cc, &e, &h])
                + p(&[&j, &l, &m]) * &two);
    let hh = h.clone()
        * &(-ah.clone() + bg.clone() + cf.clone() + de.clone() - ij2.clone() - kl2.clone() - mn2.clone())
        - two.clone()
            * &(-(d.clone() * &sq(&j)) - f.clone() * &sq(&l) - g.clone() * &sq(&n)
                + p(&[&d, &f, &g])
                + p(&[&j, &l, &n]) * &two);

    let hi = i.clone() * &(ah.clone() - bg.clone() - cf.clone() + de.clone())
        - two.clone() * &j * &(a.clone() * &d - b.clone() * &cc)
        + two.clone() * &(p(&[&a, &l, &n]) - p(&[&b, &l, &m]) - p(&[&cc, &k, &n]) + p(&[&d, &k, &m]));
    let hj = j.clone() * &(-ah.clone() + bg.clone() + cf.clone() - de.clone())
        + two.clone() * &i * &(e.clone() * &h - f.clone() * &g)
        + two.clone() * &(p(&[&e, &l, &n]) - p(&[&f, &l, &m]) - p(&[&g, &k, &n]) + p(&[&h, &k, &m]));
    let hk = k.clone() * &(ah.clone() - bg.clone() + cf.clone() - de.clone())
        - two.clone() * &l * &(a.clone() * &f - b.clone() * &e)
        + two.clone() * &(p(&[&a, &j, &n]) - p(&[&b, &j, &m]) - p(&[&e, &i, &n]) + p(&[&f, &i, &m]));
    let hl = l.clone() * &(-ah.clone() + bg.clone() - cf.clone() + de.clone())
        + two.clone() * &k * &(cc.clone() * &h - d.clone() * &g)
        + two.clone() * &(p(&[&cc, &j, &n]) - p(&[&d, &j, &m]) - p(&[&g, &i, &n]) + p(&[&h, &i, &m]));
    let hm = m.clone() * &(ah.clone() + bg.clone() - cf.clone() - de.clone())
        - two.clone() * &n * &(a.clone() * &g - cc.clone() * &e)
        + two.clone() * &(p(&[&a, &j, &l]) - p(&[&cc, &j, &k]) - p(&[&e, &i, &l]) + p(&[&g, &i, &k]));
    let hn = n.clone() * &(-ah - bg + cf + de)
        + two.clone() * &m * &(b.clone() * &h - d.clone() * &f)
        + two * &(p(&[&b, &j, &l]) - p(&[&d, &j, &k]) - p(&[&f, &i, &l]) + p(&[&h, &i, &k]));

    PrimitiveCoords([ha, hb, hc, hd, he, hf, hg, hh, hi, hj, hk, hl, hm, hn])
}

/// Q(φ) for the standard ω as a quartic in the coordinates.
pub fn q_from_coords<S: Scalar>(c: &PrimitiveCoords<S>) -> S {
    let [a, b, cc, d, e, f, g, h, i, j, k, l, m, n] = &c.0;
    let int = S::int;
    let p = |xs: &[&S]| xs.iter().skip(1).fold(xs[0].clone(), |acc, x| acc * *x);
    let ah = p(&[a, h]);
    let bg = p(&[b, g]);
    let cf = p(&[cc, f]);
    let de = p(&[d, e]);
    let sum = ah.clone() + bg.clone() + cf.clone() + de.clone();

    let mut q4 = int(2) * &(p(&[&ah, &ah]) + p(&[&bg, &bg]) + p(&[&cf, &cf]) + p(&[&de, &de]));
    q4 -= p(&[&sum, &sum]);
    q4 += int(4) * &(p(&[a, d, f, g]) + p(&[b, cc, e, h]));
    q4 += int(4) * &p(&[i, i]) * &(p(&[f, g]) - p(&[e, h]));
    q4 += int(4) * &p(&[j, j]) * &(p(&[b, cc]) - p(&[a, d]));
    q4 += int(4) * &p(&[i, j]) * &(ah.clone() - bg.clone() - cf.clone() + de.clone());
    q4 += int(4) * &p(&[k, k]) * &(p(&[d, g]) - p(&[cc, h]));
    q4 += int(4) * &p(&[l, l]) * &(p(&[b, e]) - p(&[a, f]));
    q4 += int(4) * &p(&[k, l]) * &(ah.clone() - bg.clone() + cf.clone() - de.clone());
    q4 += int(4) * &p(&[m, m]) * &(p(&[d, f]) - p(&[b, h]));
    q4 += int(4) * &p(&[n, n]) * &(p(&[cc, e]) - p(&[a, g]));
    q4 += int(4) * &p(&[m, n]) * &(ah + bg - cf - de);
    q4 += int(8)
        * &(p(&[a, j, l, n]) - p(&[b, j, l, m]) - p(&[cc, j, k, n]) + p(&[d, j, k, m]) - p(&[e, i, l, n])
            + p(&[f, i, l, m])
            + p(&[g, i, k, n])
            - p(&[h, i, k, m]));
    q4 * &int(4)
}

/// ∂Q/∂(A..N) expressed through the hats:
/// ∂A = −8Ĥ, ∂B = 8Ĝ, ∂C = 8F̂, ∂D = −8Ê, ∂E = 8D̂, ∂F = −8Ĉ, ∂G = −8B̂,
/// ∂H = 8Â, ∂I = −16Ĵ, ∂J = 16Î, ∂K = −16L̂, ∂L = 16K̂, ∂M = −16N̂, ∂N = 16M̂.
pub fn gradient_from_hats<S: Scalar>(c: &PrimitiveCoords<S>) -> PrimitiveCoords<S> {
    const TABLE: [(i64, usize); 14] = [
        (-8, 7),
        (8, 6),
        (8, 5),
        (-8, 4),
        (8, 3),
        (-8, 2),
        (-8, 1),
        (8, 0),
        (-16, 9),
        (16, 8),
        (-16, 11),
        (16, 10),
        (-16, 13),
        (16, 12),
    ];
    let hat = hat_map(c);
    PrimitiveCoords(std::array::from_fn(|k| {
        let (factor, source) = TABLE[k];
        hat.0[source].clone() * &S::int(factor)
    }))
}

/// Central finite differences of Q against [`gradient_from_hats`]. The error
/// of each component is taken relative to the largest analytic component, so
/// vanishing entries do not blow up the ratio; at a critical point the
/// absolute error is returned.
pub fn gradient_relations_check(c: &PrimitiveCoords<f64>, h: f64) -> f64 {
    let analytic = gradient_from_hats(c);
    let scale = analytic.max_abs();
    let mut worst = 0.0f64;
    for k in 0..14 {
        let mut plus = c.clone();
        let mut minus = c.clone();
        plus.0[k] += h;
        minus.0[k] -= h;
        let fd = (q_from_coords(&plus) - q_from_coords(&minus)) / (2.0 * h);
        let err = (fd - analytic.0[k]).abs();
        worst = worst.max(if scale > 0.0 { err / scale } else { err });
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{compute_f, compute_q};
    use crate::scalar::Rational;

    type C = PrimitiveCoords<Rational>;

    fn q(n: i64) -> Rational {
        Rational::int(n)
    }

    fn sample() -> C {
        C::from_slice(&[
            q(1),
            q(-2),
            Rational::ratio(1, 3),
            q(2),
            q(0),
            q(-1),
            Rational::ratio(3, 2),
            q(1),
            q(2),
            q(-1),
            Rational::ratio(-1, 2),
            q(3),
            q(1),
            q(-2),
        ])
    }

    #[test]
    fn coords_round_trip_and_primitivity() {
        let w = SymplecticForm::standard();
        assert!(coords_to_form(&C::zero()).is_zero());
        assert_eq!(coords_to_form(&C::with(&[("A", q(1))])), Form::monomial(&[1, 3, 5]));
        let c = sample();
        let phi = coords_to_form(&c);
        assert!(w.is_primitive(&phi, 0.0).unwrap());
        assert_eq!(form_to_coords(&phi, 0.0).unwrap(), c);
        for k in 0..14 {
            assert!(w.is_primitive(&basis_form::<Rational>(k), 0.0).unwrap());
        }
    }

    #[test]
    fn non_primitive_reports_residual() {
        let err = form_to_coords(&Form::<Rational>::monomial(&[1, 2, 3]), 0.0).unwrap_err();
        assert_eq!(err, Error::NotPrimitive { residual: 1.0 });
    }

    #[test]
    fn hat_examples() {
        let c = C::with(&[("D", q(1)), ("F", q(1)), ("G", q(1))]);
        assert_eq!(hat_map(&c), C::with(&[("H", q(-2))]));
        let mu = q(3);
        let c = C::with(&[("A", mu.clone()), ("H", mu.clone())]);
        assert_eq!(hat_map(&c), C::with(&[("A", q(27)), ("H", q(-27))]));
        assert_eq!(hat_map(&C::zero()), C::zero());
    }

    #[test]
    fn hats_match_brute_force_f() {
        let w = SymplecticForm::standard();
        let c = sample();
        let f = compute_f(&coords_to_form(&c), &w).unwrap();
        assert_eq!(coords_to_form(&hat_map(&c)), f.scale(&Rational::ratio(-1, 2)));
        assert_eq!(q_from_coords(&c), compute_q(&coords_to_form(&c), &w).unwrap());
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_from_coords(&C::with(&[("A", q(1)), ("H", q(1))])), q(4));
        assert_eq!(q_from_coords(&C::with(&[("D", q(1)), ("F", q(1)), ("G", q(1))])), q(0));
        assert_eq!(q_from_coords(&C::zero()), q(0));
    }

    #[test]
    fn gradient_examples() {
        let c = sample().to_f64();
        assert!(gradient_relations_check(&c, 1e-5) < 1e-6);
        assert_eq!(gradient_relations_check(&PrimitiveCoords::zero(), 1e-5), 0.0);
        // On D = F = G = 1 the derivative in A is −8Ĥ = 16DFG.
        let c = PrimitiveCoords::with(&[("D", 1.0), ("F", 1.0), ("G", 1.0)]);
        assert_eq!(*gradient_from_hats(&c).get("A"), 16.0);
        assert!(gradient_relations_check(&c, 1e-5) < 1e-6);
    }
}
