//! Six-dimensional Lie algebras given by d e^i, the Chevalley–Eilenberg
//! differential on invariant forms, the Lefschetz contraction, the flow
//! operator dΛdF and the Nijenhuis tensor of K(φ).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{dimension, interior, interior_basis, wedge, Form, MultiIndex, Vector6, DIM};
use crate::invariants::coords::basis_form;
use crate::invariants::{compute_f, compute_k, KEndo, SymplecticForm};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, DEFAULT_TOL};

/// A Lie algebra on the basis e_1..e_6, stored through d e^i. The bracket is
/// [X, Y] = −Σ_i d e^i(X, Y) e_i, so that dα(X, Y) = −α([X, Y]).
#[derive(Clone, Debug)]
pub struct LieAlgebra6<S: Scalar> {
    de: Vec<Form<S>>,
    // d on each grade 0..=5 as a dim(k+1) × dim(k) matrix.
    d_matrices: Vec<Matrix<S>>,
    // bracket[a][b] = [e_a, e_b], 0-based.
    bracket: Vec<Vec<Vector6<S>>>,
}

impl<S: Scalar> LieAlgebra6<S> {
    /// Validates grades and d² = 0 (equivalently, the Jacobi identity).
    pub fn new(de: Vec<Form<S>>) -> Result<Self> {
        if de.len() != DIM {
            return Err(Error::LieAlgebra(format!("expected 6 differentials, got {}", de.len())));
        }
        if let Some(bad) = de.iter().position(|f| f.grade() != 2) {
            return Err(Error::LieAlgebra(format!("d e^{} must be a 2-form", bad + 1)));
        }
        let d_matrices = (0..DIM).map(|k| d_matrix(&de, k)).collect::<Result<Vec<_>>>()?;
        let bracket = (0..DIM)
            .map(|a| {
                (0..DIM)
                    .map(|b| {
                        Vector6(std::array::from_fn(|i| {
                            if a == b {
                                return S::zero();
                            }
                            let (lo, hi, sign) = if a < b { (a, b, -1) } else { (b, a, 1) };
                            let c = de[i].get(&[lo + 1, hi + 1]).clone();
                            if sign < 0 {
                                -c
                            } else {
                                c
                            }
                        }))
                    })
                    .collect()
            })
            .collect();
        let alg = Self {
            de,
            d_matrices,
            bracket,
        };
        for i in 0..DIM {
            let dd = alg.d(&alg.de[i])?;
            if !dd.is_zero() {
                return Err(Error::LieAlgebra(format!("d(d e^{}) = {dd} is nonzero", i + 1)));
            }
        }
        Ok(alg)
    }

    /// d e^4 = e^{15}, d e^6 = e^{13}, all others zero.
    pub fn nil() -> Self {
        let mut de = vec![Form::zero(2); DIM];
        de[3] = Form::monomial(&[1, 5]);
        de[5] = Form::monomial(&[1, 3]);
        Self::new(de).expect("nilpotent algebra is valid")
    }

    /// d e^1 = −λe^{15}, d e^2 = λe^{25}, d e^3 = −λe^{36}, d e^4 = λe^{46}.
    pub fn solv(lambda: S) -> Self {
        let mut de = vec![Form::zero(2); DIM];
        de[0] = Form::monomial(&[1, 5]).scale(&-lambda.clone());
        de[1] = Form::monomial(&[2, 5]).scale(&lambda);
        de[2] = Form::monomial(&[3, 6]).scale(&-lambda.clone());
        de[3] = Form::monomial(&[4, 6]).scale(&lambda);
        Self::new(de).expect("solvable algebra is valid")
    }

    pub fn abelian() -> Self {
        Self::new(vec![Form::zero(2); DIM]).expect("abelian algebra is valid")
    }

    pub fn differentials(&self) -> &[Form<S>] {
        &self.de
    }

    /// Chevalley–Eilenberg differential.
    pub fn d(&self, a: &Form<S>) -> Result<Form<S>> {
        if a.grade() >= DIM {
            return Ok(Form::zero(DIM));
        }
        Ok(Form::from_coeffs(
            a.grade() + 1,
            self.d_matrices[a.grade()].mul_vec(a.coeffs()),
        ))
    }

    pub fn bracket(&self, x: &Vector6<S>, y: &Vector6<S>) -> Vector6<S> {
        let mut out = Vector6::zero();
        for a in 0..DIM {
            if x.0[a].is_zero() {
                continue;
            }
            for b in 0..DIM {
                if y.0[b].is_zero() || a == b {
                    continue;
                }
                let c = x.0[a].clone() * &y.0[b];
                for i in 0..DIM {
                    out.0[i] += c.clone() * &self.bracket[a][b].0[i];
                }
            }
        }
        out
    }

    /// Trace of ad_{e_a} for each basis vector.
    pub fn ad_traces(&self) -> Vec<S> {
        (0..DIM)
            .map(|a| {
                let mut t = S::zero();
                for i in 0..DIM {
                    t += &self.bracket[a][i].0[i];
                }
                t
            })
            .collect()
    }

    pub fn is_unimodular(&self) -> bool {
        self.ad_traces().iter().all(|t| t.is_zero())
    }
}

/// Matrix of d on k-forms, built monomial by monomial from the Leibniz rule
/// d(e^{i_1..i_k}) = Σ_j (−1)^{j−1} e^{i_1..} ∧ d e^{i_j} ∧ e^{..i_k}.
fn d_matrix<S: Scalar>(de: &[Form<S>], k: usize) -> Result<Matrix<S>> {
    let mut m = Matrix::zeros(dimension(k + 1), dimension(k));
    for (col, idx) in MultiIndex::basis(k).iter().enumerate() {
        let axes = idx.axes();
        let mut acc = Form::zero(k + 1);
        for (j, &ax) in axes.iter().enumerate() {
            let left = monomial_or_one::<S>(&axes[..j]);
            let right = monomial_or_one::<S>(&axes[j + 1..]);
            let term = wedge(&wedge(&left, &de[ax - 1])?, &right)?;
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        for (row, c) in acc.coeffs().iter().enumerate() {
            m[(row, col)] = c.clone();
        }
    }
    Ok(m)
}

fn monomial_or_one<S: Scalar>(axes: &[usize]) -> Form<S> {
    if axes.is_empty() {
        Form::scalar(S::one())
    } else {
        Form::monomial(axes)
    }
}

/// A Lie algebra with a closed invariant symplectic form.
#[derive(Clone, Debug)]
pub struct InvariantSetup<S: Scalar> {
    pub algebra: LieAlgebra6<S>,
    pub omega: SymplecticForm<S>,
}

impl<S: Scalar> InvariantSetup<S> {
    pub fn new(algebra: LieAlgebra6<S>, omega: SymplecticForm<S>) -> Result<Self> {
        let dw = algebra.d(omega.omega())?;
        if !dw.is_zero() {
            return Err(Error::LieAlgebra(format!("omega is not closed: d omega = {dw}")));
        }
        Ok(Self { algebra, omega })
    }

    /// The algebra with ω = e^{12} + e^{34} + e^{56}.
    pub fn standard(algebra: LieAlgebra6<S>) -> Result<Self> {
        Self::new(algebra, SymplecticForm::standard())
    }

    pub fn d(&self, a: &Form<S>) -> Result<Form<S>> {
        self.algebra.d(a)
    }

    /// Lefschetz contraction Λ = Σ_{a<b} P_ab ι_{e_b} ι_{e_a}, with P the
    /// dual pairing of ω; for the standard ω this is Σ ι_{e_{2i}} ι_{e_{2i−1}}.
    pub fn lefschetz_lambda(&self, a: &Form<S>) -> Result<Form<S>> {
        if a.grade() < 2 {
            return Err(Error::Grade {
                got: a.grade(),
                expected: ">= 2".into(),
            });
        }
        let p = self.omega.dual();
        let mut out = Form::zero(a.grade() - 2);
        for x in 0..DIM {
            for y in x + 1..DIM {
                if p[(x, y)].is_zero() {
                    continue;
                }
                let c = interior_basis(y + 1, &interior_basis(x + 1, a)?)?;
                out = &out + &c.scale(&p[(x, y)]);
            }
        }
        Ok(out)
    }

    pub fn d_lambda_d(&self, a: &Form<S>) -> Result<Form<S>> {
        self.d(&self.lefschetz_lambda(&self.d(a)?)?)
    }

    /// dΛdF(φ) for primitive φ; the output is checked to be primitive.
    pub fn flow_operator(&self, phi: &Form<S>) -> Result<Form<S>> {
        self.omega.require_primitive(phi, DEFAULT_TOL)?;
        let f = compute_f(phi, &self.omega)?;
        let out = self.d_lambda_d(&f)?;
        if !self.omega.is_primitive(&out, DEFAULT_TOL)? {
            return Err(Error::Internal("flow operator left the primitive subspace".into()));
        }
        Ok(out)
    }

    /// Basis of invariant primitive 3-forms. For the standard ω this is the
    /// A..N coordinate basis, so coefficient vectors are coordinates.
    pub fn primitive_basis(&self) -> Result<Vec<Form<S>>> {
        if self.omega == SymplecticForm::standard() {
            return Ok((0..14).map(basis_form).collect());
        }
        let cols: Vec<Form<S>> = MultiIndex::basis(3)
            .iter()
            .map(|i| wedge(self.omega.omega(), &Form::monomial(&i.axes())))
            .collect::<Result<_>>()?;
        let m = Matrix::from_fn(dimension(5), dimension(3), |r, c| cols[c].coeffs()[r].clone());
        Ok(m.nullspace(DEFAULT_TOL)
            .into_iter()
            .map(|v| Form::from_coeffs(3, v))
            .collect())
    }

    /// Kernel of dΛd on invariant primitive 3-forms, as forms.
    pub fn kernel_of_dlambdad(&self) -> Result<Vec<Form<S>>> {
        self.primitive_kernel(|b| self.d_lambda_d(b))
    }

    /// Closed invariant primitive 3-forms.
    pub fn closed_primitive_basis(&self) -> Result<Vec<Form<S>>> {
        self.primitive_kernel(|b| self.d(b))
    }

    fn primitive_kernel(&self, op: impl Fn(&Form<S>) -> Result<Form<S>>) -> Result<Vec<Form<S>>> {
        let basis = self.primitive_basis()?;
        let images: Vec<Form<S>> = basis.iter().map(op).collect::<Result<_>>()?;
        let rows = images.first().map_or(0, |f| f.coeffs().len());
        let m = Matrix::from_fn(rows, basis.len(), |r, c| images[c].coeffs()[r].clone());
        Ok(m.nullspace(DEFAULT_TOL)
            .into_iter()
            .map(|v| {
                basis
                    .iter()
                    .zip(&v)
                    .fold(Form::zero(3), |acc, (b, c)| &acc + &b.scale(c))
            })
            .collect())
    }

    /// N_K(X, Y) = −K²[X,Y] + K([KX,Y] + [X,KY]) − [KX,KY] on basis pairs.
    pub fn nijenhuis(&self, phi: &Form<S>) -> Result<NijenhuisTensor<S>> {
        let k = compute_k(phi, &self.omega)?;
        Ok(self.nijenhuis_with(&k))
    }

    fn nijenhuis_with(&self, k: &KEndo<S>) -> NijenhuisTensor<S> {
        let km = k.map();
        let br = |x: &Vector6<S>, y: &Vector6<S>| self.algebra.bracket(x, y);
        let mut values = Vec::with_capacity(15);
        for a in 1..=DIM {
            for b in a + 1..=DIM {
                let (x, y) = (Vector6::basis(a), Vector6::basis(b));
                let (kx, ky) = (km.apply(&x), km.apply(&y));
                let xy = br(&x, &y);
                let first = km.apply(&km.apply(&xy));
                let middle = km.apply(&(&br(&kx, &y) + &br(&x, &ky)));
                let last = br(&kx, &ky);
                let n = &(&middle - &first) - &last;
                values.push(((a, b), n));
            }
        }
        NijenhuisTensor { values }
    }

    /// Both sides of the Nijenhuis identity on all basis pairs.
    ///
    /// `stated` is the largest coefficient of
    /// ι_{N(X,Y)}vol − [ι_Yι_X dφ∧F − dφ∧ι_Yι_X F + 2φ∧(ι_Yι_{KX} − ι_Xι_{KY})dφ + φ∧ι_Yι_X dF].
    /// `without_middle` drops the dφ∧ι_Yι_X F term from the bracket.
    pub fn verify_nijenhuis_identity(&self, phi: &Form<S>) -> Result<NijenhuisResiduals<S>> {
        let k = compute_k(phi, &self.omega)?;
        let f = crate::invariants::compute_f_from_k(phi, &k)?;
        let dphi = self.d(phi)?;
        let df = self.d(&f)?;
        let vol = self.omega.vol();
        let n = self.nijenhuis_with(&k);
        let mut stated = S::zero();
        let mut without_middle = S::zero();
        let two = S::int(2);
        for ((a, b), nv) in &n.values {
            let (x, y) = (Vector6::basis(*a), Vector6::basis(*b));
            let (kx, ky) = (k.map().apply(&x), k.map().apply(&y));
            let lhs = interior(nv, vol)?;
            let yx = |form: &Form<S>| interior(&y, &interior(&x, form)?);
            let t1 = wedge(&yx(&dphi)?, &f)?;
            let t2 = wedge(&dphi, &yx(&f)?)?;
            let t3 = wedge(phi, &interior(&y, &interior(&kx, &dphi)?)?)?;
            let t4 = wedge(phi, &interior(&x, &interior(&ky, &dphi)?)?)?;
            let t5 = wedge(phi, &yx(&df)?)?;
            let common = &(&t1 + &t5) + &(&t3 - &t4).scale(&two);
            let rhs_stated = &common - &t2;
            stated = max_abs_scalar(stated, &(&lhs - &rhs_stated));
            without_middle = max_abs_scalar(without_middle, &(&lhs - &common));
        }
        Ok(NijenhuisResiduals {
            stated,
            without_middle,
            n_k_zero: n.is_zero(),
        })
    }

    /// The five integrability predicates for φ.
    pub fn integrability_flags(&self, phi: &Form<S>) -> Result<IntegrabilityFlags> {
        let f = compute_f(phi, &self.omega)?;
        let integrable = self.d(phi)?.is_zero_tol();
        let f_integrable = self.d(&f)?.is_zero_tol();
        let k_integrable = self.nijenhuis(phi)?.is_zero();
        Ok(IntegrabilityFlags {
            integrable,
            f_integrable,
            f_harmonic: integrable && f_integrable,
            k_integrable,
            // Invariant forms have constant Q.
            q_integrable: true,
        })
    }
}

fn max_abs_scalar<S: Scalar>(current: S, diff: &Form<S>) -> S {
    diff.coeffs().iter().fold(current, |m, c| {
        let a = c.abs();
        if a > m {
            a
        } else {
            m
        }
    })
}

trait ZeroTol {
    fn is_zero_tol(&self) -> bool;
}

impl<S: Scalar> ZeroTol for Form<S> {
    fn is_zero_tol(&self) -> bool {
        self.coeffs().iter().all(|c| c.negligible(1.0, DEFAULT_TOL))
    }
}

/// N_K evaluated on the 15 pairs (e_a, e_b), a < b (1-based).
#[derive(Clone, Debug)]
pub struct NijenhuisTensor<S: Scalar> {
    pub values: Vec<((usize, usize), Vector6<S>)>,
}

impl<S: Scalar> NijenhuisTensor<S> {
    pub fn is_zero(&self) -> bool {
        let scale = self.values.iter().map(|(_, v)| v.max_abs()).fold(1.0, f64::max);
        self.values
            .iter()
            .all(|(_, v)| v.0.iter().all(|c| c.negligible(scale, DEFAULT_TOL)))
    }

    pub fn get(&self, a: usize, b: usize) -> Option<&Vector6<S>> {
        self.values.iter().find(|(p, _)| *p == (a, b)).map(|(_, v)| v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NijenhuisResiduals<S> {
    pub stated: S,
    pub without_middle: S,
    pub n_k_zero: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntegrabilityFlags {
    pub integrable: bool,
    pub f_integrable: bool,
    pub f_harmonic: bool,
    pub k_integrable: bool,
    pub q_integrable: bool,
}

/// Solvable algebra parameter log((3 + √5)/2).
pub fn solv_lambda() -> f64 {
    ((3.0 + 5f64.sqrt()) / 2.0).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::coords::{coords_to_form, hat_map, PrimitiveCoords};
    use crate::scalar::Rational;

    type F = Form<Rational>;

    fn q(n: i64) -> Rational {
        Rational::int(n)
    }

    fn nil() -> InvariantSetup<Rational> {
        InvariantSetup::standard(LieAlgebra6::nil()).unwrap()
    }

    fn solv() -> InvariantSetup<Rational> {
        InvariantSetup::standard(LieAlgebra6::solv(Rational::ratio(3, 2))).unwrap()
    }

    #[test]
    fn ce_examples() {
        let n = nil();
        let d = n.d(&F::monomial(&[2, 4, 6])).unwrap();
        assert_eq!(d, &F::monomial(&[1, 2, 5, 6]) - &F::monomial(&[1, 2, 3, 4]));
        let ab = InvariantSetup::standard(LieAlgebra6::<Rational>::abelian()).unwrap();
        assert!(ab.d(&F::monomial(&[1, 2, 3])).unwrap().is_zero());
        assert!(solv().d(&F::monomial(&[1, 2])).unwrap().is_zero());
    }

    #[test]
    fn jacobi_violation_rejected() {
        // d e^1 = e^{23}, d e^2 = e^{13}: d(d e^1) = d e^2 ∧ e^3 − … ≠ 0 unless balanced.
        let mut de = vec![F::zero(2); 6];
        de[0] = F::monomial(&[2, 3]);
        de[1] = F::monomial(&[3, 4]);
        de[3] = F::monomial(&[5, 6]);
        assert!(LieAlgebra6::new(de).is_err());
    }

    #[test]
    fn builtins_are_unimodular_and_closed() {
        assert!(LieAlgebra6::<Rational>::nil().is_unimodular());
        assert!(LieAlgebra6::solv(q(2)).is_unimodular());
        let mut de = vec![F::zero(2); 6];
        de[0] = F::monomial(&[1, 2]);
        assert!(!LieAlgebra6::new(de).unwrap().is_unimodular());
    }

    #[test]
    fn bracket_is_dual_to_d() {
        // dα(X, Y) = −α([X, Y]) for α = e^i.
        let alg = LieAlgebra6::solv(q(3));
        for i in 1..=6 {
            for a in 1..=6 {
                for b in 1..=6 {
                    let (x, y) = (Vector6::basis(a), Vector6::basis(b));
                    let lhs = alg.differentials()[i - 1].eval(&[x.clone(), y.clone()]).unwrap();
                    let rhs = -alg.bracket(&x, &y).0[i - 1].clone();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn lefschetz_examples() {
        let n = nil();
        let w = n.omega.omega().clone();
        assert_eq!(n.lefschetz_lambda(&w).unwrap(), Form::scalar(q(3)));
        let l = n.lefschetz_lambda(&F::monomial(&[1, 2, 5, 6])).unwrap();
        assert_eq!(l, &F::monomial(&[5, 6]) + &F::monomial(&[1, 2]));
        assert_eq!(
            n.d_lambda_d(&F::monomial(&[2, 4, 6])).unwrap(),
            F::monomial(&[1, 3, 5]).scale(&q(-2))
        );
        assert!(n.lefschetz_lambda(&F::monomial(&[1])).is_err());
    }

    #[test]
    fn solv_dlambdad_table() {
        let s = solv();
        let lam2 = Rational::ratio(9, 4);
        let e135 = F::monomial(&[1, 3, 5]);
        let e136 = F::monomial(&[1, 3, 6]);
        let expect = (&e135 + &e136).scale(&-lam2);
        assert_eq!(s.d_lambda_d(&e135).unwrap(), expect);
        assert_eq!(s.d_lambda_d(&e136).unwrap(), -expect);
    }

    #[test]
    fn flow_operator_on_nil_is_4hhat_e135() {
        let n = nil();
        let c = PrimitiveCoords::from_slice(&(1..=14).map(|k| Rational::ratio(k - 7, 3)).collect::<Vec<_>>());
        let out = n.flow_operator(&coords_to_form(&c)).unwrap();
        let hh = hat_map(&c).get("H").clone();
        assert_eq!(out, F::monomial(&[1, 3, 5]).scale(&(hh * q(4))));
        let ab = InvariantSetup::standard(LieAlgebra6::<Rational>::abelian()).unwrap();
        assert!(ab.flow_operator(&coords_to_form(&c)).unwrap().is_zero());
        assert!(n.flow_operator(&F::monomial(&[1, 2, 3])).is_err());
    }

    #[test]
    fn kernel_dimensions() {
        assert_eq!(nil().kernel_of_dlambdad().unwrap().len(), 13);
        let ab = InvariantSetup::standard(LieAlgebra6::<Rational>::abelian()).unwrap();
        assert_eq!(ab.kernel_of_dlambdad().unwrap().len(), 14);
        let s = solv();
        let ker = s.kernel_of_dlambdad().unwrap();
        assert_eq!(ker.len(), 10);
        for k in &ker {
            assert!(s.d_lambda_d(k).unwrap().is_zero());
        }
    }

    #[test]
    fn nijenhuis_abelian_vanishes() {
        let ab = InvariantSetup::standard(LieAlgebra6::<Rational>::abelian()).unwrap();
        let phi = coords_to_form(&PrimitiveCoords::with(&[
            ("A", q(1)),
            ("D", q(-1)),
            ("F", q(-1)),
            ("G", q(-1)),
        ]));
        assert!(ab.nijenhuis(&phi).unwrap().is_zero());
        let r = ab.verify_nijenhuis_identity(&phi).unwrap();
        assert_eq!(r.stated, q(0));
    }

    #[test]
    fn nil_integrability() {
        let n = nil();
        let closed = coords_to_form(&PrimitiveCoords::with(&[("A", q(1)), ("B", q(2)), ("I", q(1))]));
        let flags = n.integrability_flags(&closed).unwrap();
        assert!(flags.integrable);
        let open = coords_to_form(&PrimitiveCoords::with(&[("A", q(1)), ("H", q(1))]));
        assert!(!n.integrability_flags(&open).unwrap().integrable);
    }

    #[test]
    fn nijenhuis_identity_residuals_on_nil() {
        let n = nil();
        let c = PrimitiveCoords::from_slice(&(1..=14).map(|k| Rational::ratio(2 * k - 13, 5)).collect::<Vec<_>>());
        let r = n.verify_nijenhuis_identity(&coords_to_form(&c)).unwrap();
        assert_eq!(r.without_middle, q(0));
        assert!(r.stated > q(0));
    }
}
