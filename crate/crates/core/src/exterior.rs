//! Exterior algebra of the dual of a fixed 6-dimensional space.
//!
//! Basis monomials e^I are 6-bit masks; forms store a dense coefficient
//! vector per grade in lexicographic order of the axis sets.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{max_abs, Scalar};

pub const DIM: usize = 6;

/// A strictly increasing subset of {1,..,6}, stored as a bit mask
/// (bit `i-1` set when axis `i` is present).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex(u8);

struct Tables {
    basis: [Vec<MultiIndex>; DIM + 1],
    position: [usize; 64],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut basis: [Vec<MultiIndex>; DIM + 1] = Default::default();
        let mut masks: Vec<u8> = (0u8..64).collect();
        // Lexicographic order on the sorted axis lists.
        masks.sort_by_key(|&m| MultiIndex(m).axes());
        let mut position = [0usize; 64];
        for m in masks {
            let idx = MultiIndex(m);
            let g = idx.grade();
            position[m as usize] = basis[g].len();
            basis[g].push(idx);
        }
        Tables { basis, position }
    })
}

/// Number of basis monomials of grade `k`.
pub fn dimension(grade: usize) -> usize {
    tables().basis[grade].len()
}

impl MultiIndex {
    /// Build from 1-based axes, which must be strictly increasing.
    pub fn new(axes: &[usize]) -> Result<Self> {
        let ok = axes.windows(2).all(|w| w[0] < w[1]) && axes.iter().all(|&a| (1..=DIM).contains(&a));
        if !ok {
            return Err(Error::MultiIndex(axes.to_vec()));
        }
        Ok(Self(axes.iter().fold(0u8, |m, &a| m | 1 << (a - 1))))
    }

    pub fn from_mask(mask: u8) -> Self {
        assert!(mask < 64, "mask out of range");
        Self(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based axes in increasing order.
    pub fn axes(self) -> Vec<usize> {
        (0..DIM).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }

    pub fn contains(self, axis: usize) -> bool {
        self.0 >> (axis - 1) & 1 == 1
    }

    /// Position of this index in the grade's lexicographic basis.
    pub fn position(self) -> usize {
        tables().position[self.0 as usize]
    }

    pub fn basis(grade: usize) -> &'static [MultiIndex] {
        &tables().basis[grade]
    }

    pub fn top() -> Self {
        Self(0b11_1111)
    }

    pub fn complement(self) -> Self {
        Self(!self.0 & 0b11_1111)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e")?;
        for a in self.axes() {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Sign of e^I ^ e^J for disjoint I, J: (-1)^{#{(i,j): i in I, j in J, i > j}}.
pub fn wedge_sign(i: u8, j: u8) -> i32 {
    debug_assert_eq!(i & j, 0);
    let mut inversions = 0;
    for b in 0..DIM {
        if j >> b & 1 == 1 {
            inversions += (i >> (b + 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of contracting e_axis into e^I: (-1)^{#axes of I below axis}.
fn contraction_sign(mask: u8, axis: usize) -> i32 {
    let below = mask & ((1u8 << (axis - 1)) - 1);
    if below.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn signed<S: Scalar>(x: &S, sign: i32) -> S {
    if sign > 0 {
        x.clone()
    } else {
        -x.clone()
    }
}

/// Vector in the basis {e_1,..,e_6} dual to {e^1,..,e^6}.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector6<S>(pub [S; DIM]);

impl<S: Scalar> Vector6<S> {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| S::zero()))
    }

    /// Basis vector e_i for 1-based `i`.
    pub fn basis(i: usize) -> Self {
        Self(std::array::from_fn(|k| if k + 1 == i { S::one() } else { S::zero() }))
    }

    pub fn from_slice(v: &[S]) -> Self {
        assert_eq!(v.len(), DIM);
        Self(std::array::from_fn(|k| v[k].clone()))
    }

    pub fn components(&self) -> &[S; DIM] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self(std::array::from_fn(|k| self.0[k].clone() * s))
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }
}

impl<S: Scalar> Add for &Vector6<S> {
    type Output = Vector6<S>;
    fn add(self, rhs: Self) -> Vector6<S> {
        Vector6(std::array::from_fn(|k| self.0[k].clone() + rhs.0[k].clone()))
    }
}

impl<S: Scalar> Sub for &Vector6<S> {
    type Output = Vector6<S>;
    fn sub(self, rhs: Self) -> Vector6<S> {
        Vector6(std::array::from_fn(|k| self.0[k].clone() - rhs.0[k].clone()))
    }
}

/// Linear endomorphism of V acting on column vectors; its pullback acts on
/// forms by (g*a)(v_1,..) = a(g v_1,..).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap6<S> {
    matrix: Matrix<S>,
}

impl<S: Scalar> LinearMap6<S> {
    pub fn new(matrix: Matrix<S>) -> Self {
        assert_eq!(
            (matrix.rows(), matrix.cols()),
            (DIM, DIM),
            "LinearMap6 needs a 6x6 matrix"
        );
        Self { matrix }
    }

    pub fn identity() -> Self {
        Self::new(Matrix::identity(DIM))
    }

    pub fn from_fn(f: impl FnMut(usize, usize) -> S) -> Self {
        Self::new(Matrix::from_fn(DIM, DIM, f))
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector6<S>) -> Vector6<S> {
        Vector6::from_slice(&self.matrix.mul_vec(&v.0))
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.matrix.mul(&other.matrix))
    }

    pub fn inverse(&self) -> Option<Self> {
        self.matrix.inverse().map(Self::new)
    }

    pub fn det(&self) -> S {
        self.matrix.det()
    }

    /// Image of the basis vector e_i (1-based), i.e. column i.
    pub fn column(&self, i: usize) -> Vector6<S> {
        Vector6(std::array::from_fn(|r| self.matrix[(r, i - 1)].clone()))
    }
}

/// Alternating form of fixed grade with dense coefficients.
#[derive(Clone, PartialEq)]
pub struct Form<S> {
    grade: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(grade: usize) -> Self {
        assert!(grade <= DIM, "grade above 6");
        Self {
            grade,
            coeffs: vec![S::zero(); dimension(grade)],
        }
    }

    pub fn scalar(s: S) -> Self {
        Self {
            grade: 0,
            coeffs: vec![s],
        }
    }

    /// The monomial e^I for 1-based axes; panics on malformed axes.
    pub fn monomial(axes: &[usize]) -> Self {
        let idx = MultiIndex::new(axes).expect("valid axes");
        let mut f = Self::zero(idx.grade());
        f.coeffs[idx.position()] = S::one();
        f
    }

    pub fn from_terms(grade: usize, terms: impl IntoIterator<Item = (MultiIndex, S)>) -> Result<Self> {
        let mut f = Self::zero(grade);
        for (idx, c) in terms {
            if idx.grade() != grade {
                return Err(Error::Grade {
                    got: idx.grade(),
                    expected: grade.to_string(),
                });
            }
            f.coeffs[idx.position()] += c;
        }
        Ok(f)
    }

    /// Build from dense coefficients in lexicographic basis order.
    pub fn from_coeffs(grade: usize, coeffs: Vec<S>) -> Self {
        assert_eq!(coeffs.len(), dimension(grade), "coefficient count");
        Self { grade, coeffs }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, idx: MultiIndex) -> &S {
        assert_eq!(idx.grade(), self.grade, "grade mismatch");
        &self.coeffs[idx.position()]
    }

    /// Coefficient of e^{axes}; axes must be increasing.
    pub fn get(&self, axes: &[usize]) -> &S {
        self.coeff(MultiIndex::new(axes).expect("valid axes"))
    }

    pub fn set(&mut self, idx: MultiIndex, value: S) {
        assert_eq!(idx.grade(), self.grade, "grade mismatch");
        self.coeffs[idx.position()] = value;
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &S)> {
        MultiIndex::basis(self.grade)
            .iter()
            .copied()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.coeffs)
    }

    /// The single coefficient of a 6-form (or 0-form).
    pub fn top(&self) -> &S {
        assert!(self.grade == DIM || self.grade == 0, "top() needs grade 0 or 6");
        &self.coeffs[0]
    }

    pub fn scale(&self, s: &S) -> Self {
        Self {
            grade: self.grade,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s).collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        Form {
            grade: self.grade,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Form<f64> {
        self.map(|c| c.as_f64())
    }

    /// Coefficientwise comparison; exact on rationals, relative `tol`
    /// (scaled by the larger max-abs coefficient, at least 1) on floats.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.grade == other.grade && {
            let scale = self.max_abs().max(other.max_abs()).max(1.0);
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| (a.clone() - b.clone()).negligible(scale, tol))
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.grade, other.grade, "grade mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.clone() - b.clone()).as_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        wedge(self, other)
    }

    pub fn interior(&self, v: &Vector6<S>) -> Result<Self> {
        interior(v, self)
    }

    /// Evaluate on `grade` vectors with the determinant convention
    /// e^{I}(v_1,..,v_k) = det[e^{i_a}(v_b)].
    pub fn eval(&self, vectors: &[Vector6<S>]) -> Result<S> {
        if vectors.len() != self.grade {
            return Err(Error::Grade {
                got: vectors.len(),
                expected: self.grade.to_string(),
            });
        }
        let mut acc = S::zero();
        for (idx, c) in self.terms() {
            let axes = idx.axes();
            let m = Matrix::from_fn(self.grade, self.grade, |a, b| vectors[b].0[axes[a] - 1].clone());
            acc += c.clone() * &m.det();
        }
        Ok(acc)
    }
}

impl<S: Scalar> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}](", self.grade)?;
        let mut first = true;
        for (idx, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*{idx:?}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl<S: Scalar> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<S: Scalar> Add for &Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: Self) -> Form<S> {
        assert_eq!(self.grade, rhs.grade, "adding forms of different grade");
        Form {
            grade: self.grade,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: Self) -> Form<S> {
        assert_eq!(self.grade, rhs.grade, "subtracting forms of different grade");
        Form {
            grade: self.grade,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        self.map(|c| -c.clone())
    }
}

impl<S: Scalar> Add for Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: Self) -> Form<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: Self) -> Form<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Neg for Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        -&self
    }
}

/// Exterior product. Total grade above 6 is an error.
pub fn wedge<S: Scalar>(a: &Form<S>, b: &Form<S>) -> Result<Form<S>> {
    let grade = a.grade + b.grade;
    if grade > DIM {
        return Err(Error::GradeOverflow(a.grade, b.grade));
    }
    let mut out = Form::zero(grade);
    for (i, ca) in a.terms() {
        for (j, cb) in b.terms() {
            if i.0 & j.0 != 0 {
                continue;
            }
            let prod = ca.clone() * cb;
            let pos = MultiIndex(i.0 | j.0).position();
            if wedge_sign(i.0, j.0) > 0 {
                out.coeffs[pos] += prod;
            } else {
                out.coeffs[pos] -= prod;
            }
        }
    }
    Ok(out)
}

/// Contraction with the basis vector e_axis (1-based).
pub fn interior_basis<S: Scalar>(axis: usize, a: &Form<S>) -> Result<Form<S>> {
    if a.grade == 0 {
        return Err(Error::Grade {
            got: 0,
            expected: ">= 1".into(),
        });
    }
    let mut out = Form::zero(a.grade - 1);
    let bit = 1u8 << (axis - 1);
    for (idx, c) in a.terms() {
        if idx.0 & bit == 0 {
            continue;
        }
        let pos = MultiIndex(idx.0 & !bit).position();
        out.coeffs[pos] = signed(c, contraction_sign(idx.0, axis));
    }
    Ok(out)
}

/// Interior product i_v a; an antiderivation of degree -1.
pub fn interior<S: Scalar>(v: &Vector6<S>, a: &Form<S>) -> Result<Form<S>> {
    if a.grade == 0 {
        return Err(Error::Grade {
            got: 0,
            expected: ">= 1".into(),
        });
    }
    let mut out = Form::zero(a.grade - 1);
    for (k, vk) in v.0.iter().enumerate() {
        if vk.is_zero() {
            continue;
        }
        let part = interior_basis(k + 1, a)?;
        for (o, p) in out.coeffs.iter_mut().zip(&part.coeffs) {
            if !p.is_zero() {
                *o += vk.clone() * p;
            }
        }
    }
    Ok(out)
}

/// Pullback (g*a)_I = sum_J a_J det(g[J, I]).
pub fn pullback<S: Scalar>(g: &LinearMap6<S>, a: &Form<S>) -> Form<S> {
    let k = a.grade;
    let mut out = Form::zero(k);
    if k == 0 {
        return a.clone();
    }
    for (pos, i) in MultiIndex::basis(k).iter().enumerate() {
        let icols = i.axes();
        let mut acc = S::zero();
        for (j, c) in a.terms() {
            let jrows = j.axes();
            let minor = Matrix::from_fn(k, k, |r, s| g.matrix[(jrows[r] - 1, icols[s] - 1)].clone());
            acc += c.clone() * &minor.det();
        }
        out.coeffs[pos] = acc;
    }
    out
}

/// The unique u with i_u vol = beta, for a 5-form beta and nonzero 6-form vol.
pub fn vector_of_five_form<S: Scalar>(beta: &Form<S>, vol: &Form<S>) -> Result<Vector6<S>> {
    if beta.grade != DIM - 1 {
        return Err(Error::Grade {
            got: beta.grade,
            expected: "5".into(),
        });
    }
    if vol.grade != DIM {
        return Err(Error::Grade {
            got: vol.grade,
            expected: "6".into(),
        });
    }
    let v = vol.top();
    if v.is_zero() {
        return Err(Error::Degenerate("zero volume form".into()));
    }
    // i_{e_i} e^{1..6} = (-1)^{i-1} e^{1..î..6}
    Ok(Vector6(std::array::from_fn(|k| {
        let idx = MultiIndex::top().without(k + 1);
        signed(beta.coeff(idx), if k % 2 == 0 { 1 } else { -1 }) / v.clone()
    })))
}

impl MultiIndex {
    fn without(self, axis: usize) -> Self {
        Self(self.0 & !(1u8 << (axis - 1)))
    }
}
