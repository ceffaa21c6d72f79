//! Dense operator and state carriers.

use std::ops::{Add, Deref, Mul, Sub};

use faer::Mat;
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Absolute Hermiticity tolerance, scaled by `max(1, max|A_ij|)`.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Normalization tolerance for [`StateVector`].
pub const NORM_TOL: f64 = 1e-10;

/// Square complex matrix without structural guarantees.
#[derive(Clone, Debug)]
pub struct Operator {
    mat: Mat<C64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self { mat: Mat::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { mat: Mat::from_fn(dim, dim, f) }
    }

    pub fn from_real_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(dim, |i, j| C64::new(f(i, j), 0.0))
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let dim = values.len();
        let mut out = Self::zeros(dim);
        for (i, v) in values.iter().enumerate() {
            out.mat[(i, i)] = *v;
        }
        out
    }

    /// Wrap a faer matrix. Fails unless it is square.
    pub fn from_mat(mat: Mat<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch { expected: mat.nrows(), actual: mat.ncols() });
        }
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: C64) {
        self.mat[(i, j)] = v;
    }

    pub(crate) fn add_at(&mut self, i: usize, j: usize, v: C64) {
        self.mat[(i, j)] += v;
    }

    pub fn as_mat(&self) -> &Mat<C64> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint().to_owned() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(self.dim(), |i, j| self.mat[(i, j)] * s)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Operator) -> Self {
        let (da, db) = (self.dim(), other.dim());
        Self::from_fn(da * db, |i, j| self.mat[(i / db, j / db)] * other.mat[(i % db, j % db)])
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Operator) -> Self {
        &(self * other) + &(other * self)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.mat[(i, j)].norm());
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max((self.mat[(i, j)] - other.mat[(i, j)]).norm());
            }
        }
        m
    }

    /// `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                m = m.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        m
    }

    /// True when every entry has a vanishing imaginary part.
    pub fn is_real(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| self.mat[(i, j)].im == 0.0))
    }

    /// Real part as a faer matrix.
    pub fn real_part(&self) -> Mat<f64> {
        Mat::from_fn(self.dim(), self.dim(), |i, j| self.mat[(i, j)].re)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim(), "dimension mismatch");
        let n = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (j, vj) in v.iter().enumerate() {
            if *vj == C64::new(0.0, 0.0) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.mat[(i, j)] * vj;
            }
        }
        out
    }

    /// `⟨u|A|v⟩`.
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let av = self.apply(v);
        u.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn mul(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Operator { mat: &self.mat * &rhs.mat }
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn add(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Operator { mat: &self.mat + &rhs.mat }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn sub(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Operator { mat: &self.mat - &rhs.mat }
    }
}

/// Square complex matrix verified Hermitian at construction.
#[derive(Clone, Debug)]
pub struct DenseHermitianOperator(Operator);

impl DenseHermitianOperator {
    pub fn new(op: Operator) -> Result<Self> {
        let deviation = op.hermiticity_defect();
        if deviation > HERMITICITY_TOL * op.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(op))
    }

    /// Symmetrize `(A + A†)/2` and wrap. Used where round-off is the only
    /// source of asymmetry.
    pub fn symmetrized(op: &Operator) -> Self {
        let n = op.dim();
        Self(Operator::from_fn(n, |i, j| (op.get(i, j) + op.get(j, i).conj()) * 0.5))
    }

    pub(crate) fn new_unchecked(op: Operator) -> Self {
        debug_assert!(op.hermiticity_defect() <= HERMITICITY_TOL * op.max_abs().max(1.0));
        Self(op)
    }

    pub fn as_operator(&self) -> &Operator {
        &self.0
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }

    /// Real expectation value `⟨v|A|v⟩`.
    pub fn expectation(&self, v: &StateVector) -> f64 {
        self.0.sandwich(v.amplitudes(), v.amplitudes()).re
    }
}

impl Deref for DenseHermitianOperator {
    type Target = Operator;

    fn deref(&self) -> &Operator {
        &self.0
    }
}

impl TryFrom<Operator> for DenseHermitianOperator {
    type Error = Error;

    fn try_from(op: Operator) -> Result<Self> {
        Self::new(op)
    }
}

/// Unit-norm complex amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("state norm^2 = {norm_sq}, expected 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize arbitrary nonzero amplitudes.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("cannot normalize a zero or non-finite vector".into()));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Multiply by the global phase that makes the largest-magnitude
    /// amplitude real and positive. Amplitudes within a relative 1e-8 of the
    /// largest count as tied, and ties go to the lowest index, so the choice
    /// survives round-off differences between solvers.
    pub fn fix_global_phase(&mut self) {
        let max = self.amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let best = self.amplitudes.iter().position(|a| a.norm() >= max * (1.0 - 1e-8)).unwrap_or(0);
        let best_norm = self.amplitudes.get(best).map_or(0.0, |a| a.norm());
        if best_norm <= 0.0 {
            return;
        }
        let phase = self.amplitudes[best].conj() / best_norm;
        for a in &mut self.amplitudes {
            *a *= phase;
        }
        self.amplitudes[best] = C64::new(best_norm, 0.0);
    }
}
