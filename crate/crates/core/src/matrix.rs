//! Dense square complex matrices stored row-major.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn new(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("matrix dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("matrix entries must be finite".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex::new(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![Complex::new(T::one(), T::zero()); dim])
    }

    pub fn from_diag(diag: &[Complex<T>]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * dim + i] = d;
        }
        m
    }

    /// Rank-one matrix |u⟩⟨v|.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex<T>) {
        self.data[i * self.dim + j] = z;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, z: Complex<T>) {
        self.data[i * self.dim + j] += z;
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.dim, v.len(), "mul_vec dimension mismatch");
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |i, j| self.get(i / m, j / m) * other.get(i % m, j % m))
    }

    /// Left multiplication by a diagonal matrix.
    pub fn diag_mul_left(&self, diag: &[Complex<T>]) -> Self {
        Self::from_fn(self.dim, |i, j| diag[i] * self.get(i, j))
    }

    /// Right multiplication by a diagonal matrix.
    pub fn diag_mul_right(&self, diag: &[Complex<T>]) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(i, j) * diag[j])
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self.get(i, i))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "comparison dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// Entrywise distance after removing a global phase, fixed on the
    /// largest-modulus entry of `self`.
    pub fn max_abs_diff_up_to_phase(&self, other: &Self) -> T {
        let (idx, _) = self
            .data
            .iter()
            .enumerate()
            .fold((0, T::zero()), |(bi, bm), (i, z)| if z.norm() > bm { (i, z.norm()) } else { (bi, bm) });
        let a = self.data[idx];
        let b = other.data[idx];
        let phase = if a.norm() > T::zero() && b.norm() > T::zero() {
            let r = b / a;
            r / r.norm()
        } else {
            Complex::new(T::one(), T::zero())
        };
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (x, y)| m.max((*x * phase - *y).norm()))
    }

    /// `‖AB − BA‖_max`.
    pub fn commutator_norm(&self, other: &Self) -> T {
        self.matmul(other).max_abs_diff(&other.matmul(self))
    }

    /// Deviation of `self` from unitarity, `max |U†U − I|`.
    pub fn unitarity_deviation(&self) -> T {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.get(i, j).norm() <= tol))
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn new_rejects_bad_input() {
        assert!(ComplexMatrix::<f64>::new(2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(ComplexMatrix::<f64>::new(1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::<f64>::new(0, vec![]).is_err());
    }

    #[test]
    fn kron_with_unit_is_identity_map() {
        let m = ComplexMatrix::from_fn(3, |i, j| c(i as f64, j as f64));
        let one = ComplexMatrix::identity(1);
        assert_eq!(one.kron(&m), m);
        assert_eq!(m.kron(&one), m);
    }

    #[test]
    fn matmul_matches_hand_product() {
        let a = ComplexMatrix::new(2, vec![c(0.0, 1.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        let b = ComplexMatrix::new(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let p = &a * &b;
        let expected = ComplexMatrix::new(2, vec![c(0.0, 2.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(p.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn phase_insensitive_comparison() {
        let a = ComplexMatrix::from_fn(3, |i, j| c((i + j) as f64, 1.0));
        let b = a.scale(Complex::from_polar(1.0, 0.7));
        assert!(a.max_abs_diff_up_to_phase(&b) < 1e-12);
        assert!(a.max_abs_diff(&b) > 0.1);
    }
}
