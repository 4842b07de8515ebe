//! Generalized Pauli (clock and shift) operators over `ℤ_q` and the symplectic
//! action of Fourier, shear and cat-map conjugations.
//!
//! Exponent-level maps drop phases. Operators are ordered `Z^a X^b` on each
//! site, with `(Z^a X^b)_{jk} = ω^{aj}·δ_{k, j+b}`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::chm::{fourier, omega_pow};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

#[inline]
pub(crate) fn modq(x: i64, q: u32) -> u32 {
    x.rem_euclid(q as i64) as u32
}

/// Multiplicative inverse of 2 mod an odd `q`.
#[inline]
fn half_mod(q: u32) -> i64 {
    debug_assert!(q % 2 == 1);
    (q as i64 + 1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliExponent {
    q: u32,
    a: u32,
    b: u32,
}

impl PauliExponent {
    pub fn new(q: u32, a: i64, b: i64) -> Self {
        assert!(q >= 2, "q must be at least 2");
        Self { q, a: modq(a, q), b: modq(b, q) }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn is_identity(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

/// Integer 2×2 matrix of unit determinant acting on column vectors `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatMatrix2x2 {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
}

impl CatMatrix2x2 {
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Self> {
        if alpha * delta - beta * gamma != 1 {
            return Err(Error::Precondition(format!(
                "determinant {} ≠ 1",
                alpha * delta - beta * gamma
            )));
        }
        Ok(Self { alpha, beta, gamma, delta })
    }

    /// Exponent map induced by conjugation with the cat matrix `C(α,δ)`.
    pub fn cat(alpha: i64, delta: i64) -> Self {
        Self { alpha, beta: alpha * delta - 1, gamma: 1, delta }
    }

    pub fn determinant(&self) -> i64 {
        self.alpha * self.delta - self.beta * self.gamma
    }

    pub fn apply(&self, p: PauliExponent) -> PauliExponent {
        let (a, b) = (p.a as i64, p.b as i64);
        PauliExponent::new(p.q, self.alpha * a + self.beta * b, self.gamma * a + self.delta * b)
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            alpha: self.alpha * rhs.alpha + self.beta * rhs.gamma,
            beta: self.alpha * rhs.beta + self.beta * rhs.delta,
            gamma: self.gamma * rhs.alpha + self.delta * rhs.gamma,
            delta: self.gamma * rhs.beta + self.delta * rhs.delta,
        }
    }
}

/// `F Z^a X^b F† ∝ Z^{−b} X^a`.
pub fn conj_fourier(p: PauliExponent) -> PauliExponent {
    PauliExponent::new(p.q, -(p.b as i64), p.a as i64)
}

/// `S^α Z^a X^b S^{−α} ∝ Z^{a+αb} X^b`.
pub fn conj_shear(p: PauliExponent, alpha: i64) -> PauliExponent {
    PauliExponent::new(p.q, p.a as i64 + alpha * p.b as i64, p.b as i64)
}

/// `(a, b) ↦ (αa + (αδ−1)b, a + δb)`.
pub fn conj_cat(p: PauliExponent, alpha: i64, delta: i64) -> PauliExponent {
    CatMatrix2x2::cat(alpha, delta).apply(p)
}

/// Conjugation by the diagonal two-site coupling: momenta receive the kick
/// `a₁ ↦ a₁ − αb₁ − b₂`, `a₂ ↦ a₂ − δb₂ − b₁`.
pub fn two_site_kick(p1: PauliExponent, p2: PauliExponent, alpha: i64, delta: i64) -> (PauliExponent, PauliExponent) {
    assert_eq!(p1.q, p2.q, "sites must share q");
    let (a1, b1, a2, b2) = (p1.a as i64, p1.b as i64, p2.a as i64, p2.b as i64);
    (
        PauliExponent::new(p1.q, a1 - alpha * b1 - b2, b1),
        PauliExponent::new(p2.q, a2 - delta * b2 - b1, b2),
    )
}

pub fn z_matrix<T: Real>(q: usize) -> ComplexMatrix<T> {
    let d: Vec<_> = (0..q).map(|j| omega_pow(q, j as i64)).collect();
    ComplexMatrix::from_diag(&d)
}

pub fn x_matrix<T: Real>(q: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(q, |j, k| if k == (j + 1) % q { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::zero()) })
}

pub fn pauli_matrix<T: Real>(p: PauliExponent) -> ComplexMatrix<T> {
    let q = p.q as usize;
    let b = p.b as usize;
    ComplexMatrix::from_fn(q, |j, k| {
        if k == (j + b) % q {
            omega_pow(q, p.a as i64 * j as i64)
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

/// Clifford realization of the shear `S^α`: a diagonal unitary with
/// `S^α X S^{−α} ∝ Z^α X`. Uses `exp(−iπαj²/q)` for even `q` and
/// `ω^{−αhj²}` with `2h ≡ 1` for odd `q`.
pub fn shear_matrix<T: Real>(q: usize, alpha: i64) -> ComplexMatrix<T> {
    let d: Vec<Complex<T>> = (0..q)
        .map(|j| {
            let j2 = (j * j) as i64;
            if q.is_multiple_of(2) {
                let r = (alpha * j2).rem_euclid(2 * q as i64);
                let theta = -T::PI() * T::from_i64(r).unwrap() / T::from_usize_lossy(q);
                Complex::new(theta.cos(), theta.sin())
            } else {
                omega_pow(q, -alpha * half_mod(q as u32) * j2)
            }
        })
        .collect();
    ComplexMatrix::from_diag(&d)
}

/// Clifford cat matrix `S^α F S^δ`; conjugation by it realizes
/// [`conj_cat`] exactly. For even `q` it equals `cat_hadamard(q, −α, −δ)`.
pub fn cat_matrix<T: Real>(q: usize, alpha: i64, delta: i64) -> ComplexMatrix<T> {
    let f = fourier::<T>(q).expect("q ≥ 2");
    shear_matrix::<T>(q, alpha).matmul(&f).matmul(&shear_matrix(q, delta))
}

/// Diagonal two-site coupling (dimension `q²`, first site most significant)
/// whose conjugation realizes [`two_site_kick`].
pub fn kick_matrix<T: Real>(q: usize, alpha: i64, delta: i64) -> ComplexMatrix<T> {
    let d: Vec<Complex<T>> = (0..q * q)
        .map(|idx| {
            let (j1, j2) = ((idx / q) as i64, (idx % q) as i64);
            if q.is_multiple_of(2) {
                let r = (alpha * j1 * j1 + delta * j2 * j2).rem_euclid(2 * q as i64);
                let theta = T::PI() * T::from_i64(r).unwrap() / T::from_usize_lossy(q);
                Complex::new(theta.cos(), theta.sin()) * omega_pow(q, j1 * j2)
            } else {
                let h = half_mod(q as u32);
                omega_pow(q, h * (alpha * j1 * j1 + delta * j2 * j2) + j1 * j2)
            }
        })
        .collect();
    ComplexMatrix::from_diag(&d)
}

/// If `m = λ·p` with `|λ| = 1` within `tol`, returns `λ`.
pub fn proportionality<T: Real>(m: &ComplexMatrix<T>, p: &ComplexMatrix<T>, tol: T) -> Option<Complex<T>> {
    let n = T::from_usize_lossy(m.dim());
    let lambda = p.adjoint().matmul(m).trace() / n;
    if (lambda.norm() - T::one()).abs() > tol {
        return None;
    }
    (m.max_abs_diff(&p.scale(lambda)) <= tol).then_some(lambda)
}

/// Phase-free multi-site Pauli string `∏ₓ Z^{aₓ} X^{bₓ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticString {
    q: u32,
    a: Vec<u32>,
    b: Vec<u32>,
}

impl SymplecticString {
    pub fn new(q: u32, a: Vec<i64>, b: Vec<i64>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidDimension(format!("q must be at least 2, got {q}")));
        }
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::Shape(format!("exponent rows of lengths {} and {}", a.len(), b.len())));
        }
        Ok(Self {
            q,
            a: a.into_iter().map(|x| modq(x, q)).collect(),
            b: b.into_iter().map(|x| modq(x, q)).collect(),
        })
    }

    pub(crate) fn from_residues(q: u32, a: Vec<u32>, b: Vec<u32>) -> Self {
        debug_assert!(a.len() == b.len() && a.iter().chain(&b).all(|&x| x < q));
        Self { q, a, b }
    }

    pub fn identity(q: u32, n: usize) -> Self {
        Self { q, a: vec![0; n], b: vec![0; n] }
    }

    /// Single-site operator `Z^a X^b` at `site`.
    pub fn single(q: u32, n: usize, site: usize, a: i64, b: i64) -> Self {
        let mut s = Self::identity(q, n);
        s.a[site] = modq(a, q);
        s.b[site] = modq(b, q);
        s
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    pub fn site(&self, x: usize) -> PauliExponent {
        PauliExponent { q: self.q, a: self.a[x], b: self.b[x] }
    }

    pub fn set_site(&mut self, x: usize, p: PauliExponent) {
        assert_eq!(p.q, self.q);
        self.a[x] = p.a;
        self.b[x] = p.b;
    }

    pub fn is_identity(&self) -> bool {
        self.a.iter().chain(&self.b).all(|&x| x == 0)
    }

    /// Sites with a nontrivial factor.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.a[x] != 0 || self.b[x] != 0).collect()
    }

    /// Product of strings up to phase: exponents add.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.q, self.len()), (other.q, other.len()), "incompatible strings");
        let q = self.q;
        Self {
            q,
            a: self.a.iter().zip(&other.a).map(|(x, y)| (x + y) % q).collect(),
            b: self.b.iter().zip(&other.b).map(|(x, y)| (x + y) % q).collect(),
        }
    }

    /// `k`-th power up to phase.
    pub fn scale(&self, k: i64) -> Self {
        let q = self.q;
        Self {
            q,
            a: self.a.iter().map(|&x| modq(k * x as i64, q)).collect(),
            b: self.b.iter().map(|&x| modq(k * x as i64, q)).collect(),
        }
    }

    /// Periodic translation by `k` sites to the right.
    pub fn shifted(&self, k: i64) -> Self {
        let n = self.len() as i64;
        let idx = |x: usize| (x as i64 - k).rem_euclid(n) as usize;
        Self {
            q: self.q,
            a: (0..self.len()).map(|x| self.a[idx(x)]).collect(),
            b: (0..self.len()).map(|x| self.b[idx(x)]).collect(),
        }
    }

    /// Dense `q^N`-dimensional matrix, site 0 most significant.
    pub fn to_matrix<T: Real>(&self) -> ComplexMatrix<T> {
        let q = self.q as usize;
        let n = self.len();
        let dim = q.pow(n as u32);
        let mut m = ComplexMatrix::zeros(dim);
        for row in 0..dim {
            let (col, phase) = self.apply_index(row);
            m.set(row, col, omega_pow(q, phase));
        }
        m
    }

    /// For row index `j`, the column `j + B` (digitwise) and the exponent of
    /// `ω` in `⟨j|P|j+B⟩ = ω^{A·j}`.
    pub(crate) fn apply_index(&self, row: usize) -> (usize, i64) {
        let q = self.q as usize;
        let n = self.len();
        let mut col = 0usize;
        let mut phase = 0i64;
        let mut rest = row;
        let mut place = 1usize;
        for x in (0..n).rev() {
            let digit = rest % q;
            rest /= q;
            phase += self.a[x] as i64 * digit as i64;
            col += ((digit + self.b[x] as usize) % q) * place;
            place *= q;
        }
        (col, phase)
    }
}

impl fmt::Display for SymplecticString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "{} {}", self.q, self.len())?;
        writeln!(f, "{}", row(&self.a))?;
        writeln!(f, "{}", row(&self.b))
    }
}

impl FromStr for SymplecticString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let parse_row = |line: Option<&str>, what: &str| -> Result<Vec<i64>> {
            line.ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer '{t}' in {what}"))))
                .collect()
        };
        let header = parse_row(lines.next(), "header")?;
        let [q, n] = header[..] else {
            return Err(Error::Parse("header must be 'q N'".into()));
        };
        let a = parse_row(lines.next(), "a-row")?;
        let b = parse_row(lines.next(), "b-row")?;
        if a.len() != n as usize || b.len() != n as usize {
            return Err(Error::Parse(format!("expected {n} entries per row")));
        }
        if q < 2 || q > u32::MAX as i64 {
            return Err(Error::Parse(format!("invalid q {q}")));
        }
        SymplecticString::new(q as u32, a, b)
    }
}
