//! Small dense linear algebra: Hermitian eigensolver, polar factor and rank.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Eigen-decomposition `A = V diag(λ) V†` of a Hermitian matrix by cyclic
/// complex Jacobi rotations. Eigenvalues are returned in ascending order
/// with matching eigenvector columns.
pub fn hermitian_eigen<T: Real>(a: &ComplexMatrix<T>) -> (Vec<T>, ComplexMatrix<T>) {
    let n = a.dim();
    let mut m: Vec<Complex<T>> = a.as_slice().to_vec();
    let mut v = ComplexMatrix::<T>::identity(n).into_vec();
    let two = T::lit(2.0);

    let scale = m.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    let stop = T::epsilon() * T::epsilon() * scale * scale;

    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q].norm_sqr();
            }
        }
        if off <= stop || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                let abs = apq.norm();
                if abs == T::zero() {
                    continue;
                }
                let ph = apq / abs;
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                let tau = (aqq - app) / (two * abs);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let sp = ph * s;
                let spc = sp.conj();
                // A ← A J
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = akp * c - akq * spc;
                    m[k * n + q] = akp * sp + akq * c;
                }
                // A ← J† A
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = apk * c - aqk * sp;
                    m[q * n + k] = apk * spc + aqk * c;
                }
                m[p * n + q] = Complex::new(T::zero(), T::zero());
                m[q * n + p] = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - vkq * spc;
                    v[k * n + q] = vkp * sp + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].re.partial_cmp(&m[j * n + j].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[i * n + i].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[r * n + order[c]]);
    (values, vectors)
}

/// Unitary polar factor `U = M (M†M)^{-1/2}`.
pub fn polar_unitary<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let h = m.adjoint().matmul(m);
    let (vals, vecs) = hermitian_eigen(&h);
    let largest = vals.iter().fold(T::zero(), |a, &b| a.max(b));
    let smallest = vals.first().copied().unwrap_or(T::zero());
    let floor = T::epsilon() * T::lit(1e3) * largest;
    if largest <= T::zero() || smallest <= floor {
        return Err(Error::Numerical(format!(
            "polar factor of a singular matrix (smallest singular value² {:.3e})",
            smallest.as_f64()
        )));
    }
    let inv_sqrt: Vec<Complex<T>> = vals.iter().map(|&l| Complex::new(T::one() / l.sqrt(), T::zero())).collect();
    let root = vecs.diag_mul_right(&inv_sqrt).matmul(&vecs.adjoint());
    Ok(m.matmul(&root))
}

/// Numerical rank of a general (not necessarily square) row-major matrix by
/// Gaussian elimination with complete pivoting. Pivots below
/// `rel_tol · max|entry|` count as zero.
pub fn rank<T: Real>(rows: usize, cols: usize, data: &[Complex<T>], rel_tol: T) -> usize {
    assert_eq!(data.len(), rows * cols);
    let mut a = data.to_vec();
    let scale = a.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if scale == T::zero() {
        return 0;
    }
    let thresh = rel_tol * scale;
    let mut row_perm: Vec<usize> = (0..rows).collect();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let steps = rows.min(cols);
    for k in 0..steps {
        let mut best = (k, k, T::zero());
        for i in k..rows {
            for j in k..cols {
                let val = a[row_perm[i] * cols + col_perm[j]].norm();
                if val > best.2 {
                    best = (i, j, val);
                }
            }
        }
        if best.2 <= thresh {
            return k;
        }
        row_perm.swap(k, best.0);
        col_perm.swap(k, best.1);
        let pr = row_perm[k];
        let pivot = a[pr * cols + col_perm[k]];
        for i in (k + 1)..rows {
            let r = row_perm[i];
            let f = a[r * cols + col_perm[k]] / pivot;
            if f.norm() == T::zero() {
                continue;
            }
            for j in k..cols {
                let c = col_perm[j];
                let sub = f * a[pr * cols + c];
                a[r * cols + c] -= sub;
            }
        }
    }
    steps
}
