//! Complex Hadamard matrices: constructions, checks, equivalence and the
//! symmetric Sinkhorn generator.
//!
//! Row and column labels run over the canonical representatives `0..q`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::polar_unitary;
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Outcome of [`check_hadamard`].
#[derive(Clone, Debug, PartialEq)]
pub struct HadamardReport<T> {
    pub is_unimodular: bool,
    pub max_modulus_deviation: T,
    /// `max |H†H − q·1|`.
    pub max_unitarity_deviation: T,
    pub is_symmetric: bool,
    pub symmetry_deviation: T,
    pub tol: T,
}

impl<T: Real> HadamardReport<T> {
    pub fn is_hadamard(&self) -> bool {
        self.is_unimodular && self.max_unitarity_deviation <= self.tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedHadamard {
    K2,
    K3,
    F2xF2,
}

#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
pub(crate) fn one<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `exp(2πi·k/q)` with `k` reduced mod `q` first.
#[inline]
pub(crate) fn omega_pow<T: Real>(q: usize, k: i64) -> Complex<T> {
    let r = k.rem_euclid(q as i64) as usize;
    cis(T::TAU() * T::from_usize_lossy(r) / T::from_usize_lossy(q))
}

fn require_q(q: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidDimension(format!("q must be at least 2, got {q}")));
    }
    Ok(())
}

/// Discrete Fourier matrix `(F_q)_{jk} = exp(2πi·jk/q)`.
pub fn fourier<T: Real>(q: usize) -> Result<ComplexMatrix<T>> {
    require_q(q)?;
    Ok(ComplexMatrix::from_fn(q, |j, k| omega_pow(q, (j * k) as i64)))
}

pub fn named_hadamard<T: Real>(name: NamedHadamard) -> ComplexMatrix<T> {
    let c = |re: f64, im: f64| Complex::new(T::lit(re), T::lit(im));
    match name {
        NamedHadamard::K2 => ComplexMatrix::from_fn(2, |j, k| if j == k { c(1.0, 0.0) } else { c(0.0, 1.0) }),
        NamedHadamard::K3 => ComplexMatrix::from_fn(3, |j, k| if j == k { one() } else { omega_pow(3, 1) }),
        NamedHadamard::F2xF2 => {
            let f2 = fourier::<T>(2).expect("q = 2 is valid");
            f2.kron(&f2)
        }
    }
}

/// One-parameter family `F₄⁽¹⁾(a)`; `a = 0` gives `F₄`.
pub fn f4_family<T: Real>(a: T) -> ComplexMatrix<T> {
    let e = Complex::new(T::zero(), T::one()) * cis(a);
    let p = one::<T>();
    let m = -p;
    let rows = [[p, p, p, p], [p, e, m, -e], [p, m, p, m], [p, -e, m, e]];
    ComplexMatrix::from_fn(4, |j, k| rows[j][k])
}

pub fn tensor<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.kron(b)
}

pub fn check_hadamard<T: Real>(m: &ComplexMatrix<T>, tol: T) -> HadamardReport<T> {
    let q = m.dim();
    let max_modulus_deviation = m.as_slice().iter().fold(T::zero(), |d, z| d.max((z.norm() - T::one()).abs()));
    let target = ComplexMatrix::identity(q).scale_real(T::from_usize_lossy(q));
    let max_unitarity_deviation = m.adjoint().matmul(m).max_abs_diff(&target);
    let symmetry_deviation = m.max_abs_diff(&m.transpose());
    HadamardReport {
        is_unimodular: max_modulus_deviation <= tol,
        max_modulus_deviation,
        max_unitarity_deviation,
        is_symmetric: symmetry_deviation <= tol,
        symmetry_deviation,
        tol,
    }
}

pub(crate) fn require_hadamard<T: Real>(m: &ComplexMatrix<T>, what: &str) -> Result<()> {
    let report = check_hadamard(m, T::check_tol());
    if !report.is_hadamard() {
        return Err(Error::Precondition(format!(
            "{what} is not a complex Hadamard matrix (modulus deviation {:.3e}, unitarity deviation {:.3e})",
            report.max_modulus_deviation.as_f64(),
            report.max_unitarity_deviation.as_f64()
        )));
    }
    Ok(())
}

fn phase_of<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = z.norm();
    if r == T::zero() {
        one()
    } else {
        z / r
    }
}

/// Dephased form `D₁·M·D₂` whose first row and column are all ones, with
/// `D₁ = diag(conj M_{j0})` and `D₂ = diag(M_{00}·conj M_{0k})` taken as
/// pure phases.
pub fn dephase<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    require_hadamard(m, "dephase input")?;
    Ok(dephase_unchecked(m))
}

fn dephase_unchecked<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let q = m.dim();
    let d1: Vec<_> = (0..q).map(|j| phase_of(m.get(j, 0)).conj()).collect();
    let h00 = phase_of(m.get(0, 0));
    let d2: Vec<_> = (0..q).map(|k| h00 * phase_of(m.get(0, k)).conj()).collect();
    ComplexMatrix::from_fn(q, |j, k| d1[j] * m.get(j, k) * d2[k])
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// Bipartite perfect matching between the columns of `a` and `b` (restricted
/// to `cols`) where columns match when entrywise within `tol`.
fn columns_match<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, cols: &[usize], tol: T) -> bool {
    let q = a.dim();
    let fits = |ca: usize, cb: usize| (0..q).all(|r| (a.get(r, ca) - b.get(r, cb)).norm() <= tol);
    let adj: Vec<Vec<usize>> = cols.iter().map(|&ca| cols.iter().copied().filter(|&cb| fits(ca, cb)).collect()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; q];

    fn augment(u: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none() || augment(owner[v].unwrap(), adj, owner, seen) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }

    (0..cols.len()).all(|u| {
        let mut seen = vec![false; q];
        augment(u, &adj, &mut owner, &mut seen)
    })
}

const MAX_SEARCH_DIM: usize = 6;

fn check_search_dims<T: Real>(m1: &ComplexMatrix<T>, m2: &ComplexMatrix<T>) -> Result<()> {
    if m1.dim() != m2.dim() {
        return Err(Error::Shape(format!("dimensions {} and {} differ", m1.dim(), m2.dim())));
    }
    if m1.dim() > MAX_SEARCH_DIM {
        return Err(Error::Unsupported(format!(
            "equivalence search limited to dimension {MAX_SEARCH_DIM}, got {}",
            m1.dim()
        )));
    }
    Ok(())
}

/// True iff `M1 = P₁·M2·P₂` within `tol` for permutation matrices `P₁, P₂`.
pub fn permutation_equivalent<T: Real>(m1: &ComplexMatrix<T>, m2: &ComplexMatrix<T>, tol: T) -> Result<bool> {
    check_search_dims(m1, m2)?;
    let q = m1.dim();
    let cols: Vec<usize> = (0..q).collect();
    Ok(permutations(q).iter().any(|rows| {
        let permuted = ComplexMatrix::from_fn(q, |i, j| m2.get(rows[i], j));
        columns_match(m1, &permuted, &cols, tol)
    }))
}

/// Hadamard equivalence `M1 = D₁P₁·M2·P₂D₂`: both sides are dephased and
/// every choice of leading row and column of `M2` is re-dephased before
/// matching the remaining columns.
pub fn equivalent<T: Real>(m1: &ComplexMatrix<T>, m2: &ComplexMatrix<T>, tol: T) -> Result<bool> {
    check_search_dims(m1, m2)?;
    require_hadamard(m1, "first matrix")?;
    require_hadamard(m2, "second matrix")?;
    let q = m1.dim();
    let target = dephase_unchecked(m1);
    let rest: Vec<usize> = (1..q).collect();
    for rows in permutations(q) {
        for lead in 0..q {
            let order: Vec<usize> = std::iter::once(lead).chain((0..q).filter(|&c| c != lead)).collect();
            let candidate = dephase_unchecked(&ComplexMatrix::from_fn(q, |i, j| m2.get(rows[i], order[j])));
            if columns_match(&target, &candidate, &rest, tol) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// `C_{jk}(α,δ) = exp((2πi/q)[α j²/2 + jk + δ k²/2])` evaluated as a real
/// exponent without reducing `j²` mod `q`.
pub fn cat_hadamard<T: Real>(q: usize, alpha: i64, delta: i64) -> Result<ComplexMatrix<T>> {
    require_q(q)?;
    let qf = T::from_usize_lossy(q);
    let half = T::lit(0.5);
    let a = T::from_i64(alpha).expect("alpha fits scalar");
    let d = T::from_i64(delta).expect("delta fits scalar");
    Ok(ComplexMatrix::from_fn(q, |j, k| {
        let (jf, kf) = (T::from_usize_lossy(j), T::from_usize_lossy(k));
        let phase = a * jf * jf * half + jf * kf + d * kf * kf * half;
        cis(T::TAU() * phase / qf)
    }))
}

/// Deterministic random complex matrix with real and imaginary parts
/// uniform on `[−1, 1]`.
pub fn random_complex_matrix<T: Real>(q: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(q, |_, _| {
        Complex::new(T::lit(rng.random_range(-1.0..=1.0)), T::lit(rng.random_range(-1.0..=1.0)))
    })
}

/// One round of the symmetric Sinkhorn loop: polar factor, symmetrize,
/// normalize entries to unit modulus.
pub fn sinkhorn_round<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let u = polar_unitary(m)?;
    let sym = (&u + &u.transpose()).scale_real(T::lit(0.5));
    if sym.as_slice().iter().any(|z| z.norm() <= T::epsilon()) {
        return Err(Error::Numerical("vanishing entry during normalization".into()));
    }
    Ok(sym.map(phase_of))
}

fn sinkhorn_deviation<T: Real>(m: &ComplexMatrix<T>) -> (T, T) {
    let r = check_hadamard(m, T::zero());
    (r.max_modulus_deviation, r.max_unitarity_deviation)
}

/// Runs the Sinkhorn loop from `start` without restarts.
pub fn sinkhorn_refine<T: Real>(start: &ComplexMatrix<T>, tol: T, max_iter: usize) -> Result<ComplexMatrix<T>> {
    let mut m = start.clone();
    let (mut modulus, mut unitarity) = sinkhorn_deviation(&m);
    for _ in 0..max_iter {
        if modulus.max(unitarity) < tol {
            return Ok(m);
        }
        m = sinkhorn_round(&m)?;
        (modulus, unitarity) = sinkhorn_deviation(&m);
    }
    if modulus.max(unitarity) < tol {
        return Ok(m);
    }
    Err(Error::Convergence { iterations: max_iter, modulus: modulus.as_f64(), unitarity: unitarity.as_f64() })
}

/// Restart policy for [`sinkhorn_symmetric_with`].
#[derive(Clone, Copy, Debug)]
pub struct SinkhornOptions<T> {
    pub tol: T,
    /// Total iteration budget across all restarts.
    pub max_iter: usize,
    /// Iterations granted to a single starting matrix.
    pub attempt_budget: usize,
    /// Spacing of progress checkpoints within an attempt.
    pub checkpoint: usize,
    /// An attempt is abandoned when a checkpoint fails to shrink the
    /// deviation by this factor.
    pub min_progress: T,
}

impl<T: Real> SinkhornOptions<T> {
    pub fn new(tol: T, max_iter: usize) -> Self {
        Self { tol, max_iter, attempt_budget: 1000, checkpoint: 100, min_progress: T::lit(0.5) }
    }
}

impl<T: Real> Default for SinkhornOptions<T> {
    fn default() -> Self {
        Self::new(T::default_tol(), 50_000)
    }
}

/// Symmetric complex Hadamard matrix from the seeded Sinkhorn loop.
pub fn sinkhorn_symmetric<T: Real>(q: usize, seed: u64, tol: T, max_iter: usize) -> Result<ComplexMatrix<T>> {
    sinkhorn_symmetric_with(q, seed, SinkhornOptions::new(tol, max_iter))
}

/// Seeded Sinkhorn loop with deterministic restarts. Starting matrices are
/// drawn in sequence from one ChaCha8 stream seeded by `seed`.
pub fn sinkhorn_symmetric_with<T: Real>(q: usize, seed: u64, opts: SinkhornOptions<T>) -> Result<ComplexMatrix<T>> {
    require_q(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = 0usize;
    let mut last = (T::infinity(), T::infinity());
    while used < opts.max_iter {
        let mut m = random_complex_matrix::<T>(q, &mut rng);
        let mut checkpoint_dev = T::infinity();
        let mut iter = 0usize;
        while iter < opts.attempt_budget && used < opts.max_iter {
            m = match sinkhorn_round(&m) {
                Ok(next) => next,
                Err(_) => break,
            };
            iter += 1;
            used += 1;
            let dev = sinkhorn_deviation(&m);
            last = dev;
            let worst = dev.0.max(dev.1);
            if worst < opts.tol {
                return Ok(m);
            }
            if iter.is_multiple_of(opts.checkpoint) {
                if worst > opts.min_progress * checkpoint_dev {
                    break;
                }
                checkpoint_dev = worst;
            }
        }
    }
    Err(Error::Convergence { iterations: used, modulus: last.0.as_f64(), unitarity: last.1.as_f64() })
}

/// The symmetric 6×6 matrix printed to three decimals as a Yang-Baxter
/// counterexample. It is Hadamard only to about `3e-3`.
pub fn printed_symmetric_six<T: Real>() -> ComplexMatrix<T> {
    const ENTRIES: [[(f64, f64); 6]; 6] = [
        [(0.894, 0.449), (-0.311, -0.951), (0.616, -0.788), (0.746, 0.665), (0.675, 0.738), (0.138, 0.99)],
        [(-0.311, -0.951), (0.455, -0.891), (-0.068, 0.998), (-0.991, -0.132), (0.963, 0.269), (0.699, 0.716)],
        [(0.616, -0.788), (-0.068, 0.998), (0.533, 0.846), (0.458, 0.889), (-0.909, 0.417), (0.949, 0.314)],
        [(0.746, 0.665), (-0.991, -0.132), (0.458, 0.889), (-0.348, -0.937), (0.18, 0.984), (0.197, -0.98)],
        [(0.675, 0.738), (0.963, 0.269), (-0.909, 0.417), (0.18, 0.984), (0.991, -0.131), (0.4, -0.916)],
        [(0.138, 0.99), (0.699, 0.716), (0.949, 0.314), (0.197, -0.98), (0.4, -0.916), (0.55, 0.835)],
    ];
    ComplexMatrix::from_fn(6, |j, k| Complex::new(T::lit(ENTRIES[j][k].0), T::lit(ENTRIES[j][k].1)))
}

/// Horizontal coupling of the integrable kicked Potts chain (`m = 1`):
/// `e^{4πi/9}·K₃†`. Its vertical partner is the adjoint.
pub fn kicked_potts<T: Real>() -> ComplexMatrix<T> {
    let k3 = named_hadamard::<T>(NamedHadamard::K3);
    k3.adjoint().scale(cis(T::lit(4.0) * T::PI() / T::lit(9.0)))
}

/// Resolves a builtin name: `f<q>`, `f4a:<angle>`, `k2`, `k3`, `f2xf2`,
/// `k3potts`, `sym6`, `cat:<q>:<α>:<δ>`.
pub fn builtin<T: Real>(name: &str) -> Result<ComplexMatrix<T>> {
    let bad = || Error::Parse(format!("unknown builtin matrix '{name}'"));
    let lower = name.trim().to_ascii_lowercase();
    match lower.as_str() {
        "k2" => return Ok(named_hadamard(NamedHadamard::K2)),
        "k3" => return Ok(named_hadamard(NamedHadamard::K3)),
        "f2xf2" => return Ok(named_hadamard(NamedHadamard::F2xF2)),
        "k3potts" => return Ok(kicked_potts()),
        "sym6" => return Ok(printed_symmetric_six()),
        _ => {}
    }
    if let Some(angle) = lower.strip_prefix("f4a:") {
        let a: f64 = angle.parse().map_err(|_| bad())?;
        return Ok(f4_family(T::lit(a)));
    }
    if let Some(rest) = lower.strip_prefix("cat:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let q: usize = parts[0].parse().map_err(|_| bad())?;
        let alpha: i64 = parts[1].parse().map_err(|_| bad())?;
        let delta: i64 = parts[2].parse().map_err(|_| bad())?;
        return cat_hadamard(q, alpha, delta);
    }
    if let Some(q) = lower.strip_prefix('f') {
        let q: usize = q.parse().map_err(|_| bad())?;
        return fourier(q);
    }
    Err(bad())
}

/// Names accepted by [`builtin`] that need no parameters.
pub const BUILTIN_NAMES: [&str; 10] = ["f2", "f3", "f4", "f5", "f6", "k2", "k3", "f2xf2", "k3potts", "sym6"];

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn fourier_small_cases() {
        let f2: M = fourier(2).unwrap();
        let expected = M::new(2, vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!(f2.max_abs_diff(&expected) < 1e-15);

        let f3: M = fourier(3).unwrap();
        let w = Complex::from_polar(1.0, std::f64::consts::TAU / 3.0);
        assert!((f3.get(1, 1) - w).norm() < 1e-15);
        assert!((f3.get(1, 2) - w * w).norm() < 1e-15);
        assert!((f3.get(2, 2) - w).norm() < 1e-15);

        let f4: M = fourier(4).unwrap();
        assert!((f4.get(2, 2) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(fourier::<f64>(1).is_err());
    }

    #[test]
    fn named_matrices_are_literal() {
        let k2: M = named_hadamard(NamedHadamard::K2);
        assert_eq!(k2.as_slice(), &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        let k3: M = named_hadamard(NamedHadamard::K3);
        let w = Complex::from_polar(1.0, std::f64::consts::TAU / 3.0);
        for j in 0..3 {
            for k in 0..3 {
                let e = if j == k { c(1.0, 0.0) } else { w };
                assert!((k3.get(j, k) - e).norm() < 1e-15);
            }
        }
        let ff: M = named_hadamard(NamedHadamard::F2xF2);
        let signs = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]];
        for j in 0..4 {
            for k in 0..4 {
                assert!((ff.get(j, k) - c(signs[j][k] as f64, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn f4_family_at_zero_is_fourier() {
        let f: M = fourier(4).unwrap();
        assert!(f4_family(0.0).max_abs_diff(&f) < 1e-15);
    }

    #[test]
    fn check_hadamard_all_ones() {
        let ones = M::from_fn(2, |_, _| c(1.0, 0.0));
        let r = check_hadamard(&ones, 1e-12);
        assert!(r.is_unimodular);
        assert!((r.max_unitarity_deviation - 2.0).abs() < 1e-15);
        assert!(!r.is_hadamard());
    }

    #[test]
    fn k3_is_symmetric_hadamard() {
        let r = check_hadamard(&named_hadamard::<f64>(NamedHadamard::K3), 1e-12);
        assert!(r.is_symmetric && r.is_hadamard());
    }

    #[test]
    fn dephase_known_cases() {
        let f2: M = fourier(2).unwrap();
        let f3: M = fourier(3).unwrap();
        assert!(dephase(&named_hadamard::<f64>(NamedHadamard::K2)).unwrap().max_abs_diff(&f2) < 1e-12);
        assert!(dephase(&named_hadamard::<f64>(NamedHadamard::K3)).unwrap().max_abs_diff(&f3) < 1e-12);
        for q in 2..8 {
            let f: M = fourier(q).unwrap();
            assert!(dephase(&f).unwrap().max_abs_diff(&f) < 1e-12);
        }
        let ones = M::from_fn(2, |_, _| c(1.0, 0.0));
        assert!(matches!(dephase(&ones), Err(Error::Precondition(_))));
    }

    #[test]
    fn tensor_with_unit_and_product_of_fouriers() {
        let f2: M = fourier(2).unwrap();
        let f3: M = fourier(3).unwrap();
        assert_eq!(tensor(&M::identity(1), &f3), f3);
        assert!(tensor(&f2, &f2).max_abs_diff(&named_hadamard(NamedHadamard::F2xF2)) < 1e-15);
        assert!(check_hadamard(&tensor(&f2, &f3), 1e-12).max_unitarity_deviation < 1e-12);
    }

    #[test]
    fn permutation_equivalence_cases() {
        let f4: M = fourier(4).unwrap();
        let ff: M = named_hadamard(NamedHadamard::F2xF2);
        assert!(permutation_equivalent(&f4, &f4, 1e-10).unwrap());
        assert!(!permutation_equivalent(&f4, &ff, 1e-10).unwrap());
        // At a = π/2 the family is real and coincides with F₂⊗F₂ up to permutations.
        assert!(permutation_equivalent(&f4_family(std::f64::consts::FRAC_PI_2), &ff, 1e-10).unwrap());
        // At a = π/4 the entries are e^{3πi/4}, so no permutation can make it real.
        assert!(!permutation_equivalent(&f4_family(std::f64::consts::FRAC_PI_4), &ff, 1e-10).unwrap());
        let f7: M = fourier(7).unwrap();
        assert!(matches!(permutation_equivalent(&f7, &f7, 1e-10), Err(Error::Unsupported(_))));
    }

    #[test]
    fn hadamard_equivalence_cases() {
        let f4: M = fourier(4).unwrap();
        let ff: M = named_hadamard(NamedHadamard::F2xF2);
        assert!(equivalent(&named_hadamard::<f64>(NamedHadamard::K2), &fourier(2).unwrap(), 1e-10).unwrap());
        assert!(equivalent(&kicked_potts::<f64>(), &fourier(3).unwrap(), 1e-10).unwrap());
        assert!(equivalent(&f4_family(std::f64::consts::FRAC_PI_2), &ff, 1e-10).unwrap());
        assert!(!equivalent(&f4_family(std::f64::consts::FRAC_PI_4), &ff, 1e-10).unwrap());
        assert!(!equivalent(&f4, &f4_family(0.3), 1e-8).unwrap());
    }

    #[test]
    fn cat_hadamard_displays() {
        for q in 2..7 {
            let f: M = fourier(q).unwrap();
            assert!(cat_hadamard::<f64>(q, 0, 0).unwrap().max_abs_diff(&f) < 1e-12);
            let hyp: M = cat_hadamard(q, 2, 2).unwrap();
            let par: M = cat_hadamard(q, -1, -1).unwrap();
            let qf = q as f64;
            for j in 0..q {
                for k in 0..q {
                    let (jf, kf) = (j as f64, k as f64);
                    let e = Complex::from_polar(1.0, std::f64::consts::TAU / qf * (jf * jf + kf * kf + jf * kf));
                    assert!((hyp.get(j, k) - e).norm() < 1e-12);
                    let e = Complex::from_polar(1.0, -std::f64::consts::PI / qf * (jf - kf).powi(2));
                    assert!((par.get(j, k) - e).norm() < 1e-12);
                }
            }
            assert!(check_hadamard(&cat_hadamard::<f64>(q, 3, -1).unwrap(), 1e-12).is_hadamard());
        }
    }

    #[test]
    fn cat_hadamard_transpose_swaps_parameters() {
        let a: M = cat_hadamard(5, 1, 3).unwrap();
        let b: M = cat_hadamard(5, 3, 1).unwrap();
        assert!(a.transpose().max_abs_diff(&b) < 1e-12);
        assert!(a.max_abs_diff(&a.transpose()) > 1e-3);
    }

    #[test]
    fn sinkhorn_outputs_are_symmetric_hadamard() {
        for q in 2..6 {
            for seed in 0..3 {
                let m: M = sinkhorn_symmetric(q, seed, 1e-10, 20_000).unwrap();
                let r = check_hadamard(&m, 1e-8);
                assert!(r.is_hadamard() && r.is_symmetric, "q={q} seed={seed}");
            }
        }
        let a: M = sinkhorn_symmetric(4, 9, 1e-10, 20_000).unwrap();
        let b: M = sinkhorn_symmetric(4, 9, 1e-10, 20_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sinkhorn_q2_is_fourier_equivalent() {
        let f2: M = fourier(2).unwrap();
        for seed in 0..5 {
            let m: M = sinkhorn_symmetric(2, seed, 1e-12, 1000).unwrap();
            assert!(equivalent(&m, &f2, 1e-8).unwrap());
        }
    }

    #[test]
    fn sinkhorn_reports_nonconvergence() {
        let err = sinkhorn_symmetric::<f64>(7, 0, 1e-30, 5).unwrap_err();
        assert!(matches!(err, Error::Convergence { iterations: 5, .. }));
    }

    #[test]
    fn printed_six_refines_to_hadamard() {
        let p: M = printed_symmetric_six();
        let r = check_hadamard(&p, 1e-2);
        assert!(r.is_hadamard() && r.is_symmetric);
        let refined = sinkhorn_refine(&p, 1e-12, 5000).unwrap();
        assert!(refined.max_abs_diff(&p) < 1e-2);
        assert!(check_hadamard(&refined, 1e-10).is_symmetric);
    }

    #[test]
    fn builtins_resolve() {
        for name in BUILTIN_NAMES {
            let m: M = builtin(name).unwrap();
            let tol = if name == "sym6" { 1e-2 } else { 1e-12 };
            assert!(check_hadamard(&m, tol).is_hadamard(), "{name}");
        }
        assert_eq!(builtin::<f64>("f4a:0.3").unwrap(), f4_family(0.3));
        assert_eq!(builtin::<f64>("cat:5:2:1").unwrap(), cat_hadamard(5, 2, 1).unwrap());
        assert!(builtin::<f64>("nope").is_err());
        assert!(builtin::<f64>("cat:3:1").is_err());
    }

    #[test]
    fn kicked_potts_matches_general_coupling() {
        // u_H(z,z') = δ e^{-2iα} + (1-δ) e^{iα} at α = -2π/9.
        let alpha = -std::f64::consts::TAU / 9.0;
        let general = M::from_fn(3, |j, k| if j == k { Complex::from_polar(1.0, -2.0 * alpha) } else { Complex::from_polar(1.0, alpha) });
        assert!(kicked_potts::<f64>().max_abs_diff(&general) < 1e-12);
    }

    #[test]
    fn permutations_enumerate() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn single_precision_fourier() {
        let f: ComplexMatrix<f32> = fourier(5).unwrap();
        assert!(check_hadamard(&f, 1e-4).is_hadamard());
    }
}
