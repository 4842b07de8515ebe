//! Dense exact simulation of the Hadamard lattice.
//!
//! Basis states `|z₀ z₁ … z_{N−1}⟩` are indexed big-endian: site 0 is the
//! most significant base-`q` digit.

use num_complex::Complex;

use crate::chm::{omega_pow, require_hadamard};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::weyl::SymplecticString;

/// Largest dimension for which dense `q^N × q^N` operators are formed.
pub const DENSE_CAP: usize = 4096;
/// Largest state vector handled by the structured appliers.
pub const STATE_CAP: usize = 1 << 24;

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn human_bytes(bytes: f64) -> String {
    let units = ["B", "KiB", "MiB", "GiB", "TiB", "PiB"];
    let mut v = bytes;
    let mut k = 0;
    while v >= 1024.0 && k + 1 < units.len() {
        v /= 1024.0;
        k += 1;
    }
    format!("{v:.1} {}", units[k])
}

fn cap_message(q: usize, n: usize, cap: usize) -> String {
    let dim = (q as f64).powi(n as i32);
    format!(
        "q^N = {q}^{n} = {dim:.3e} exceeds the cap {cap}; a complex f64 state needs {} and a dense operator {}",
        human_bytes(16.0 * dim),
        human_bytes(16.0 * dim * dim)
    )
}

pub(crate) fn checked_dim(q: usize, n: usize, cap: usize) -> Result<usize> {
    let mut dim = 1usize;
    for _ in 0..n {
        dim = dim
            .checked_mul(q)
            .filter(|&d| d <= cap)
            .ok_or_else(|| Error::Resource(cap_message(q, n, cap)))?;
    }
    Ok(dim)
}

/// Applies a `q × q` matrix to one digit of a big-endian amplitude vector.
pub(crate) fn apply_site_raw<T: Real>(amps: &mut [Complex<T>], q: usize, n: usize, site: usize, m: &ComplexMatrix<T>) {
    let stride = q.pow((n - 1 - site) as u32);
    let block = stride * q;
    let mut buf = vec![zero::<T>(); q];
    for base in (0..amps.len()).step_by(block) {
        for lo in 0..stride {
            for (d, slot) in buf.iter_mut().enumerate() {
                *slot = amps[base + d * stride + lo];
            }
            for r in 0..q {
                let row = m.row(r);
                amps[base + r * stride + lo] = row.iter().zip(&buf).map(|(x, y)| x * y).sum();
            }
        }
    }
}

/// Applies a `q² × q²` gate (row index `d₁·q + d₂`) to digits `(s1, s2)`.
pub(crate) fn apply_pair_raw<T: Real>(amps: &mut [Complex<T>], q: usize, n: usize, s1: usize, s2: usize, m: &ComplexMatrix<T>) {
    let st1 = q.pow((n - 1 - s1) as u32);
    let st2 = q.pow((n - 1 - s2) as u32);
    let mut buf = vec![zero::<T>(); q * q];
    for base in 0..amps.len() {
        if !(base / st1).is_multiple_of(q) || !(base / st2).is_multiple_of(q) {
            continue;
        }
        for d1 in 0..q {
            for d2 in 0..q {
                buf[d1 * q + d2] = amps[base + d1 * st1 + d2 * st2];
            }
        }
        for d1 in 0..q {
            for d2 in 0..q {
                let row = m.row(d1 * q + d2);
                amps[base + d1 * st1 + d2 * st2] = row.iter().zip(&buf).map(|(x, y)| x * y).sum();
            }
        }
    }
}

/// Single-site `|x⟩_X = q^{−1/2} Σ_z ω^{zx}|z⟩`.
pub fn x_eigenstate<T: Real>(q: usize, x: i64) -> Vec<Complex<T>> {
    let norm = T::one() / T::from_usize_lossy(q).sqrt();
    (0..q).map(|z| omega_pow::<T>(q, z as i64 * x) * norm).collect()
}

/// Single-site `|z⟩_Z`.
pub fn z_eigenstate<T: Real>(q: usize, z: i64) -> Vec<Complex<T>> {
    let z = z.rem_euclid(q as i64) as usize;
    (0..q).map(|k| if k == z { Complex::new(T::one(), T::zero()) } else { zero() }).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    q: usize,
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(q: usize, n: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if q < 2 || n == 0 {
            return Err(Error::InvalidDimension(format!("need q ≥ 2 and N ≥ 1, got q={q} N={n}")));
        }
        let dim = checked_dim(q, n, STATE_CAP)?;
        if amps.len() != dim {
            return Err(Error::Shape(format!("{} amplitudes for dimension {dim}", amps.len())));
        }
        Ok(Self { q, n, amps })
    }

    /// Computational basis state with the given digits.
    pub fn basis(q: usize, labels: &[u32]) -> Result<Self> {
        if labels.iter().any(|&z| z as usize >= q) {
            return Err(Error::Shape(format!("labels must lie in [0, {q})")));
        }
        let dim = checked_dim(q, labels.len(), STATE_CAP)?;
        let idx = labels.iter().fold(0usize, |acc, &z| acc * q + z as usize);
        let mut amps = vec![zero(); dim];
        amps[idx] = Complex::new(T::one(), T::zero());
        Self::new(q, labels.len(), amps)
    }

    /// Tensor product of single-site vectors, site 0 first.
    pub fn product(q: usize, factors: &[Vec<Complex<T>>]) -> Result<Self> {
        if factors.iter().any(|f| f.len() != q) {
            return Err(Error::Shape(format!("every factor must have length {q}")));
        }
        checked_dim(q, factors.len(), STATE_CAP)?;
        let mut amps = vec![Complex::new(T::one(), T::zero())];
        for f in factors {
            amps = amps.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect();
        }
        Self::new(q, factors.len(), amps)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.q != other.q || self.n != other.n {
            return Err(Error::Shape("states of different shape".into()));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `1 − |⟨self|other⟩|`, zero iff equal up to a global phase (for unit vectors).
    pub fn phase_distance(&self, other: &Self) -> Result<T> {
        Ok(T::one() - self.inner(other)?.norm())
    }

    pub fn apply_diagonal(&mut self, diag: &[Complex<T>]) -> Result<()> {
        if diag.len() != self.dim() {
            return Err(Error::Shape(format!("diagonal of length {} on dimension {}", diag.len(), self.dim())));
        }
        self.amps.iter_mut().zip(diag).for_each(|(a, d)| *a *= d);
        Ok(())
    }

    pub fn apply_dense(&mut self, m: &ComplexMatrix<T>) -> Result<()> {
        if m.dim() != self.dim() {
            return Err(Error::Shape(format!("operator of dimension {} on state of dimension {}", m.dim(), self.dim())));
        }
        self.amps = m.mul_vec(&self.amps);
        Ok(())
    }

    pub fn apply_site(&mut self, site: usize, m: &ComplexMatrix<T>) -> Result<()> {
        if site >= self.n {
            return Err(Error::Index(format!("site {site} of {}", self.n)));
        }
        if m.dim() != self.q {
            return Err(Error::Shape(format!("single-site operator of dimension {}", m.dim())));
        }
        apply_site_raw(&mut self.amps, self.q, self.n, site, m);
        Ok(())
    }

    /// Applies a `q² × q²` gate with row index `d₁·q + d₂` to sites `(s1, s2)`.
    pub fn apply_pair(&mut self, s1: usize, s2: usize, m: &ComplexMatrix<T>) -> Result<()> {
        let (q, n) = (self.q, self.n);
        if s1 >= n || s2 >= n || s1 == s2 {
            return Err(Error::Index(format!("sites ({s1}, {s2}) of {n}")));
        }
        if m.dim() != q * q {
            return Err(Error::Shape(format!("two-site gate of dimension {}", m.dim())));
        }
        apply_pair_raw(&mut self.amps, q, n, s1, s2, m);
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    Open,
    /// Open chain with the bond `(s, s+1)` also removed.
    BondRemoved(usize),
}

/// Ordered bonds `(x, y)` carrying a factor `u_H(z_x, z_y)`. A periodic
/// pair of sites has a double bond; a single periodic site has none.
pub fn bonds(n: usize, boundary: Boundary) -> Result<Vec<(usize, usize)>> {
    match boundary {
        Boundary::Periodic => Ok(match n {
            0 | 1 => Vec::new(),
            _ => (0..n).map(|x| (x, (x + 1) % n)).collect(),
        }),
        Boundary::Open => Ok((0..n.saturating_sub(1)).map(|x| (x, x + 1)).collect()),
        Boundary::BondRemoved(s) => {
            if s + 1 >= n {
                return Err(Error::Index(format!("bond ({s}, {}) outside an open chain of {n}", s + 1)));
            }
            Ok((0..n - 1).filter(|&x| x != s).map(|x| (x, x + 1)).collect())
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSpec<T> {
    q: usize,
    n: usize,
    u_h: ComplexMatrix<T>,
    u_v: ComplexMatrix<T>,
    boundary: Boundary,
}

impl<T: Real> CircuitSpec<T> {
    pub fn new(n: usize, u_h: ComplexMatrix<T>, u_v: ComplexMatrix<T>, boundary: Boundary) -> Result<Self> {
        let q = u_h.dim();
        if u_v.dim() != q {
            return Err(Error::Shape(format!("u_H is {q}×{q} but u_V is {0}×{0}", u_v.dim())));
        }
        if q < 2 || n == 0 {
            return Err(Error::InvalidDimension(format!("need q ≥ 2 and N ≥ 1, got q={q} N={n}")));
        }
        require_hadamard(&u_h, "u_H")?;
        require_hadamard(&u_v, "u_V")?;
        bonds(n, boundary)?;
        Ok(Self { q, n, u_h, u_v, boundary })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u_h(&self) -> &ComplexMatrix<T> {
        &self.u_h
    }

    pub fn u_v(&self) -> &ComplexMatrix<T> {
        &self.u_v
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn with_boundary(&self, boundary: Boundary) -> Result<Self> {
        bonds(self.n, boundary)?;
        Ok(Self { boundary, ..self.clone() })
    }

    /// Normalized single-site vertical unitary `u_V/√q`.
    pub fn vertical_site(&self) -> ComplexMatrix<T> {
        self.u_v.scale_real(T::one() / T::from_usize_lossy(self.q).sqrt())
    }
}

/// Diagonal of `U_row`: `∏_{bonds} u_H(z_x, z_y)`.
pub fn build_u_row<T: Real>(spec: &CircuitSpec<T>) -> Result<Vec<Complex<T>>> {
    let (q, n) = (spec.q, spec.n);
    let dim = checked_dim(q, n, STATE_CAP)?;
    let bonds = bonds(n, spec.boundary)?;
    let strides: Vec<usize> = (0..n).map(|x| q.pow((n - 1 - x) as u32)).collect();
    Ok((0..dim)
        .map(|idx| {
            bonds.iter().fold(Complex::new(T::one(), T::zero()), |acc, &(x, y)| {
                acc * spec.u_h.get((idx / strides[x]) % q, (idx / strides[y]) % q)
            })
        })
        .collect())
}

/// Dense `(u_V/√q)^{⊗N}`.
pub fn build_u_vert<T: Real>(spec: &CircuitSpec<T>) -> Result<ComplexMatrix<T>> {
    checked_dim(spec.q, spec.n, DENSE_CAP)?;
    let v = spec.vertical_site();
    let mut m = v.clone();
    for _ in 1..spec.n {
        m = m.kron(&v);
    }
    Ok(m)
}

/// Dense Floquet operator `U_vert·U_row`.
pub fn floquet<T: Real>(spec: &CircuitSpec<T>) -> Result<ComplexMatrix<T>> {
    let vert = build_u_vert(spec)?;
    Ok(vert.diag_mul_right(&build_u_row(spec)?))
}

/// `(U_vert·U_row)^T |ψ⟩` without forming the operator.
pub fn apply_floquet<T: Real>(spec: &CircuitSpec<T>, state: &StateVector<T>, t_steps: usize) -> Result<StateVector<T>> {
    if state.q != spec.q || state.n != spec.n {
        return Err(Error::Shape(format!(
            "state has q={} N={}, circuit has q={} N={}",
            state.q, state.n, spec.q, spec.n
        )));
    }
    let mut out = state.clone();
    if t_steps == 0 {
        return Ok(out);
    }
    let row = build_u_row(spec)?;
    let v = spec.vertical_site();
    for _ in 0..t_steps {
        out.apply_diagonal(&row)?;
        for x in 0..spec.n {
            apply_site_raw(&mut out.amps, spec.q, spec.n, x, &v);
        }
    }
    Ok(out)
}

/// Two-site brickwork gate
/// `G[(a,b),(c,d)] = q⁻¹·u_H(a,b)·u_V(a,c)·u_V(b,d)·u_H(c,d)`,
/// i.e. `D_H (V⊗V) D_H` with `D_H = diag u_H(a,b)` and `V = u_V/√q`.
pub fn brickwork_gate<T: Real>(u_h: &ComplexMatrix<T>, u_v: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    require_hadamard(u_h, "u_H")?;
    require_hadamard(u_v, "u_V")?;
    let q = u_h.dim();
    if u_v.dim() != q {
        return Err(Error::Shape("u_H and u_V differ in size".into()));
    }
    let inv_q = T::one() / T::from_usize_lossy(q);
    Ok(ComplexMatrix::from_fn(q * q, |r, c| {
        let (a, b, cc, d) = (r / q, r % q, c / q, c % q);
        u_h.get(a, b) * u_v.get(a, cc) * u_v.get(b, d) * u_h.get(cc, d) * inv_q
    }))
}

fn gate_q<T: Real>(gate: &ComplexMatrix<T>) -> Result<usize> {
    let q = (gate.dim() as f64).sqrt().round() as usize;
    if q * q != gate.dim() || q < 2 {
        return Err(Error::Shape(format!("dimension {} is not q² for q ≥ 2", gate.dim())));
    }
    Ok(q)
}

/// Space-time dual of a two-site gate: `G̃[(a,c),(b,d)] = G[(a,b),(c,d)]`.
pub fn dual_reshuffle<T: Real>(gate: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let q = gate_q(gate)?;
    Ok(ComplexMatrix::from_fn(q * q, |r, c| {
        let (a, cc, b, d) = (r / q, r % q, c / q, c % q);
        gate.get(a * q + b, cc * q + d)
    }))
}

/// Round-a-face gate acting on the middle qudit controlled by its left
/// (`a`) and right (`c`) neighbours:
/// `W[b,d] = q⁻¹ Σ_e u_NW(a,e)·u_NE(b,e)·u_SE(c,e)·u_SW(d,e)`,
/// where `d` is the incoming (south) and `b` the outgoing (north) value.
pub fn face_gate<T: Real>(
    u_nw: &ComplexMatrix<T>,
    u_ne: &ComplexMatrix<T>,
    u_sw: &ComplexMatrix<T>,
    u_se: &ComplexMatrix<T>,
    control_a: usize,
    control_c: usize,
) -> Result<ComplexMatrix<T>> {
    let q = u_nw.dim();
    if [u_ne, u_sw, u_se].iter().any(|m| m.dim() != q) {
        return Err(Error::Shape("face matrices differ in size".into()));
    }
    if control_a >= q || control_c >= q {
        return Err(Error::Index(format!("controls ({control_a}, {control_c}) for q = {q}")));
    }
    let inv_q = T::one() / T::from_usize_lossy(q);
    Ok(ComplexMatrix::from_fn(q, |b, d| {
        (0..q)
            .map(|e| u_nw.get(control_a, e) * u_ne.get(b, e) * u_se.get(control_c, e) * u_sw.get(d, e))
            .sum::<Complex<T>>()
            * inv_q
    }))
}

/// Global-phase-insensitive distance `max|λA − B|` with `λ` the phase of
/// `tr(A†B)`.
pub fn distance_up_to_phase<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::Shape("operators of different size".into()));
    }
    let tr = a.adjoint().matmul(b).trace();
    let lambda = if tr.norm() == T::zero() { Complex::new(T::one(), T::zero()) } else { tr / tr.norm() };
    Ok(a.scale(lambda).max_abs_diff(b))
}

fn digits_of(mut idx: usize, q: usize, n: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for x in (0..n).rev() {
        out[x] = (idx % q) as u32;
        idx /= q;
    }
    out
}

fn digit_add(j: usize, b: &[u32], q: usize) -> usize {
    let n = b.len();
    let mut rest = j;
    let mut out = 0usize;
    let mut place = 1usize;
    for x in (0..n).rev() {
        let d = rest % q;
        rest /= q;
        out += ((d + b[x] as usize) % q) * place;
        place *= q;
    }
    out
}

const TOP_COEFFICIENTS: usize = 5;

/// Expands `U·P·U†` in the Pauli basis and returns the single string it is
/// proportional to, with the unimodular prefactor `λ`. Fails with
/// [`Error::NotPauliString`] when more than one coefficient exceeds the
/// threshold, as happens for non-Clifford `U`.
pub fn conjugate_pauli<T: Real>(u: &ComplexMatrix<T>, s: &SymplecticString) -> Result<(SymplecticString, Complex<T>)> {
    let (q, n) = (s.q() as usize, s.len());
    let dim = checked_dim(q, n, DENSE_CAP)?;
    if u.dim() != dim {
        return Err(Error::Shape(format!("operator of dimension {} for a string on {n} sites of q={q}", u.dim())));
    }
    let thr = T::check_tol();
    let ud = u.adjoint();
    let mut pud = ComplexMatrix::zeros(dim);
    for j in 0..dim {
        let (col, phase) = s.apply_index(j);
        let w = omega_pow::<T>(q, phase);
        for (k, z) in ud.row(col).iter().enumerate() {
            pud.set(j, k, w * z);
        }
    }
    let m = u.matmul(&pud);

    let inv_dim = T::one() / T::from_usize_lossy(dim);
    let dft = ComplexMatrix::from_fn(q, |a, j| omega_pow::<T>(q, -((a * j) as i64)));
    let mut found: Vec<(usize, usize, Complex<T>)> = Vec::new();
    for bi in 0..dim {
        let bd = digits_of(bi, q, n);
        let mut d: Vec<Complex<T>> = (0..dim).map(|j| m.get(j, digit_add(j, &bd, q))).collect();
        let weight: T = d.iter().map(|z| z.norm_sqr()).sum::<T>() * inv_dim;
        if weight <= thr * thr {
            continue;
        }
        for x in 0..n {
            apply_site_raw(&mut d, q, n, x, &dft);
        }
        for (ai, c) in d.into_iter().enumerate() {
            let c = c * inv_dim;
            if c.norm() > thr {
                found.push((ai, bi, c));
            }
        }
    }
    let to_string = |ai: usize, bi: usize| {
        let a = digits_of(ai, q, n).into_iter().map(i64::from).collect();
        let b = digits_of(bi, q, n).into_iter().map(i64::from).collect();
        SymplecticString::new(s.q(), a, b)
    };
    if found.len() == 1 {
        let (ai, bi, c) = found[0];
        return Ok((to_string(ai, bi)?, c));
    }
    found.sort_by(|x, y| y.2.norm().partial_cmp(&x.2.norm()).unwrap_or(std::cmp::Ordering::Equal));
    let top = found
        .iter()
        .take(TOP_COEFFICIENTS)
        .map(|&(ai, bi, c)| {
            (format!("Z^{:?} X^{:?}", digits_of(ai, q, n), digits_of(bi, q, n)), c.norm().as_f64())
        })
        .collect();
    Err(Error::NotPauliString(top))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chm::{builtin, fourier, named_hadamard, sinkhorn_symmetric, NamedHadamard};
    use crate::symplectic_ca::{evolve, CaConfig, Horizontal};
    use crate::weyl::{cat_matrix, conj_fourier, two_site_kick, PauliExponent};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn f(q: usize) -> ComplexMatrix<f64> {
        fourier(q).unwrap()
    }

    fn random_state(q: usize, n: usize, rng: &mut ChaCha8Rng) -> StateVector<f64> {
        let dim = q.pow(n as u32);
        let mut amps: Vec<C> = (0..dim).map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|z| *z /= norm);
        StateVector::new(q, n, amps).unwrap()
    }

    #[test]
    fn u_row_two_site_periodic_k2() {
        let k2: ComplexMatrix<f64> = named_hadamard(NamedHadamard::K2);
        let spec = CircuitSpec::new(2, k2.clone(), f(2), Boundary::Periodic).unwrap();
        let row = build_u_row(&spec).unwrap();
        for z1 in 0..2 {
            for z2 in 0..2 {
                let expect = k2.get(z1, z2) * k2.get(z2, z1);
                assert!((row[z1 * 2 + z2] - expect).norm() < 1e-15);
            }
        }
        let ones = ComplexMatrix::from_fn(2, |_, _| C::new(1.0, 0.0));
        assert!(CircuitSpec::new(3, ones.clone(), f(2), Boundary::Periodic).is_err());
        let single = CircuitSpec::new(1, f(2), f(2), Boundary::Periodic).unwrap();
        assert_eq!(build_u_row(&single).unwrap(), vec![C::new(1.0, 0.0); 2]);
    }

    #[test]
    fn u_row_bond_removed_drops_factor() {
        let spec = CircuitSpec::new(4, f(3), f(3), Boundary::BondRemoved(1)).unwrap();
        let open = spec.with_boundary(Boundary::Open).unwrap();
        let removed = build_u_row(&spec).unwrap();
        let full = build_u_row(&open).unwrap();
        for (idx, (r, o)) in removed.iter().zip(&full).enumerate() {
            let d = digits_of(idx, 3, 4);
            assert!((r * omega_pow::<f64>(3, (d[1] * d[2]) as i64) - o).norm() < 1e-12);
        }
        assert!(spec.with_boundary(Boundary::BondRemoved(3)).is_err());
    }

    #[test]
    fn u_vert_normalization() {
        let spec = CircuitSpec::new(1, f(2), f(2), Boundary::Periodic).unwrap();
        let v = build_u_vert(&spec).unwrap();
        let h = 1.0 / 2f64.sqrt();
        let expect = ComplexMatrix::new(2, vec![C::new(h, 0.0), C::new(h, 0.0), C::new(h, 0.0), C::new(-h, 0.0)]).unwrap();
        assert!(v.max_abs_diff(&expect) < 1e-15);
        let spec = CircuitSpec::new(1, f(3), f(3), Boundary::Periodic).unwrap();
        let v = build_u_vert(&spec).unwrap();
        for x in 0..3 {
            let col: Vec<C> = (0..3).map(|r| v.get(r, x)).collect();
            let expect = x_eigenstate::<f64>(3, x as i64);
            assert!(col.iter().zip(&expect).all(|(a, b)| (a - b).norm() < 1e-15));
        }
    }

    #[test]
    fn constructed_operators_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h3 = sinkhorn_symmetric::<f64>(3, 1, 1e-12, 10000).unwrap();
        let k3: ComplexMatrix<f64> = named_hadamard(NamedHadamard::K3);
        let spec = CircuitSpec::new(3, h3, k3.clone(), Boundary::Periodic).unwrap();
        let row = ComplexMatrix::from_diag(&build_u_row(&spec).unwrap());
        assert!(row.unitarity_deviation() < 1e-12);
        assert!(build_u_vert(&spec).unwrap().unitarity_deviation() < 1e-12);
        let spec = CircuitSpec::new(4, k3, f(3), Boundary::Periodic).unwrap();
        let u = floquet(&spec).unwrap();
        assert!(u.unitarity_deviation() < 1e-10);
        let psi = random_state(3, 4, &mut rng);
        let out = apply_floquet(&spec, &psi, 5).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
        assert_eq!(apply_floquet(&spec, &psi, 0).unwrap(), psi);
        let mut dense = psi.clone();
        for _ in 0..5 {
            dense.apply_dense(&u).unwrap();
        }
        assert!(dense.amplitudes().iter().zip(out.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn dense_cap_is_enforced() {
        let spec = CircuitSpec::new(7, f(4), f(4), Boundary::Periodic).unwrap();
        assert!(matches!(floquet(&spec), Err(Error::Resource(_))));
        let psi = StateVector::basis(4, &[0; 7]).unwrap();
        assert!(apply_floquet(&spec, &psi, 1).is_ok());
    }

    #[test]
    fn brickwork_gate_unitary_and_dual_unitary() {
        let g = brickwork_gate(&f(3), &f(3)).unwrap();
        assert!(g.unitarity_deviation() < 1e-10);
        assert!(dual_reshuffle(&g).unwrap().unitarity_deviation() < 1e-10);
        for (q, seed) in [(3, 2), (4, 7), (5, 3)] {
            let h = sinkhorn_symmetric::<f64>(q, seed, 1e-12, 10000).unwrap();
            let g = brickwork_gate(&h, &f(q)).unwrap();
            assert!(g.unitarity_deviation() < 1e-10);
            assert!(dual_reshuffle(&g).unwrap().unitarity_deviation() < 1e-10);
        }
        assert!(brickwork_gate(&ComplexMatrix::identity(2), &f(2)).is_err());
    }

    #[test]
    fn brickwork_f2_conjugation_matches_symplectic_rules() {
        let g = brickwork_gate(&f(2), &f(2)).unwrap();
        for (a1, b1, a2, b2) in [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 1), (1, 1, 0, 1)] {
            let p = (PauliExponent::new(2, a1, b1), PauliExponent::new(2, a2, b2));
            let k = two_site_kick(p.0, p.1, 0, 0);
            let k = two_site_kick(conj_fourier(k.0), conj_fourier(k.1), 0, 0);
            let s = SymplecticString::new(2, vec![a1, a2], vec![b1, b2]).unwrap();
            let (out, lambda) = conjugate_pauli(&g, &s).unwrap();
            assert_eq!((out.site(0), out.site(1)), k);
            assert!((lambda.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn conjugate_by_identity() {
        let s = SymplecticString::new(3, vec![1, 2], vec![0, 1]).unwrap();
        let (out, lambda) = conjugate_pauli(&ComplexMatrix::<f64>::identity(9), &s).unwrap();
        assert_eq!(out, s);
        assert!((lambda - C::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn sinkhorn_six_is_not_clifford() {
        let h = sinkhorn_symmetric::<f64>(6, 0, 1e-12, 10000).unwrap();
        let g = brickwork_gate(&h, &f(6)).unwrap();
        let s = SymplecticString::new(6, vec![1, 0], vec![0, 0]).unwrap();
        match conjugate_pauli(&g, &s) {
            Err(Error::NotPauliString(top)) => {
                assert!(top.len() > 1);
                assert!(top[1].1 > 1e-3);
            }
            other => panic!("expected NotPauliString, got {other:?}"),
        }
    }

    #[test]
    fn ca_matches_exact_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for (q, n) in [(2usize, 4usize), (3, 4), (2, 5), (3, 5)] {
            for _ in 0..4 {
                let alpha = rng.random_range(0..q as i64);
                let delta = rng.random_range(0..q as i64);
                let v = cat_matrix::<f64>(q, alpha, delta);
                for (horizontal, u_h) in [(Horizontal::F, f(q)), (Horizontal::Fdagger, f(q).adjoint())] {
                    let cfg = CaConfig::new(q as u32, n, alpha, delta, horizontal).unwrap();
                    let spec = CircuitSpec::new(n, u_h, v.clone(), Boundary::Periodic).unwrap();
                    let u = floquet(&spec).unwrap();
                    let a = (0..n).map(|_| rng.random_range(0..q as i64)).collect();
                    let b = (0..n).map(|_| rng.random_range(0..q as i64)).collect();
                    let s0 = SymplecticString::new(q as u32, a, b).unwrap();
                    let grid = evolve(&cfg, &s0, 3).unwrap();
                    let mut s = s0;
                    for t in 1..=3 {
                        let (next, lambda) = conjugate_pauli(&u, &s).unwrap();
                        assert!((lambda.norm() - 1.0).abs() < 1e-8);
                        assert_eq!(next, grid.row_string(t));
                        s = next;
                    }
                }
            }
        }
    }

    #[test]
    fn presentation_equivalence() {
        for (q, h) in [(2usize, builtin::<f64>("k2").unwrap()), (3, builtin::<f64>("k3").unwrap())] {
            let n = 4;
            let spec = CircuitSpec::new(n, h.clone(), f(q), Boundary::Periodic).unwrap();
            let gate = brickwork_gate(&h, &f(q)).unwrap();
            let dim = q.pow(n as u32);
            // odd bonds (1,2) and (3,0)
            let d_odd: Vec<C> = (0..dim)
                .map(|idx| {
                    let z = digits_of(idx, q, n);
                    h.get(z[1] as usize, z[2] as usize) * h.get(z[3] as usize, z[0] as usize)
                })
                .collect();
            let floq = floquet(&spec).unwrap();
            let lhs_sq = floq.matmul(&floq);
            let expect = ComplexMatrix::from_diag(&d_odd).matmul(&lhs_sq).diag_mul_right(&d_odd.iter().map(|z| z.conj()).collect::<Vec<_>>());
            let mut cols = Vec::with_capacity(dim);
            for c in 0..dim {
                let mut e = vec![C::new(0.0, 0.0); dim];
                e[c] = C::new(1.0, 0.0);
                let mut psi = StateVector::new(q, n, e).unwrap();
                psi.apply_pair(0, 1, &gate).unwrap();
                psi.apply_pair(2, 3, &gate).unwrap();
                psi.apply_pair(1, 2, &gate).unwrap();
                psi.apply_pair(3, 0, &gate).unwrap();
                cols.push(psi);
            }
            let brick = ComplexMatrix::from_fn(dim, |r, c| cols[c].amplitudes()[r]);
            assert!(brick.max_abs_diff(&expect) < 1e-8);
        }
    }

    #[test]
    fn product_states_follow_rule_150r() {
        let (q, n) = (3usize, 4usize);
        let spec = CircuitSpec::new(n, f(q), f(q), Boundary::Periodic).unwrap();
        for labels in 0..q.pow(n as u32) {
            let l: Vec<i64> = digits_of(labels, q, n).into_iter().map(i64::from).collect();
            let init: Vec<Vec<C>> = (0..n).map(|x| if x % 2 == 0 { z_eigenstate(q, l[x]) } else { x_eigenstate(q, l[x]) }).collect();
            let psi = StateVector::product(q, &init).unwrap();
            let out = apply_floquet(&spec, &psi, 1).unwrap();
            let fin: Vec<Vec<C>> = (0..n)
                .map(|x| {
                    if x % 2 == 0 {
                        x_eigenstate(q, l[x])
                    } else {
                        z_eigenstate(q, -l[x] - l[x - 1] - l[(x + 1) % n])
                    }
                })
                .collect();
            let expect = StateVector::product(q, &fin).unwrap();
            assert!(expect.phase_distance(&out).unwrap() < 1e-12);
        }
    }

    #[test]
    fn face_gate_special_cases() {
        let q = 3;
        let w = face_gate(&f(q), &f(q), &f(q), &f(q), 1, 1).unwrap();
        for b in 0..q {
            for d in 0..q {
                let expect = if (1 + b + 1 + d) % q == 0 { 1.0 } else { 0.0 };
                assert!((w.get(b, d) - C::new(expect, 0.0)).norm() < 1e-12);
            }
        }
        let fd = f(q).adjoint();
        for a in 0..q {
            for c in 0..q {
                let w = face_gate(&fd, &f(q), &f(q), &fd, a, c).unwrap();
                for d in 0..q {
                    let b = (a + c + q - d) % q;
                    assert!((w.get(b, d) - C::new(1.0, 0.0)).norm() < 1e-12);
                }
            }
        }
        let h: Vec<ComplexMatrix<f64>> = (0..4).map(|s| sinkhorn_symmetric(4, s, 1e-12, 10000).unwrap()).collect();
        for a in 0..4 {
            for c in 0..4 {
                let w = face_gate(&h[0], &h[1], &h[2], &h[3], a, c).unwrap();
                assert!(w.unitarity_deviation() < 1e-10);
            }
        }
    }

    #[test]
    fn pair_application_matches_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = brickwork_gate(&builtin::<f64>("k3").unwrap(), &f(3)).unwrap();
        let psi = random_state(3, 3, &mut rng);
        let mut a = psi.clone();
        a.apply_pair(1, 2, &g).unwrap();
        let mut b = psi.clone();
        b.apply_dense(&ComplexMatrix::identity(3).kron(&g)).unwrap();
        assert!(a.amplitudes().iter().zip(b.amplitudes()).all(|(x, y)| (x - y).norm() < 1e-12));
        assert!(a.apply_pair(1, 1, &g).is_err());
    }
}
