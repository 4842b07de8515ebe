//! Reduced density matrices, Rényi entropies, entanglement growth from
//! product states and the rainbow-state protocol.

use std::fmt;

use num_complex::Complex;

use crate::chm::{check_hadamard, one};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::statevector::{apply_floquet, x_eigenstate, Boundary, CircuitSpec, StateVector};

/// Eigenvalues in `[−CLIP, 0)` are treated as zero.
const CLIP: f64 = 1e-9;

/// Partial trace keeping `sites` (in the given order) of a pure state.
pub fn reduced_density_sites<T: Real>(state: &StateVector<T>, sites: &[usize]) -> Result<ComplexMatrix<T>> {
    let (q, n) = (state.q(), state.n());
    let mut seen = vec![false; n];
    for &s in sites {
        if s >= n || seen[s] {
            return Err(Error::Index(format!("kept sites {sites:?} invalid for {n} sites")));
        }
        seen[s] = true;
    }
    if sites.is_empty() {
        return Err(Error::Index("no sites kept".into()));
    }
    let traced: Vec<usize> = (0..n).filter(|&x| !seen[x]).collect();
    let dk = q.pow(sites.len() as u32);
    let dt = q.pow(traced.len() as u32);
    let stride = |x: usize| q.pow((n - 1 - x) as u32);
    let keep_off: Vec<usize> = (0..dk)
        .map(|k| {
            let mut rest = k;
            let mut off = 0;
            for &s in sites.iter().rev() {
                off += (rest % q) * stride(s);
                rest /= q;
            }
            off
        })
        .collect();
    let trace_off: Vec<usize> = (0..dt)
        .map(|k| {
            let mut rest = k;
            let mut off = 0;
            for &s in traced.iter().rev() {
                off += (rest % q) * stride(s);
                rest /= q;
            }
            off
        })
        .collect();
    let amps = state.amplitudes();
    let mut rho = ComplexMatrix::zeros(dk);
    for i in 0..dk {
        for j in i..dk {
            let v: Complex<T> = trace_off
                .iter()
                .map(|&t| amps[keep_off[i] + t] * amps[keep_off[j] + t].conj())
                .sum();
            rho.set(i, j, v);
            rho.set(j, i, v.conj());
        }
    }
    Ok(rho)
}

/// `ρ_A` for the left block of `left_size` sites.
pub fn reduced_density<T: Real>(state: &StateVector<T>, left_size: usize) -> Result<ComplexMatrix<T>> {
    if left_size == 0 || left_size >= state.n() {
        return Err(Error::Index(format!("cut {left_size} must lie strictly inside 0..{}", state.n())));
    }
    let sites: Vec<usize> = (0..left_size).collect();
    reduced_density_sites(state, &sites)
}

/// Eigenvalues of a density matrix, ascending, with tiny negatives clipped.
pub fn spectrum<T: Real>(rho: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let (vals, _) = hermitian_eigen(rho);
    let clip = T::lit(CLIP);
    vals.into_iter()
        .map(|l| {
            if l < -clip {
                Err(Error::Numerical(format!("density matrix has eigenvalue {:.3e}", l.as_f64())))
            } else {
                Ok(l.max(T::zero()))
            }
        })
        .collect()
}

/// Rényi entropy `S^{(α)} = log tr ρ^α / (1 − α)` in nats, with `α = 1`
/// the von Neumann limit.
pub fn entropy<T: Real>(rho: &ComplexMatrix<T>, renyi_index: T) -> Result<T> {
    if renyi_index.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Precondition(format!("Rényi index must be positive, got {renyi_index}")));
    }
    Ok(entropy_of_spectrum(&spectrum(rho)?, renyi_index))
}

pub fn entropy_of_spectrum<T: Real>(spec: &[T], renyi_index: T) -> T {
    if (renyi_index - T::one()).abs() < T::lit(1e-12) {
        -spec.iter().filter(|&&l| l > T::zero()).map(|&l| l * l.ln()).sum::<T>()
    } else if renyi_index.is_infinite() {
        -spec.iter().fold(T::zero(), |m, &l| m.max(l)).ln()
    } else {
        spec.iter().filter(|&&l| l > T::zero()).map(|&l| l.powf(renyi_index)).sum::<T>().ln() / (T::one() - renyi_index)
    }
}

/// Nonzero eigenvalues (above `tol`) all equal within `tol`.
pub fn is_flat<T: Real>(spec: &[T], tol: T) -> bool {
    let nz: Vec<T> = spec.iter().copied().filter(|&l| l > tol).collect();
    match (nz.first(), nz.last()) {
        (Some(&lo), Some(&hi)) => hi - lo <= tol,
        _ => true,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyProfile<T> {
    pub renyi_index: T,
    pub cut: usize,
    /// Entropy in nats after steps `t = 1..=T`.
    pub values: Vec<T>,
    /// Whether the nonzero spectrum of `ρ_A` was flat at each step.
    pub flat: Vec<bool>,
    pub warnings: Vec<String>,
}

impl<T: Real> EntropyProfile<T> {
    /// Values in units of `log q`.
    pub fn in_dits(&self, q: usize) -> Vec<T> {
        let lq = T::from_usize_lossy(q).ln();
        self.values.iter().map(|&v| v / lq).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Initial<T> {
    /// `|0⟩_Z` on every site.
    Zprod,
    /// `|0⟩_X` on every site.
    Xprod,
    /// `Σ_z c_z|z⟩_Z` on even sites and `|0⟩_X` on odd sites.
    Weighted(Vec<Complex<T>>),
    /// `|0⟩_Z` on even sites and `Σ_x c_x|x⟩_X` on odd sites.
    WeightedX(Vec<Complex<T>>),
}

fn weights_ok<T: Real>(c: &[Complex<T>], q: usize) -> Result<()> {
    if c.len() != q {
        return Err(Error::Shape(format!("{} weights for q = {q}", c.len())));
    }
    let norm: T = c.iter().map(|z| z.norm_sqr()).sum();
    if (norm - T::one()).abs() > T::check_tol() {
        return Err(Error::Precondition(format!("weights have squared norm {norm}, expected 1")));
    }
    Ok(())
}

pub fn initial_state<T: Real>(q: usize, n: usize, initial: &Initial<T>) -> Result<StateVector<T>> {
    let zero_z: Vec<Complex<T>> = (0..q).map(|k| if k == 0 { one() } else { Complex::new(T::zero(), T::zero()) }).collect();
    let plus = x_eigenstate::<T>(q, 0);
    let factors: Vec<Vec<Complex<T>>> = match initial {
        Initial::Zprod => vec![zero_z; n],
        Initial::Xprod => vec![plus; n],
        Initial::Weighted(c) => {
            weights_ok(c, q)?;
            (0..n).map(|x| if x % 2 == 0 { c.clone() } else { plus.clone() }).collect()
        }
        Initial::WeightedX(c) => {
            weights_ok(c, q)?;
            let mixed: Vec<Complex<T>> = (0..q)
                .map(|z| (0..q).map(|k| c[k] * x_eigenstate::<T>(q, k as i64)[z]).sum())
                .collect();
            (0..n).map(|x| if x % 2 == 0 { zero_z.clone() } else { mixed.clone() }).collect()
        }
    };
    StateVector::product(q, &factors)
}

/// Closed-form half-chain entropy after `t ≥ 1` steps of the `F`/`F` circuit.
pub fn expected_growth<T: Real>(q: usize, t: usize, initial: &Initial<T>) -> T {
    let lq = T::from_usize_lossy(q).ln();
    let tt = T::from_usize_lossy(t);
    let shannon = |c: &[Complex<T>]| -> T {
        -c.iter().map(|z| z.norm_sqr()).filter(|&p| p > T::zero()).map(|p| p * p.ln()).sum::<T>()
    };
    match initial {
        Initial::Zprod => (tt - T::one()) * lq,
        Initial::Xprod => tt * lq,
        Initial::Weighted(c) => tt * shannon(c),
        Initial::WeightedX(c) => (tt - T::one()) * shannon(c),
    }
}

/// Evolves an open chain under `u_H = u_V = F_q` and records the entropy of
/// the left half after each step. A warning is attached once the light cone
/// from the cut reaches the chain ends (`t ≥ N/2`).
pub fn growth_check<T: Real>(q: usize, n: usize, t_steps: usize, initial: &Initial<T>, renyi_index: T) -> Result<EntropyProfile<T>> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!("need at least 2 sites, got {n}")));
    }
    let f = crate::chm::fourier::<T>(q)?;
    let spec = CircuitSpec::new(n, f.clone(), f, Boundary::Open)?;
    let cut = n / 2;
    let mut psi = initial_state(q, n, initial)?;
    let mut profile = EntropyProfile { renyi_index, cut, values: Vec::new(), flat: Vec::new(), warnings: Vec::new() };
    for t in 1..=t_steps {
        psi = apply_floquet(&spec, &psi, 1)?;
        let sp = spectrum(&reduced_density(&psi, cut)?)?;
        profile.values.push(entropy_of_spectrum(&sp, renyi_index));
        profile.flat.push(is_flat(&sp, T::check_tol()));
        if t >= cut.min(n - cut) {
            profile.warnings.push(format!("t = {t}: light cone from the cut reaches the chain boundary"));
        }
    }
    Ok(profile)
}

/// Protocol input: half-chain length `N` (total `2N` sites) and a symmetric
/// Hadamard `u_H`; the vertical matrix is `u_H†`.
#[derive(Clone, Debug, PartialEq)]
pub struct RainbowSpec<T> {
    n: usize,
    u_h: ComplexMatrix<T>,
}

impl<T: Real> RainbowSpec<T> {
    pub fn new(n: usize, u_h: ComplexMatrix<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("half-chain length must be positive".into()));
        }
        let report = check_hadamard(&u_h, T::check_tol());
        if !report.is_hadamard() {
            return Err(Error::Precondition("u_H is not a complex Hadamard matrix".into()));
        }
        if !report.is_symmetric {
            return Err(Error::Precondition(format!(
                "rainbow protocol needs a symmetric u_H (asymmetry {:.3e})",
                report.symmetry_deviation.as_f64()
            )));
        }
        Ok(Self { n, u_h })
    }

    pub fn q(&self) -> usize {
        self.u_h.dim()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u_h(&self) -> &ComplexMatrix<T> {
        &self.u_h
    }

    /// 0-based site pairs `(N−j, N+j−1)` for `j = 1..=N`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (1..=self.n).map(|j| (self.n - j, self.n + j - 1)).collect()
    }

    /// Two-site pair state `q⁻¹ Σ conj u_H(a,b) |a b⟩`.
    pub fn pair_state(&self) -> Vec<Complex<T>> {
        let q = self.q();
        let inv_q = T::one() / T::from_usize_lossy(q);
        (0..q * q).map(|i| self.u_h.get(i / q, i % q).conj() * inv_q).collect()
    }
}

/// `[U_vert U_row]^{†N} [U_vert Ũ_row]^N |+⟩^{⊗2N}` on an open chain, where
/// `Ũ_row` lacks the central bond.
pub fn rainbow_protocol<T: Real>(spec: &RainbowSpec<T>) -> Result<StateVector<T>> {
    let (q, n) = (spec.q(), spec.n);
    let u_v = spec.u_h.adjoint();
    let cut = CircuitSpec::new(2 * n, spec.u_h.clone(), u_v.clone(), Boundary::BondRemoved(n - 1))?;
    let full = CircuitSpec::new(2 * n, spec.u_h.clone(), u_v, Boundary::Open)?;
    let plus = vec![x_eigenstate::<T>(q, 0); 2 * n];
    let mut psi = apply_floquet(&cut, &StateVector::product(q, &plus)?, n)?;
    let row_conj: Vec<Complex<T>> = crate::statevector::build_u_row(&full)?.into_iter().map(|z| z.conj()).collect();
    let v_dag = full.vertical_site().adjoint();
    for _ in 0..n {
        for x in 0..2 * n {
            psi.apply_site(x, &v_dag)?;
        }
        psi.apply_diagonal(&row_conj)?;
    }
    Ok(psi)
}

/// Analytic rainbow: pair states on `(N−j, N+j−1)` for `j = 1..=N`.
pub fn predicted_rainbow<T: Real>(spec: &RainbowSpec<T>) -> Result<StateVector<T>> {
    let (q, n) = (spec.q(), spec.n);
    let total = 2 * n;
    let dim = crate::statevector::checked_dim(q, total, crate::statevector::STATE_CAP)?;
    let pair = spec.pair_state();
    let pairs = spec.pairs();
    let amps = (0..dim)
        .map(|idx| {
            let digit = |x: usize| (idx / q.pow((total - 1 - x) as u32)) % q;
            pairs.iter().fold(one::<T>(), |acc, &(l, r)| acc * pair[digit(l) * q + digit(r)])
        })
        .collect();
    StateVector::new(q, total, amps)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RainbowReport<T> {
    pub q: usize,
    pub n: usize,
    /// `|⟨predicted|protocol⟩|`.
    pub fidelity: T,
    /// `⟨ψ_pair|ρ_pair|ψ_pair⟩` for each pair, innermost first.
    pub pair_fidelities: Vec<T>,
    /// Entropy across the central cut in nats.
    pub middle_entropy: T,
}

impl<T: Real> RainbowReport<T> {
    pub fn passes(&self, tol: T) -> bool {
        (T::one() - self.fidelity).abs() <= tol && self.pair_fidelities.iter().all(|&f| (T::one() - f).abs() <= tol)
    }
}

impl<T: Real> fmt::Display for RainbowReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rainbow q={} N={}", self.q, self.n)?;
        writeln!(f, "fidelity {:.12}", self.fidelity.as_f64())?;
        for (j, pf) in self.pair_fidelities.iter().enumerate() {
            writeln!(f, "pair {} ({}, {}) fidelity {:.12}", j + 1, self.n - j - 1, self.n + j, pf.as_f64())?;
        }
        write!(f, "middle entropy {:.12} (N log q = {:.12})", self.middle_entropy.as_f64(), self.n as f64 * (self.q as f64).ln())
    }
}

pub fn rainbow_report<T: Real>(spec: &RainbowSpec<T>) -> Result<RainbowReport<T>> {
    let out = rainbow_protocol(spec)?;
    let pred = predicted_rainbow(spec)?;
    let pair = spec.pair_state();
    let pair_fidelities = spec
        .pairs()
        .into_iter()
        .map(|(l, r)| {
            let rho = reduced_density_sites(&out, &[l, r])?;
            let v = rho.mul_vec(&pair);
            Ok(pair.iter().zip(&v).map(|(a, b)| a.conj() * b).sum::<Complex<T>>().re)
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(RainbowReport {
        q: spec.q(),
        n: spec.n,
        fidelity: pred.inner(&out)?.norm(),
        pair_fidelities,
        middle_entropy: entropy(&reduced_density(&out, spec.n)?, T::one())?,
    })
}
