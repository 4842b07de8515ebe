//! Gliders, soliton swaps, conserved charges, parafermion strings, the
//! set-theoretic Yang-Baxter check and glider counting.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::chm::{check_hadamard, require_hadamard};
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::statevector::{apply_pair_raw, brickwork_gate, checked_dim, floquet, x_eigenstate, CircuitSpec, DENSE_CAP};
use crate::weyl::SymplecticString;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GliderDirection {
    Plus,
    Minus,
}

impl GliderDirection {
    pub fn symbol(self) -> char {
        match self {
            GliderDirection::Plus => '+',
            GliderDirection::Minus => '-',
        }
    }

    /// Site shift per Floquet step.
    pub fn shift(self) -> isize {
        match self {
            GliderDirection::Plus => 1,
            GliderDirection::Minus => -1,
        }
    }
}

/// Two-site glider on sites `(j, j+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GliderOperator<T> {
    pub q: usize,
    pub site: usize,
    pub direction: GliderDirection,
    /// `q² × q²` matrix, row index `d_j·q + d_{j+1}`.
    pub matrix: ComplexMatrix<T>,
}

fn glider_matrix<T: Real>(u_h: &ComplexMatrix<T>, direction: GliderDirection) -> ComplexMatrix<T> {
    let q = u_h.dim();
    let mut g = ComplexMatrix::zeros(q * q);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let v = u_h.get(a, b).conj() * u_h.get(a, c);
                match direction {
                    GliderDirection::Plus => g.set(a * q + b, a * q + c, v),
                    GliderDirection::Minus => g.set(b * q + a, c * q + a, v),
                }
            }
        }
    }
    g
}

/// `g⁺ = Σ conj u_H(a,b) u_H(a,c) |a⟩⟨a| ⊗ |b⟩⟨c|`, and its mirror image `g⁻`.
pub fn glider<T: Real>(u_h: &ComplexMatrix<T>, direction: GliderDirection, j: usize) -> Result<GliderOperator<T>> {
    require_symmetric_hadamard(u_h)?;
    Ok(GliderOperator { q: u_h.dim(), site: j, direction, matrix: glider_matrix(u_h, direction) })
}

fn require_symmetric_hadamard<T: Real>(u_h: &ComplexMatrix<T>) -> Result<()> {
    require_hadamard(u_h, "u_H")?;
    let report = check_hadamard(u_h, T::check_tol());
    if !report.is_symmetric {
        return Err(Error::Precondition(format!(
            "u_H must be symmetric (asymmetry {:.3e})",
            report.symmetry_deviation.as_f64()
        )));
    }
    Ok(())
}

fn require_adjoint<T: Real>(u_h: &ComplexMatrix<T>, u_v: &ComplexMatrix<T>) -> Result<()> {
    if u_h.dim() != u_v.dim() || u_v.max_abs_diff(&u_h.adjoint()) > T::check_tol() {
        return Err(Error::Precondition("u_V must equal u_H†".into()));
    }
    Ok(())
}

/// Checks `U(|+⟩⊗|ψ⟩) ∝ |ψ⟩⊗|+⟩` and `U(|ψ⟩⊗|+⟩) ∝ |+⟩⊗|ψ⟩` on a basis of
/// `|ψ⟩`, for the brickwork gate `U` of `(u_H, u_V)`. A single phase is
/// fixed per gate from the first comparison.
pub fn soliton_swap_check<T: Real>(u_h: &ComplexMatrix<T>, u_v: &ComplexMatrix<T>) -> Result<bool> {
    require_adjoint(u_h, u_v)?;
    let gate = brickwork_gate(u_h, u_v)?;
    let q = u_h.dim();
    let plus = x_eigenstate::<T>(q, 0);
    let tol = T::check_tol();
    let mut phase: Option<Complex<T>> = None;
    for k in 0..q {
        let e: Vec<Complex<T>> = (0..q).map(|i| if i == k { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::zero()) }).collect();
        let kron = |x: &[Complex<T>], y: &[Complex<T>]| x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect::<Vec<_>>();
        for (input, expect) in [(kron(&plus, &e), kron(&e, &plus)), (kron(&e, &plus), kron(&plus, &e))] {
            let out = gate.mul_vec(&input);
            let overlap: Complex<T> = expect.iter().zip(&out).map(|(a, b)| a.conj() * b).sum();
            if (overlap.norm() - T::one()).abs() > tol {
                return Ok(false);
            }
            match phase {
                None => phase = Some(overlap),
                Some(p) if (p - overlap).norm() > tol => return Ok(false),
                _ => {}
            }
        }
    }
    Ok(true)
}

/// Dense embedding of a two-site operator on periodic sites `(j, j+1)`.
pub fn embed_two_site<T: Real>(g: &ComplexMatrix<T>, q: usize, n: usize, j: usize) -> Result<ComplexMatrix<T>> {
    let dim = checked_dim(q, n, DENSE_CAP)?;
    if g.dim() != q * q || n < 2 || j >= n {
        return Err(Error::Shape(format!("two-site operator of dimension {} at site {j} of {n}", g.dim())));
    }
    let mut m = ComplexMatrix::<T>::identity(dim);
    left_apply_pair(&mut m, g, q, n, j, (j + 1) % n);
    Ok(m)
}

/// `M ← G_{s1,s2}·M` column by column.
fn left_apply_pair<T: Real>(m: &mut ComplexMatrix<T>, g: &ComplexMatrix<T>, q: usize, n: usize, s1: usize, s2: usize) {
    let dim = m.dim();
    let mut col = vec![Complex::new(T::zero(), T::zero()); dim];
    for c in 0..dim {
        for (r, slot) in col.iter_mut().enumerate() {
            *slot = m.get(r, c);
        }
        apply_pair_raw(&mut col, q, n, s1, s2, g);
        for (r, v) in col.iter().enumerate() {
            m.set(r, c, *v);
        }
    }
}

/// `Floquet·g_j·Floquet† = g_{j±1}` up to a global phase.
pub fn glider_translation_check<T: Real>(spec: &CircuitSpec<T>, g: &GliderOperator<T>) -> Result<bool> {
    require_adjoint(spec.u_h(), spec.u_v())?;
    let (q, n) = (spec.q(), spec.n());
    if n < 4 {
        return Err(Error::InvalidDimension(format!("translation check needs N ≥ 4, got {n}")));
    }
    if g.q != q {
        return Err(Error::Shape(format!("glider has q = {}, circuit has q = {q}", g.q)));
    }
    let u = floquet(spec)?;
    let before = embed_two_site(&g.matrix, q, n, g.site % n)?;
    let target = (g.site as isize + g.direction.shift()).rem_euclid(n as isize) as usize;
    let after = embed_two_site(&g.matrix, q, n, target)?;
    let moved = u.matmul(&before).matmul(&u.adjoint());
    Ok(moved.max_abs_diff_up_to_phase(&after) <= T::check_tol())
}

/// Charge label: direction and the pattern `n₁ … n_{k−1}` of interior
/// factors, each either the glider (`true`) or the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChargeSpec {
    pub direction: GliderDirection,
    pub pattern: Vec<bool>,
}

impl ChargeSpec {
    pub fn new(direction: GliderDirection, pattern: Vec<bool>) -> Self {
        Self { direction, pattern }
    }

    /// Support parameter `k`; the charge density acts on `k + 2` sites.
    pub fn k(&self) -> usize {
        self.pattern.len() + 1
    }
}

impl fmt::Display for ChargeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.direction.symbol())?;
        for &p in &self.pattern {
            write!(f, "{}", if p { self.direction.symbol() } else { '0' })?;
        }
        Ok(())
    }
}

/// Parses `"+:0+"` style labels: direction, colon, interior pattern.
impl FromStr for ChargeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (dir, pattern) = s.split_once(':').unwrap_or((s, ""));
        let direction = match dir.trim() {
            "+" | "plus" => GliderDirection::Plus,
            "-" | "minus" => GliderDirection::Minus,
            other => return Err(Error::Parse(format!("unknown charge direction {other:?}"))),
        };
        let pattern = pattern
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                c if c == direction.symbol() => Ok(true),
                c => Err(Error::Parse(format!("pattern symbol {c:?} does not match direction {}", direction.symbol()))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { direction, pattern })
    }
}

/// `Q = Σ_j g_j g^{(n₁)}_{j+1} ⋯ g^{(n_{k−1})}_{j+k−1} g_{j+k}` over a
/// periodic chain, built densely.
pub fn conserved_charge<T: Real>(spec: &CircuitSpec<T>, charge: &ChargeSpec) -> Result<ComplexMatrix<T>> {
    require_adjoint(spec.u_h(), spec.u_v())?;
    let (q, n) = (spec.q(), spec.n());
    let k = charge.k();
    if k + 2 > n {
        return Err(Error::Shape(format!("charge with k = {k} needs {} sites, chain has {n}", k + 2)));
    }
    let dim = checked_dim(q, n, DENSE_CAP)?;
    let g = glider(spec.u_h(), charge.direction, 0)?.matrix;
    let mut factors = vec![true];
    factors.extend(&charge.pattern);
    factors.push(true);
    let mut total = ComplexMatrix::zeros(dim);
    for j in 0..n {
        let mut term = ComplexMatrix::identity(dim);
        for (offset, &present) in factors.iter().enumerate().rev() {
            if present {
                let s = (j + offset) % n;
                left_apply_pair(&mut term, &g, q, n, s, (s + 1) % n);
            }
        }
        total = &total + &term;
    }
    Ok(total)
}

/// Residual `max|U₁₂U₂₃U₁₂ − U₂₃U₁₂U₂₃|` on three sites and whether it is
/// below `tol`.
pub fn ybe_check<T: Real>(gate: &ComplexMatrix<T>, tol: T) -> Result<(bool, T)> {
    let q = (gate.dim() as f64).sqrt().round() as usize;
    if q * q != gate.dim() || q < 2 {
        return Err(Error::Shape(format!("gate dimension {} is not q²", gate.dim())));
    }
    let id = ComplexMatrix::identity(q);
    let u12 = gate.kron(&id);
    let u23 = id.kron(gate);
    let lhs = u12.matmul(&u23).matmul(&u12);
    let rhs = u23.matmul(&u12).matmul(&u23);
    let residual = lhs.max_abs_diff(&rhs);
    Ok((residual < tol, residual))
}

/// The brickwork gate with `u_V = u_H†` used for the braiding check.
pub fn ybe_gate<T: Real>(u_h: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    brickwork_gate(u_h, &u_h.adjoint())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    X,
    Z,
}

/// `Ψ_X(j) = (∏_{k<j} Z_k X_k⁻¹) X_j⁻¹` and `Ψ_Z(j) = (∏_{k<j} Z_k X_k⁻¹) Z_j`
/// on an open chain, `j` counted from 1.
pub fn parafermion(q: u32, n: usize, j: usize, flavor: Flavor) -> Result<SymplecticString> {
    if j == 0 || j > n {
        return Err(Error::Index(format!("parafermion site {j} outside 1..={n}")));
    }
    let mut a = vec![0i64; n];
    let mut b = vec![0i64; n];
    for k in 0..j - 1 {
        a[k] = 1;
        b[k] = -1;
    }
    match flavor {
        Flavor::X => b[j - 1] = -1,
        Flavor::Z => a[j - 1] = 1,
    }
    SymplecticString::new(q, a, b)
}

/// Dimension of the space of two-site operators `O` with
/// `Floquet·O_{j,j+1}·Floquet† = O_{j±1,j±2}` on an infinite chain, for
/// `u_V = u_H†`. The identity is always counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GliderCompleteness {
    pub q: usize,
    pub right: usize,
    pub left: usize,
}

impl GliderCompleteness {
    pub fn right_nontrivial(&self) -> usize {
        self.right - 1
    }

    pub fn left_nontrivial(&self) -> usize {
        self.left - 1
    }

    /// `q` independent gliders per direction, as for the Fourier circuit.
    pub fn spans(&self) -> bool {
        self.right >= self.q && self.left >= self.q
    }
}

/// Solves for right movers exactly. Writing `Floquet = V^{⊗N} D` with `D`
/// the bond phases, the condition is `D O₁₂ D† = 1 ⊗ (V⊗V)† O (V⊗V)` on
/// sites 1..3. Diagonality on site 1 and independence of its label leave
/// `O = (V⊗V) W(c) (V⊗V)†` with
/// `W(c) = Σ c(x,y) u(x,t) conj u(y,t) |x t⟩⟨y t|`, linear in `q²` unknowns.
fn right_mover_count<T: Real>(bond: &ComplexMatrix<T>, u_v: &ComplexMatrix<T>) -> usize {
    let q = bond.dim();
    let v = u_v.scale_real(T::one() / T::from_usize_lossy(q).sqrt());
    let unknowns = q * q;
    let mut rows: Vec<Complex<T>> = Vec::new();
    // K[(r1 r2),(s1 s2)] as a row over c(x, y)
    let kernel_row = |r1: usize, r2: usize, s1: usize, s2: usize| -> Vec<Complex<T>> {
        let mut row = vec![Complex::new(T::zero(), T::zero()); unknowns];
        for x in 0..q {
            for y in 0..q {
                let mut acc = Complex::new(T::zero(), T::zero());
                for t in 0..q {
                    acc += bond.get(x, t) * bond.get(y, t).conj() * v.get(r1, x) * v.get(r2, t) * (v.get(s1, y) * v.get(s2, t)).conj();
                }
                row[x * q + y] = acc;
            }
        }
        row
    };
    for r1 in 0..q {
        for s1 in 0..q {
            for r2 in 0..q {
                for s2 in 0..q {
                    let mut row = kernel_row(r1, r2, s1, s2);
                    if r1 == s1 {
                        let w = bond.get(r1, r2) * bond.get(r1, s2).conj();
                        row.iter_mut().for_each(|z| *z *= w);
                        row[r2 * q + s2] -= Complex::new(T::one(), T::zero());
                    }
                    rows.extend(row);
                }
            }
        }
    }
    unknowns - rank(q.pow(4), unknowns, &rows, T::check_tol())
}

pub fn glider_completeness<T: Real>(u_h: &ComplexMatrix<T>) -> Result<GliderCompleteness> {
    require_hadamard(u_h, "u_H")?;
    let u_v = u_h.adjoint();
    Ok(GliderCompleteness {
        q: u_h.dim(),
        right: right_mover_count(u_h, &u_v),
        // mirror the chain: bonds read u_H(z_{x+1}, z_x)
        left: right_mover_count(&u_h.transpose(), &u_v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chm::{builtin, f4_family, fourier, printed_symmetric_six, sinkhorn_refine, sinkhorn_symmetric};
    use crate::statevector::Boundary;
    use crate::weyl::{pauli_matrix, PauliExponent};

    type C = Complex<f64>;

    fn f(q: usize) -> ComplexMatrix<f64> {
        fourier(q).unwrap()
    }

    fn kron_pauli(q: usize, a1: i64, b1: i64, a2: i64, b2: i64) -> ComplexMatrix<f64> {
        pauli_matrix::<f64>(PauliExponent::new(q as u32, a1, b1)).kron(&pauli_matrix(PauliExponent::new(q as u32, a2, b2)))
    }

    #[test]
    fn fourier_glider_decomposition() {
        for q in 2..6usize {
            let plus = glider(&f(q).adjoint(), GliderDirection::Plus, 0).unwrap().matrix;
            let minus = glider(&f(q).adjoint(), GliderDirection::Minus, 0).unwrap().matrix;
            let mut sp = ComplexMatrix::zeros(q * q);
            let mut sm = ComplexMatrix::zeros(q * q);
            for n in 0..q as i64 {
                sp = &sp + &kron_pauli(q, n, 0, 0, -n);
                sm = &sm + &kron_pauli(q, 0, -n, n, 0);
            }
            assert!(plus.max_abs_diff(&sp) < 1e-10);
            assert!(minus.max_abs_diff(&sm) < 1e-10);
            // with u_H = F the X powers flip sign
            let plus_f = glider(&f(q), GliderDirection::Plus, 0).unwrap().matrix;
            let mut s = ComplexMatrix::zeros(q * q);
            for n in 0..q as i64 {
                s = &s + &kron_pauli(q, n, 0, 0, n);
            }
            assert!(plus_f.max_abs_diff(&s) < 1e-10);
        }
        let g = glider(&f(2), GliderDirection::Plus, 0).unwrap().matrix;
        let expect = &ComplexMatrix::identity(4) + &kron_pauli(2, 1, 0, 0, 1);
        assert!(g.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn gliders_are_scaled_projectors() {
        let mats: Vec<ComplexMatrix<f64>> = vec![f(3), builtin("k3").unwrap(), f4_family(0.7), sinkhorn_symmetric(6, 1, 1e-12, 10000).unwrap()];
        for u in mats {
            let q = u.dim();
            for dir in [GliderDirection::Plus, GliderDirection::Minus] {
                let g = glider(&u, dir, 0).unwrap().matrix;
                assert!(g.matmul(&g).max_abs_diff(&g.scale_real(q as f64)) < 1e-9);
            }
            // g⁺ = D†(1 ⊗ q|+⟩⟨+|)D with D = diag u_H(a,b)
            let d: Vec<C> = (0..q * q).map(|i| u.get(i / q, i % q)).collect();
            let ones = ComplexMatrix::from_fn(q, |_, _| C::new(1.0, 0.0));
            let proj = ComplexMatrix::identity(q).kron(&ones);
            let conj: Vec<C> = d.iter().map(|z| z.conj()).collect();
            let built = proj.diag_mul_left(&conj).diag_mul_right(&d);
            assert!(glider(&u, GliderDirection::Plus, 0).unwrap().matrix.max_abs_diff(&built) < 1e-10);
        }
        let asym = ComplexMatrix::from_fn(3, |r, c| f(3).get((3 - r) % 3, (c + 1) % 3));
        assert!(glider(&asym, GliderDirection::Plus, 0).is_err());
    }

    #[test]
    fn soliton_swaps() {
        let mats: Vec<ComplexMatrix<f64>> = vec![f(2), builtin("k3").unwrap(), builtin("k3potts").unwrap(), sinkhorn_symmetric(6, 1, 1e-12, 10000).unwrap()];
        for u in mats {
            assert!(soliton_swap_check(&u, &u.adjoint()).unwrap());
        }
        // without symmetry only |+⟩⊗|ψ⟩ → |ψ⟩⊗|+⟩ survives
        let asym = ComplexMatrix::from_fn(3, |r, c| f(3).get((3 - r) % 3, (c + 1) % 3));
        assert!(!soliton_swap_check(&asym, &asym.adjoint()).unwrap());
        assert!(soliton_swap_check(&f(3), &f(3)).is_err());
    }

    #[test]
    fn gliders_translate() {
        let k3p = builtin::<f64>("k3potts").unwrap();
        for (u, n) in [(k3p, 4usize), (f(2), 6), (f4_family(0.3), 4)] {
            let spec = CircuitSpec::new(n, u.clone(), u.adjoint(), Boundary::Periodic).unwrap();
            for dir in [GliderDirection::Plus, GliderDirection::Minus] {
                for j in [0, n - 1] {
                    let g = glider(&u, dir, j).unwrap();
                    assert!(glider_translation_check(&spec, &g).unwrap());
                }
            }
            let id = GliderOperator { q: u.dim(), site: 1, direction: GliderDirection::Plus, matrix: ComplexMatrix::identity(u.dim().pow(2)) };
            assert!(glider_translation_check(&spec, &id).unwrap());
        }
    }

    #[test]
    fn charges_are_conserved() {
        let k3p = builtin::<f64>("k3potts").unwrap();
        let spec = CircuitSpec::new(5, k3p.clone(), k3p.adjoint(), Boundary::Periodic).unwrap();
        let u = floquet(&spec).unwrap();
        let labels = ["+:", "+:0", "+:+", "-:", "-:-0"];
        let charges: Vec<ComplexMatrix<f64>> = labels.iter().map(|l| conserved_charge(&spec, &l.parse().unwrap()).unwrap()).collect();
        for q in &charges {
            assert!(q.commutator_norm(&u) < 1e-8);
            assert!(q.max_abs() > 1e-3);
        }
        // opposite movers commute; overlapping same-direction gliders do not
        assert!(charges[0].commutator_norm(&charges[3]) < 1e-8);
        assert!(charges[2].commutator_norm(&charges[4]) < 1e-8);
        assert!(charges[0].commutator_norm(&charges[1]) > 1e-3);
        let too_long: ChargeSpec = "+:0+0".parse().unwrap();
        assert!(matches!(conserved_charge(&spec, &too_long), Err(Error::Shape(_))));
        assert!("+:-".parse::<ChargeSpec>().is_err());
        assert_eq!("-:0-".parse::<ChargeSpec>().unwrap().to_string(), "-:0-");
    }

    #[test]
    fn smallest_charge_definition() {
        let spec = CircuitSpec::new(4, f(3), f(3), Boundary::Periodic).unwrap();
        assert!(conserved_charge(&spec, &"+:".parse().unwrap()).is_err());
        let spec = CircuitSpec::new(4, f(2), f(2).adjoint(), Boundary::Periodic).unwrap();
        let q1 = conserved_charge(&spec, &"+:".parse().unwrap()).unwrap();
        let g = glider(&f(2), GliderDirection::Plus, 0).unwrap().matrix;
        let mut expect = ComplexMatrix::zeros(16);
        for j in 0..4 {
            let term = embed_two_site(&g, 2, 4, j).unwrap().matmul(&embed_two_site(&g, 2, 4, (j + 1) % 4).unwrap());
            expect = &expect + &term;
        }
        assert!(q1.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn yang_baxter_cases() {
        for u in [f(2), builtin("k3").unwrap(), f4_family(0.0), f4_family(0.7), f4_family(std::f64::consts::FRAC_PI_3)] {
            let (ok, res) = ybe_check(&ybe_gate(&u).unwrap(), 1e-10).unwrap();
            assert!(ok, "residual {res}");
        }
        for q in 2..6 {
            for seed in 0..3 {
                let u = sinkhorn_symmetric::<f64>(q, seed, 1e-12, 10000).unwrap();
                assert!(ybe_check(&ybe_gate(&u).unwrap(), 1e-8).unwrap().0);
            }
        }
        let printed = printed_symmetric_six::<f64>();
        let refined = sinkhorn_refine(&printed, 1e-12, 10000).unwrap();
        let (ok, res) = ybe_check(&ybe_gate(&refined).unwrap(), 1e-8).unwrap();
        assert!(!ok && res > 1e-2);
    }

    #[test]
    fn parafermion_strings() {
        let p = parafermion(3, 4, 1, Flavor::X).unwrap();
        assert_eq!(p, SymplecticString::single(3, 4, 0, 0, -1));
        for j in 1..4 {
            let lhs = parafermion(3, 4, j, Flavor::X).unwrap().scale(-1).add(&parafermion(3, 4, j + 1, Flavor::X).unwrap());
            let mut expect = SymplecticString::single(3, 4, j - 1, 1, 0);
            expect.set_site(j, PauliExponent::new(3, 0, -1));
            assert_eq!(lhs, expect);
            let lhs = parafermion(3, 4, j, Flavor::Z).unwrap().scale(-1).add(&parafermion(3, 4, j + 1, Flavor::Z).unwrap());
            // the left glider X_j⁻¹ Z_{j+1}
            let mut expect = SymplecticString::single(3, 4, j - 1, 0, -1);
            expect.set_site(j, PauliExponent::new(3, 1, 0));
            assert_eq!(lhs, expect);
        }
        assert!(parafermion(3, 4, 0, Flavor::X).is_err());
    }

    #[test]
    fn parafermion_algebra() {
        let (q, n) = (3u32, 3usize);
        let w = crate::chm::omega_pow::<f64>(3, 1);
        let m = |j, fl| parafermion(q, n, j, fl).unwrap().to_matrix::<f64>();
        let check = |a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>, phase: C| a.matmul(b).max_abs_diff(&b.matmul(a).scale(phase)) < 1e-12;
        let pw = |s: i64| crate::chm::omega_pow::<f64>(3, s);
        for j in 1..=n {
            for k in 1..=n {
                let s = (j as i64 - k as i64).signum();
                assert!(check(&m(j, Flavor::X), &m(k, Flavor::X), pw(s)));
                assert!(check(&m(j, Flavor::Z), &m(k, Flavor::Z), pw(-s)));
                // mixed pairs pick up ω⁻¹ for every j, k
                assert!(check(&m(j, Flavor::X), &m(k, Flavor::Z), pw(-1)));
            }
            assert!(check(&m(j, Flavor::Z), &m(j, Flavor::X), w));
        }
    }

    #[test]
    fn glider_counts() {
        let cases: Vec<(ComplexMatrix<f64>, usize)> = vec![
            (f(2), 2),
            (f(3), 3),
            (builtin("k3").unwrap(), 3),
            (f(4), 4),
            (f4_family(0.3), 3),
            (sinkhorn_symmetric(6, 1, 1e-12, 10000).unwrap(), 2),
        ];
        for (u, expect) in cases {
            let c = glider_completeness(&u).unwrap();
            assert_eq!((c.right, c.left), (expect, expect), "q = {}", u.dim());
        }
        assert!(glider_completeness(&f(3)).unwrap().spans());
        let six = glider_completeness(&sinkhorn_symmetric::<f64>(6, 1, 1e-12, 10000).unwrap()).unwrap();
        assert_eq!(six.right_nontrivial(), 1);
        assert!(!six.spans());
    }
}
