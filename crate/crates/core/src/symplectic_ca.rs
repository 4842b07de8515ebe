//! Exact mod-q operator dynamics of the coupled Clifford cat lattice.
//!
//! A Floquet step is a horizontal Fourier coupling (`F` or `F†`) on every
//! periodic bond followed by the on-site cat map `C(α,δ)`. Exponents of a
//! Pauli string then obey, for the `F` variant,
//!
//! ```text
//! a'ₓ = α(aₓ − bₓ₋₁ − bₓ₊₁) + (αδ − 1)bₓ
//! b'ₓ = aₓ − bₓ₋₁ − bₓ₊₁ + δbₓ
//! ```
//!
//! and the same with the neighbour signs flipped for `F†`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::weyl::{modq, SymplecticString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Horizontal {
    F,
    Fdagger,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutomatonClass {
    Glider,
    Fractal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaConfig {
    pub q: u32,
    pub n: usize,
    pub alpha: i64,
    pub delta: i64,
    pub horizontal: Horizontal,
}

impl CaConfig {
    pub fn new(q: u32, n: usize, alpha: i64, delta: i64, horizontal: Horizontal) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidDimension(format!("q must be at least 2, got {q}")));
        }
        if n < 2 {
            return Err(Error::InvalidDimension(format!("need at least 2 sites, got {n}")));
        }
        Ok(Self { q, n, alpha, delta, horizontal })
    }

    pub fn class(&self) -> AutomatonClass {
        classify(self.alpha, self.delta, self.q)
    }
}

/// Space-time record of exponents, one row per time step `t = 0..=T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaGrid {
    q: u32,
    a: Vec<Vec<u32>>,
    b: Vec<Vec<u32>>,
}

impl CaGrid {
    pub fn from_rows(q: u32, a: Vec<Vec<u32>>, b: Vec<Vec<u32>>) -> Result<Self> {
        let width = a.first().map_or(0, Vec::len);
        if a.len() != b.len() || a.is_empty() || a.iter().chain(&b).any(|r| r.len() != width) {
            return Err(Error::Shape("grid rows must be non-empty and of equal width".into()));
        }
        if a.iter().chain(&b).flatten().any(|&v| v >= q) {
            return Err(Error::Shape(format!("grid entries must lie in [0, {q})")));
        }
        Ok(Self { q, a, b })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of recorded steps `T` (rows minus one).
    pub fn steps(&self) -> usize {
        self.a.len() - 1
    }

    pub fn width(&self) -> usize {
        self.a[0].len()
    }

    pub fn a_row(&self, t: usize) -> &[u32] {
        &self.a[t]
    }

    pub fn b_row(&self, t: usize) -> &[u32] {
        &self.b[t]
    }

    pub fn a_rows(&self) -> &[Vec<u32>] {
        &self.a
    }

    pub fn b_rows(&self) -> &[Vec<u32>] {
        &self.b
    }

    pub fn row_string(&self, t: usize) -> SymplecticString {
        SymplecticString::from_residues(self.q, self.a[t].clone(), self.b[t].clone())
    }

    /// Sites with nonzero `a` or `b` at time `t`.
    pub fn support(&self, t: usize) -> Vec<usize> {
        (0..self.width()).filter(|&x| self.a[t][x] != 0 || self.b[t][x] != 0).collect()
    }
}

pub fn classify(alpha: i64, delta: i64, q: u32) -> AutomatonClass {
    if (alpha + delta).rem_euclid(q as i64) == 0 {
        AutomatonClass::Glider
    } else {
        AutomatonClass::Fractal
    }
}

/// Laurent polynomial `Σ cₖ uᵏ` over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    pub min_power: i32,
    pub coeffs: Vec<i64>,
}

impl LaurentPoly {
    pub fn constant(c: i64) -> Self {
        Self { min_power: 0, coeffs: vec![c] }.trimmed()
    }

    /// `c·(u + u⁻¹)`.
    pub fn symmetric(c: i64) -> Self {
        Self { min_power: -1, coeffs: vec![c, 0, c] }.trimmed()
    }

    pub fn coeff(&self, power: i32) -> i64 {
        let i = power - self.min_power;
        if i < 0 {
            0
        } else {
            self.coeffs.get(i as usize).copied().unwrap_or(0)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.min_power.min(other.min_power);
        let hi = (self.min_power + self.coeffs.len() as i32).max(other.min_power + other.coeffs.len() as i32);
        Self { min_power: lo, coeffs: (lo..hi).map(|p| self.coeff(p) + other.coeff(p)).collect() }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        self.coeffs.drain(..lead);
        self.min_power += lead as i32;
        if self.coeffs.is_empty() {
            self.min_power = 0;
        }
        self
    }

    /// Convolution with a periodic row: `(p·r)ₓ = Σₖ cₖ r_{x−k}` mod `q`.
    pub fn act(&self, row: &[u32], q: u32) -> Vec<u32> {
        let n = row.len() as i64;
        (0..n)
            .map(|x| {
                let s: i64 = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| c * row[(x - (self.min_power as i64 + i as i64)).rem_euclid(n) as usize] as i64)
                    .sum();
                modq(s, q)
            })
            .collect()
    }
}

/// Symbolic one-step matrix `M(u, u⁻¹)` acting on `(a(u), b(u))` with
/// `a(u) = Σₓ aₓ uˣ`.
pub fn transfer_matrix(alpha: i64, delta: i64, horizontal: Horizontal) -> [[LaurentPoly; 2]; 2] {
    let s = match horizontal {
        Horizontal::Fdagger => 1,
        Horizontal::F => -1,
    };
    [
        [LaurentPoly::constant(alpha), LaurentPoly::constant(alpha * delta - 1).add(&LaurentPoly::symmetric(s * alpha))],
        [LaurentPoly::constant(1), LaurentPoly::constant(delta).add(&LaurentPoly::symmetric(s))],
    ]
}

/// Trace `u⁻¹ + (α+δ) + u` of the `F†` transfer matrix.
pub fn characteristic_trace(alpha: i64, delta: i64) -> LaurentPoly {
    LaurentPoly::symmetric(1).add(&LaurentPoly::constant(alpha + delta))
}

fn check_row(cfg: &CaConfig, a: &[u32], b: &[u32]) -> Result<()> {
    if a.len() != cfg.n || b.len() != cfg.n {
        return Err(Error::Shape(format!("rows of length {} and {} for {} sites", a.len(), b.len(), cfg.n)));
    }
    if a.iter().chain(b).any(|&v| v >= cfg.q) {
        return Err(Error::Shape(format!("entries must lie in [0, {})", cfg.q)));
    }
    Ok(())
}

/// One Floquet step of the exponent rows.
pub fn step(cfg: &CaConfig, a: &[u32], b: &[u32]) -> Result<(Vec<u32>, Vec<u32>)> {
    check_row(cfg, a, b)?;
    Ok(step_unchecked(cfg, a, b))
}

fn step_unchecked(cfg: &CaConfig, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let n = cfg.n;
    let sign = match cfg.horizontal {
        Horizontal::F => -1,
        Horizontal::Fdagger => 1,
    };
    let (alpha, delta) = (cfg.alpha, cfg.delta);
    let mut a_next = Vec::with_capacity(n);
    let mut b_next = Vec::with_capacity(n);
    for x in 0..n {
        let kicked = a[x] as i64 + sign * (b[(x + n - 1) % n] as i64 + b[(x + 1) % n] as i64);
        let bx = b[x] as i64;
        a_next.push(modq(alpha * kicked + (alpha * delta - 1) * bx, cfg.q));
        b_next.push(modq(kicked + delta * bx, cfg.q));
    }
    (a_next, b_next)
}

pub fn step_string(cfg: &CaConfig, s: &SymplecticString) -> Result<SymplecticString> {
    if s.q() != cfg.q {
        return Err(Error::Shape(format!("string has q = {}, config has q = {}", s.q(), cfg.q)));
    }
    let (a, b) = step(cfg, s.a(), s.b())?;
    Ok(SymplecticString::from_residues(cfg.q, a, b))
}

/// Runs `t_steps` steps from `initial`, recording every row.
pub fn evolve(cfg: &CaConfig, initial: &SymplecticString, t_steps: usize) -> Result<CaGrid> {
    if initial.q() != cfg.q {
        return Err(Error::Shape(format!("string has q = {}, config has q = {}", initial.q(), cfg.q)));
    }
    check_row(cfg, initial.a(), initial.b())?;
    let mut a = vec![initial.a().to_vec()];
    let mut b = vec![initial.b().to_vec()];
    for t in 0..t_steps {
        let (na, nb) = step_unchecked(cfg, &a[t], &b[t]);
        a.push(na);
        b.push(nb);
    }
    Ok(CaGrid { q: cfg.q, a, b })
}

/// The `2q` glider generators at bond `(j, j+1)` for the `F†` variant with
/// `α + δ ≡ 0`: right movers `Z_j^n Z_{j+1}^{δn} X_{j+1}^{−n}` and left
/// movers `Z_j^{δn} X_j^{−n} Z_{j+1}^n` for `n = 0..q`. At `α = δ = 0` these
/// reduce to `Z_j^n X_{j+1}^{−n}` and `X_j^{−n} Z_{j+1}^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GliderSet {
    pub right: Vec<SymplecticString>,
    pub left: Vec<SymplecticString>,
}

pub fn glider_solutions(cfg: &CaConfig, j: usize) -> Result<GliderSet> {
    if cfg.class() != AutomatonClass::Glider {
        return Err(Error::Classification(format!(
            "α + δ = {} is not 0 mod {}: fractal automaton",
            cfg.alpha + cfg.delta,
            cfg.q
        )));
    }
    if cfg.horizontal != Horizontal::Fdagger {
        return Err(Error::Unsupported("glider generators are given for the F† variant".into()));
    }
    if j >= cfg.n {
        return Err(Error::Index(format!("bond {j} outside {} sites", cfg.n)));
    }
    let (q, n, d) = (cfg.q, cfg.n, cfg.delta);
    let k = (j + 1) % n;
    let mut right = Vec::with_capacity(q as usize);
    let mut left = Vec::with_capacity(q as usize);
    for m in 0..q as i64 {
        let mut r = SymplecticString::identity(q, n);
        r.set_site(j, crate::weyl::PauliExponent::new(q, m, 0));
        r.set_site(k, crate::weyl::PauliExponent::new(q, d * m, -m));
        right.push(r);
        let mut l = SymplecticString::identity(q, n);
        l.set_site(j, crate::weyl::PauliExponent::new(q, d * m, -m));
        l.set_site(k, crate::weyl::PauliExponent::new(q, m, 0));
        left.push(l);
    }
    Ok(GliderSet { right, left })
}

/// Size of the subgroup of strings generated by all translated gliders,
/// against the total `q^{2N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GliderSpan {
    pub size: u64,
    pub total: u64,
}

impl GliderSpan {
    pub fn is_complete(&self) -> bool {
        self.size == self.total
    }
}

const SPAN_LIMIT: u64 = 1 << 24;

fn encode(s: &SymplecticString) -> usize {
    let q = s.q() as usize;
    s.a().iter().chain(s.b()).fold(0usize, |acc, &v| acc * q + v as usize)
}

/// Closure of the glider generators under addition mod `q`.
pub fn glider_span(cfg: &CaConfig) -> Result<GliderSpan> {
    let total = (cfg.q as u64).pow(2 * cfg.n as u32);
    if total > SPAN_LIMIT {
        return Err(Error::Resource(format!("span search over {total} strings exceeds {SPAN_LIMIT}")));
    }
    let mut gens = Vec::new();
    for j in 0..cfg.n {
        let g = glider_solutions(cfg, j)?;
        gens.push(encode(&g.right[1 % cfg.q as usize]));
        gens.push(encode(&g.left[1 % cfg.q as usize]));
    }
    let q = cfg.q as usize;
    let digits = 2 * cfg.n;
    let add = |x: usize, y: usize| {
        let (mut x, mut y) = (x, y);
        let mut out = 0usize;
        let mut place = 1usize;
        for _ in 0..digits {
            out += ((x % q + y % q) % q) * place;
            x /= q;
            y /= q;
            place *= q;
        }
        out
    };
    let mut seen = vec![false; total as usize];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut size = 1u64;
    while let Some(x) = queue.pop_front() {
        for &g in &gens {
            let y = add(x, g);
            if !seen[y] {
                seen[y] = true;
                size += 1;
                queue.push_back(y);
            }
        }
    }
    Ok(GliderSpan { size, total })
}

/// Closed-form wedge grown from a single `X` at `origin` (`α = δ = 0`, `F†`):
/// `b = 1` on `|x| ≤ t` with `x + t` even and `a = −1` on `|x| ≤ t` with
/// `x + t` odd. Valid until the wedge wraps, `t < N/2`.
pub fn single_x_wedge(q: u32, n: usize, origin: usize, t_steps: usize) -> Result<CaGrid> {
    if q < 2 || n < 2 || origin >= n {
        return Err(Error::InvalidDimension(format!("bad wedge geometry q={q} n={n} origin={origin}")));
    }
    let mut a = Vec::with_capacity(t_steps + 1);
    let mut b = Vec::with_capacity(t_steps + 1);
    for t in 0..=t_steps as i64 {
        let mut ra = vec![0u32; n];
        let mut rb = vec![0u32; n];
        for (pos, (va, vb)) in ra.iter_mut().zip(rb.iter_mut()).enumerate() {
            let x = pos as i64 - origin as i64;
            if x.abs() <= t {
                if (x + t).rem_euclid(2) == 0 {
                    *vb = 1 % q;
                } else {
                    *va = modq(-1, q);
                }
            }
        }
        a.push(ra);
        b.push(rb);
    }
    Ok(CaGrid { q, a, b })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignVariant {
    /// `s_{x,t+1} = −s_{x−1,t} − s_{x+1,t} + s_{x,t−1}`.
    Minus,
    /// `s_{x,t+1} = s_{x−1,t} + s_{x+1,t} − s_{x,t−1}`.
    PlusMinus,
}

fn check_pair(prev: &[u32], curr: &[u32], q: u32) -> Result<()> {
    if prev.len() != curr.len() || prev.is_empty() {
        return Err(Error::Shape(format!("rows of length {} and {}", prev.len(), curr.len())));
    }
    if prev.iter().chain(curr).any(|&v| v >= q) {
        return Err(Error::Shape(format!("entries must lie in [0, {q})")));
    }
    Ok(())
}

/// Second-order (Rule 150R type) update on a periodic row.
pub fn rule150r_step(q: u32, prev: &[u32], curr: &[u32], variant: SignVariant) -> Result<Vec<u32>> {
    check_pair(prev, curr, q)?;
    let n = curr.len();
    Ok((0..n)
        .map(|x| {
            let nb = curr[(x + n - 1) % n] as i64 + curr[(x + 1) % n] as i64;
            let p = prev[x] as i64;
            match variant {
                SignVariant::Minus => modq(p - nb, q),
                SignVariant::PlusMinus => modq(nb - p, q),
            }
        })
        .collect())
}

/// Inverse of [`rule150r_step`]: recovers `s_{t−1}` from `s_t` and `s_{t+1}`.
pub fn rule150r_unstep(q: u32, curr: &[u32], next: &[u32], variant: SignVariant) -> Result<Vec<u32>> {
    check_pair(next, curr, q)?;
    let n = curr.len();
    Ok((0..n)
        .map(|x| {
            let nb = curr[(x + n - 1) % n] as i64 + curr[(x + 1) % n] as i64;
            let s = next[x] as i64;
            match variant {
                SignVariant::Minus => modq(s + nb, q),
                SignVariant::PlusMinus => modq(nb - s, q),
            }
        })
        .collect())
}

/// Negates `a` and `b` on odd sites. Maps `F`-variant trajectories onto
/// `F†`-variant ones when the width is even.
pub fn alternate_sign_map(grid: &CaGrid) -> Result<CaGrid> {
    if !grid.width().is_multiple_of(2) {
        return Err(Error::Precondition("alternate sign map needs an even number of sites".into()));
    }
    let q = grid.q;
    let flip = |rows: &[Vec<u32>]| -> Vec<Vec<u32>> {
        rows.iter()
            .map(|r| r.iter().enumerate().map(|(x, &v)| if x % 2 == 1 { modq(-(v as i64), q) } else { v }).collect())
            .collect()
    };
    Ok(CaGrid { q, a: flip(&grid.a), b: flip(&grid.b) })
}
