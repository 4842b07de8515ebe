use std::io::Write as _;
use std::path::Path;

use hadamard_lattice::chm::{builtin, equivalent, fourier, sinkhorn_symmetric};
use hadamard_lattice::entanglement::{growth_check, initial_state, rainbow_report, Initial, RainbowSpec};
use hadamard_lattice::integrability::{conserved_charge, glider_completeness, ybe_check, ybe_gate, ChargeSpec, GliderDirection};
use hadamard_lattice::io::{
    format_state, grid_csv, grid_pgm, parse_circuit_config, parse_state, profile_csv, read_matrix, read_text, write_bytes,
    ybe_csv, YbeRow,
};
use hadamard_lattice::statevector::{apply_floquet, floquet, Boundary, CircuitSpec};
use hadamard_lattice::suite::{run_criterion, CRITERIA};
use hadamard_lattice::symplectic_ca::{evolve, single_x_wedge, CaConfig, Horizontal};
use hadamard_lattice::weyl::SymplecticString;
use hadamard_lattice::{ComplexMatrix64, Error};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::{
    ChargesArgs, CheckArgs, Cli, Command, EntropyArgs, Failure, FractalArgs, Format, RainbowArgs, SeedOp, SimulateArgs,
    Variant, YbeScanArgs,
};

type Outcome = Result<(), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Fractal(a) => fractal(a),
        Command::Rainbow(a) => rainbow(a),
        Command::YbeScan(a) => ybe_scan(a, cli.jobs as usize),
        Command::Entropy(a) => entropy(a),
        Command::Charges(a) => charges(a),
        Command::Simulate(a) => simulate(a),
        Command::Check(a) => check(a),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Outcome {
    match out {
        Some(p) => Ok(write_bytes(p, bytes)?),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Resource(format!("standard output: {e}")))
        }
    }
}

/// `builtin:<name>`, an existing matrix file, or a bare builtin name.
fn resolve_matrix(spec: &str) -> Result<ComplexMatrix64, Failure> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return Ok(builtin(name)?);
    }
    let path = Path::new(spec);
    if path.exists() {
        return Ok(read_matrix(path)?);
    }
    builtin(spec).map_err(|_| usage(format!("{spec:?} is neither a builtin matrix nor a readable file")))
}

fn check_q(q: Option<usize>, m: &ComplexMatrix64) -> Outcome {
    match q {
        Some(q) if q != m.dim() => Err(usage(format!("--q {q} does not match the {0}×{0} matrix", m.dim()))),
        _ => Ok(()),
    }
}

fn text_grid(rows: &[Vec<u32>], q: u32) -> String {
    let mut out = String::new();
    for r in rows {
        if q <= 10 {
            out.extend(r.iter().map(|&v| if v == 0 { '.' } else { char::from_digit(v, 10).unwrap_or('?') }));
        } else {
            out.push_str(&r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "));
        }
        out.push('\n');
    }
    out
}

fn render(rows: &[Vec<u32>], q: u32, format: Format) -> Result<Vec<u8>, Failure> {
    Ok(match format {
        Format::Csv => grid_csv(rows).into_bytes(),
        Format::Pgm => grid_pgm(rows, q)?,
        Format::Text => text_grid(rows, q).into_bytes(),
    })
}

fn fractal(a: &FractalArgs) -> Outcome {
    let width = a.width.unwrap_or(2 * a.steps + 1);
    let origin = a.origin.unwrap_or(width / 2);
    if origin >= width {
        return Err(usage(format!("--origin {origin} outside a chain of width {width}")));
    }
    let horizontal = match a.variant {
        Variant::F => Horizontal::F,
        Variant::Fdagger => Horizontal::Fdagger,
    };
    let cfg = CaConfig::new(a.q, width, a.alpha, a.delta, horizontal)?;
    let (za, xb) = match a.seed_op {
        SeedOp::X => (0, 1),
        SeedOp::Z => (1, 0),
        SeedOp::Xz => (1, 1),
    };
    let seed = SymplecticString::single(a.q, width, origin, za, xb);
    let grid = evolve(&cfg, &seed, a.steps)?;
    eprintln!("q={} α={} δ={} {:?}: {:?} automaton, {} steps on {} sites", a.q, a.alpha, a.delta, a.variant, cfg.class(), a.steps, width);
    emit(a.out.as_deref(), &render(grid.b_rows(), a.q, a.format)?)?;
    if let Some(p) = &a.a_out {
        write_bytes(p, &render(grid.a_rows(), a.q, a.format)?)?;
    }
    let q = a.q as i64;
    if a.alpha.rem_euclid(q) == 0 && a.delta.rem_euclid(q) == 0 && a.seed_op == SeedOp::X && horizontal == Horizontal::Fdagger {
        if grid == single_x_wedge(a.q, width, origin, a.steps)? {
            eprintln!("wedge oracle: exact match");
        } else {
            return Err(Failure::Verification("grid differs from the checkerboard wedge".into()));
        }
    }
    Ok(())
}

fn rainbow(a: &RainbowArgs) -> Outcome {
    let u = resolve_matrix(&a.uh)?;
    check_q(a.q, &u)?;
    let spec = RainbowSpec::new(a.n, u)?;
    let report = rainbow_report(&spec)?;
    let text = format!("{report}\n");
    emit(None, text.as_bytes())?;
    if let Some(p) = &a.report {
        write_bytes(p, text.as_bytes())?;
    }
    if report.passes(a.tol) {
        Ok(())
    } else {
        Err(Failure::Verification(format!("rainbow fidelity below 1 − {:e}", a.tol)))
    }
}

fn scan_seed(q: usize, seed: u64, a: &YbeScanArgs) -> (YbeRow, Option<ComplexMatrix64>) {
    let u = match sinkhorn_symmetric::<f64>(q, seed, 1e-10, a.max_iter) {
        Ok(u) => u,
        Err(e) => {
            eprintln!("q={q} seed={seed}: {e}");
            return (YbeRow { q, seed, residual: None, pass: false }, None);
        }
    };
    match ybe_gate(&u).and_then(|g| ybe_check(&g, a.tol)) {
        Ok((pass, res)) => (YbeRow { q, seed, residual: Some(res), pass }, Some(u)),
        Err(e) => {
            eprintln!("q={q} seed={seed}: {e}");
            (YbeRow { q, seed, residual: None, pass: false }, Some(u))
        }
    }
}

fn ybe_scan(a: &YbeScanArgs, jobs: usize) -> Outcome {
    if a.q < 2 {
        return Err(usage("--q must be at least 2"));
    }
    let q = a.q;
    let seeds: Vec<u64> = (a.first_seed..a.first_seed + a.seeds).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Resource(format!("thread pool: {e}")))?;
    let results: Vec<(YbeRow, Option<ComplexMatrix64>)> = pool.install(|| seeds.par_iter().map(|&s| scan_seed(q, s, a)).collect());
    let rows: Vec<YbeRow> = results.iter().map(|(r, _)| r.clone()).collect();
    emit(a.out.as_deref(), ybe_csv(&rows).as_bytes())?;
    let passes = rows.iter().filter(|r| r.pass).count();
    eprintln!("q={q}: {passes}/{} seeds satisfy the Yang-Baxter equation", rows.len());
    if q == 2 {
        let f2 = fourier::<f64>(2)?;
        let all = results
            .iter()
            .filter_map(|(_, u)| u.as_ref())
            .map(|u| equivalent(u, &f2, 1e-8))
            .collect::<Result<Vec<bool>, Error>>()?;
        eprintln!("q=2: {}/{} outputs equivalent to F2", all.iter().filter(|&&b| b).count(), all.len());
    }
    Ok(())
}

fn parse_initial(s: &str, q: usize) -> Result<Initial<f64>, Failure> {
    let s = s.trim().to_ascii_lowercase();
    let weights = |list: &str| -> Result<Vec<Complex64>, Failure> {
        let p = list
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("bad probability {t:?}"))))
            .collect::<Result<Vec<f64>, Failure>>()?;
        if p.len() != q || p.iter().any(|&x| x < 0.0) {
            return Err(usage(format!("need {q} non-negative probabilities, got {list:?}")));
        }
        let total: f64 = p.iter().sum();
        if total <= 0.0 {
            return Err(usage("probabilities sum to zero"));
        }
        Ok(p.iter().map(|x| Complex64::new((x / total).sqrt(), 0.0)).collect())
    };
    match s.as_str() {
        "zprod" => Ok(Initial::Zprod),
        "xprod" => Ok(Initial::Xprod),
        _ => {
            if let Some(list) = s.strip_prefix("weighted:") {
                Ok(Initial::Weighted(weights(list)?))
            } else if let Some(list) = s.strip_prefix("weightedx:") {
                Ok(Initial::WeightedX(weights(list)?))
            } else {
                Err(usage(format!("unknown initial state {s:?} (zprod, xprod, weighted:…, weightedx:…)")))
            }
        }
    }
}

fn entropy(a: &EntropyArgs) -> Outcome {
    let initial = parse_initial(&a.initial, a.q)?;
    let renyi = match a.renyi.trim() {
        "inf" | "infinity" => f64::INFINITY,
        r => r.parse::<f64>().map_err(|_| usage(format!("bad Rényi index {r:?}")))?,
    };
    let profile = growth_check(a.q, a.n, a.steps, &initial, renyi)?;
    for w in &profile.warnings {
        eprintln!("warning: {w}");
    }
    let flat: Vec<String> = profile.flat.iter().enumerate().filter(|(_, &f)| f).map(|(t, _)| (t + 1).to_string()).collect();
    eprintln!("flat entanglement spectrum at t = {}", if flat.is_empty() { "none".into() } else { flat.join(",") });
    emit(a.out.as_deref(), profile_csv(&profile).as_bytes())
}

fn charges(a: &ChargesArgs) -> Outcome {
    let u = resolve_matrix(&a.uh)?;
    check_q(a.q, &u)?;
    if a.kmax == 0 {
        return Err(usage("--kmax must be at least 1"));
    }
    let spec = CircuitSpec::new(a.n, u.clone(), u.adjoint(), Boundary::Periodic)?;
    let floq = floquet(&spec)?;
    let mut out = format!("charges q={} N={} u_H={}\n", u.dim(), a.n, a.uh);
    let mut failed = 0;
    for k in 1..=a.kmax {
        for direction in [GliderDirection::Plus, GliderDirection::Minus] {
            for bits in 0..1usize << (k - 1) {
                let charge = ChargeSpec::new(direction, (0..k - 1).map(|i| bits >> i & 1 == 1).collect());
                let q = conserved_charge(&spec, &charge)?;
                let c = q.commutator_norm(&floq);
                let ok = c < a.tol;
                failed += usize::from(!ok);
                out.push_str(&format!("{:<8} k={k} ‖[Q,U]‖_max = {c:.3e} {}\n", charge.to_string(), if ok { "ok" } else { "FAIL" }));
            }
        }
    }
    let gc = glider_completeness(&u)?;
    out.push_str(&format!(
        "two-site gliders (identity included): right {}, left {}; exponent-level span: {}\n",
        gc.right,
        gc.left,
        if gc.spans() { "complete" } else { "incomplete" }
    ));
    emit(None, out.as_bytes())?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{failed} charges do not commute with the Floquet operator")))
    }
}

fn simulate(a: &SimulateArgs) -> Outcome {
    let text = read_text(&a.circuit)?;
    let base = a.circuit.parent().unwrap_or(Path::new("."));
    let cfg = parse_circuit_config::<f64>(&text, base)?;
    let (q, n) = (cfg.spec.q(), cfg.spec.n());
    let state = match &a.state {
        Some(p) => {
            let s = parse_state::<f64>(&read_text(p)?)?;
            if (s.q(), s.n()) != (q, n) {
                return Err(usage(format!("state has q={} N={}, circuit has q={q} N={n}", s.q(), s.n())));
            }
            s
        }
        None => match a.initial.trim() {
            "zprod" => initial_state(q, n, &Initial::Zprod)?,
            "xprod" => initial_state(q, n, &Initial::Xprod)?,
            other => return Err(usage(format!("unknown initial state {other:?} (zprod, xprod)"))),
        },
    };
    let steps = a.steps.unwrap_or(cfg.steps);
    let out = apply_floquet(&cfg.spec, &state, steps)?;
    eprintln!("applied {steps} Floquet steps, q={q} N={n}, norm² {:.15}", out.norm_sqr());
    emit(a.out.as_deref(), format_state(&out).as_bytes())
}

fn parse_suite(s: &str) -> Result<Vec<u32>, Failure> {
    if s.trim() == "all" {
        return Ok(CRITERIA.iter().map(|&(id, _)| id).collect());
    }
    s.split(',')
        .map(|t| {
            let id: u32 = t.trim().parse().map_err(|_| usage(format!("bad criterion {t:?}")))?;
            if CRITERIA.iter().any(|&(i, _)| i == id) {
                Ok(id)
            } else {
                Err(usage(format!("no criterion {id} (valid: 1..={})", CRITERIA.len())))
            }
        })
        .collect()
}

fn check(a: &CheckArgs) -> Outcome {
    let ids = parse_suite(&a.suite)?;
    let mut failed = Vec::new();
    for id in &ids {
        let r = run_criterion(*id)?;
        println!("{r}");
        if !r.passed {
            failed.push(id.to_string());
        }
    }
    println!("{}/{} criteria passed", ids.len() - failed.len(), ids.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("criteria {} failed", failed.join(", "))))
    }
}
