use hadamard_lattice::chm::{check_hadamard, fourier, random_complex_matrix, sinkhorn_symmetric};
use hadamard_lattice::entanglement::{entropy_of_spectrum, reduced_density, spectrum};
use hadamard_lattice::io::{format_matrix, parse_matrix};
use hadamard_lattice::statevector::{apply_floquet, brickwork_gate, dual_reshuffle, Boundary, CircuitSpec, StateVector};
use hadamard_lattice::symplectic_ca::{rule150r_step, rule150r_unstep, step, CaConfig, Horizontal, SignVariant};
use hadamard_lattice::ComplexMatrix64;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ca_case() -> impl Strategy<Value = (CaConfig, Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>)> {
    (2u32..8, 2usize..12, -6i64..7, -6i64..7, any::<bool>()).prop_flat_map(|(q, n, alpha, delta, fd)| {
        let horizontal = if fd { Horizontal::Fdagger } else { Horizontal::F };
        let cfg = CaConfig::new(q, n, alpha, delta, horizontal).unwrap();
        let row = proptest::collection::vec(0..q, n);
        (Just(cfg), row.clone(), row.clone(), row.clone(), row)
    })
}

fn add(x: &[u32], y: &[u32], q: u32) -> Vec<u32> {
    x.iter().zip(y).map(|(a, b)| (a + b) % q).collect()
}

fn random_state(q: usize, n: usize, seed: u64) -> StateVector<f64> {
    let m = random_complex_matrix::<f64>(q.pow(n as u32), &mut ChaCha8Rng::seed_from_u64(seed));
    let col: Vec<Complex64> = (0..m.dim()).map(|r| m.get(r, 0)).collect();
    let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    StateVector::new(q, n, col.into_iter().map(|z| z / norm).collect()).unwrap()
}

proptest! {
    #[test]
    fn ca_step_is_linear((cfg, a1, b1, a2, b2) in ca_case()) {
        let q = cfg.q;
        let (x1, y1) = step(&cfg, &a1, &b1).unwrap();
        let (x2, y2) = step(&cfg, &a2, &b2).unwrap();
        let (xs, ys) = step(&cfg, &add(&a1, &a2, q), &add(&b1, &b2, q)).unwrap();
        prop_assert_eq!(xs, add(&x1, &x2, q));
        prop_assert_eq!(ys, add(&y1, &y2, q));
    }

    #[test]
    fn ca_step_commutes_with_translation((cfg, a, b, _, _) in ca_case()) {
        let rot = |v: &[u32]| { let mut w = v.to_vec(); w.rotate_right(1); w };
        let (x, y) = step(&cfg, &a, &b).unwrap();
        let (xr, yr) = step(&cfg, &rot(&a), &rot(&b)).unwrap();
        prop_assert_eq!(xr, rot(&x));
        prop_assert_eq!(yr, rot(&y));
    }

    #[test]
    fn rule150r_is_reversible((cfg, prev, curr, _, _) in ca_case(), plus_minus in any::<bool>()) {
        let variant = if plus_minus { SignVariant::PlusMinus } else { SignVariant::Minus };
        let next = rule150r_step(cfg.q, &prev, &curr, variant).unwrap();
        prop_assert_eq!(rule150r_unstep(cfg.q, &curr, &next, variant).unwrap(), prev);
    }

    #[test]
    fn matrix_text_round_trip(q in 2usize..7, seed in any::<u64>()) {
        let m = random_complex_matrix::<f64>(q, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(parse_matrix::<f64>(&format_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn renyi_entropy_non_increasing(q in 2usize..4, n in 2usize..5, seed in any::<u64>(), cut_seed in 0usize..64) {
        let psi = random_state(q, n, seed);
        let cut = 1 + cut_seed % (n - 1);
        let spec = spectrum(&reduced_density(&psi, cut).unwrap()).unwrap();
        prop_assert!((spec.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let alphas = [0.5, 1.0, 2.0, 3.0, f64::INFINITY];
        let s: Vec<f64> = alphas.iter().map(|&a| entropy_of_spectrum(&spec, a)).collect();
        for w in s.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-10, "{:?}", s);
        }
        prop_assert!(s[0] <= cut.min(n - cut) as f64 * (q as f64).ln() + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn floquet_preserves_norm(q in 2usize..4, n in 2usize..5, seed in 0u64..1000, steps in 0usize..4, open in any::<bool>()) {
        let u_h = sinkhorn_symmetric::<f64>(q, seed, 1e-12, 50_000).unwrap();
        let boundary = if open { Boundary::Open } else { Boundary::Periodic };
        let spec = CircuitSpec::new(n, u_h, fourier(q).unwrap(), boundary).unwrap();
        let out = apply_floquet(&spec, &random_state(q, n, seed), steps).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn brickwork_gates_are_dual_unitary(q in 2usize..6, s1 in 0u64..1000, s2 in 0u64..1000) {
        let u_h = sinkhorn_symmetric::<f64>(q, s1, 1e-12, 50_000).unwrap();
        let u_v = sinkhorn_symmetric::<f64>(q, s2, 1e-12, 50_000).unwrap();
        let g = brickwork_gate(&u_h, &u_v).unwrap();
        prop_assert!(g.unitarity_deviation() < 1e-9);
        prop_assert!(dual_reshuffle(&g).unwrap().unitarity_deviation() < 1e-9);
        prop_assert_eq!(dual_reshuffle(&dual_reshuffle(&g).unwrap()).unwrap(), g);
    }

    #[test]
    fn sinkhorn_outputs_are_symmetric_hadamard(q in 2usize..8, seed in any::<u64>()) {
        let u: ComplexMatrix64 = sinkhorn_symmetric(q, seed, 1e-10, 50_000).unwrap();
        let r = check_hadamard(&u, 1e-8);
        prop_assert!(r.is_hadamard() && r.is_symmetric);
    }
}

#[test]
fn single_precision_pipeline() {
    let f3 = fourier::<f32>(3).unwrap();
    assert!(check_hadamard(&f3, 1e-5).is_hadamard());
    let spec = CircuitSpec::new(3, f3.clone(), f3, Boundary::Periodic).unwrap();
    let psi = StateVector::<f32>::basis(3, &[0, 1, 2]).unwrap();
    let out = apply_floquet(&spec, &psi, 3).unwrap();
    assert!((out.norm_sqr() - 1.0).abs() < 1e-5);
}
