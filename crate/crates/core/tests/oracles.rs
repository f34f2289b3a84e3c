//! Library results against independent reference computations.

use nalgebra::DMatrix;
use unravel::bounds::{g_factor, phi_min_verify, PhiProblem, Povm};
use unravel::channels::{apply_channel, gram_matrix, remix, Unraveling};
use unravel::demos::dft_matrix;
use unravel::entropy::{alpha_log, renyi_entropy, tsallis_entropy, EntropyOrder, ProbVector};
use unravel::linalg::{
    ginibre, haar_unitary_with, matrix_norms, random_density, seeded_rng, ComplexMatrix, C64,
};

fn power_iteration_norm(x: &ComplexMatrix) -> f64 {
    let h = x.adjoint() * x;
    let mut v = nalgebra::DVector::from_element(h.ncols(), C64::new(1.0, 0.3));
    let mut est = 0.0;
    for _ in 0..2000 {
        let w = &h * &v;
        let n = w.norm();
        if n == 0.0 {
            return 0.0;
        }
        est = n;
        v = w / C64::new(n, 0.0);
    }
    est.sqrt()
}

#[test]
fn spectral_norm_matches_power_iteration() {
    let mut rng = seeded_rng(1);
    for (r, c) in [(2, 2), (3, 5), (4, 4), (6, 3)] {
        let x = ginibre(r, c, &mut rng);
        let n = matrix_norms(&x).unwrap();
        assert!((n.spectral - power_iteration_norm(&x)).abs() < 1e-9 * n.spectral);
        let frob: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((n.frobenius - frob).abs() < 1e-12);
    }
}

#[test]
fn entropies_match_direct_formulas() {
    let p = ProbVector::new(vec![0.5, 0.25, 0.125, 0.125]).unwrap();
    // Σp² = 11/32, Σp³ = 37/256
    let two = EntropyOrder::new(2.0).unwrap();
    let three = EntropyOrder::new(3.0).unwrap();
    assert!((tsallis_entropy(&p, two) - 21.0 / 32.0).abs() < 1e-15);
    assert!((tsallis_entropy(&p, three) - (1.0 - 37.0 / 256.0) / 2.0).abs() < 1e-15);
    assert!((renyi_entropy(&p, two) - (32.0f64 / 11.0).ln()).abs() < 1e-14);
    let shannon = EntropyOrder::new(1.0).unwrap();
    assert!((tsallis_entropy(&p, shannon) - 1.75 * 2f64.ln()).abs() < 1e-14);
    let half = EntropyOrder::new(0.5).unwrap();
    assert!((alpha_log(4.0, half).unwrap() - 2.0).abs() < 1e-15);
    assert!((alpha_log(4.0, two).unwrap() - 0.75).abs() < 1e-15);
}

#[test]
fn gram_matrix_matches_trace_formula() {
    let mut rng = seeded_rng(2);
    for seed in 0..20 {
        let a = Unraveling::random(3, 2, 4, seed).unwrap();
        let rho = random_density(3, 2, seed + 50).unwrap();
        let pi = gram_matrix(&a, &rho).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let t = (a.ops()[i].adjoint() * &a.ops()[j] * rho.matrix()).trace();
                assert!((pi.matrix()[(i, j)] - t).norm() < 1e-14);
            }
        }
        let u = haar_unitary_with(4, &mut rng).unwrap();
        let b = remix(&a, &u).unwrap();
        for i in 0..4 {
            let mut direct = ComplexMatrix::zeros(2, 3);
            for j in 0..4 {
                direct += &a.ops()[j] * u.matrix()[(j, i)];
            }
            assert!((&b.ops()[i] - direct).norm() < 1e-14);
        }
        let out_a = apply_channel(&a, &rho).unwrap();
        let mut out = ComplexMatrix::zeros(2, 2);
        for op in a.ops() {
            out += op * rho.matrix() * op.adjoint();
        }
        assert!((out_a.matrix() - out).norm() < 1e-14);
    }
}

#[test]
fn g_factor_matches_brute_force() {
    let mut rng = seeded_rng(3);
    for trial in 0..30 {
        let d = 2 + trial % 2;
        let m = Povm::random_with(d, d + 1, &mut rng).unwrap();
        let n = Povm::random_projective_with(d, &mut rng).unwrap();
        let rho = random_density(d, d, trial as u64).unwrap();
        let mut best: f64 = 0.0;
        for mi in m.elements() {
            for nj in n.elements() {
                let p = (mi * rho.matrix()).trace().re;
                let q = (nj * rho.matrix()).trace().re;
                let c = (mi * nj * rho.matrix()).trace().norm();
                best = best.max(c / (p * q).sqrt());
            }
        }
        assert!((g_factor(&m, &n, &rho).unwrap() - best).abs() < 1e-12);
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = hi - r * (hi - lo);
        let b = lo + r * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f((lo + hi) / 2.0)
}

#[test]
fn phi_minimum_matches_boundary_line_search() {
    for (gamma, alpha) in [(1.5, 1.5), (3.0, 2.0), (4.0, 3.0)] {
        let p = PhiProblem::new(gamma, alpha).unwrap();
        let k = p.beta() / p.alpha();
        let on_curve = |xi: f64| p.phi(xi, (gamma * xi.powf(k)).max(1.0));
        let line = golden_min(on_curve, 0.0, 1.0);
        assert!((line - p.analytic_min()).abs() < 1e-10);
        let grid = phi_min_verify(&p, 300).unwrap();
        assert!((grid.numeric_min - line).abs() < 1e-4);
    }
}

#[test]
fn dft_rows_are_unbiased() {
    for d in 1..=9 {
        let f = dft_matrix(d).unwrap();
        let gram: DMatrix<C64> = f.matrix().adjoint() * f.matrix();
        let eye = ComplexMatrix::identity(d, d);
        assert!((gram - eye).norm() < 1e-12);
        for z in f.matrix().iter() {
            assert!((z.norm_sqr() - 1.0 / d as f64).abs() < 1e-14);
        }
    }
}
