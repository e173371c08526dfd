//! Period matrices against closed-form elliptic values and basis-change invariance.

mod common;

use common::*;
use hitchin_cubic::periods::{
    build_homology, cycle_integral, period_matrix, period_matrix_with, raw_period_matrix, Cycle, HomologyBasis,
    PeriodConfig,
};
use hitchin_cubic::spectral::{make_curve, Divisor};
use hitchin_cubic::Poly;
use num_complex::Complex64;
use proptest::prelude::*;

fn far_divisor(deg: usize) -> Divisor {
    Divisor::simple((0..deg).map(|k| Complex64::from_polar(4.0, 0.3 + k as f64)).collect()).unwrap()
}

/// `y² = (1 − z²)(1 − k²z²)`.
fn jacobi_quartic(k: f64) -> Poly {
    Poly::from_real(&[1.0, 0.0, -(1.0 + k * k), 0.0, k * k])
}

#[test]
fn jacobi_quartic_real_period_is_four_k() {
    let k = 0.5;
    let curve = make_curve(&far_divisor(4), jacobi_quartic(k)).unwrap();
    let basis = build_homology(curve.branch_points()).unwrap();
    // chain −2, −1, 1, 2: the B-cycle runs over [−1, 1]
    let v = cycle_integral(&curve, &Poly::monomial(0), &basis, Cycle::B(0), &PeriodConfig::default()).unwrap();
    assert!((v.norm() - 4.0 * elliptic_k(k)).abs() < 1e-9, "{v}");
    let a = cycle_integral(&curve, &Poly::monomial(0), &basis, Cycle::A(0), &PeriodConfig::default()).unwrap();
    assert!((a.norm() - 2.0 * elliptic_k((1.0 - k * k).sqrt())).abs() < 1e-9, "{a}");
}

#[test]
fn jacobi_quartic_modulus_is_half_the_legendre_one() {
    // This quartic is 2-isogenous to the Legendre curve of modulus k: τ ~ iK′/(2K).
    let k: f64 = 0.5;
    let curve = make_curve(&far_divisor(4), jacobi_quartic(k)).unwrap();
    let tau = reduce_tau(period_matrix(&curve).unwrap().z[(0, 0)]);
    let kp = elliptic_k((1.0 - k * k).sqrt());
    let expected = reduce_tau(c(0.0, kp / (2.0 * elliptic_k(k))));
    assert!((tau - expected).norm() < 1e-8, "{tau} vs {expected}");
    let legendre = reduce_tau(c(0.0, kp / elliptic_k(k)));
    assert!((tau - legendre).norm() > 0.1);
}

#[test]
fn legendre_modulus_for_several_k() {
    for k in [0.2, 0.5, 0.8] {
        let roots = [c(0.0, 0.0), c(0.5, 0.0), c(1.0 / (1.0 + k * k), 0.0), c(1.0, 0.0)];
        let curve = make_curve(&far_divisor(4), Poly::from_roots(&roots)).unwrap();
        let tau = reduce_tau(period_matrix(&curve).unwrap().z[(0, 0)]);
        let expected = reduce_tau(c(0.0, elliptic_k((1.0 - k * k).sqrt()) / elliptic_k(k)));
        assert!((tau - expected).norm() < 1e-8, "k = {k}: {tau} vs {expected}");
    }
}

#[test]
fn hexagonal_curve_has_j_zero() {
    // y² = z(z³ − 1) has the order-3 automorphism z ↦ ωz
    let curve = make_curve(&far_divisor(4), Poly::from_real(&[0.0, -1.0, 0.0, 0.0, 1.0])).unwrap();
    let j = j_invariant(period_matrix(&curve).unwrap().z[(0, 0)]);
    assert!(j.norm() < 1e-6, "{j}");
}

#[test]
fn chain_permutations_give_the_same_j() {
    let points = [c(-1.1, 0.3), c(-0.2, -0.9), c(0.4, 0.8), c(1.3, -0.2)];
    let curve = make_curve(&far_divisor(4), Poly::from_roots(&points).scale(c(0.8, 0.5))).unwrap();
    let j0 = j_invariant(period_matrix(&curve).unwrap().z[(0, 0)]);
    let mut perm = [0usize, 1, 2, 3];
    let mut count = 0;
    loop {
        let chain: Vec<Complex64> = perm.iter().map(|&i| points[i]).collect();
        let pd = raw_period_matrix(&curve, &HomologyBasis::from_chain(chain).unwrap(), &PeriodConfig::default()).unwrap();
        let mut tau = pd.z[(0, 0)];
        if tau.im < 0.0 {
            tau = -tau;
        }
        let j = j_invariant(tau);
        assert!((j - j0).norm() < 1e-6 * j0.norm().max(1.0), "{perm:?}: {j} vs {j0}");
        count += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    assert_eq!(count, 24);
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else { return false };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

#[test]
fn halving_quadrature_tolerance_barely_moves_z() {
    let mut r = rng(21);
    for d in [2, 3, 4] {
        let curve = random_curve(&mut r, d);
        let basis = build_homology(curve.branch_points()).unwrap();
        let cfg = PeriodConfig::default();
        let fine = PeriodConfig { quad_tol: cfg.quad_tol / 2.0, ..cfg };
        let z0 = period_matrix_with(&curve, &basis, &cfg).unwrap().z;
        let z1 = period_matrix_with(&curve, &basis, &fine).unwrap().z;
        let scale = z0.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let change = (z0 - z1).iter().map(|v| v.norm()).fold(0.0, f64::max) / scale;
        assert!(change < 10.0 * cfg.quad_tol, "d = {d}: {change:e}");
    }
}

#[test]
fn stalled_quadrature_is_reported() {
    let curve = make_curve(&far_divisor(5), Poly::from_roots(&[
        c(-1.0, 0.0), c(-0.5, 0.4), c(0.0, -0.3), c(0.4, 0.5), c(0.9, -0.1), c(1.4, 0.2),
    ])).unwrap();
    let cfg = PeriodConfig { quad_tol: 1e-30, max_order: 32, ..PeriodConfig::default() };
    let err = period_matrix_with(&curve, &build_homology(curve.branch_points()).unwrap(), &cfg).unwrap_err();
    assert!(matches!(err, hitchin_cubic::Error::QuadratureStall { .. }), "{err:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_curves_land_in_siegel_space(seed in 0u64..10_000, g in 1usize..4) {
        let mut r = rng(seed);
        let curve = random_curve(&mut r, g + 1);
        let pd = period_matrix(&curve).unwrap();
        prop_assert!(pd.sym_residual < 1e-8);
        prop_assert!(pd.min_imag_eig > 0.0);
    }
}
