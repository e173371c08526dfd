//! Finite-difference behaviour of the period-derivative check.

mod common;

use std::f64::consts::PI;

use common::*;
use hitchin_cubic::harness::{
    direction_step, fd_gauss_manin, fd_gauss_manin_four_point, kappa_step_sequence, verify, verify_curve, verify_suite,
    VerificationConfig, KAPPA_BASELINE, SUITE_STEP,
};
use hitchin_cubic::periods::{period_matrix, PeriodConfig};
use hitchin_cubic::spectral::{leaf_basis, CurveSpec, SpectralCurve};
use num_complex::Complex64;

fn load_config(name: &str) -> VerificationConfig {
    serde_json::from_str(&std::fs::read_to_string(configs_dir().join(name)).unwrap()).unwrap()
}

fn load(name: &str) -> SpectralCurve {
    load_config(name).curve.build().unwrap()
}

#[test]
fn central_difference_matches_five_point_stencil() {
    let curve = load("genus1.json");
    let pd = period_matrix(&curve).unwrap();
    let t = &leaf_basis(curve.divisor())[0];
    let h = direction_step(&curve, t, 1e-4);
    let cfg = PeriodConfig::default();
    let central = fd_gauss_manin(&curve, &pd.basis, t, h, false, &cfg).unwrap()[(0, 0)];
    let stencil = fd_gauss_manin_four_point(&curve, &pd.basis, t, h, &cfg).unwrap()[(0, 0)];
    assert!((central - stencil).norm() < 1e-5 * stencil.norm(), "{central} vs {stencil}");
}

#[test]
fn derivative_is_symmetric() {
    let curve = load("genus3.json");
    let pd = period_matrix(&curve).unwrap();
    let cfg = PeriodConfig::default();
    for t in leaf_basis(curve.divisor()) {
        let dz = fd_gauss_manin(&curve, &pd.basis, &t, direction_step(&curve, &t, 1e-4), false, &cfg).unwrap();
        let scale = dz.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let asym = (&dz - dz.transpose()).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(asym < 10.0 * cfg.sym_tol * scale, "{asym:e}");
    }
}

#[test]
fn step_error_shrinks_quadratically() {
    // with κ(h) = κ + C h², κ(h/2) − κ(h/4) is a quarter of κ(h) − κ(h/2)
    let curve = load("genus2.json");
    let cfg = VerificationConfig::new(CurveSpec::from_curve(&curve));
    for entry in [(0, 0, 0), (1, 0, 1), (0, 1, 1)] {
        let [k1, k2, k4] = kappa_step_sequence(&curve, &cfg, entry, 1e-2).unwrap();
        let predicted = (k1 - k2).norm() / 4.0;
        let observed = (k2 - k4).norm();
        assert!(observed < 4.0 * predicted, "{entry:?}: {observed:e} vs {predicted:e}");
    }
}

#[test]
fn kappa_baseline_is_reproduced() {
    let rep = verify(&load_config("genus1.json")).unwrap();
    let baseline = Complex64::new(KAPPA_BASELINE[0], KAPPA_BASELINE[1]);
    assert!((rep.kappa() - baseline).norm() < 1e-6 * baseline.norm(), "{}", rep.kappa());
}

#[test]
fn kappa_is_minus_quarter_pi_i() {
    for name in ["genus1.json", "genus2.json", "genus3.json"] {
        let rep = verify(&load_config(name)).unwrap();
        assert!(rep.pass);
        assert!((rep.kappa() - Complex64::new(0.0, -PI / 4.0)).norm() < 1e-6, "{name}: {}", rep.kappa());
    }
}

#[test]
fn kappa_constant_on_random_curves() {
    let mut r = rng(31);
    for d in [2, 3, 4] {
        for _ in 0..3 {
            let curve = random_curve(&mut r, d);
            let rep = verify_curve(&curve, &VerificationConfig::new(CurveSpec::from_curve(&curve))).unwrap();
            assert!(rep.pass, "d = {d}: spread {:e}", rep.spread);
            assert!(rep.stages.cubic.ab_residual < 1e-12);
        }
    }
}

#[test]
fn single_direction_subset() {
    let mut cfg = load_config("genus2.json");
    cfg.directions = Some(vec![1]);
    let rep = verify(&cfg).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.entries.len(), 4);
    assert!(rep.fd_full_symmetry_residual.is_none());
    cfg.directions = Some(vec![2]);
    assert!(verify(&cfg).is_err());
}

#[test]
fn suite_is_deterministic_and_constant() {
    let mut cfg = load_config("genus2.json");
    cfg.seed = 5;
    let a = verify_suite(&cfg, 3, SUITE_STEP).unwrap();
    let b = verify_suite(&cfg, 3, SUITE_STEP).unwrap();
    assert!(a.pass && a.spread < 1e-3);
    assert_eq!(a.kappa_means, b.kappa_means);
    assert_eq!(a.base_points, b.base_points);
    assert_ne!(a.base_points[0], a.base_points[1]);
}

#[test]
fn genus_zero_is_rejected() {
    let spec: CurveSpec = serde_json::from_str(
        r#"{"divisor":[{"q":[3,0],"n":1},{"q":[4,0],"n":1},{"q":[5,0],"n":1}],"b_coeffs":[[-1,0],[0,0],[1,0]]}"#,
    )
    .unwrap();
    assert!(verify(&VerificationConfig::new(spec)).is_err());
}
