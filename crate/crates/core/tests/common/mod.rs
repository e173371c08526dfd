//! Independent oracles and curve generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use hitchin_cubic::spectral::{make_curve, Divisor, SpectralCurve};
use hitchin_cubic::Poly;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    a
}

/// Complete elliptic integral of the first kind, modulus `k`.
pub fn elliptic_k(k: f64) -> f64 {
    PI / (2.0 * agm(1.0, (1.0 - k * k).sqrt()))
}

/// Representative of `τ` in the standard fundamental domain of SL(2, ℤ).
pub fn reduce_tau(mut tau: Complex64) -> Complex64 {
    for _ in 0..1000 {
        tau.re -= tau.re.round();
        if tau.norm_sqr() < 1.0 - 1e-14 {
            tau = -tau.inv();
        } else {
            break;
        }
    }
    tau
}

fn divisor_sum(n: u64, power: u32) -> f64 {
    (1..=n).filter(|&m| n.is_multiple_of(m)).map(|m| (m as f64).powi(power as i32)).sum()
}

/// Klein's `j` from the Eisenstein series `E₄`, `E₆`.
pub fn j_invariant(tau: Complex64) -> Complex64 {
    let tau = reduce_tau(tau);
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let mut e4 = c(1.0, 0.0);
    let mut e6 = c(1.0, 0.0);
    let mut qn = c(1.0, 0.0);
    for n in 1..200u64 {
        qn *= q;
        if qn.norm() < 1e-300 {
            break;
        }
        e4 += qn * (240.0 * divisor_sum(n, 3));
        e6 -= qn * (504.0 * divisor_sum(n, 5));
    }
    let e43 = e4 * e4 * e4;
    e43 * 1728.0 / (e43 - e6 * e6)
}

/// `Res²` at a simple zero `e` of `b` of `h dz²/b²`, in the coordinate `ŷ`, from a z-plane contour.
///
/// One turn in `ŷ` is two turns in `z`, and `ŷ·f(ŷ) dŷ = 2h/(b b') dz`, so the result is `4·Res_e h/(b b')`.
pub fn res2_oracle(h: &Poly, b: &Poly, e: Complex64, radius: f64) -> Complex64 {
    let db = b.derivative();
    let n = 512;
    let mut acc = c(0.0, 0.0);
    for k in 0..n {
        let u = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        let z = e + u * radius;
        acc += h.eval(z) / (b.eval(z) * db.eval(z)) * u * radius;
    }
    acc * 4.0 / n as f64
}

/// Newton from `start` on `p`, for tracking a single simple root.
pub fn newton_root(p: &Poly, start: Complex64) -> Complex64 {
    let mut z = start;
    for _ in 0..100 {
        let (v, dv) = p.eval_with_derivative(z);
        let step = v / dv;
        z -= step;
        if step.norm() < 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

fn random_in_disc(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    loop {
        let z = c(rng.random_range(-r..r), rng.random_range(-r..r));
        if z.norm() <= r {
            return z;
        }
    }
}

/// `deg D = d + 2` simple points spread around a circle of radius about 2.8.
pub fn random_divisor(rng: &mut ChaCha8Rng, d: usize) -> Divisor {
    let n = d + 2;
    let phase = rng.random_range(0.0..2.0 * PI);
    let points = (0..n)
        .map(|k| {
            let r = rng.random_range(2.5..3.1);
            let t = phase + 2.0 * PI * k as f64 / n as f64 + rng.random_range(-0.2..0.2);
            Complex64::from_polar(r, t)
        })
        .collect();
    Divisor::simple(points).unwrap()
}

/// A generic curve with `2d` well separated branch points in the disc of radius 1.7.
pub fn random_curve(rng: &mut ChaCha8Rng, d: usize) -> SpectralCurve {
    loop {
        let div = random_divisor(rng, d);
        let mut roots: Vec<Complex64> = Vec::with_capacity(2 * d);
        let mut tries = 0;
        while roots.len() < 2 * d && tries < 10_000 {
            tries += 1;
            let z = random_in_disc(rng, 1.7);
            if roots.iter().all(|r| (r - z).norm() > 0.4) {
                roots.push(z);
            }
        }
        if roots.len() < 2 * d {
            continue;
        }
        let lc = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI));
        if let Ok(curve) = make_curve(&div, Poly::from_roots(&roots).scale(lc)) {
            return curve;
        }
    }
}

pub fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> Poly {
    Poly::new((0..=max_degree).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
}

pub fn configs_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}
