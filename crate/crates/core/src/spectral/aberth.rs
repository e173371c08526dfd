//! Simultaneous root finding by the Aberth–Ehrlich iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Poly;

pub const MAX_ITERATIONS: usize = 500;

/// All roots of `p`, unordered. The leading coefficient must be nonzero.
pub fn aberth(p: &Poly) -> Result<Vec<Complex64>> {
    let n = p.formal_degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p.leading();
    let monic = p.scale(lead.inv());
    let dp = monic.derivative();

    // Fujiwara-type radius; starting points on a rotated circle.
    let radius = (0..n)
        .map(|k| monic.coeffs()[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius * (1.0 + 0.01 * k as f64 / n as f64), theta)
        })
        .collect();

    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let pk = monic.eval(z[k]);
            if pk.norm() <= 4.0 * f64::EPSILON * monic.abs_eval(z[k]) {
                done[k] = true;
                continue;
            }
            let ratio = pk / dp.eval(z[k]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[k] -= step;
            let rel = step.norm() / (1.0 + z[k].norm());
            if rel < 1e-16 {
                done[k] = true;
            }
            max_step = max_step.max(rel);
        }
        if done.iter().all(|&d| d) || max_step < 1e-16 {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence(MAX_ITERATIONS))
}

/// Newton refinement of one root; keeps the best iterate seen.
pub fn polish(p: &Poly, mut z: Complex64) -> Complex64 {
    let mut best = (p.eval(z).norm(), z);
    for _ in 0..8 {
        let (v, dv) = p.eval_with_derivative(z);
        if dv.norm() == 0.0 {
            break;
        }
        z -= v / dv;
        let r = p.eval(z).norm();
        if r < best.0 {
            best = (r, z);
        }
        if r == 0.0 {
            break;
        }
    }
    best.1
}
