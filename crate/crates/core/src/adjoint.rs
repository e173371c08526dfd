//! The adjoint quotient `χ: 𝔱 → 𝔱/W` through explicit invariant polynomials,
//! the root discriminant, and a numerical check that the Jacobian of `χ`
//! factors through the product of the positive roots.
//!
//! Points of `𝔱` are given in simple-coroot coordinates: `v ↦ Σ vᵢ αᵢ^∨`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::{self, CartanType, Family, Matrix, RootSystem};

const NEAR_HYPERPLANE: f64 = 1e-3;
const MAX_REJECTIONS: usize = 100;
pub const SPREAD_TOL: f64 = 1e-6;
pub const HYPERPLANE_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct InvariantSet {
    cartan_type: CartanType,
    degrees: Vec<usize>,
    coroots: Vec<Vec<f64>>,
    roots: Vec<Vec<f64>>,
    positive_roots: Vec<Vec<f64>>,
    /// Only populated for G2, where the sextic invariant is a Reynolds average.
    reynolds: Option<Reynolds>,
}

#[derive(Debug, Clone)]
struct Reynolds {
    weyl: Vec<Vec<Vec<f64>>>,
    rho: Vec<f64>,
}

fn to_f64s(v: &[num_rational::Rational64]) -> Vec<f64> {
    v.iter().map(|&x| rootsys::to_f64(x)).collect()
}

fn matrix_f64(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| rootsys::to_f64(m.get(i, j))).collect())
        .collect()
}

/// Elementary symmetric functions `e_0..e_n` of `xs`.
fn elementary(xs: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); xs.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (k, &x) in xs.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            let prev = e[j - 1];
            e[j] += prev * x;
        }
    }
    e
}

fn cdot(a: &[f64], x: &[Complex64]) -> Complex64 {
    a.iter().zip(x).map(|(&ai, &xi)| xi * ai).sum()
}

impl InvariantSet {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        let t = rs.cartan_type;
        let degrees = rootsys::exponent_data(t)?.degrees;
        let reynolds = if t.family() == Family::G {
            let w = rootsys::generate_weyl(rs)?;
            Some(Reynolds {
                weyl: w.elements.iter().map(matrix_f64).collect(),
                rho: vec![1.0, 3.0 / 7.0, -10.0 / 7.0],
            })
        } else {
            None
        };
        let inv = InvariantSet {
            cartan_type: t,
            degrees,
            coroots: rs.simple_coroots().iter().map(|c| to_f64s(c)).collect(),
            roots: rs.roots.iter().map(|r| to_f64s(r)).collect(),
            positive_roots: rs.positive_roots.iter().map(|r| to_f64s(r)).collect(),
            reynolds,
        };
        // Algebraic independence certificate: the Jacobian is nonzero at a fixed regular point.
        let probe: Vec<Complex64> = (0..inv.rank())
            .map(|i| {
                let k = i as f64;
                Complex64::new(0.3 + 0.37 * k + 0.11 * k * k, 0.07 - 0.23 * k)
            })
            .collect();
        if jacobian_det(&inv, &probe).norm() < 1e-8 * jacobian_scale(&inv, &probe) {
            return Err(Error::InvalidInput(format!(
                "invariants for {t} are not algebraically independent"
            )));
        }
        Ok(inv)
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.coroots.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Ambient vector `Σ vᵢ αᵢ^∨`.
    pub fn to_ambient(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.coroots[0].len();
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (vi, c) in v.iter().zip(&self.coroots) {
            for (xj, cj) in x.iter_mut().zip(c) {
                *xj += vi * cj;
            }
        }
        x
    }

    /// Invariants evaluated on an ambient vector, ordered by ascending degree.
    pub fn eval_ambient(&self, x: &[Complex64]) -> Vec<Complex64> {
        let l = self.rank();
        match self.cartan_type.family() {
            Family::A => {
                let e = elementary(x);
                (2..=l + 1)
                    .map(|k| if k % 2 == 0 { -e[k] } else { e[k] })
                    .collect()
            }
            Family::B | Family::C => {
                let sq: Vec<Complex64> = x.iter().map(|v| v * v).collect();
                elementary(&sq)[1..=l].to_vec()
            }
            Family::D => {
                let sq: Vec<Complex64> = x.iter().map(|v| v * v).collect();
                let e = elementary(&sq);
                let pf: Complex64 = x.iter().product();
                // degrees 2, 4, l, 6, ... sorted; here l = 4
                let mut out: Vec<(usize, Complex64)> = (1..l).map(|k| (2 * k, e[k])).collect();
                out.push((l, pf));
                out.sort_by_key(|(d, _)| *d);
                out.into_iter().map(|(_, v)| v).collect()
            }
            Family::G => {
                let r = self.reynolds.as_ref().expect("G2 carries Reynolds data");
                let quad: Complex64 = x.iter().map(|v| v * v).sum();
                let sextic: Complex64 = r
                    .weyl
                    .iter()
                    .map(|w| {
                        let wx: Vec<Complex64> =
                            w.iter().map(|row| cdot(row, x)).collect();
                        cdot(&r.rho, &wx).powi(6)
                    })
                    .sum::<Complex64>()
                    / r.weyl.len() as f64;
                vec![quad, sextic]
            }
        }
    }

    pub fn root_values(&self, v: &[Complex64]) -> Vec<Complex64> {
        let x = self.to_ambient(v);
        self.roots.iter().map(|a| cdot(a, &x)).collect()
    }

    pub fn positive_root_product(&self, v: &[Complex64]) -> Complex64 {
        let x = self.to_ambient(v);
        self.positive_roots.iter().map(|a| cdot(a, &x)).product()
    }

    /// Linear functional of a positive root in coroot coordinates.
    fn positive_root_functional(&self, idx: usize) -> Vec<f64> {
        let a = &self.positive_roots[idx];
        self.coroots.iter().map(|c| a.iter().zip(c).map(|(x, y)| x * y).sum()).collect()
    }
}

pub fn chi(inv: &InvariantSet, v: &[Complex64]) -> Vec<Complex64> {
    inv.eval_ambient(&inv.to_ambient(v))
}

fn jacobian_matrix(inv: &InvariantSet, v: &[Complex64]) -> DMatrix<Complex64> {
    let l = inv.rank();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let h = 1e-5 * (1.0 + norm);
    let central = |j: usize, step: f64| -> Vec<Complex64> {
        let mut plus = v.to_vec();
        let mut minus = v.to_vec();
        plus[j] += step;
        minus[j] -= step;
        let fp = chi(inv, &plus);
        let fm = chi(inv, &minus);
        fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * step)).collect()
    };
    let mut m = DMatrix::<Complex64>::zeros(l, l);
    for j in 0..l {
        let coarse = central(j, h);
        let fine = central(j, h / 2.0);
        for i in 0..l {
            m[(i, j)] = (fine[i] * 4.0 - coarse[i]) / 3.0;
        }
    }
    m
}

/// `det(∂Iᵢ/∂vⱼ)` by central differences with one Richardson step.
pub fn jacobian_det(inv: &InvariantSet, v: &[Complex64]) -> Complex64 {
    jacobian_matrix(inv, v).determinant()
}

/// Hadamard bound `∏ᵢ ‖∇Iᵢ‖`, the natural scale of `det dχ` at `v`.
pub fn jacobian_scale(inv: &InvariantSet, v: &[Complex64]) -> f64 {
    let m = jacobian_matrix(inv, v);
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .product()
}

/// `∏_{α∈𝓡} α(v)` with `v` in simple-coroot coordinates.
pub fn discriminant(rs: &RootSystem, v: &[Complex64]) -> Complex64 {
    let coroots: Vec<Vec<f64>> = rs.simple_coroots().iter().map(|c| to_f64s(c)).collect();
    let mut x = vec![Complex64::new(0.0, 0.0); rs.ambient_dim];
    for (vi, c) in v.iter().zip(&coroots) {
        for (xj, cj) in x.iter_mut().zip(c) {
            *xj += vi * cj;
        }
    }
    rs.roots.iter().map(|a| cdot(&to_f64s(a), &x)).product()
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscriminantReport {
    #[serde(rename = "type")]
    pub type_name: String,
    pub sample_points: Vec<Vec<Complex64>>,
    pub jacobian_values: Vec<Complex64>,
    pub pos_root_products: Vec<Complex64>,
    pub full_root_products: Vec<Complex64>,
    pub ratio_mean: Complex64,
    pub ratio_spread: f64,
    /// Spread of `det dχ / ∏_{α∈𝓡} α`; the degrees differ, so this is not expected to be small.
    pub full_root_ratio_spread: f64,
    pub full_root_degree_consistent: bool,
    /// Largest `|det dχ|` over points projected onto root hyperplanes, relative to
    /// `∏‖∇Iᵢ‖` at the regular point each projection started from.
    pub hyperplane_max_relative: f64,
    pub pass: bool,
}

fn mean_and_spread(xs: &[Complex64]) -> (Complex64, f64) {
    let mean = xs.iter().sum::<Complex64>() / xs.len() as f64;
    let spread = xs.iter().map(|x| (x - mean).norm()).fold(0.0, f64::max) / mean.norm();
    (mean, spread)
}

pub fn random_regular_point(inv: &InvariantSet, rng: &mut impl Rng) -> Result<Vec<Complex64>> {
    for _ in 0..MAX_REJECTIONS {
        let v: Vec<Complex64> = (0..inv.rank())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        if inv.root_values(&v).iter().all(|a| a.norm() >= NEAR_HYPERPLANE) {
            return Ok(v);
        }
    }
    Err(Error::SampleOnHyperplane(MAX_REJECTIONS))
}

/// Samples regular points and checks that `det dχ / ∏_{α∈𝓡⁺} α` is constant.
pub fn verify_chevalley(
    inv: &InvariantSet,
    rs: &RootSystem,
    n_samples: usize,
    seed: u64,
) -> Result<DiscriminantReport> {
    if n_samples < 2 {
        return Err(Error::InvalidInput("n_samples must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n_samples);
    let mut projected = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let v = random_regular_point(inv, &mut rng)?;
        let which = rng.random_range(0..inv.positive_roots.len());
        let c = inv.positive_root_functional(which);
        let cv: Complex64 = cdot(&c, &v);
        let cc: f64 = c.iter().map(|x| x * x).sum();
        projected.push(v.iter().zip(&c).map(|(vi, ci)| vi - cv * (ci / cc)).collect::<Vec<_>>());
        points.push(v);
    }

    let evals: Vec<(Complex64, Complex64, Complex64)> = points
        .par_iter()
        .map(|v| (jacobian_det(inv, v), inv.positive_root_product(v), discriminant(rs, v)))
        .collect();
    // Scale taken at the regular point before projection: on the hyperplane a
    // whole gradient row may vanish, which would make the local Hadamard bound useless.
    let hyperplane_max_relative = projected
        .par_iter()
        .zip(points.par_iter())
        .map(|(v, orig)| jacobian_det(inv, v).norm() / jacobian_scale(inv, orig))
        .reduce(|| 0.0, f64::max);

    let jacobian_values: Vec<Complex64> = evals.iter().map(|e| e.0).collect();
    let pos_root_products: Vec<Complex64> = evals.iter().map(|e| e.1).collect();
    let full_root_products: Vec<Complex64> = evals.iter().map(|e| e.2).collect();
    let ratios: Vec<Complex64> =
        evals.iter().map(|(j, p, _)| j / p).collect();
    let full_ratios: Vec<Complex64> =
        evals.iter().map(|(j, _, f)| j / f).collect();
    let (ratio_mean, ratio_spread) = mean_and_spread(&ratios);
    let (_, full_root_ratio_spread) = mean_and_spread(&full_ratios);
    let exps: usize = inv.degrees.iter().map(|d| d - 1).sum();

    Ok(DiscriminantReport {
        type_name: inv.cartan_type.to_string(),
        sample_points: points,
        jacobian_values,
        pos_root_products,
        full_root_products,
        ratio_mean,
        ratio_spread,
        full_root_ratio_spread,
        full_root_degree_consistent: exps == inv.roots.len(),
        hyperplane_max_relative,
        pass: ratio_spread < SPREAD_TOL && hyperplane_max_relative < HYPERPLANE_TOL,
    })
}

/// Largest relative deviation of `Iᵢ(w·v)` from `Iᵢ(v)` and of `Iᵢ(s v)` from `s^{dᵢ} Iᵢ(v)`.
pub fn invariance_residual(
    inv: &InvariantSet,
    weyl: &rootsys::WeylGroup,
    n_samples: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weyl_err: f64 = 0.0;
    let mut homog_err: f64 = 0.0;
    for _ in 0..n_samples {
        let v: Vec<Complex64> = (0..inv.rank())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let x = inv.to_ambient(&v);
        let base = inv.eval_ambient(&x);
        let scale: Vec<f64> = inv
            .degrees
            .iter()
            .map(|&d| x.iter().map(|z| z.norm()).sum::<f64>().powi(d as i32))
            .collect();
        for w in &weyl.elements {
            let wx = w.apply_f64(&x);
            for ((a, b), s) in inv.eval_ambient(&wx).iter().zip(&base).zip(&scale) {
                weyl_err = weyl_err.max((a - b).norm() / s);
            }
        }
        let s = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let sv: Vec<Complex64> = v.iter().map(|z| z * s).collect();
        for ((a, b), (&d, sc)) in chi(inv, &sv).iter().zip(&base).zip(inv.degrees.iter().zip(&scale)) {
            let want = b * s.powi(d as i32);
            homog_err = homog_err.max((a - want).norm() / (sc * s.norm().powi(d as i32)));
        }
    }
    (weyl_err, homog_err)
}
