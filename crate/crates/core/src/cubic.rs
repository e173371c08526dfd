//! The cubic of the SL2 leaf, evaluated two ways: as a sum over branch points
//! of `Res²` of the root-sum integrand, and as `Res²` of the discriminant
//! log-derivative paired with the Killing cup product. A contour-Laurent
//! extraction of `Res²` serves as the brute-force check on the closed form.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::spectral::aberth::aberth;
use crate::spectral::{tangent_to_differential, GenericityTolerances, HoloDifferential, LeafTangent, SpectralCurve};

/// Values `α(H)` of the two roots of `sl₂` on the coweight `H`.
pub const SL2_ROOTS: [f64; 2] = [2.0, -2.0];

const LAURENT_SAMPLES: usize = 256;
const CONTOUR_FRACTION: f64 = 0.1;
const CONTOUR_HALVINGS: usize = 8;
const NEWTON_ITERATIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisLabel {
    /// All slots in the monomial leaf basis `zⁱ dz/(2ŷ)`.
    Leaf,
    /// First slot leaf basis, the other two `z^a dz/ŷ`.
    Mixed,
    /// First slot leaf basis, the other two A-normalized differentials.
    Normalized,
    /// Caller-supplied polynomials.
    Custom,
}

/// A 3-tensor, stored row-major as `entries[(i·n₁ + j)·n₂ + k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicTensor {
    pub dims: [usize; 3],
    pub entries: Vec<Complex64>,
    pub basis: BasisLabel,
}

impl CubicTensor {
    pub fn zeros(dims: [usize; 3], basis: BasisLabel) -> Self {
        CubicTensor {
            dims,
            entries: vec![Complex64::new(0.0, 0.0); dims[0] * dims[1] * dims[2]],
            basis,
        }
    }

    /// Dimension of a cubic tensor; panics for non-cubic shapes.
    pub fn dim(&self) -> usize {
        assert!(self.dims[0] == self.dims[1] && self.dims[1] == self.dims[2]);
        self.dims[0]
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.entries[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Complex64) {
        let idx = self.index(i, j, k);
        self.entries[idx] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation under the six index permutations, relative to the largest entry.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.dim();
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    for w in [self.get(i, k, j), self.get(j, i, k), self.get(j, k, i), self.get(k, i, j), self.get(k, j, i)] {
                        worst = worst.max((v - w).norm());
                    }
                }
            }
        }
        worst / scale
    }

    /// Residual of symmetry in the last two slots only.
    pub fn pair_symmetry_residual(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2].min(self.dims[1]) {
                    worst = worst.max((self.get(i, j, k) - self.get(i, k, j)).norm());
                }
            }
        }
        worst / scale
    }

    /// Largest entrywise difference relative to the larger of the two tensors.
    pub fn relative_difference(&self, other: &CubicTensor) -> f64 {
        let scale = self.max_abs().max(other.max_abs());
        if scale == 0.0 {
            return 0.0;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale
    }

    /// Nested `[i][j][k] -> [re, im]` arrays.
    pub fn to_nested(&self) -> Vec<Vec<Vec<[f64; 2]>>> {
        (0..self.dims[0])
            .map(|i| {
                (0..self.dims[1])
                    .map(|j| (0..self.dims[2]).map(|k| {
                        let z = self.get(i, j, k);
                        [z.re, z.im]
                    }).collect())
                    .collect()
            })
            .collect()
    }
}

/// A quadratic differential `num(z) / (den_const · b̂(z)^b_power) dz²` on the affine chart.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRational {
    pub num: Poly,
    pub den_const: Complex64,
    pub b_power: u32,
}

impl QuadRational {
    pub fn eval(&self, curve: &SpectralCurve, z: Complex64) -> Complex64 {
        self.num.eval(z) / (self.den_const * curve.b().eval(z).powu(self.b_power))
    }

    /// Numerator `h` of the equivalent `h / b̂²` form; only defined for `b_power == 2`.
    pub fn over_b_squared(&self) -> Result<Poly> {
        if self.b_power != 2 {
            return Err(Error::InvalidInput(format!(
                "expected a double pole along the branch locus, got b̂^{}",
                self.b_power
            )));
        }
        Ok(self.num.scale(self.den_const.inv()))
    }
}

/// `Σ_{α∈𝓡} α(η) α(ζ)` for SL2, as `2 p_η p_ζ dz² / b̂`.
pub fn killing_cup(eta: &HoloDifferential, zeta: &HoloDifferential) -> QuadRational {
    // α(η) = α(H) · p_η dz/(2ŷ); the product over both slots carries 1/(4ŷ²) = 1/(4b̂).
    let weight: f64 = SL2_ROOTS.iter().map(|a| a * a / 4.0).sum();
    QuadRational {
        num: (&eta.p * &zeta.p).scale(Complex64::new(weight, 0.0)),
        den_const: Complex64::new(1.0, 0.0),
        b_power: 1,
    }
}

/// `Res²_e` of `h(z) dz² / b̂(z)²` at a simple zero `e` of `b̂`: `4 h(e) / b̂'(e)²`.
pub fn res2_closed(h: &Poly, curve: &SpectralCurve, e: Complex64) -> Result<Complex64> {
    let db = curve.b().derivative();
    let slope = db.eval(e);
    if slope.norm() < GenericityTolerances::default().derivative * db.abs_eval(e).max(1.0) {
        return Err(Error::DerivativeVanishes(e.to_string()));
    }
    Ok(h.eval(e) * 4.0 / (slope * slope))
}

/// Laurent coefficients `a₋₂, a₋₁, a₀` of a quadratic differential `f(t) dt²` at a branch point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadDifferentialGerm {
    pub at: Complex64,
    pub laurent: [Complex64; 3],
}

impl QuadDifferentialGerm {
    pub fn res2(&self) -> Complex64 {
        self.laurent[0]
    }
}

/// Numerical `Res²` in the local coordinate `t = ŷ`.
pub fn res2_numeric(
    omega: impl Fn(Complex64) -> Complex64,
    curve: &SpectralCurve,
    e: Complex64,
) -> Result<QuadDifferentialGerm> {
    res2_numeric_scaled(omega, curve, e, Complex64::new(1.0, 0.0))
}

/// As [`res2_numeric`], in the rescaled local coordinate `s = c·ŷ`.
///
/// `omega` returns the coefficient of `dz²`. The map `s ↦ z(s)` solves
/// `b̂(z) = (s/c)²` by Newton continuation around the circle. The circle starts
/// at a tenth of the distance to the nearest other branch point, shrunk so that
/// `|s|² ≤ |b̂(w)|/4` at every critical point `w`, and is halved whenever the
/// continuation leaves the neighbourhood of `e`.
pub fn res2_numeric_scaled(
    omega: impl Fn(Complex64) -> Complex64,
    curve: &SpectralCurve,
    e: Complex64,
    coord_scale: Complex64,
) -> Result<QuadDifferentialGerm> {
    let b = curve.b();
    let db = b.derivative();
    let slope = db.eval(e);
    let dist = curve
        .branch_points()
        .iter()
        .map(|&o| (o - e).norm())
        .filter(|&r| r > 0.0)
        .fold(f64::INFINITY, f64::min);
    let dist = if dist.is_finite() { dist } else { 1.0 };
    // keep the critical values of b̂ outside twice the contour, so z(s) stays analytic there
    let critical_floor = if db.degree().unwrap_or(0) >= 1 {
        aberth(&db)?.iter().map(|&w| b.eval(w).norm()).fold(f64::INFINITY, f64::min)
    } else {
        f64::INFINITY
    };
    let c2 = coord_scale * coord_scale;
    let mut radius_z = (CONTOUR_FRACTION * dist).min(0.25 * critical_floor / slope.norm());
    for _ in 0..CONTOUR_HALVINGS {
        let rho = (radius_z * slope.norm()).sqrt() * coord_scale.norm();
        if !rho.is_finite() || rho < 1e-150 {
            return Err(Error::ContourTooLarge(rho));
        }
        if let Some(laurent) = laurent_on_circle(&omega, b, &db, e, slope, c2, rho, 5.0 * radius_z) {
            return Ok(QuadDifferentialGerm { at: e, laurent });
        }
        radius_z *= 0.5;
    }
    Err(Error::NonConvergence(NEWTON_ITERATIONS))
}

#[allow(clippy::too_many_arguments)]
fn laurent_on_circle(
    omega: &impl Fn(Complex64) -> Complex64,
    b: &Poly,
    db: &Poly,
    e: Complex64,
    slope: Complex64,
    c2: Complex64,
    rho: f64,
    leash: f64,
) -> Option<[Complex64; 3]> {
    let n = LAURENT_SAMPLES;
    let mut z = e;
    let mut sums = [Complex64::new(0.0, 0.0); 3];
    for k in 0..n {
        let s = Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
        let target = s * s / c2;
        if k == 0 {
            z = e + target / slope;
        }
        let mut converged = false;
        for _ in 0..NEWTON_ITERATIONS {
            let (v, dv) = b.eval_with_derivative(z);
            let step = (v - target) / dv;
            z -= step;
            let floor = 64.0 * f64::EPSILON * (b.abs_eval(z) + target.norm());
            if step.norm() <= 1e-15 * (1.0 + z.norm()) || (b.eval(z) - target).norm() <= floor {
                converged = true;
                break;
            }
        }
        if !converged || (z - e).norm() > leash {
            return None;
        }
        let dz_ds = s * 2.0 / (c2 * db.eval(z));
        let f = omega(z) * dz_ds * dz_ds;
        // a_n = (1/N) Σ f(s_k) s_k^{-n}
        sums[0] += f * s * s;
        sums[1] += f * s;
        sums[2] += f;
    }
    let scale = 1.0 / n as f64;
    Some([sums[0] * scale, sums[1] * scale, sums[2] * scale])
}

/// The quadratic differential `Σ_{α∈𝓡} α(ξ)α(η)α(ζ)/α(λ_o)` as `h dz²/b̂²`.
///
/// With `α(ξ) = α(H)·p dz/(2ŷ)` and `α(λ_o) = α(H)·ŷ dz/q_D`.
pub fn root_sum_integrand(curve: &SpectralCurve, px: &Poly, py: &Poly, pz: &Poly) -> QuadRational {
    let weight: f64 = SL2_ROOTS.iter().map(|a| a.powi(3) / 8.0 / a).sum();
    QuadRational {
        num: (&(&(px * py) * pz) * curve.q_d()).scale(Complex64::new(weight, 0.0)),
        den_const: Complex64::new(1.0, 0.0),
        b_power: 2,
    }
}

/// Per-branch-point summands of the root-sum formula for one triple of slots.
pub fn root_sum_summands(curve: &SpectralCurve, px: &Poly, py: &Poly, pz: &Poly) -> Result<Vec<Complex64>> {
    let h = root_sum_integrand(curve, px, py, pz).over_b_squared()?;
    curve.branch_points().iter().map(|&e| res2_closed(&h, curve, e)).collect()
}

/// Root-sum cubic on arbitrary slot polynomials, `ξ = p dz/(2ŷ)` in each slot.
pub fn cubic_form(curve: &SpectralCurve, slots: [&[Poly]; 3], basis: BasisLabel) -> Result<CubicTensor> {
    let mut out = CubicTensor::zeros([slots[0].len(), slots[1].len(), slots[2].len()], basis);
    for (i, pi) in slots[0].iter().enumerate() {
        for (j, pj) in slots[1].iter().enumerate() {
            for (k, pk) in slots[2].iter().enumerate() {
                let total = root_sum_summands(curve, pi, pj, pk)?.into_iter().sum();
                out.set(i, j, k, total);
            }
        }
    }
    Ok(out)
}

fn tangent_polys(tangents: &[LeafTangent]) -> Vec<Poly> {
    tangents.iter().map(|t| tangent_to_differential(t).p).collect()
}

/// The cubic from the root-sum residue formula, in the given leaf basis.
pub fn cubic_root_sum(curve: &SpectralCurve, tangents: &[LeafTangent]) -> Result<CubicTensor> {
    let p = tangent_polys(tangents);
    cubic_form(curve, [&p, &p, &p], BasisLabel::Leaf)
}

/// The cubic from the discriminant log-derivative formula.
pub fn cubic_log_discriminant(curve: &SpectralCurve, tangents: &[LeafTangent]) -> Result<CubicTensor> {
    let norm: Complex64 = SL2_ROOTS.iter().map(|&a| Complex64::new(a, 0.0)).product();
    cubic_log_discriminant_with(curve, tangents, norm)
}

/// Discriminant `𝔇 = c·b̂·e²`; `c` drops out of `𝓛_Y 𝔇 / 𝔇`.
pub fn cubic_log_discriminant_with(
    curve: &SpectralCurve,
    tangents: &[LeafTangent],
    discriminant_const: Complex64,
) -> Result<CubicTensor> {
    let g = tangents.len();
    let diffs: Vec<HoloDifferential> = tangents.iter().map(tangent_to_differential).collect();
    let mut out = CubicTensor::zeros([g, g, g], BasisLabel::Leaf);
    for (i, t) in tangents.iter().enumerate() {
        // 𝓛_{Y}𝔇 / 𝔇 = c·δb̂ / (c·b̂)
        let log_num = curve.leaf_polynomial(t).scale(discriminant_const);
        for j in 0..g {
            for k in 0..g {
                let cup = killing_cup(&diffs[j], &diffs[k]);
                let product = QuadRational {
                    num: &log_num * &cup.num,
                    den_const: discriminant_const * cup.den_const,
                    b_power: 1 + cup.b_power,
                };
                let h = product.over_b_squared()?;
                let mut total = Complex64::new(0.0, 0.0);
                for &e in curve.branch_points() {
                    total += res2_closed(&h, curve, e)? * 0.5;
                }
                out.set(i, j, k, total);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CubicReport {
    pub basis: BasisLabel,
    pub dim: usize,
    pub entries: Vec<Vec<Vec<[f64; 2]>>>,
    pub entries_a: Option<Vec<Vec<Vec<[f64; 2]>>>>,
    pub symmetry_residual: f64,
    #[serde(rename = "AB_residual")]
    pub ab_residual: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicForm {
    /// log-discriminant form
    A,
    /// root-sum form
    B,
    Both,
}

pub fn cubic_report(curve: &SpectralCurve, form: CubicForm) -> Result<CubicReport> {
    let basis = crate::spectral::leaf_basis(curve.divisor());
    let b = cubic_root_sum(curve, &basis)?;
    let a = cubic_log_discriminant(curve, &basis)?;
    let (main, extra, ab) = match form {
        CubicForm::A => (&a, None, None),
        CubicForm::B => (&b, None, None),
        CubicForm::Both => (&b, Some(a.to_nested()), Some(a.relative_difference(&b))),
    };
    Ok(CubicReport {
        basis: main.basis,
        dim: basis.len(),
        entries: main.to_nested(),
        entries_a: extra,
        symmetry_residual: if basis.is_empty() { 0.0 } else { main.symmetry_residual() },
        ab_residual: ab,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{leaf_basis, make_curve, Divisor};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadratic_curve() -> SpectralCurve {
        let div = Divisor::simple(vec![c(3.0, 0.0), c(4.0, 0.0), c(5.0, 0.0)]).unwrap();
        make_curve(&div, Poly::from_real(&[-1.0, 0.0, 1.0])).unwrap()
    }

    fn sextic_curve() -> SpectralCurve {
        let div = Divisor::simple(vec![c(0.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0), c(3.0, 0.0), c(-3.0, 0.0)]).unwrap();
        make_curve(&div, Poly::from_real(&[-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0])).unwrap()
    }

    fn one() -> Poly {
        Poly::constant(c(1.0, 0.0))
    }

    #[test]
    fn killing_cup_examples() {
        let eta = HoloDifferential { p: one() };
        let cup = killing_cup(&eta, &eta);
        assert_eq!(cup.num, Poly::constant(c(2.0, 0.0)));
        assert_eq!(cup.b_power, 1);
        let zero = HoloDifferential { p: Poly::zero() };
        assert!(killing_cup(&zero, &eta).num.is_zero());
        let zeta = HoloDifferential { p: Poly::from_real(&[1.0, 2.0]) };
        assert_eq!(killing_cup(&eta, &zeta), killing_cup(&zeta, &eta));
    }

    #[test]
    fn res2_closed_examples() {
        let curve = quadratic_curve();
        let v = res2_closed(&one(), &curve, c(1.0, 0.0)).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);
        let num = res2_numeric(|z| (curve.b().eval(z) * curve.b().eval(z)).inv(), &curve, c(1.0, 0.0)).unwrap();
        assert!((num.res2() - c(1.0, 0.0)).norm() < 1e-9);

        let sextic = sextic_curve();
        let v = res2_closed(&one(), &sextic, c(1.0, 0.0)).unwrap();
        assert!((v - c(1.0 / 9.0, 0.0)).norm() < 1e-15);
        let num = res2_numeric(|z| sextic.b().eval(z).powi(2).inv(), &sextic, c(1.0, 0.0)).unwrap();
        assert!((num.res2() - v).norm() < 1e-9);

        let vanishing = Poly::from_real(&[-1.0, 1.0]);
        assert_eq!(res2_closed(&vanishing, &sextic, c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn res2_numeric_on_holomorphic_input() {
        let curve = sextic_curve();
        for &e in curve.branch_points() {
            let g = res2_numeric(|z| z * z + 1.0, &curve, e).unwrap();
            assert!(g.laurent[0].norm() < 1e-9 && g.laurent[1].norm() < 1e-9);
        }
    }

    #[test]
    fn res2_leading_coefficient_is_coordinate_independent() {
        let curve = sextic_curve();
        let omega = |z: Complex64| (z + 2.0) / curve.b().eval(z).powi(2);
        for &e in curve.branch_points() {
            let a = res2_numeric(omega, &curve, e).unwrap();
            let b = res2_numeric_scaled(omega, &curve, e, c(2.0, 0.0)).unwrap();
            let r = res2_numeric_scaled(omega, &curve, e, c(0.3, 1.1)).unwrap();
            assert!((a.res2() - b.res2()).norm() < 1e-9 * a.res2().norm().max(1.0));
            assert!((a.res2() - r.res2()).norm() < 1e-9 * a.res2().norm().max(1.0));
        }
    }

    #[test]
    fn sextic_cubic_matches_root_of_unity_sum() {
        let curve = sextic_curve();
        let basis = leaf_basis(curve.divisor());
        let cb = cubic_root_sum(&curve, &basis).unwrap();
        // independent sum over sixth roots of unity: (1/9) Σ ζ^{i+j+k} q_D(ζ) / ζ^{10}
        let qd = |z: Complex64| z * (z * z - 4.0) * (z * z - 9.0);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let want: Complex64 = (0..6)
                        .map(|m| {
                            let zeta = Complex64::from_polar(1.0, std::f64::consts::PI * m as f64 / 3.0);
                            zeta.powi((i + j + k) as i32) * qd(zeta) / zeta.powi(10) / 9.0
                        })
                        .sum();
                    assert!((cb.get(i, j, k) - want).norm() < 1e-13, "{i}{j}{k}");
                }
            }
        }
        assert_eq!(cb.symmetry_residual(), 0.0);
    }

    #[test]
    fn residue_forms_agree() {
        for curve in [quadratic_curve(), sextic_curve()] {
            let basis = leaf_basis(curve.divisor());
            let a = cubic_log_discriminant(&curve, &basis).unwrap();
            let b = cubic_root_sum(&curve, &basis).unwrap();
            assert!(a.relative_difference(&b) < 1e-12);
        }
    }

    #[test]
    fn discriminant_normalization_drops_out() {
        let curve = sextic_curve();
        let basis = leaf_basis(curve.divisor());
        let a = cubic_log_discriminant(&curve, &basis).unwrap();
        let a7 = cubic_log_discriminant_with(&curve, &basis, c(-28.0, 0.0)).unwrap();
        assert!(a.relative_difference(&a7) < 1e-14);
    }

    #[test]
    fn zero_tangent_gives_zero_slice() {
        let curve = sextic_curve();
        let basis = vec![LeafTangent { p: Poly::zero() }, LeafTangent { p: Poly::monomial(1) }];
        for t in [cubic_root_sum(&curve, &basis).unwrap(), cubic_log_discriminant(&curve, &basis).unwrap()] {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(t.get(0, j, k), c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn genus_one_single_entry() {
        let div = Divisor::simple(vec![c(2.0, 1.0), c(-2.0, 0.5), c(0.5, -2.0), c(3.0, 0.0)]).unwrap();
        let b = Poly::from_roots(&[c(1.0, 0.1), c(-1.0, 0.2), c(0.2, 1.0), c(-0.1, -1.2)]);
        let curve = make_curve(&div, b).unwrap();
        let basis = leaf_basis(&div);
        assert_eq!(basis.len(), 1);
        let a = cubic_log_discriminant(&curve, &basis).unwrap();
        let bb = cubic_root_sum(&curve, &basis).unwrap();
        assert!((a.get(0, 0, 0) - bb.get(0, 0, 0)).norm() < 1e-12 * bb.get(0, 0, 0).norm());
    }

    #[test]
    fn summands_match_numeric_res2_of_literal_integrand() {
        let curve = sextic_curve();
        let (px, py, pz) = (one(), Poly::monomial(1), Poly::from_real(&[0.5, -1.0]));
        let summands = root_sum_summands(&curve, &px, &py, &pz).unwrap();
        // literal integrand Σ_α α(ξ)α(η)α(ζ)/α(λ) built from the root values
        let literal = |z: Complex64| {
            let y2 = curve.b().eval(z);
            SL2_ROOTS
                .iter()
                .map(|&a| {
                    let y = y2.sqrt();
                    let ax = px.eval(z) * a / (y * 2.0);
                    let ay = py.eval(z) * a / (y * 2.0);
                    let az = pz.eval(z) * a / (y * 2.0);
                    ax * ay * az / (y * a / curve.q_d().eval(z))
                })
                .sum::<Complex64>()
        };
        for (&e, s) in curve.branch_points().iter().zip(&summands) {
            let g = res2_numeric(literal, &curve, e).unwrap();
            assert!((g.res2() - s).norm() < 1e-8 * s.norm().max(1e-3), "{e}");
        }
    }

    #[test]
    fn report_shapes() {
        let rep = cubic_report(&sextic_curve(), CubicForm::Both).unwrap();
        assert_eq!(rep.dim, 2);
        assert!(rep.ab_residual.unwrap() < 1e-12);
        assert!(rep.symmetry_residual < 1e-15);
    }
}
