//! Period matrices of `ŷ² = b̂(z)` (even degree `2g + 2`).
//!
//! Branch points are joined into a polygonal chain `c₀ → c₁ → … → c_{2g+1}` in
//! canonical order. Lifting segment `s` to both sheets gives a cycle `γ_s`;
//! sheets on consecutive segments are related by counterclockwise
//! continuation around the shared branch point, which makes every adjacent
//! intersection number equal. Then `A_k = γ_{2k}` and
//! `B_k = γ_{2k+1} + γ_{2k+3} + … + γ_{2g−1}` is a symplectic basis.
//!
//! The basis is certified after the fact: `Z` must be symmetric with
//! positive-definite imaginary part.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::spectral::{lex_key, SpectralCurve};

/// Sign applied to every B-cycle so that `Im Z ≻ 0` with the chain conventions above.
const B_ORIENTATION: f64 = -1.0;
const MIN_ORDER: usize = 16;

#[derive(Debug, Clone, Copy)]
pub struct PeriodConfig {
    pub quad_tol: f64,
    pub max_order: usize,
    pub sym_tol: f64,
    pub max_cond: f64,
}

impl Default for PeriodConfig {
    fn default() -> Self {
        PeriodConfig {
            quad_tol: 1e-10,
            max_order: 4096,
            sym_tol: 1e-8,
            max_cond: 1e8,
        }
    }
}

/// Permutation sorting the points by real part, then imaginary part.
pub fn canonical_order(points: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ka, kb) = (lex_key(points[a]), lex_key(points[b]));
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
    idx
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cycle {
    A(usize),
    B(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomologyBasis {
    /// Branch points in chain order.
    pub chain: Vec<Complex64>,
    /// `g + 1` consecutive pairs of chain indices; the first `g` carry A-cycles.
    pub pairs: Vec<(usize, usize)>,
    /// Chain segment of each A-cycle.
    pub a_cycles: Vec<usize>,
    /// Chain segments summed into each B-cycle (the gaps from pair `k` to pair `g + 1`).
    pub b_chains: Vec<Vec<usize>>,
}

impl HomologyBasis {
    /// Basis for branch points already listed in the intended chain order.
    pub fn from_chain(chain: Vec<Complex64>) -> Result<Self> {
        if chain.len() < 4 || !chain.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "need an even number (≥ 4) of branch points, got {}",
                chain.len()
            )));
        }
        let g = chain.len() / 2 - 1;
        Ok(HomologyBasis {
            pairs: (0..=g).map(|k| (2 * k, 2 * k + 1)).collect(),
            a_cycles: (0..g).map(|k| 2 * k).collect(),
            b_chains: (0..g).map(|k| (k..g).map(|m| 2 * m + 1).collect()).collect(),
            chain,
        })
    }

    pub fn genus(&self) -> usize {
        self.a_cycles.len()
    }
}

pub fn build_homology(branch_points: &[Complex64]) -> Result<HomologyBasis> {
    let order = canonical_order(branch_points);
    HomologyBasis::from_chain(order.into_iter().map(|i| branch_points[i]).collect())
}

/// Straight segment of the chain with a fixed branch of `ŷ` along it.
struct Segment {
    start: Complex64,
    delta: Complex64,
    /// `√lc · √Δ · √(−Δ)`.
    prefactor: Complex64,
    /// `(eⱼ, √(w_j(0)))` for every branch point off the segment, `w_j(t) = start + tΔ − eⱼ`.
    others: Vec<(Complex64, Complex64)>,
}

impl Segment {
    fn new(lc: Complex64, chain: &[Complex64], s: usize) -> Self {
        let start = chain[s];
        let delta = chain[s + 1] - start;
        let others = chain
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != s && j != s + 1)
            .map(|(_, &e)| (e, (start - e).sqrt()))
            .collect();
        Segment {
            start,
            delta,
            prefactor: lc.sqrt() * delta.sqrt() * (-delta).sqrt(),
            others,
        }
    }

    /// `ŷ(z(t)) / √(t(1−t))`, continued factor by factor from `t = 0`.
    fn regular_part(&self, t: f64) -> Complex64 {
        let z = self.start + self.delta * t;
        self.others.iter().fold(self.prefactor, |acc, &(e, root0)| {
            let w0 = root0 * root0;
            acc * root0 * ((z - e) / w0).sqrt()
        })
    }

    /// `lim ŷ / √ρ` as the segment enters its endpoint, `ρ = |z − end|`.
    fn arrival_coefficient(&self) -> Complex64 {
        let at_one = self.regular_part(1.0);
        at_one / self.delta.norm().sqrt()
    }

    /// `lim ŷ / √ρ` as the segment leaves its start point, `ρ = |z − start|`.
    fn departure_coefficient(&self) -> Complex64 {
        self.regular_part(0.0) / self.delta.norm().sqrt()
    }

    /// `∫ num(z) dz / ŷ` along the segment for each numerator, by Gauss–Chebyshev with doubling.
    fn integrate(&self, numerators: &[Poly], cfg: &PeriodConfig) -> Result<Vec<Complex64>> {
        let eval = |n: usize| -> Vec<Complex64> {
            let mut acc = vec![Complex64::new(0.0, 0.0); numerators.len()];
            for k in 1..=n {
                let x = ((2 * k - 1) as f64 * PI / (2 * n) as f64).cos();
                let t = 0.5 * (1.0 + x);
                let z = self.start + self.delta * t;
                let w = self.delta / self.regular_part(t);
                for (a, num) in acc.iter_mut().zip(numerators) {
                    *a += num.eval(z) * w;
                }
            }
            acc.iter().map(|v| v * (PI / n as f64)).collect()
        };
        let mut n = MIN_ORDER;
        let mut prev = eval(n);
        loop {
            n *= 2;
            let cur = eval(n);
            let scale = cur.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let change = cur.iter().zip(&prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if change <= cfg.quad_tol * scale || scale == 0.0 {
                return Ok(cur);
            }
            if n >= cfg.max_order {
                return Err(Error::QuadratureStall {
                    order: n,
                    change: change / scale,
                });
            }
            prev = cur;
        }
    }
}

/// Sheet signs `σ_s` making consecutive segments counterclockwise continuations of each other.
fn sheet_signs(segments: &[Segment]) -> Vec<f64> {
    let mut signs = vec![1.0; segments.len()];
    for s in 1..segments.len() {
        let incoming = -segments[s - 1].delta;
        let outgoing = segments[s].delta;
        let mut phi = outgoing.arg() - incoming.arg();
        if phi <= 0.0 {
            phi += 2.0 * PI;
        }
        let expected = segments[s - 1].arrival_coefficient() * Complex64::from_polar(1.0, phi / 2.0);
        let ratio = segments[s].departure_coefficient() / expected;
        signs[s] = signs[s - 1] * ratio.re.signum();
    }
    signs
}

/// Integrals of `num(z) dz/ŷ` over every chain cycle `γ_s` (twice the sheet-signed segment integral).
pub fn chain_cycle_integrals(
    curve: &SpectralCurve,
    basis: &HomologyBasis,
    numerators: &[Poly],
    cfg: &PeriodConfig,
) -> Result<Vec<Vec<Complex64>>> {
    let lc = curve.b().leading();
    let segments: Vec<Segment> = (0..basis.chain.len() - 1)
        .map(|s| Segment::new(lc, &basis.chain, s))
        .collect();
    let signs = sheet_signs(&segments);
    segments
        .iter()
        .zip(&signs)
        .map(|(seg, &sigma)| {
            Ok(seg
                .integrate(numerators, cfg)?
                .into_iter()
                .map(|v| v * (2.0 * sigma))
                .collect())
        })
        .collect()
}

fn assemble(gammas: &[Vec<Complex64>], basis: &HomologyBasis, cycle: Cycle, a: usize) -> Complex64 {
    match cycle {
        Cycle::A(k) => gammas[basis.a_cycles[k]][a],
        Cycle::B(k) => basis.b_chains[k].iter().map(|&s| gammas[s][a]).sum::<Complex64>() * B_ORIENTATION,
    }
}

/// `∮_cycle num(z) dz/ŷ`.
pub fn cycle_integral(
    curve: &SpectralCurve,
    numerator: &Poly,
    basis: &HomologyBasis,
    cycle: Cycle,
    cfg: &PeriodConfig,
) -> Result<Complex64> {
    let gammas = chain_cycle_integrals(curve, basis, std::slice::from_ref(numerator), cfg)?;
    Ok(assemble(&gammas, basis, cycle, 0))
}

#[derive(Debug, Clone)]
pub struct PeriodData {
    /// `a[(a, j)] = ∮_{A_j} z^a dz/ŷ`.
    pub a: DMatrix<Complex64>,
    pub b: DMatrix<Complex64>,
    /// `Z = A⁻¹ B`; `Z_{jk} = ∮_{B_k} ω_j`.
    pub z: DMatrix<Complex64>,
    /// Normalized differentials `ω_j = Σ_a N_{aj} z^a dz/ŷ`, `N = (A⁻¹)ᵀ`.
    pub n: DMatrix<Complex64>,
    pub cond_a: f64,
    pub sym_residual: f64,
    pub min_imag_eig: f64,
    pub basis: HomologyBasis,
}

pub fn period_matrix(curve: &SpectralCurve) -> Result<PeriodData> {
    period_matrix_with(curve, &build_homology(curve.branch_points())?, &PeriodConfig::default())
}

/// Period data without the symmetry/positivity certificate (still rejects singular `A`).
pub fn raw_period_matrix(
    curve: &SpectralCurve,
    basis: &HomologyBasis,
    cfg: &PeriodConfig,
) -> Result<PeriodData> {
    let g = basis.genus();
    if g == 0 || g != curve.genus() {
        return Err(Error::InvalidInput(format!(
            "homology basis of genus {g} does not fit a curve of genus {}",
            curve.genus()
        )));
    }
    let numerators: Vec<Poly> = (0..g).map(Poly::monomial).collect();
    let gammas = chain_cycle_integrals(curve, basis, &numerators, cfg)?;
    let a = DMatrix::from_fn(g, g, |r, c| assemble(&gammas, basis, Cycle::A(c), r));
    let b = DMatrix::from_fn(g, g, |r, c| assemble(&gammas, basis, Cycle::B(c), r));

    let sv = a.clone().singular_values();
    let cond_a = sv.max() / sv.min();
    if !cond_a.is_finite() || cond_a > cfg.max_cond {
        return Err(Error::IllConditioned(cond_a));
    }
    let a_inv = a.clone().try_inverse().ok_or(Error::IllConditioned(f64::INFINITY))?;
    let z = &a_inv * &b;
    let n = a_inv.transpose();

    let zmax = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let sym_residual = (&z - z.transpose()).iter().map(|v| v.norm()).fold(0.0, f64::max) / zmax;
    let im = DMatrix::from_fn(g, g, |r, c| 0.5 * (z[(r, c)].im + z[(c, r)].im));
    let min_imag_eig = SymmetricEigen::new(im).eigenvalues.min();
    Ok(PeriodData {
        a,
        b,
        z,
        n,
        cond_a,
        sym_residual,
        min_imag_eig,
        basis: basis.clone(),
    })
}

pub fn period_matrix_with(
    curve: &SpectralCurve,
    basis: &HomologyBasis,
    cfg: &PeriodConfig,
) -> Result<PeriodData> {
    let pd = raw_period_matrix(curve, basis, cfg)?;
    if pd.sym_residual.is_nan() || pd.sym_residual >= cfg.sym_tol {
        return Err(Error::SymmetryFail(pd.sym_residual));
    }
    let g = pd.z.nrows();
    let im = DMatrix::from_fn(g, g, |r, c| 0.5 * (pd.z[(r, c)].im + pd.z[(c, r)].im));
    if im.cholesky().is_none() || pd.min_imag_eig.is_nan() || pd.min_imag_eig <= 0.0 {
        return Err(Error::PositivityFail(pd.min_imag_eig));
    }
    Ok(pd)
}

fn nested(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodReport {
    #[serde(rename = "A")]
    pub a: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "Z")]
    pub z: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "cond_A")]
    pub cond_a: f64,
    pub sym_residual: f64,
    pub min_imag_eig: f64,
}

impl From<&PeriodData> for PeriodReport {
    fn from(pd: &PeriodData) -> Self {
        PeriodReport {
            a: nested(&pd.a),
            b: nested(&pd.b),
            z: nested(&pd.z),
            cond_a: pd.cond_a,
            sym_residual: pd.sym_residual,
            min_imag_eig: pd.min_imag_eig,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_curve, Divisor};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn far_divisor(deg: usize) -> Divisor {
        Divisor::simple((0..deg).map(|k| c(5.0 + k as f64, 3.0)).collect()).unwrap()
    }

    #[test]
    fn canonical_order_examples() {
        assert_eq!(canonical_order(&[c(1.0, 0.0), c(-1.0, 0.0)]), vec![1, 0]);
        let roots: Vec<Complex64> = (0..6).map(|k| Complex64::from_polar(1.0, PI * k as f64 / 3.0)).collect();
        let ord = canonical_order(&roots);
        assert_eq!(ord[0], 3);
        // equal real parts: smaller imaginary part first
        assert_eq!(canonical_order(&[c(0.5, 0.8), c(0.5, -0.8)]), vec![1, 0]);
    }

    #[test]
    fn homology_counts() {
        let pts: Vec<Complex64> = (0..4).map(|k| c(k as f64, 0.0)).collect();
        let h = build_homology(&pts).unwrap();
        assert_eq!((h.a_cycles.len(), h.b_chains.len()), (1, 1));
        let pts: Vec<Complex64> = (0..6).map(|k| c(k as f64, 0.1 * k as f64)).collect();
        let h = build_homology(&pts).unwrap();
        assert_eq!((h.a_cycles.len(), h.b_chains.len()), (2, 2));
        assert_eq!(h.b_chains[0], vec![1, 3]);
        assert!(build_homology(&pts[..5]).is_err());
    }

    #[test]
    fn arcsine_period() {
        // y² = 1 − z² (d = 1); the segment [-1, 1] lifts to a cycle of period ±2π.
        let div = Divisor::simple(vec![c(3.0, 0.0), c(4.0, 0.0), c(5.0, 0.0)]).unwrap();
        let curve = make_curve(&div, Poly::from_real(&[1.0, 0.0, -1.0])).unwrap();
        let chain = vec![c(-1.0, 0.0), c(1.0, 0.0)];
        let lc = curve.b().leading();
        let seg = Segment::new(lc, &chain, 0);
        let v = seg.integrate(&[Poly::constant(c(1.0, 0.0))], &PeriodConfig::default()).unwrap()[0] * 2.0;
        assert!((v.norm() - 2.0 * PI).abs() < 1e-12, "{v}");
    }

    #[test]
    fn zero_numerator_integrates_to_zero() {
        let curve = make_curve(&far_divisor(4), Poly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        let h = build_homology(curve.branch_points()).unwrap();
        let v = cycle_integral(&curve, &Poly::zero(), &h, Cycle::A(0), &PeriodConfig::default()).unwrap();
        assert_eq!(v, c(0.0, 0.0));
    }

    #[test]
    fn lemniscatic_period_matrix_is_certified() {
        let curve = make_curve(&far_divisor(4), Poly::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        let pd = period_matrix(&curve).unwrap();
        assert!(pd.sym_residual < 1e-8);
        assert!(pd.min_imag_eig > 0.0);
    }

    #[test]
    fn genus_two_and_three_certified() {
        let g2 = Poly::from_roots(&[c(-1.2, 0.3), c(-0.5, -0.7), c(0.1, 0.9), c(0.4, -0.2), c(1.1, 0.6), c(1.6, -0.9)]);
        let curve = make_curve(&far_divisor(5), g2.scale(c(0.3, -1.2))).unwrap();
        let pd = period_matrix(&curve).unwrap();
        assert!(pd.sym_residual < 1e-8 && pd.min_imag_eig > 0.0);

        let g3 = Poly::from_roots(&[c(-2.0, 0.0), c(-1.1, 1.0), c(-0.9, -1.0), c(0.0, 0.4), c(0.3, -0.6), c(1.0, 1.2), c(1.2, -0.8), c(2.1, 0.1)]);
        let curve = make_curve(&far_divisor(6), g3).unwrap();
        let pd = period_matrix(&curve).unwrap();
        assert!(pd.sym_residual < 1e-8 && pd.min_imag_eig > 0.0);
    }
}
