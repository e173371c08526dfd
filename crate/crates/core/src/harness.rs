//! End-to-end check of the residue-formula cubic against the derivative of
//! the period matrix along the symplectic leaf.
//!
//! For each leaf direction `pᵢ` the period matrix is differentiated by a
//! central difference of `Z(b̂ ± h·pᵢ·q_D)`, keeping the homology basis of the
//! base curve by nearest-neighbour branch matching. The cubic is transported to
//! the A-normalized differentials in its last two slots, and the ratio
//! `κ = FD / Cnorm` must be one constant across every entry.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubic::{cubic_form, cubic_log_discriminant, cubic_root_sum, BasisLabel, CubicTensor};
use crate::error::{Error, Result};
use crate::periods::{period_matrix_with, raw_period_matrix, HomologyBasis, PeriodConfig, PeriodData};
use crate::poly::Poly;
use crate::spectral::{branch_motion, leaf_basis, CurveSpec, LeafTangent, SpectralCurve};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "HITCHIN_CUBIC_THREADS";

/// κ from the first validated genus-1 run (`configs/genus1.json`, default step); close to `−πi/4`.
pub const KAPPA_BASELINE: [f64; 2] = [-3.5905583460948943e-9, -0.7853981639792685];

/// Relative distance along the leaf between base points in suite mode.
pub const SUITE_STEP: f64 = 0.1;

/// Fraction of the minimal branch separation that a branch point may move across one FD step.
pub const MATCH_GUARD: f64 = 0.1;

fn default_fd_step() -> f64 {
    1e-4
}
fn default_quad_tol() -> f64 {
    1e-10
}
fn default_sym_tol() -> f64 {
    1e-8
}
fn default_spread_tol() -> f64 {
    1e-3
}
fn default_skip() -> f64 {
    1e-6
}
fn default_participation() -> f64 {
    0.8
}

/// JSON configuration; a bare curve spec is a valid configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerificationConfig {
    #[serde(flatten)]
    pub curve: CurveSpec,
    /// Relative step: direction `i` moves by `fd_step·‖b̂‖∞/‖pᵢ·q_D‖∞`.
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    #[serde(default = "default_sym_tol")]
    pub sym_tol: f64,
    #[serde(default = "default_spread_tol")]
    pub spread_tol: f64,
    /// Entries with `|Cnorm|` below this fraction of the largest are not used for κ.
    #[serde(default = "default_skip")]
    pub skip_threshold: f64,
    #[serde(default = "default_participation")]
    pub min_participation: f64,
    #[serde(default)]
    pub seed: u64,
    /// Leaf basis indices to differentiate along; all of them when absent.
    #[serde(default)]
    pub directions: Option<Vec<usize>>,
    /// Combine steps `h` and `h/2` by one Richardson step.
    #[serde(default)]
    pub richardson: bool,
    /// Number of base points for suite mode (1 disables it).
    #[serde(default)]
    pub suite_points: Option<usize>,
}

impl VerificationConfig {
    pub fn new(curve: CurveSpec) -> Self {
        VerificationConfig {
            curve,
            fd_step: default_fd_step(),
            quad_tol: default_quad_tol(),
            sym_tol: default_sym_tol(),
            spread_tol: default_spread_tol(),
            skip_threshold: default_skip(),
            min_participation: default_participation(),
            seed: 0,
            directions: None,
            richardson: false,
            suite_points: None,
        }
    }

    pub fn period_config(&self) -> PeriodConfig {
        PeriodConfig {
            quad_tol: self.quad_tol,
            sym_tol: self.sym_tol,
            ..PeriodConfig::default()
        }
    }
}

/// Runs `f` on a pool sized by [`THREADS_ENV`] when set, else on the global pool.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok());
    match cap {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

/// Lists `perturbed` in the order of `base` by nearest neighbour.
pub fn match_branch_points(base: &[Complex64], perturbed: &[Complex64]) -> Result<Vec<Complex64>> {
    if base.len() != perturbed.len() {
        return Err(Error::MatchingAmbiguous(format!(
            "{} base points vs {} perturbed points",
            base.len(),
            perturbed.len()
        )));
    }
    let mut sep = f64::INFINITY;
    for i in 0..base.len() {
        for j in 0..i {
            sep = sep.min((base[i] - base[j]).norm());
        }
    }
    let mut used = vec![false; perturbed.len()];
    let mut out = Vec::with_capacity(base.len());
    for &e in base {
        let (idx, dist) = perturbed
            .iter()
            .enumerate()
            .map(|(i, p)| (i, (p - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if used[idx] {
            return Err(Error::MatchingAmbiguous(format!("two base points claim {}", perturbed[idx])));
        }
        if dist >= MATCH_GUARD * sep {
            return Err(Error::MatchingAmbiguous(format!(
                "branch point {e} moved {dist:e}, guard is {:e}",
                MATCH_GUARD * sep
            )));
        }
        used[idx] = true;
        out.push(perturbed[idx]);
    }
    Ok(out)
}

/// Period matrix of a nearby curve in the homology basis carried over from `base`.
pub fn transported_periods(
    base: &HomologyBasis,
    curve: &SpectralCurve,
    cfg: &PeriodConfig,
) -> Result<PeriodData> {
    let chain = match_branch_points(&base.chain, curve.branch_points())?;
    period_matrix_with(curve, &HomologyBasis::from_chain(chain)?, cfg)
}

fn central_difference(
    curve: &SpectralCurve,
    basis: &HomologyBasis,
    t: &LeafTangent,
    h: f64,
    cfg: &PeriodConfig,
) -> Result<DMatrix<Complex64>> {
    let plus = transported_periods(basis, &curve.along_leaf(t, h)?, cfg)?;
    let minus = transported_periods(basis, &curve.along_leaf(t, -h)?, cfg)?;
    Ok((plus.z - minus.z) / Complex64::new(2.0 * h, 0.0))
}

/// `dZ/dβ` along the leaf direction `t`.
pub fn fd_gauss_manin(
    curve: &SpectralCurve,
    basis: &HomologyBasis,
    t: &LeafTangent,
    h: f64,
    richardson: bool,
    cfg: &PeriodConfig,
) -> Result<DMatrix<Complex64>> {
    let g = curve.genus();
    if t.p.is_zero() {
        return Ok(DMatrix::zeros(g, g));
    }
    let coarse = central_difference(curve, basis, t, h, cfg)?;
    if !richardson {
        return Ok(coarse);
    }
    let fine = central_difference(curve, basis, t, h / 2.0, cfg)?;
    Ok((fine * Complex64::new(4.0, 0.0) - coarse) / Complex64::new(3.0, 0.0))
}

/// Five-point stencil `(−Z(2h) + 8Z(h) − 8Z(−h) + Z(−2h)) / 12h`.
pub fn fd_gauss_manin_four_point(
    curve: &SpectralCurve,
    basis: &HomologyBasis,
    t: &LeafTangent,
    h: f64,
    cfg: &PeriodConfig,
) -> Result<DMatrix<Complex64>> {
    let z = |s: f64| -> Result<DMatrix<Complex64>> {
        Ok(transported_periods(basis, &curve.along_leaf(t, s)?, cfg)?.z)
    };
    let out = (z(-2.0 * h)? - z(2.0 * h)? + (z(h)? - z(-h)?) * Complex64::new(8.0, 0.0))
        / Complex64::new(12.0 * h, 0.0);
    Ok(out)
}

/// `Cnorm[i][j][k] = Σ_{a,b} N_{aj} N_{bk} C_mixed[i][a][b]`.
pub fn transform_last_two(c_mixed: &CubicTensor, n: &DMatrix<Complex64>) -> CubicTensor {
    let [d0, d1, d2] = c_mixed.dims;
    let (m1, m2) = (n.ncols(), n.ncols());
    let mut out = CubicTensor::zeros([d0, m1, m2], BasisLabel::Normalized);
    for i in 0..d0 {
        for j in 0..m1 {
            for k in 0..m2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..d1 {
                    for b in 0..d2 {
                        acc += n[(a, j)] * n[(b, k)] * c_mixed.get(i, a, b);
                    }
                }
                out.set(i, j, k, acc);
            }
        }
    }
    out
}

/// The cubic with slot one in the leaf basis and slots two and three in the normalized differentials.
pub fn cubic_in_normalized_basis(curve: &SpectralCurve, n: &DMatrix<Complex64>) -> Result<CubicTensor> {
    let g = curve.genus();
    let leaf: Vec<Poly> = leaf_basis(curve.divisor()).into_iter().map(|t| t.p).collect();
    // z^a dz/ŷ is p = 2z^a in the ξ = p dz/(2ŷ) parametrization
    let phi: Vec<Poly> = (0..g).map(|a| Poly::monomial(a).scale(Complex64::new(2.0, 0.0))).collect();
    let mixed = cubic_form(curve, [&leaf, &phi, &phi], BasisLabel::Mixed)?;
    Ok(transform_last_two(&mixed, n))
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub fd: Complex64,
    pub cnorm: Complex64,
    pub kappa: Option<Complex64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodStage {
    pub sym_residual: f64,
    pub min_imag_eig: f64,
    #[serde(rename = "cond_A")]
    pub cond_a: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CubicStage {
    #[serde(rename = "AB_residual")]
    pub ab_residual: f64,
    pub symmetry_residual: f64,
    pub normalized_pair_symmetry: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Stages {
    pub periods: PeriodStage,
    pub cubic: CubicStage,
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaReport {
    pub genus: usize,
    pub kappa_mean: [f64; 2],
    pub spread: f64,
    pub entries: Vec<KappaEntry>,
    pub entries_skipped: usize,
    pub participation: f64,
    /// `max_i ‖dZ/dβᵢ − (dZ/dβᵢ)ᵀ‖ / ‖dZ/dβᵢ‖`.
    pub dz_symmetry_residual: f64,
    /// Departure of the FD tensor, first slot transported to normalized differentials, from full symmetry.
    pub fd_full_symmetry_residual: Option<f64>,
    pub stages: Stages,
    pub pass: bool,
}

impl KappaReport {
    pub fn kappa(&self) -> Complex64 {
        Complex64::new(self.kappa_mean[0], self.kappa_mean[1])
    }
}

/// Mean and `max |κ − mean| / |mean|`.
pub fn kappa_spread(values: &[Complex64]) -> (Complex64, f64) {
    if values.is_empty() {
        return (Complex64::new(f64::NAN, f64::NAN), f64::INFINITY);
    }
    let mean = values.iter().sum::<Complex64>() / values.len() as f64;
    let spread = values.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max) / mean.norm();
    (mean, spread)
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Step along `t` for a relative step `h`: `h·‖b̂‖∞ / ‖p·q_D‖∞`.
pub fn direction_step(curve: &SpectralCurve, t: &LeafTangent, h: f64) -> f64 {
    let delta = curve.leaf_polynomial(t).max_coeff();
    if delta == 0.0 {
        h
    } else {
        h * curve.b().max_coeff() / delta
    }
}

/// Checks that the step keeps every branch point well inside its matching guard.
pub fn check_step(curve: &SpectralCurve, tangents: &[LeafTangent], h: f64) -> Result<()> {
    let sep = curve.min_branch_separation();
    for t in tangents {
        let h = direction_step(curve, t, h);
        let fastest = branch_motion(curve, t)?.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if fastest * h >= MATCH_GUARD * sep {
            return Err(Error::StepTooLarge(format!(
                "step {h:e} moves a branch point {:e}, guard {:e}",
                fastest * h,
                MATCH_GUARD * sep
            )));
        }
    }
    Ok(())
}

/// FD derivative tensor `FD[i][j][k] = (dZ/dβᵢ)_{jk}` together with base period data.
pub fn fd_tensor(
    curve: &SpectralCurve,
    cfg: &VerificationConfig,
    directions: &[usize],
) -> Result<(PeriodData, Vec<DMatrix<Complex64>>)> {
    let pcfg = cfg.period_config();
    let base = period_matrix_with(curve, &crate::periods::build_homology(curve.branch_points())?, &pcfg)?;
    let basis = leaf_basis(curve.divisor());
    let tangents: Vec<LeafTangent> = directions.iter().map(|&i| basis[i].clone()).collect();
    check_step(curve, &tangents, cfg.fd_step)?;
    let derivs = with_thread_cap(|| {
        tangents
            .par_iter()
            .map(|t| {
                let h = direction_step(curve, t, cfg.fd_step);
                fd_gauss_manin(curve, &base.basis, t, h, cfg.richardson, &pcfg)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok((base, derivs))
}

pub fn verify(cfg: &VerificationConfig) -> Result<KappaReport> {
    let curve = cfg.curve.build()?;
    verify_curve(&curve, cfg)
}

pub fn verify_curve(curve: &SpectralCurve, cfg: &VerificationConfig) -> Result<KappaReport> {
    let g = curve.genus();
    if g == 0 {
        return Err(Error::InvalidInput("verification needs genus ≥ 1 (deg D ≥ 4)".into()));
    }
    let directions: Vec<usize> = match &cfg.directions {
        Some(d) => d.clone(),
        None => (0..g).collect(),
    };
    if directions.is_empty() || directions.iter().any(|&i| i >= g) {
        return Err(Error::InvalidInput(format!("leaf directions must lie in 0..{g}")));
    }
    let (base, derivs) = fd_tensor(curve, cfg, &directions)?;

    let basis = leaf_basis(curve.divisor());
    let cb = cubic_root_sum(curve, &basis)?;
    let ca = cubic_log_discriminant(curve, &basis)?;
    let cnorm = cubic_in_normalized_basis(curve, &base.n)?;

    let cmax = cnorm.max_abs();
    let mut entries = Vec::new();
    let mut kappas = Vec::new();
    let mut skipped = 0;
    for (&i, dz) in directions.iter().zip(&derivs) {
        for j in 0..g {
            for k in 0..g {
                let fd = dz[(j, k)];
                let cn = cnorm.get(i, j, k);
                let kappa = if cn.norm() > cfg.skip_threshold * cmax {
                    Some(fd / cn)
                } else {
                    skipped += 1;
                    None
                };
                kappas.extend(kappa);
                entries.push(KappaEntry { i, j, k, fd, cnorm: cn, kappa });
            }
        }
    }
    let (mean, spread) = kappa_spread(&kappas);
    let participation = kappas.len() as f64 / entries.len() as f64;

    let dz_symmetry_residual = derivs
        .iter()
        .map(|m| {
            let s = max_abs(m);
            if s == 0.0 { 0.0 } else { max_abs(&(m - m.transpose())) / s }
        })
        .fold(0.0, f64::max);

    // Transport the direction slot: ω_j corresponds to p = Σ_i 2 N_{ij} zⁱ.
    let fd_full_symmetry_residual = (directions.len() == g).then(|| {
        let mut full = CubicTensor::zeros([g, g, g], BasisLabel::Normalized);
        for j in 0..g {
            for k in 0..g {
                for l in 0..g {
                    let v: Complex64 = directions
                        .iter()
                        .zip(&derivs)
                        .map(|(&i, dz)| base.n[(i, j)] * 2.0 * dz[(k, l)])
                        .sum();
                    full.set(j, k, l, v);
                }
            }
        }
        full.symmetry_residual()
    });

    let pass = spread < cfg.spread_tol && participation >= cfg.min_participation;
    Ok(KappaReport {
        genus: g,
        kappa_mean: [mean.re, mean.im],
        spread,
        entries,
        entries_skipped: skipped,
        participation,
        dz_symmetry_residual,
        fd_full_symmetry_residual,
        stages: Stages {
            periods: PeriodStage {
                sym_residual: base.sym_residual,
                min_imag_eig: base.min_imag_eig,
                cond_a: base.cond_a,
            },
            cubic: CubicStage {
                ab_residual: ca.relative_difference(&cb),
                symmetry_residual: cb.symmetry_residual(),
                normalized_pair_symmetry: cnorm.pair_symmetry_residual(),
            },
        },
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub base_points: Vec<CurveSpec>,
    pub reports: Vec<KappaReport>,
    pub kappa_means: Vec<[f64; 2]>,
    pub kappa_mean: [f64; 2],
    /// Spread of κ over every participating entry at every base point.
    pub spread: f64,
    pub pass: bool,
}

/// Base points reached from the configured curve by steps of relative size `step` along random leaf directions.
pub fn leaf_base_points(curve: &SpectralCurve, count: usize, step: f64, seed: u64) -> Result<Vec<SpectralCurve>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = leaf_basis(curve.divisor());
    let mut out = vec![curve.clone()];
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 20 * count {
            return Err(Error::InvalidInput("could not find generic base points along the leaf".into()));
        }
        let p = basis.iter().fold(Poly::zero(), |acc, t| {
            acc + t.p.scale(Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        });
        let dir = LeafTangent { p };
        let delta = curve.leaf_polynomial(&dir);
        if delta.is_zero() {
            continue;
        }
        let s = step * curve.b().max_coeff() / delta.max_coeff();
        let Ok(next) = curve.along_leaf(&dir, s) else { continue };
        // keep the same separation standards as a hand-picked curve
        if next.min_branch_separation() < 0.05 * next.scale() {
            continue;
        }
        out.push(next);
    }
    Ok(out)
}

pub fn verify_suite(cfg: &VerificationConfig, count: usize, step: f64) -> Result<SuiteReport> {
    let curve = cfg.curve.build()?;
    let points = leaf_base_points(&curve, count, step, cfg.seed)?;
    let reports = points
        .iter()
        .map(|c| verify_curve(c, cfg))
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<Complex64> = reports
        .iter()
        .flat_map(|r| r.entries.iter().filter_map(|e| e.kappa))
        .collect();
    let (mean, spread) = kappa_spread(&all);
    let pass = spread < cfg.spread_tol && reports.iter().all(|r| r.pass);
    Ok(SuiteReport {
        base_points: points.iter().map(CurveSpec::from_curve).collect(),
        kappa_means: reports.iter().map(|r| r.kappa_mean).collect(),
        reports,
        kappa_mean: [mean.re, mean.im],
        spread,
        pass,
    })
}

/// κ at relative steps `h`, `h/2`, `h/4` for one entry, for checking the `O(h²)` error model.
pub fn kappa_step_sequence(
    curve: &SpectralCurve,
    cfg: &VerificationConfig,
    entry: (usize, usize, usize),
    h: f64,
) -> Result<[Complex64; 3]> {
    let pcfg = cfg.period_config();
    let base = raw_period_matrix(curve, &crate::periods::build_homology(curve.branch_points())?, &pcfg)?;
    let cnorm = cubic_in_normalized_basis(curve, &base.n)?;
    let t = &leaf_basis(curve.divisor())[entry.0];
    let mut out = [Complex64::new(0.0, 0.0); 3];
    let h = direction_step(curve, t, h);
    for (slot, step) in [h, h / 2.0, h / 4.0].into_iter().enumerate() {
        let dz = fd_gauss_manin(curve, &base.basis, t, step, false, &pcfg)?;
        out[slot] = dz[(entry.1, entry.2)] / cnorm.get(entry.0, entry.1, entry.2);
    }
    Ok(out)
}
