//! SL2 spectral curves `ŷ² = b̂(z)` over the projective line, the leaf of
//! deformations that fix the behaviour along the divisor, and branch-point
//! dynamics along that leaf.
//!
//! Sections of `L^k = K(D)^k` are polynomials of degree `≤ k·d` in the affine
//! frame `e^k = (dz/q_D)^k`, where `d = deg D − 2` and `q_D = ∏ (z − qᵢ)^{nᵢ}`.

pub mod aberth;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, GenericityKind, Result};
use crate::poly::Poly;

/// Separation tolerances, relative to `1 + max |eᵢ|`.
#[derive(Debug, Clone, Copy)]
pub struct GenericityTolerances {
    pub branch_separation: f64,
    pub divisor_separation: f64,
    pub derivative: f64,
}

impl Default for GenericityTolerances {
    fn default() -> Self {
        GenericityTolerances {
            branch_separation: 1e-8,
            divisor_separation: 1e-8,
            derivative: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Divisor {
    points: Vec<Complex64>,
    multiplicities: Vec<u32>,
}

impl Divisor {
    pub fn new(points: Vec<Complex64>, multiplicities: Vec<u32>) -> Result<Self> {
        if points.len() != multiplicities.len() {
            return Err(Error::InvalidDivisor("points and multiplicities differ in length".into()));
        }
        if multiplicities.contains(&0) {
            return Err(Error::InvalidDivisor("multiplicities must be positive".into()));
        }
        if points.iter().any(|q| !q.re.is_finite() || !q.im.is_finite()) {
            return Err(Error::InvalidDivisor("points must be finite".into()));
        }
        for i in 0..points.len() {
            for j in 0..i {
                if (points[i] - points[j]).norm() < 1e-12 * (1.0 + points[i].norm()) {
                    return Err(Error::InvalidDivisor(format!("repeated point {}", points[i])));
                }
            }
        }
        let div = Divisor { points, multiplicities };
        if div.degree() < 3 {
            return Err(Error::InvalidDivisor(format!("deg D = {} < 3", div.degree())));
        }
        Ok(div)
    }

    /// Reduced divisor on the given points.
    pub fn simple(points: Vec<Complex64>) -> Result<Self> {
        let n = points.len();
        Divisor::new(points, vec![1; n])
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn degree(&self) -> usize {
        self.multiplicities.iter().map(|&n| n as usize).sum()
    }

    pub fn frame(&self) -> BundleFrame {
        let mut q = Poly::constant(Complex64::new(1.0, 0.0));
        for (&p, &n) in self.points.iter().zip(&self.multiplicities) {
            for _ in 0..n {
                q = q * Poly::new(vec![-p, Complex64::new(1.0, 0.0)]);
            }
        }
        BundleFrame { d: self.degree() - 2, q_d: q }
    }

    /// Image under `z ↦ (z − shift)/scale`, i.e. the divisor in the coordinate `w` with `z = scale·w + shift`.
    pub fn pulled_back(&self, scale: Complex64, shift: Complex64) -> Result<Divisor> {
        Divisor::new(
            self.points.iter().map(|q| (q - shift) / scale).collect(),
            self.multiplicities.clone(),
        )
    }
}

/// The line bundle `L = K(D)` in the frame `e = dz/q_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleFrame {
    pub d: usize,
    pub q_d: Poly,
}

#[derive(Debug, Clone)]
pub struct SpectralCurve {
    divisor: Divisor,
    frame: BundleFrame,
    b: Poly,
    branch_points: Vec<Complex64>,
}

/// A leaf direction `δb̂ = p·q_D` with `deg p ≤ d − 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafTangent {
    pub p: Poly,
}

/// The differential `p(z) dz / (2ŷ)`, valued in `𝔱` through the coweight `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloDifferential {
    pub p: Poly,
}

fn scale_of(points: &[Complex64]) -> f64 {
    1.0 + points.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Sort key for the canonical (Re, then Im) order; real parts within 1e−9 of each other tie.
pub fn lex_key(z: Complex64) -> (i64, f64) {
    ((z.re * 1e9).round() as i64, z.im)
}

pub fn lex_sort(points: &mut [Complex64]) {
    points.sort_by(|a, b| {
        let (ka, kb) = (lex_key(*a), lex_key(*b));
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
}

/// All roots of `coeffs`, Newton-polished, in canonical order.
pub fn branch_points(coeffs: &Poly) -> Result<Vec<Complex64>> {
    if coeffs.leading() == Complex64::new(0.0, 0.0) {
        return Err(Error::generic(GenericityKind::DegreeDrop, "leading coefficient is zero"));
    }
    let mut roots: Vec<Complex64> = aberth::aberth(coeffs)?
        .into_iter()
        .map(|z| aberth::polish(coeffs, z))
        .collect();
    lex_sort(&mut roots);
    Ok(roots)
}

pub fn make_curve(divisor: &Divisor, coeffs: Poly) -> Result<SpectralCurve> {
    make_curve_with(divisor, coeffs, GenericityTolerances::default())
}

pub fn make_curve_with(
    divisor: &Divisor,
    coeffs: Poly,
    tol: GenericityTolerances,
) -> Result<SpectralCurve> {
    let frame = divisor.frame();
    let d = frame.d;
    if coeffs.coeffs().len() != 2 * d + 1 {
        return Err(Error::InvalidInput(format!(
            "b̂ must have {} coefficients (degree 2d = {}), got {}",
            2 * d + 1,
            2 * d,
            coeffs.coeffs().len()
        )));
    }
    if coeffs.coeffs().iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite coefficient".into()));
    }
    if coeffs.leading().norm() <= 1e-14 * coeffs.max_coeff() {
        return Err(Error::generic(
            GenericityKind::DegreeDrop,
            "leading coefficient vanishes: the curve branches at infinity",
        ));
    }
    let roots = match branch_points(&coeffs) {
        Ok(r) => r,
        // Aberth only stalls on clustered roots.
        Err(Error::NonConvergence(n)) => {
            return Err(Error::generic(
                GenericityKind::RepeatedRoot,
                format!("root finder stalled after {n} iterations on clustered roots"),
            ))
        }
        Err(e) => return Err(e),
    };
    let scale = scale_of(&roots);
    let db = coeffs.derivative();
    for i in 0..roots.len() {
        for j in 0..i {
            let dist = (roots[i] - roots[j]).norm();
            if dist <= tol.branch_separation * scale {
                return Err(Error::generic(
                    GenericityKind::RepeatedRoot,
                    format!("branch points {} and {} are {dist:e} apart", roots[j], roots[i]),
                ));
            }
        }
        // a double root splits into two nearly-coincident simple ones with tiny b̂'
        let slope = db.eval(roots[i]).norm();
        if slope <= tol.derivative * db.abs_eval(roots[i]) {
            return Err(Error::generic(
                GenericityKind::RepeatedRoot,
                format!("b̂' vanishes at {}", roots[i]),
            ));
        }
        for q in divisor.points() {
            if (roots[i] - q).norm() <= tol.divisor_separation * scale {
                return Err(Error::generic(
                    GenericityKind::RootAtDivisor,
                    format!("branch point {} lies on supp D at {q}", roots[i]),
                ));
            }
        }
    }
    Ok(SpectralCurve {
        divisor: divisor.clone(),
        frame,
        b: coeffs,
        branch_points: roots,
    })
}

impl SpectralCurve {
    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn frame(&self) -> &BundleFrame {
        &self.frame
    }

    pub fn d(&self) -> usize {
        self.frame.d
    }

    pub fn genus(&self) -> usize {
        self.frame.d.saturating_sub(1)
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn q_d(&self) -> &Poly {
        &self.frame.q_d
    }

    pub fn branch_points(&self) -> &[Complex64] {
        &self.branch_points
    }

    pub fn scale(&self) -> f64 {
        scale_of(&self.branch_points)
    }

    pub fn min_branch_separation(&self) -> f64 {
        let e = &self.branch_points;
        let mut best = f64::INFINITY;
        for i in 0..e.len() {
            for j in 0..i {
                best = best.min((e[i] - e[j]).norm());
            }
        }
        best
    }

    /// `δb̂ = p·q_D` as a section of `L²`, padded to `2d + 1` coefficients.
    pub fn leaf_polynomial(&self, t: &LeafTangent) -> Poly {
        (&t.p * &self.frame.q_d).padded(2 * self.d() + 1)
    }

    /// The curve `b̂ + s·p·q_D` on the same divisor.
    pub fn along_leaf(&self, t: &LeafTangent, s: f64) -> Result<SpectralCurve> {
        let delta = self.leaf_polynomial(t);
        if delta.coeffs().len() > 2 * self.d() + 1 {
            return Err(Error::InvalidInput("leaf tangent has degree above d − 2".into()));
        }
        let coeffs = self.b.clone() + delta.scale(Complex64::new(s, 0.0));
        make_curve(&self.divisor, coeffs)
    }
}

/// Monomial basis `zⁱ`, `i = 0..d−2`, of the leaf tangent space `H⁰(L²(−D))`.
pub fn leaf_basis(divisor: &Divisor) -> Vec<LeafTangent> {
    let d = divisor.degree() - 2;
    (0..d.saturating_sub(1))
        .map(|i| LeafTangent { p: Poly::monomial(i) })
        .collect()
}

/// `δb̂ = p·q_D ↦ p dz/(2ŷ)`; the payload is unchanged.
pub fn tangent_to_differential(t: &LeafTangent) -> HoloDifferential {
    HoloDifferential { p: t.p.clone() }
}

/// Velocities `ė = −δb̂(e)/b̂'(e)` of the branch points along a leaf direction.
pub fn branch_motion(curve: &SpectralCurve, t: &LeafTangent) -> Result<Vec<Complex64>> {
    let delta = curve.leaf_polynomial(t);
    let db = curve.b.derivative();
    let tol = GenericityTolerances::default().derivative;
    curve
        .branch_points
        .iter()
        .map(|&e| {
            let slope = db.eval(e);
            if slope.norm() < tol * db.abs_eval(e).max(1.0) {
                return Err(Error::DerivativeVanishes(e.to_string()));
            }
            Ok(-delta.eval(e) / slope)
        })
        .collect()
}

// --- JSON curve specification ---

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DivisorPointSpec {
    pub q: [f64; 2],
    pub n: u32,
}

/// `{"divisor": [{"q": [re, im], "n": k}, …], "b_coeffs": [[re, im], …]}`, coefficients lowest degree first.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurveSpec {
    pub divisor: Vec<DivisorPointSpec>,
    pub b_coeffs: Vec<[f64; 2]>,
}

pub fn c_of(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

pub fn pair_of(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl CurveSpec {
    pub fn from_curve(curve: &SpectralCurve) -> Self {
        CurveSpec {
            divisor: curve
                .divisor
                .points()
                .iter()
                .zip(curve.divisor.multiplicities())
                .map(|(&q, &n)| DivisorPointSpec { q: pair_of(q), n })
                .collect(),
            b_coeffs: curve.b.coeffs().iter().map(|&c| pair_of(c)).collect(),
        }
    }

    pub fn divisor(&self) -> Result<Divisor> {
        Divisor::new(
            self.divisor.iter().map(|p| c_of(p.q)).collect(),
            self.divisor.iter().map(|p| p.n).collect(),
        )
    }

    pub fn build(&self) -> Result<SpectralCurve> {
        let divisor = self.divisor()?;
        make_curve(&divisor, Poly::new(self.b_coeffs.iter().map(|&c| c_of(c)).collect()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveInfo {
    pub generic: bool,
    pub genus: Option<usize>,
    pub d: Option<usize>,
    pub branch_points: Vec<[f64; 2]>,
    pub min_branch_separation: Option<f64>,
    pub violation: Option<String>,
}

pub fn curve_info(spec: &CurveSpec) -> Result<CurveInfo> {
    let divisor = spec.divisor()?;
    match spec.build() {
        Ok(c) => Ok(CurveInfo {
            generic: true,
            genus: Some(c.genus()),
            d: Some(c.d()),
            branch_points: c.branch_points.iter().map(|&z| pair_of(z)).collect(),
            min_branch_separation: Some(c.min_branch_separation()),
            violation: None,
        }),
        Err(e @ Error::GenericityViolation { .. }) => Ok(CurveInfo {
            generic: false,
            genus: Some(divisor.degree().saturating_sub(3)),
            d: Some(divisor.degree() - 2),
            branch_points: Vec::new(),
            min_branch_separation: None,
            violation: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}
