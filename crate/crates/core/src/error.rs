use thiserror::Error;

/// Which genericity condition a spectral curve failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum GenericityKind {
    /// Two branch points (nearly) coincide.
    RepeatedRoot,
    /// A branch point lies on the support of the divisor.
    RootAtDivisor,
    /// The leading coefficient vanishes, so the curve branches at infinity.
    DegreeDrop,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported Cartan type {0}")]
    UnsupportedType(String),
    #[error("vector is not a root of the system")]
    NotARoot,
    #[error("Weyl group closure exceeded {0} elements")]
    ClosureOverflow(usize),
    #[error("could not draw a regular sample after {0} consecutive rejections")]
    SampleOnHyperplane(usize),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("genericity violation ({kind:?}): {detail}")]
    GenericityViolation { kind: GenericityKind, detail: String },
    #[error("root finder did not converge after {0} iterations")]
    NonConvergence(usize),
    #[error("derivative of the branch polynomial vanishes at {0}")]
    DerivativeVanishes(String),
    #[error("local contour radius degenerated ({0:e})")]
    ContourTooLarge(f64),
    #[error("quadrature stalled at order {order}: last change {change:e}")]
    QuadratureStall { order: usize, change: f64 },
    #[error("A-period matrix is ill-conditioned (cond = {0:e})")]
    IllConditioned(f64),
    #[error("period matrix is not symmetric (residual {0:e})")]
    SymmetryFail(f64),
    #[error("imaginary part of the period matrix is not positive definite (min eigenvalue {0:e})")]
    PositivityFail(f64),
    #[error("branch point matching across the finite-difference step is ambiguous: {0}")]
    MatchingAmbiguous(String),
    #[error("finite-difference step too large: {0}")]
    StepTooLarge(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn generic(kind: GenericityKind, detail: impl Into<String>) -> Self {
        Error::GenericityViolation {
            kind,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
