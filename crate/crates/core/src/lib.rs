//! The cubic form of the period map for SL2 generalized Hitchin systems over
//! the projective line, computed from residue formulas and checked against the
//! derivative of numerically computed period matrices.

pub mod adjoint;
pub mod cli;
pub mod cubic;
pub mod error;
pub mod harness;
pub mod periods;
pub mod poly;
pub mod rootsys;
pub mod spectral;

pub use error::{Error, GenericityKind, Result};
pub use poly::Poly;
