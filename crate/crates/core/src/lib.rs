//! Joint spectral radius and Barabanov norms for finite sets of real 2×2
//! matrices.
//!
//! The main entry point is [`relaxation::run`], which drives the
//! max-relaxation iteration over a polar gauge representation of plane norms
//! ([`polar::PolarNorm`]) and returns an a posteriori bracket
//! `ρₙ⁻ ≤ ρ(𝒜) ≤ ρₙ⁺` together with an approximate Barabanov norm. The
//! [`oracle`] module gives independent product-enumeration bounds.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `F64`
//! aliases below are what most callers want.

pub mod error;
pub mod linalg;
pub mod oracle;
pub mod polar;
pub mod relaxation;
mod scalar;

pub use error::{Error, Result};
pub use linalg::{EigenDirections, Irreducibility, Matrix2, MatrixSet};
pub use oracle::BoundsBracket;
pub use polar::{ImageOperator, Lookup, PolarNorm, TransformTables};
pub use relaxation::{
    barabanov_residual, run, Averaging, IterationReport, IterationStep, RunConfig, StoppingRule,
};
pub use scalar::Scalar;

pub type Matrix2F64 = Matrix2<f64>;
pub type MatrixSetF64 = MatrixSet<f64>;
pub type PolarNormF64 = PolarNorm<f64>;
pub type TransformTablesF64 = TransformTables<f64>;
pub type ImageOperatorF64 = ImageOperator<f64>;
pub type RunConfigF64 = RunConfig<f64>;
pub type IterationReportF64 = IterationReport<f64>;
pub type BoundsBracketF64 = BoundsBracket<f64>;

pub type Matrix2F32 = Matrix2<f32>;
pub type MatrixSetF32 = MatrixSet<f32>;
pub type PolarNormF32 = PolarNorm<f32>;
pub type RunConfigF32 = RunConfig<f32>;
pub type IterationReportF32 = IterationReport<f32>;
