//! Exact-arithmetic toolkit for isolated surface singularities f(z1,z2,z3)=0.
//!
//! The pipeline: decompose f into homogeneous parts, blow up the origin,
//! locate and classify the tangent-cone singularities as ADE types, normalize
//! local coordinates to expose the Newton principal part h(x2,x3) + c*x1^m,
//! assemble monodromy zeta-functions two independent ways, and check type
//! stability along deformation families. Everything is computed over Q;
//! there is no floating point anywhere.

pub mod error;
pub mod poly;
pub mod parse;
pub mod series;
pub mod upoly;
pub mod bipoly;
pub mod newton;
pub mod nondeg;
pub mod zeta;
pub mod curve;
pub mod blowup;
pub mod certify;
pub mod deform;
pub mod report;

pub use error::{Error, Result};
pub use parse::parse_polynomial;
pub use poly::{homogeneous_decompose, is_convenient, Poly, Rat};
pub use series::TruncatedSeries;

/// Crate version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
