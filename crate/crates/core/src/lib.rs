//! Numerical engine for hypersurfaces of S^n x R and H^n x R.
//!
//! The ambient model is the pseudo-Euclidean space E^{n+2} with metric
//! `eps dx_1^2 + dx_2^2 + ... + dx_{n+2}^2`, inside which the product
//! Q_eps^n x R sits as a quadric cylinder. The crate provides:
//!
//! - [`linalg`]: small dense pseudo-Euclidean linear algebra,
//! - [`jet`]: second-order forward-mode differentiation,
//! - [`catalog`]: closed-form charts for every hypersurface family
//!   (rotation hypersurfaces, parallel families, constant-angle
//!   immersions, slices and products),
//! - [`geometry`]: fundamental forms, shape operators, curvature and
//!   structure-equation residuals,
//! - [`verify`]: batch verification suites, classification scan and
//!   sample export.
//!
//! Core math is generic over the scalar type through [`scalar::Real`];
//! the concrete aliases below fix `f64`, which is what the CLI and the
//! verification suites use.

pub mod catalog;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod linalg;
pub mod scalar;
pub mod verify;

pub use error::GeomError;
pub use scalar::Real;

/// `f64` second-order jet.
pub type Jet64 = jet::Jet2<f64>;
/// `f64` ambient vector.
pub type Vec64 = linalg::AmbientVector<f64>;
/// `f64` symmetric matrix.
pub type SymMatrix64 = linalg::SymMatrix<f64>;
/// `f64` chart.
pub type Chart64 = catalog::Chart<f64>;
/// `f64` profile curve.
pub type Profile64 = catalog::ProfileCurve<f64>;
/// `f64` fundamental data.
pub type FundamentalData64 = geometry::FundamentalData<f64>;
