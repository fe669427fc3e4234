//! Numerical laboratory for equivariant spectral asymptotics.
//!
//! The kernels are generic over a [`Real`] scalar (`f32` or `f64`). Model
//! manifolds carry a circle or finite cyclic isometric action; the crate
//! builds isotypic eigenbases, evaluates reduced spectral functions, predicts
//! equivariant Weyl coefficients and runs stationary-phase experiments on
//! the oscillatory integrals behind them.

pub mod eigensolve;
mod error;
pub mod fit;
pub mod geometry;
pub mod lab;
mod linalg;
pub mod quadrature;
mod scalar;
pub mod specfun;
pub mod spectral;
pub mod statphase;
pub mod weylcoef;

pub use error::{Error, Result};
pub use scalar::{Complex, Real, Vec3};

pub use fit::{fit_power_law, PowerLawFit};
pub use geometry::{CotangentPoint, IsotypicLabel, ModelManifold, OrbitData, Point};
pub use specfun::HarmonicIndex;

/// Double-precision aliases for the generic types.
pub type Manifold = geometry::ModelManifold<f64>;
pub type ChartPoint = geometry::Point<f64>;
pub type Basis = eigensolve::EigenBasis<f64>;
pub type Mode = eigensolve::EigenMode<f64>;
pub type Harmonic = specfun::EvaluatedHarmonic<f64>;
pub type Profile = geometry::Profile<f64>;
pub type Problem = statphase::StationaryPhaseProblem<f64>;
pub type Expansion = statphase::SPExpansion<f64>;
pub type Prediction = weylcoef::WeylPrediction<f64>;
pub type Complex64 = Complex<f64>;

/// Single-precision aliases.
pub type Manifold32 = geometry::ModelManifold<f32>;
pub type Basis32 = eigensolve::EigenBasis<f32>;
