//! Radial Neumann problems on balls: Bessel spectra, shooting, branch
//! continuation and bifurcation coefficients.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*F64`
//! and `*F32` aliases below fix the precision.

pub mod analysis;
pub mod continuation;
pub mod error;
pub mod export;
pub mod ode;
pub mod quad;
pub mod radial_ode;
pub mod roots;
pub mod scalar;
pub mod shooting;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ProblemSpecF64 = radial_ode::ProblemSpec<f64>;
pub type RadialProfileF64 = radial_ode::RadialProfile<f64>;
pub type BranchF64 = continuation::Branch<f64>;
pub type StepControlF64 = continuation::StepControl<f64>;
pub type EigenvalueRecordF64 = spectrum::EigenvalueRecord<f64>;
pub type BifurcationCoefficientsF64 = analysis::BifurcationCoefficients<f64>;

pub type ProblemSpecF32 = radial_ode::ProblemSpec<f32>;
pub type RadialProfileF32 = radial_ode::RadialProfile<f32>;
pub type BranchF32 = continuation::Branch<f32>;
pub type StepControlF32 = continuation::StepControl<f32>;
pub type EigenvalueRecordF32 = spectrum::EigenvalueRecord<f32>;
pub type BifurcationCoefficientsF32 = analysis::BifurcationCoefficients<f32>;
