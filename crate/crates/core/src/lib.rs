//! Linearized two-species BGK mixtures in one space dimension.
//!
//! The crate covers the nonlinear model (Maxwellians, mixture targets,
//! moments), its linearization around the global equilibrium, the
//! Fourier–Hermite reduction to independent per-mode ODE systems, a twisted
//! quadratic entropy with numerically certified decay rate, and a
//! velocity-grid discretization used as an independent oracle.
//!
//! ```
//! use bgkmix::mixture::MixtureParams;
//!
//! let p = MixtureParams::symmetric().validate().unwrap();
//! assert!(p.theorem_eligible());
//! let c = bgkmix::hypocoercivity::rate_c(&p).unwrap();
//! assert_eq!(c, 0.5);
//! ```

pub mod config;
pub mod error;
pub mod hypocoercivity;
pub mod linearization;
pub mod mixture;
pub mod oracle;
pub mod quadrature;
pub mod runner;
pub mod spectral;

pub use error::{Error, ParamIssue, Result};
pub use mixture::{MixtureParams, ValidatedParams};
pub use quadrature::VelocityGrid;

/// Complex scalar used for Fourier-mode data.
pub type C64 = nalgebra::Complex<f64>;
