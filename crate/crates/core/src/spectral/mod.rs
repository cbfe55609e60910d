//! Fourier–Hermite reduction: each Fourier index `k` carries an independent
//! linear ODE for the Hermite coefficients of both species.

mod basis;
mod evolve;
mod field;
mod generator;
pub mod io;

pub use basis::HermiteBasis;
pub use evolve::{evolve, evolve_mode, Integrator, Propagator, RK4_STABILITY_BOUND};
pub use field::{
    mode_moments, mode_profile, project, reconstruct, reconstruct_complex, AliasingWarning, ModeState,
    ProjectOptions, SpectralField,
};
pub use generator::{coupling_matrices, mode_generator, CouplingMatrices, ModeGenerator, TransportConvention};

pub(crate) fn generator_for(
    p: &crate::mixture::ValidatedParams,
    c: &CouplingMatrices,
    k: usize,
) -> nalgebra::DMatrix<crate::C64> {
    generator::mode_generator_from(p, c, k).a
}
