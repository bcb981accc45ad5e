//! 3D Gross-Pitaevskii ground states by imaginary-time spectral relaxation,
//! and the observables extracted from them.

mod fft;
mod hamiltonian;
pub mod io;
mod relax;
pub mod schmidt;

pub use hamiltonian::EnergyParts;
pub use relax::{
    average_density_of, chemical_potential_of, energy_parts_of, relax_from, relax_ground_state, GroundState, InitialGuess,
    Numerics,
};
pub use schmidt::{purity_by_quadrature, purity_of, schmidt_decompose, PurityReport, SchmidtSpectrum};
