//! Ground-state correlators and entanglement of the one-dimensional XY chain
//! in a transverse field.
//!
//! The thermodynamic-limit correlators come from free-fermion contractions
//! and Toeplitz determinants ([`correlators`]). They feed the two-spin reduced
//! density matrix ([`density`]), whose unknown `⟨σˣσᶻ⟩` entry in the
//! broken-symmetry state is replaced by its positivity interval. Bipartite and
//! multipartite measures live in [`measures`]; [`ed`] is a finite-chain exact
//! diagonalization used as an independent reference; [`sweep`] runs parameter
//! scans and the analyses on top of them.

pub mod accel;
pub mod correlators;
pub mod density;
pub mod ed;
pub mod error;
pub mod interval;
pub mod measures;
pub mod params;
pub mod quadrature;
pub mod sweep;
pub mod toeplitz;

pub use correlators::{
    correlator_set, fermion_correlator, ground_state_energy_per_site, spontaneous_magnetization,
    transverse_magnetization, xx_correlator, yy_correlator, zz_correlator, ChainCorrelators, CorrelatorSet,
    FermionTable, Magnetization,
};
pub use density::{assemble_rho, validate_rho, xz_bounds, RhoDiagnostics, TwoSpinDensityMatrix, XzBoundResult};
pub use error::{Error, Result};
pub use interval::Interval;
pub use measures::{
    concurrence, concurrence_closed_form, evaluate, g1, g2n, negativity, negativity_closed_form,
    symmetry_equivalence_lhs, Branch, EntanglementReport, PTSpectrum, RSpectrum,
};
pub use params::{lambda2, ModelParams, StateKind};
