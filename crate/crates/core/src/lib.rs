//! Basis-independent coherence analysis of three-degree-of-freedom pure states.
//!
//! A three-qubit pure state (equivalently, a paraxial beam with polarization,
//! transverse-mode and path/temporal degrees of freedom) carries three
//! two-party separability coherences `(S_a, S_b, S_c)`. This crate computes
//! them, checks the tetrahedral constraints they obey, evaluates the genuine
//! three-party coherence, and simulates the interferometric preparation and
//! Stokes tomography used to measure them.
//!
//! Module map:
//!
//! * [`state`]: amplitudes, beam parameterization, partial traces, local unitaries
//! * [`coherence`]: separabilities by determinant, eigenvalue and closed forms; Stokes vectors
//! * [`geometry`]: constraint slacks, directed/genuine coherence, region labels, cube geometry
//! * [`sampling`]: Haar-random states, eigenbasis expansion, proof-chain verification, sweeps
//! * [`bench`]: optical elements, preparation pipeline, named beam recipes
//! * [`tomography`]: Pauli projections, noisy Stokes reconstruction, table reproduction
//! * [`io`]: JSON state and recipe files

pub mod bench;
pub mod coherence;
pub mod error;
pub mod geometry;
pub mod io;
pub mod rng;
pub mod sampling;
pub mod state;
pub mod tomography;

pub use bench::{
    named_recipe, run_pipeline, soc_transform, BeamName, BeamRecipe, BenchPipeline, OpticalElement,
};
pub use coherence::{
    closed_form_separabilities, separabilities, separability_det, separability_eig, stokes_vector,
    CoherenceVector, Separability, StokesVector,
};
pub use error::{Error, Result};
pub use geometry::{
    allowed_volume_mc, classify_point, constraint_slacks, cross_section_area, directed_coherences,
    genuine_coherence, mesh_export, ConstraintSlacks, DirectedCoherences, RegionLabel,
};
pub use sampling::{
    decompose_in_eigenbases, haar_random_state, sweep, verify_appendix, ProofReport,
    SweepStatistics,
};
pub use state::{
    apply_local_unitary, beam_to_state, make_state, reduced_matrix, Amplitude, BeamParameters,
    CoherenceMatrix, Subsystem, ThreeQubitState,
};
pub use tomography::{
    reproduce_table, simulate_projection, tomography, Noise, PauliAxis, Sign, TableReport,
    TomographyResult, TomographySettings,
};

/// Crate version, recorded in CLI report envelopes.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
