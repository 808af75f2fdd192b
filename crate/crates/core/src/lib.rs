//! Density-matrix simulation of two quantum-dot spins entangled by a single
//! reflected photon, with Lindblad noise on the dots and a tomography scheme
//! built from single-spin rotations and probe photons.
//!
//! Conventions: the full system is photon ⊗ QD1 ⊗ QD2 with bases
//! (|R⟩, |L⟩) and (|↑⟩, |↓⟩); see [`state::SystemLayout`].

pub mod error;
pub mod gates;
pub mod linalg;
pub mod measures;
pub mod noise;
pub mod protocol;
pub mod sampling;
pub mod state;
pub mod tomography;

pub use error::{Error, Result};
pub use gates::{faraday_unitary, QdTarget, Rotation, RotationSetting};
pub use measures::{
    concurrence, entanglement_of_formation, hs_coefficients, state_fidelity, trace_distance, uhlmann_fidelity,
    CorrelationMatrix,
};
pub use noise::{build_liouvillian, evolve, kraus_channel_oracle, Liouvillian, NoiseKind, NoiseModel};
pub use protocol::{
    concurrence_closed_form, fidelity_closed_form, figure1_sweep, relaxation_outcome_probability, run_entanglement,
    Outcome, PostSelectedEnsemble, ProtocolConfig, ProtocolTimings,
};
pub use state::{DensityOperator, PolarizationBasis, Subsystem, SystemLayout};
