//! Single-qubit open-system toolkit for the amplitude-damping channel of the
//! damped Jaynes-Cummings model: survival-probability curves, trace-norm
//! coherence dynamics, a coherence-backflow non-Markovianity quantifier N_C,
//! a Jones-calculus emulation of an all-optical realization of the channel,
//! and polarization-tomography state reconstruction closing the loop.
//!
//! The coupling ratio α = 2γ/Γ controls everything: α <= 1 gives monotone
//! (Markovian) coherence decay and N_C = 0, α > 1 gives coherence revivals
//! whose summed heights are N_C.

pub mod channel;
pub mod coherence;
pub mod error;
pub mod nonmarkov;
pub mod optics;
pub mod qubit;
pub mod tomography;

pub use channel::{ChannelParams, JointState, SurvivalProbability};
pub use coherence::{CoherenceTrace, CoherenceValue};
pub use error::{Error, Result};
pub use nonmarkov::{Method, NonMarkovianity, RevivalSchedule};
pub use optics::{BenchConfig, JonesState, WavePlate};
pub use qubit::{BlochVector, DensityMatrix, Mat2};
pub use tomography::{ReconstructionResult, TomographyRecord};
