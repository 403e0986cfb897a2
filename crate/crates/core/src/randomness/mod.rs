//! Haar-random unitaries, brickwork circuits and reproducible RNG streams.

mod circuit;
mod seed;

pub use circuit::{
    apply_circuit, apply_circuit_on, circuit_to_matrix, haar_unitary, sample_circuit, CircuitDescription, EnsembleKind,
    Gate, UnitaryEnsembleConfig, MAX_GLOBAL_HAAR_QUBITS,
};
pub use seed::{SeedSpec, StreamPurpose};
