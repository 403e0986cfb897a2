//! Dense linear algebra and state primitives.

pub mod gates;
pub mod matrix;
mod observable;
mod ops;
mod partition;
mod state;

pub use matrix::{c64, CMat};
pub use observable::{quadratic_form, ObservableKind, ObservableSpec, PauliString, PauliTerm, IMAG_RESIDUE_TOL};
pub use ops::{
    exact_observable_powers, exact_observable_powers_from_zero, exact_pt_moments, exact_spectral_moments,
    partial_trace, partial_trace_matrix, partial_transpose, partial_transpose_matrix, tensor_product, trace_product,
};
pub use partition::BipartitionSpec;
pub(crate) use state::{check_dense_cap, check_pure_cap};
pub use state::{Mixture, QuantumState, Representation, CLAMP_TOL, MAX_DENSE_QUBITS, MAX_PURE_QUBITS};
