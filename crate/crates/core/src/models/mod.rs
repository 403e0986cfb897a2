//! Benchmark states: spin-chain ground and Gibbs states, noisy and entangled fixtures.

mod hamiltonian;
mod states;

pub use hamiltonian::{
    build_hamiltonian, gibbs_state, ground_state, HamiltonianSpec, Model, SpectralHamiltonian, MAX_HAMILTONIAN_QUBITS,
};
pub use states::{
    bell_state, depolarize, gapped_state, ghz_state, principal_vector, product_random, random_density_matrix,
    random_mixed, random_pauli_observable, random_pure, random_separable_two_qubit,
};
