//! Brute-force ground truth, written without the estimator or inversion code.

mod brute;
mod expectation;
mod perm;
mod sums;

pub use brute::{brute_delta_hat, brute_gamma_hat, brute_lambda_hat, brute_m_hat, brute_upsilon_hat};
pub use expectation::{
    conditional_expectation_gamma, conditional_expectation_lambda, conditional_expectation_m, dense_born_probabilities,
    dense_quasi_probabilities,
};
pub use perm::{all_permutations, cycles};
pub use sums::{
    delta_permutation_sum, exp_delta_rhs, gamma_operator, partial_transpose_oracle, permutation_sum_xi,
    permutation_sum_zeta, permutation_sum_zeta_pt, zeta_pt_explicit,
};
