//! Collision estimators evaluated from outcome histograms in `O(N_M)` time.

mod collision;
pub mod combinatorics;
mod extensions;
mod histogram;

pub use collision::{
    collision_count, estimate_all, gamma_hat, gamma_hat_from_quasi, histogram_quasi_probabilities, lambda_hat, m_hat,
    EstimatorSet, ObservableMode,
};
pub use extensions::{delta_hat, upsilon_hat, TwoBodyObservable};
pub use histogram::{build_histogram, CollisionHistogram, HistogramEntry};
