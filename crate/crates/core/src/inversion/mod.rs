//! Polynomial relations between symmetric-group averages and moments.

mod cycles;
mod moments;
mod observables;

pub use cycles::{enumerate_cycle_types, CycleType, MAX_ORDER};
pub use moments::{moments_from_zeta, pt_moments_from_zeta, zeta_from_moments, MomentSet, PtMomentSet};
pub use observables::{
    assemble_gamma, gamma_expansion_coefficients, observable_powers_from_xi, powers_from_gamma, xi_from,
};
