//! Entanglement witnesses, principal-component estimation and virtual cooling.

mod principal;
mod witness;

pub use principal::{default_floor, pce_estimate, qvc_fidelity_exact};
pub use witness::{
    gated_detection, hankel_criteria, newton_witnesses, p3ppt_value, witness_report, HankelMinor, WitnessReport,
};
