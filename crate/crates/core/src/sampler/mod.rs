//! Born-rule tables, outcome sampling, quasi-probabilities and the joint
//! `(b, r)` distribution of the partial-transpose protocol.

mod ptme;
mod table;

pub use ptme::{ptme_joint_probabilities, ptme_joint_probabilities_bell, ptme_table_of_rotated};
pub use table::{
    born_probabilities, extend_with_ancillas, probabilities_of, quasi_probabilities, quasi_probability,
    sample_outcomes, OutcomeBatch, OutcomeSpace, ProbabilityTable,
};
