//! Exact interim utilities, best responses, equilibrium verification and
//! structural checks.

mod continuous;
mod discrete;
mod structure;
mod tie;
mod verify;

pub use continuous::{
    utility_cfpa, utility_cfpa_iid, utility_cfpa_symmetric, win_probs_box, win_probs_box_symmetric, win_probs_iid,
};
pub use discrete::{
    group_profile, utility_dfpa, utility_dfpa_mixed, utility_dfpa_symmetric, win_prob_dfpa, win_probs_dfpa,
    win_probs_dfpa_sym,
};
pub use structure::{
    affiliation_violation_boxes, affiliation_violation_discrete, check_affiliation, check_monotone,
    check_monotone_mixed, check_monotone_pure, AffiliationWitness,
};
pub use tie::{tie_table, win_share};
pub use verify::{
    best_response_dfpa, best_response_from, is_equilibrium_box, is_equilibrium_box_symmetric, is_equilibrium_dfpa,
    is_equilibrium_dfpa_sym, verify, verify_box, verify_box_symmetric, verify_dfpa, verify_dfpa_sym, verify_iid, win_probs,
    BestResponseReport, Deviation, VerifyReport,
};

/// Interim utility conditions on the bidder's own value; raw utility is the
/// interim one times the marginal mass (or density) of that value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    Interim,
    Raw,
}
