//! SAT-to-auction gadget reduction and the discrete-to-continuous lift.

mod gadget;
mod lift;
mod sat;

pub use gadget::{
    build_auction, default_deltas, encode_profile, encoding, extract_assignment, gadget_bids, gadget_values,
    isolated_gadget, ClauseGadget, DeltaChain, Deltas, GadgetKind, LiteralWire, ReductionMap, Role, VariableGadget,
    MID, S0, S1, TOP, ZERO,
};
pub use lift::{lift_dfpa_to_cfpa, lift_dfpa_sym_to_cfpa, lift_pure_strategy, project_strategy, Lift};
pub use sat::{parse_sat, SatFormula};
