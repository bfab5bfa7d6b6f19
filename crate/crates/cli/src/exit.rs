//! Process exit codes. These values are stable.

pub const OK: u8 = 0;
/// Verification ran and the profile is not an ε-equilibrium (or a certificate does not hold).
pub const FAIL: u8 = 1;
/// Bad command line.
pub const USAGE: u8 = 2;
/// A search came back empty, or a profile does not encode an assignment.
pub const NONE: u8 = 3;
pub const IO: u8 = 4;
/// Malformed JSON, rational or formula text.
pub const PARSE: u8 = 5;
/// Well-formed input that breaks a model invariant.
pub const INVALID: u8 = 6;
/// Search space exceeds the budget.
pub const BUDGET: u8 = 7;
pub const UNSUPPORTED: u8 = 8;
pub const DOMAIN: u8 = 9;
