//! Value priors, bid spaces, strategies and the auction instances built from them.

mod bids;
mod boxes;
mod discrete;
mod instance;
mod strategy;

pub use bids::BidSpace;
pub(crate) use boxes::cells;
pub use boxes::{BoxDensity, CondPiece, IidMarginal, Interval, Symmetry, WeightedBox};
pub use discrete::{multiplicity, DiscretePrior, SymmetricDiscretePrior};
pub use instance::{CfpaBox, CfpaIid, Dfpa, DfpaSym, Instance, Profile};
pub use strategy::{DiscreteStrategy, JumpStrategy, MixedStrategy, OwnBid, PureStrategy, TieMass};

use alloc::format;
use alloc::vec::Vec;

use crate::error::Violation;
use crate::rational::{in_unit_interval, Rational};

/// A value space must be nonempty, strictly increasing and inside `[0, 1]`.
pub(crate) fn check_value_space(values: &[Rational], loc: &str) -> Vec<Violation> {
    let mut out = Vec::new();
    if values.is_empty() {
        out.push(Violation::new(loc, "empty value space"));
    }
    for (k, v) in values.iter().enumerate() {
        if !in_unit_interval(v) {
            out.push(Violation::new(format!("{loc}[{k}]"), format!("{v} outside [0,1]")));
        }
        if k > 0 && values[k - 1] >= *v {
            out.push(Violation::new(format!("{loc}[{k}]"), "values not strictly increasing"));
        }
    }
    out
}

pub(crate) fn index_of(values: &[Rational], v: &Rational) -> Option<usize> {
    values.binary_search(v).ok()
}
