use alloc::format;
use alloc::vec::Vec;
use num_traits::Zero;

use crate::error::{check, Error, Violation};
use crate::rational::{in_unit_interval, rat, Rational};

/// Finite set of allowed bids: sorted, distinct, inside `[0, 1]`, containing 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BidSpace {
    bids: Vec<Rational>,
}

impl BidSpace {
    pub fn new(bids: Vec<Rational>) -> Result<Self, Error> {
        check(Self::violations(&bids))?;
        Ok(BidSpace { bids })
    }

    pub fn violations(bids: &[Rational]) -> Vec<Violation> {
        let mut out = Vec::new();
        if bids.first().is_none_or(|b| !b.is_zero()) {
            out.push(Violation::new("bids", "must start with 0"));
        }
        for (k, b) in bids.iter().enumerate() {
            if !in_unit_interval(b) {
                out.push(Violation::new(format!("bids[{k}]"), format!("{b} outside [0,1]")));
            }
            if k > 0 && bids[k - 1] >= *b {
                out.push(Violation::new(format!("bids[{k}]"), "bids not strictly increasing"));
            }
        }
        out
    }

    /// `{0, 1/k, 2/k, ..., 1}`.
    pub fn grid(k: i64) -> Self {
        BidSpace { bids: (0..=k).map(|j| rat(j, k)).collect() }
    }

    pub fn bids(&self) -> &[Rational] {
        &self.bids
    }

    pub fn len(&self) -> usize {
        self.bids.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, k: usize) -> &Rational {
        &self.bids[k]
    }

    pub fn index_of(&self, b: &Rational) -> Option<usize> {
        self.bids.binary_search(b).ok()
    }

    /// Index of the largest bid not exceeding `v`.
    pub fn highest_at_most(&self, v: &Rational) -> usize {
        self.bids.partition_point(|b| b <= v).saturating_sub(1)
    }
}
