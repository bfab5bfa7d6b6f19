//! Exhaustive equilibrium search at desk scale and bid-space shrinkage.

mod enumerate;
mod jump;
mod shrink;

pub use enumerate::{enumerate_pure_equilibria, enumerate_symmetric_pure, pure_candidates};
pub use jump::{default_grid, jump_candidates, jump_grid_search};
pub use shrink::{reindex_pure, shrink_bidspace, ShrunkSpace};

use alloc::vec::Vec;
use num_traits::Zero;

use crate::engine::VerifyReport;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub eps: Rational,
    /// Only nondecreasing value→bid maps.
    pub monotone_only: bool,
    /// Only bids not exceeding the value.
    pub no_overbidding: bool,
    /// One strategy per group (jump search on grouped densities).
    pub symmetric: bool,
    /// Largest number of candidate profiles to try.
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { eps: Rational::zero(), monotone_only: false, no_overbidding: true, symmetric: false, budget: 10_000_000 }
    }
}

/// One line of the search log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogRecord {
    pub index: u64,
    pub hash: u64,
    pub passed: bool,
    pub worst_gain: Rational,
}

pub type SearchLog<'a> = Option<&'a mut dyn FnMut(&LogRecord)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<P> {
    Found { profile: P, report: VerifyReport, checked: u64 },
    Exhausted { checked: u64 },
}

impl<P> SearchOutcome<P> {
    pub fn profile(&self) -> Option<&P> {
        match self {
            SearchOutcome::Found { profile, .. } => Some(profile),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

/// FNV-1a over a byte stream; used to tag log lines.
pub fn profile_hash<I: IntoIterator<Item = u8>>(bytes: I) -> u64 {
    bytes.into_iter().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Walks the product of per-slot candidate lists in lexicographic order
/// (slot 0 most significant) until `visit` returns true.
pub(crate) fn odometer<T>(lists: &[Vec<T>], visit: &mut dyn FnMut(&[&T]) -> bool) -> bool {
    if lists.iter().any(Vec::is_empty) {
        return false;
    }
    let mut pos = alloc::vec![0usize; lists.len()];
    loop {
        let current: Vec<&T> = pos.iter().enumerate().map(|(s, &k)| &lists[s][k]).collect();
        if visit(&current) {
            return true;
        }
        let Some(s) = (0..lists.len()).rev().find(|&s| pos[s] + 1 < lists[s].len()) else {
            return false;
        };
        pos[s] += 1;
        for p in &mut pos[s + 1..] {
            *p = 0;
        }
    }
}

pub(crate) fn budget_check(counts: &[u128], budget: u64) -> Result<(), crate::Error> {
    let mut total: u128 = 1;
    for &c in counts {
        total = total.saturating_mul(c);
    }
    if total > u128::from(budget) {
        return Err(crate::Error::Budget { needed: alloc::format!("{total}"), budget });
    }
    Ok(())
}
