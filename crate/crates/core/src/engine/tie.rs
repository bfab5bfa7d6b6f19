//! Winning probability under uniform tie-breaking.
//!
//! With per-opponent masses `g` (bids exactly `b`) and `G` (bids below `b`),
//! `T[r]` is the probability that exactly `r` opponents tie and the rest are
//! below. The bidder wins with probability `sum_r T[r] / (r + 1)`.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::model::TieMass;
use crate::rational::{int, Rational};

/// `T[r]` for `r = 0..=opponents.len()`.
pub fn tie_table(opponents: &[TieMass]) -> Vec<Rational> {
    let mut t = vec![Rational::one()];
    for m in opponents {
        let mut next = vec![Rational::zero(); t.len() + 1];
        for (r, x) in t.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if !m.below.is_zero() {
                next[r] += x * &m.below;
            }
            if !m.tie.is_zero() {
                next[r + 1] += x * &m.tie;
            }
        }
        t = next;
    }
    t
}

/// `sum_r T[r] / (r + 1)`.
///
/// Opponents that are surely below are skipped and sure ties are counted
/// directly, so pure profiles never reach the table.
pub fn win_share<I: IntoIterator<Item = TieMass>>(opponents: I) -> Rational {
    let mut sure_ties = 0i64;
    let mut mixed = Vec::new();
    for m in opponents {
        if m.tie.is_zero() {
            if m.below.is_zero() {
                return Rational::zero();
            }
            if m.below.is_one() {
                continue;
            }
        } else if m.tie.is_one() {
            sure_ties += 1;
            continue;
        }
        mixed.push(m);
    }
    if mixed.is_empty() {
        return Rational::new(1.into(), (sure_ties + 1).into());
    }
    tie_table(&mixed)
        .into_iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(r, x)| x / int(r as i64 + 1 + sure_ties))
        .sum()
}
