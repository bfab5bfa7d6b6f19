use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use super::{BidSpace, Interval};
use crate::error::{check, Error, Violation};
use crate::rational::{format_rational, in_unit_interval, int, overlap, Rational};

/// Probability that one opponent bids exactly `b` (`tie`) and strictly below `b` (`below`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieMass {
    pub tie: Rational,
    pub below: Rational,
}

impl TieMass {
    pub fn certain_below() -> Self {
        TieMass { tie: Rational::zero(), below: Rational::one() }
    }
}

/// What a bidder plays at one value: a single bid or a distribution over bids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OwnBid<'a> {
    Pure(usize),
    Mixed(&'a [Rational]),
}

/// A strategy over a finite value space, seen through the masses the tie DP needs.
pub trait DiscreteStrategy {
    fn tie_mass(&self, value: usize, bid: usize) -> TieMass;
    fn value_count(&self) -> usize;
    fn own_bid(&self, value: usize) -> OwnBid<'_>;
}

/// Value index to bid index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureStrategy {
    pub bids: Vec<usize>,
}

impl PureStrategy {
    pub fn new(bids: Vec<usize>, values: &[Rational], space: &BidSpace) -> Result<Self, Error> {
        let s = PureStrategy { bids };
        check(s.violations(values, space))?;
        Ok(s)
    }

    /// Checks totality over `values` and that every image is a bid of `space`.
    pub fn violations(&self, values: &[Rational], space: &BidSpace) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.bids.len() != values.len() {
            out.push(Violation::new("map", format!("{} entries for {} values", self.bids.len(), values.len())));
        }
        for (k, &b) in self.bids.iter().enumerate() {
            if b >= space.len() {
                out.push(Violation::new(format!("map[{k}]"), "bid index outside the bid space"));
            }
        }
        out
    }

    /// Every value bids 0.
    pub fn zero(values: usize) -> Self {
        PureStrategy { bids: vec![0; values] }
    }

    pub fn is_monotone(&self) -> bool {
        self.bids.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_no_overbidding(&self, values: &[Rational], space: &BidSpace) -> bool {
        self.bids.iter().zip(values).all(|(&b, v)| space.get(b) <= v)
    }

    pub fn to_mixed(&self, bid_count: usize) -> MixedStrategy {
        let rows = self
            .bids
            .iter()
            .map(|&b| (0..bid_count).map(|k| if k == b { int(1) } else { int(0) }).collect())
            .collect();
        MixedStrategy { rows }
    }
}

impl DiscreteStrategy for PureStrategy {
    fn tie_mass(&self, value: usize, bid: usize) -> TieMass {
        let own = self.bids[value];
        let (tie, below) = match own.cmp(&bid) {
            core::cmp::Ordering::Less => (0, 1),
            core::cmp::Ordering::Equal => (1, 0),
            core::cmp::Ordering::Greater => (0, 0),
        };
        TieMass { tie: int(tie), below: int(below) }
    }

    fn value_count(&self) -> usize {
        self.bids.len()
    }

    fn own_bid(&self, value: usize) -> OwnBid<'_> {
        OwnBid::Pure(self.bids[value])
    }
}

/// Value index to a distribution over bid indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedStrategy {
    pub rows: Vec<Vec<Rational>>,
}

impl MixedStrategy {
    pub fn new(rows: Vec<Vec<Rational>>, values: &[Rational], space: &BidSpace) -> Result<Self, Error> {
        let s = MixedStrategy { rows };
        check(s.violations(values, space))?;
        Ok(s)
    }

    pub fn violations(&self, values: &[Rational], space: &BidSpace) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.rows.len() != values.len() {
            out.push(Violation::new("table", format!("{} rows for {} values", self.rows.len(), values.len())));
        }
        for (k, row) in self.rows.iter().enumerate() {
            if row.len() != space.len() {
                out.push(Violation::new(format!("table[{k}]"), format!("{} weights for {} bids", row.len(), space.len())));
            }
            if row.iter().any(|w| !in_unit_interval(w)) {
                out.push(Violation::new(format!("table[{k}]"), "weights must lie in [0,1]"));
            }
            let total: Rational = row.iter().sum();
            if !total.is_one() {
                out.push(Violation::new(format!("table[{k}]"), format!("row sums to {}", format_rational(&total))));
            }
        }
        out
    }

    fn support(&self, value: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[value].iter().enumerate().filter(|(_, w)| w.is_positive()).map(|(k, _)| k)
    }

    /// Supports are ordered: the highest bid at a value never exceeds the lowest bid at a higher value.
    pub fn is_monotone(&self) -> bool {
        let mut floor = 0;
        for v in 0..self.rows.len() {
            let (Some(lo), Some(hi)) = (self.support(v).next(), self.support(v).last()) else {
                continue;
            };
            if lo < floor {
                return false;
            }
            floor = hi;
        }
        true
    }

    pub fn is_no_overbidding(&self, values: &[Rational], space: &BidSpace) -> bool {
        (0..self.rows.len()).all(|v| self.support(v).all(|b| space.get(b) <= &values[v]))
    }
}

impl DiscreteStrategy for MixedStrategy {
    fn tie_mass(&self, value: usize, bid: usize) -> TieMass {
        let row = &self.rows[value];
        TieMass { tie: row[bid].clone(), below: row[..bid].iter().sum() }
    }

    fn value_count(&self) -> usize {
        self.rows.len()
    }

    fn own_bid(&self, value: usize) -> OwnBid<'_> {
        OwnBid::Mixed(&self.rows[value])
    }
}

/// Monotone step function over `[0, 1]` given by one threshold per bid boundary.
///
/// `thresholds[0] = 0 <= thresholds[1] <= ... <= thresholds[m] = 1`, and bid `k`
/// is played on `(thresholds[k], thresholds[k + 1]]`; value 0 bids the lowest bid.
/// At a threshold the lower bid is used.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JumpStrategy {
    thresholds: Vec<Rational>,
}

impl JumpStrategy {
    pub fn new(thresholds: Vec<Rational>, space: &BidSpace) -> Result<Self, Error> {
        check(Self::violations(&thresholds, space))?;
        Ok(JumpStrategy { thresholds })
    }

    pub fn violations(thresholds: &[Rational], space: &BidSpace) -> Vec<Violation> {
        let mut out = Vec::new();
        if thresholds.len() != space.len() + 1 {
            out.push(Violation::new(
                "thresholds",
                format!("{} thresholds for {} bids (need one more than bids)", thresholds.len(), space.len()),
            ));
            return out;
        }
        if !thresholds[0].is_zero() || !thresholds[space.len()].is_one() {
            out.push(Violation::new("thresholds", "must start at 0 and end at 1"));
        }
        for (k, t) in thresholds.iter().enumerate() {
            if k > 0 && thresholds[k - 1] > *t {
                out.push(Violation::new(format!("thresholds[{k}]"), "thresholds must be nondecreasing"));
            }
            if k < space.len() && t < space.get(k) {
                out.push(Violation::new(
                    format!("thresholds[{k}]"),
                    format!("threshold {t} below bid {} (overbidding)", space.get(k)),
                ));
            }
        }
        out
    }

    /// Bid 0 everywhere.
    pub fn zero(space: &BidSpace) -> Self {
        let mut thresholds = vec![int(1); space.len() + 1];
        thresholds[0] = int(0);
        JumpStrategy { thresholds }
    }

    pub fn thresholds(&self) -> &[Rational] {
        &self.thresholds
    }

    pub fn bid_count(&self) -> usize {
        self.thresholds.len() - 1
    }

    /// Bid index played at value `x`.
    pub fn bid_at(&self, x: &Rational) -> usize {
        self.thresholds[1..self.bid_count()].partition_point(|t| t < x)
    }

    /// Values mapped to bid `k` (up to endpoints).
    pub fn preimage(&self, k: usize) -> Interval {
        Interval::new(self.thresholds[k].clone(), self.thresholds[k + 1].clone())
    }

    /// Tie and below masses for a value drawn uniformly from `side`.
    pub fn tie_mass_on(&self, side: &Interval, k: usize) -> TieMass {
        let len = side.len();
        let tie = overlap(&side.lo, &side.hi, &self.thresholds[k], &self.thresholds[k + 1]) / &len;
        let below = overlap(&side.lo, &side.hi, &self.thresholds[0], &self.thresholds[k]) / len;
        TieMass { tie, below }
    }
}
