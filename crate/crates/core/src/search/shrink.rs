use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Error;
use crate::model::{BidSpace, PureStrategy};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShrunkSpace {
    pub bids: BidSpace,
    pub target: usize,
    /// Additive loss bound `1/(M-1)`.
    pub guarantee: Rational,
}

/// Keeps 0 and the largest bid of each bucket `((k-1)/(M-1), k/(M-1)]`.
///
/// Every original bid then has a kept bid at or above it, less than
/// `1/(M-1)` higher.
pub fn shrink_bidspace(bids: &BidSpace, target: usize) -> Result<ShrunkSpace, Error> {
    if target < 2 {
        return Err(Error::Argument(alloc::format!("target size {target} is below 2")));
    }
    let width = Rational::new(BigInt::from(1), BigInt::from(target - 1));
    let mut kept = vec![Rational::zero()];
    for k in 1..target {
        let lo = &width * BigInt::from(k - 1);
        let hi = &width * BigInt::from(k);
        if let Some(b) = bids.bids().iter().filter(|b| **b > lo && **b <= hi).max() {
            kept.push(b.clone());
        }
    }
    Ok(ShrunkSpace { bids: BidSpace::new(kept)?, target, guarantee: width })
}

/// Maps bid indices of `from` to the indices of the same bids in `to`.
pub fn reindex_pure(profile: &[PureStrategy], from: &BidSpace, to: &BidSpace) -> Result<Vec<PureStrategy>, Error> {
    profile
        .iter()
        .map(|s| {
            let bids = s
                .bids
                .iter()
                .map(|&b| to.index_of(from.get(b)).ok_or_else(|| Error::Argument(alloc::format!("bid {} missing from target space", from.get(b)))))
                .collect::<Result<_, _>>()?;
            Ok(PureStrategy { bids })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn bucket_rule_example() {
        let s = shrink_bidspace(&BidSpace::grid(10), 5).unwrap();
        assert_eq!(s.bids.bids(), &[int(0), rat(1, 5), rat(1, 2), rat(7, 10), int(1)]);
        assert_eq!(s.guarantee, rat(1, 4));
    }

    #[test]
    fn degenerate_cases() {
        let zero = BidSpace::new(vec![int(0)]).unwrap();
        assert_eq!(shrink_bidspace(&zero, 2).unwrap().bids, zero);
        assert!(shrink_bidspace(&zero, 1).is_err());
        let g = BidSpace::grid(4);
        assert_eq!(shrink_bidspace(&g, 11).unwrap().bids, g);
    }

    #[test]
    fn upper_neighbour_within_width() {
        let b = BidSpace::new(vec![int(0), rat(1, 10), rat(9, 10), int(1)]).unwrap();
        let s = shrink_bidspace(&b, 5).unwrap();
        for x in b.bids() {
            let up = s.bids.bids().iter().find(|y| *y >= x).unwrap();
            assert!(up - x < s.guarantee);
        }
    }
}
