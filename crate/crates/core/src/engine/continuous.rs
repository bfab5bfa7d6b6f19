//! Interim utilities for continuous values against step-function opponents.

use alloc::format;
use alloc::vec::Vec;
use num_traits::{Signed, Zero};

use super::discrete::{bid_check, normalize};
use super::tie::win_share;
use super::Normalization;
use crate::error::Error;
use crate::model::{CfpaBox, CfpaIid, CondPiece, IidMarginal, JumpStrategy, Symmetry, TieMass};
use crate::rational::{format_rational, Rational};

/// Raw winning masses for every bid given conditional pieces whose slots index `strategies`.
pub(crate) fn raw_from_pieces(pieces: &[CondPiece], strategies: &[JumpStrategy], bids: usize) -> Vec<Rational> {
    (0..bids)
        .map(|b| {
            pieces
                .iter()
                .map(|p| {
                    let share = win_share(p.opponents.iter().map(|(slot, side)| strategies[*slot].tie_mass_on(side, b)));
                    if share.is_zero() { share } else { share * &p.mass }
                })
                .sum()
        })
        .collect()
}

fn outside(bidder: usize, x: &Rational) -> Error {
    Error::OutsideSupport { bidder, value: format_rational(x) }
}

fn arity(len: usize, expected: usize) -> Result<(), Error> {
    if len != expected {
        return Err(Error::Profile(format!("{len} strategies supplied, expected {expected}")));
    }
    Ok(())
}

/// Winning probabilities for every bid, per-bidder profile. Grouped densities are expanded first.
pub fn win_probs_box(
    inst: &CfpaBox,
    i: usize,
    x: &Rational,
    profile: &[JumpStrategy],
    norm: Normalization,
) -> Result<Vec<Rational>, Error> {
    if i >= inst.density.n() {
        return Err(Error::BidderOutOfRange(i));
    }
    arity(profile.len(), inst.density.n())?;
    let expanded;
    let density = match inst.density.symmetry() {
        Symmetry::None => &inst.density,
        Symmetry::Groups(_) => {
            expanded = inst.density.expand();
            &expanded
        }
    };
    let pieces = density.pieces(i, x);
    let f: Rational = pieces.iter().map(|p| p.mass.clone()).sum();
    if f.is_zero() {
        return Err(outside(i, x));
    }
    Ok(normalize(raw_from_pieces(&pieces, profile, inst.bids.len()), &f, norm))
}

pub fn utility_cfpa(
    inst: &CfpaBox,
    i: usize,
    x: &Rational,
    b: usize,
    profile: &[JumpStrategy],
    norm: Normalization,
) -> Result<Rational, Error> {
    bid_check(b, inst.bids.len())?;
    let h = win_probs_box(inst, i, x, profile, norm)?;
    Ok((x - inst.bids.get(b)) * &h[b])
}

/// Winning probabilities using the succinct grouped form, one strategy per group.
pub fn win_probs_box_symmetric(
    inst: &CfpaBox,
    i: usize,
    x: &Rational,
    groups: &[JumpStrategy],
    norm: Normalization,
) -> Result<Vec<Rational>, Error> {
    if i >= inst.density.n() {
        return Err(Error::BidderOutOfRange(i));
    }
    arity(groups.len(), inst.density.slot_count())?;
    let pieces = inst.density.pieces(i, x);
    let f: Rational = pieces.iter().map(|p| p.mass.clone()).sum();
    if f.is_zero() {
        return Err(outside(i, x));
    }
    Ok(normalize(raw_from_pieces(&pieces, groups, inst.bids.len()), &f, norm))
}

pub fn utility_cfpa_symmetric(
    inst: &CfpaBox,
    i: usize,
    x: &Rational,
    b: usize,
    groups: &[JumpStrategy],
    norm: Normalization,
) -> Result<Rational, Error> {
    bid_check(b, inst.bids.len())?;
    let h = win_probs_box_symmetric(inst, i, x, groups, norm)?;
    Ok((x - inst.bids.get(b)) * &h[b])
}

/// Masses of an i.i.d. opponent playing `s`, against bid `b`.
fn iid_mass(marginal: &IidMarginal, s: &JumpStrategy, b: usize) -> TieMass {
    let pre = s.preimage(b);
    let below = marginal.cdf(&pre.lo);
    TieMass { tie: marginal.cdf(&pre.hi) - &below, below }
}

pub(crate) fn iid_in_support(marginal: &IidMarginal, x: &Rational) -> bool {
    let j = marginal.piece_of(x);
    let d = marginal.densities();
    d[j].is_positive() || (marginal.breakpoints()[j + 1] == *x && d.get(j + 1).is_some_and(|p| p.is_positive()))
}

/// Winning probabilities with i.i.d. values; they do not depend on the bidder's own value.
/// `profile` holds either one shared strategy or one per bidder.
pub fn win_probs_iid(
    inst: &CfpaIid,
    i: usize,
    x: &Rational,
    profile: &[JumpStrategy],
    norm: Normalization,
) -> Result<Vec<Rational>, Error> {
    if i >= inst.n {
        return Err(Error::BidderOutOfRange(i));
    }
    if profile.len() != 1 {
        arity(profile.len(), inst.n)?;
    }
    if !iid_in_support(&inst.marginal, x) {
        return Err(outside(i, x));
    }
    let strategy = |j: usize| if profile.len() == 1 { &profile[0] } else { &profile[j] };
    let h = (0..inst.bids.len())
        .map(|b| win_share((0..inst.n).filter(|&j| j != i).map(|j| iid_mass(&inst.marginal, strategy(j), b))))
        .collect();
    let f = inst.marginal.density_at(x).clone();
    Ok(match norm {
        Normalization::Interim => h,
        Normalization::Raw => h.into_iter().map(|y: Rational| y * &f).collect(),
    })
}

pub fn utility_cfpa_iid(
    inst: &CfpaIid,
    i: usize,
    x: &Rational,
    b: usize,
    profile: &[JumpStrategy],
    norm: Normalization,
) -> Result<Rational, Error> {
    bid_check(b, inst.bids.len())?;
    let h = win_probs_iid(inst, i, x, profile, norm)?;
    Ok((x - inst.bids.get(b)) * &h[b])
}
