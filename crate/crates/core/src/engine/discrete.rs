//! Interim utilities for discrete-value auctions.

use alloc::format;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::Zero;

use super::tie::win_share;
use super::Normalization;
use crate::error::Error;
use crate::model::{Dfpa, DfpaSym, DiscreteStrategy};
use crate::rational::{format_rational, Rational};

fn check_arity(len: usize, expected: usize) -> Result<(), Error> {
    if len != expected {
        return Err(Error::Profile(format!("{len} strategies supplied, expected {expected}")));
    }
    Ok(())
}

/// Unnormalized winning masses for every bid: `sum_points f(point) * share(point, b)`.
fn raw_win_masses<S: DiscreteStrategy>(inst: &Dfpa, i: usize, v: usize, profile: &[S]) -> Vec<Rational> {
    let prior = &inst.prior;
    (0..inst.bids.len())
        .map(|b| {
            prior
                .points_at(i, v)
                .iter()
                .map(|&p| {
                    let (idx, mass) = &prior.points()[p];
                    let opps = idx.iter().enumerate().filter(|&(j, _)| j != i).map(|(j, &u)| profile[j].tie_mass(u, b));
                    let share = win_share(opps);
                    if share.is_zero() { share } else { share * mass }
                })
                .sum()
        })
        .collect()
}

fn support_check(f: &Rational, bidder: usize, value: &Rational) -> Result<(), Error> {
    if f.is_zero() {
        return Err(Error::OutsideSupport { bidder, value: format_rational(value) });
    }
    Ok(())
}

fn dfpa_args<S>(inst: &Dfpa, i: usize, v: usize, profile: &[S]) -> Result<(), Error> {
    let prior = &inst.prior;
    if i >= prior.n() {
        return Err(Error::BidderOutOfRange(i));
    }
    check_arity(profile.len(), prior.n())?;
    if v >= prior.value_space(i).len() {
        return Err(Error::Argument(format!("value index {v} out of range")));
    }
    support_check(prior.marginal_at(i, v), i, &prior.value_space(i)[v])
}

/// Winning probability of every bid for bidder `i` at value index `v`.
pub fn win_probs_dfpa<S: DiscreteStrategy>(
    inst: &Dfpa,
    i: usize,
    v: usize,
    profile: &[S],
    norm: Normalization,
) -> Result<Vec<Rational>, Error> {
    dfpa_args(inst, i, v, profile)?;
    let raw = raw_win_masses(inst, i, v, profile);
    Ok(normalize(raw, inst.prior.marginal_at(i, v), norm))
}

/// Interim probability that bidder `i` with value index `v` wins with bid index `b`.
pub fn win_prob_dfpa<S: DiscreteStrategy>(inst: &Dfpa, i: usize, v: usize, b: usize, profile: &[S]) -> Result<Rational, Error> {
    bid_check(b, inst.bids.len())?;
    Ok(win_probs_dfpa(inst, i, v, profile, Normalization::Interim)?.swap_remove(b))
}

pub fn utility_dfpa<S: DiscreteStrategy>(
    inst: &Dfpa,
    i: usize,
    v: usize,
    b: usize,
    profile: &[S],
    norm: Normalization,
) -> Result<Rational, Error> {
    bid_check(b, inst.bids.len())?;
    let h = win_probs_dfpa(inst, i, v, profile, norm)?;
    Ok((&inst.prior.value_space(i)[v] - inst.bids.get(b)) * &h[b])
}

/// Utility of playing the bid distribution `own` (weights aligned with the bid space).
pub fn utility_dfpa_mixed<S: DiscreteStrategy>(
    inst: &Dfpa,
    i: usize,
    v: usize,
    own: &[Rational],
    profile: &[S],
    norm: Normalization,
) -> Result<Rational, Error> {
    check_arity(own.len(), inst.bids.len())?;
    let h = win_probs_dfpa(inst, i, v, profile, norm)?;
    let value = &inst.prior.value_space(i)[v];
    Ok(own.iter().zip(&h).enumerate().map(|(b, (w, h))| w * (value - inst.bids.get(b)) * h).sum())
}

/// Winning probabilities in the group-symmetric form, one strategy per group.
pub fn win_probs_dfpa_sym<S: DiscreteStrategy>(
    inst: &DfpaSym,
    i: usize,
    v: usize,
    groups: &[S],
    norm: Normalization,
) -> Result<Vec<Rational>, Error> {
    let prior = &inst.prior;
    let g = prior.group_of(i)?;
    check_arity(groups.len(), prior.group_count())?;
    if v >= prior.value_space(g).len() {
        return Err(Error::Argument(format!("value index {v} out of range")));
    }
    let f = prior.marginal(g).swap_remove(v);
    support_check(&f, i, &prior.value_space(g)[v])?;
    let sizes = prior.group_sizes();
    let weights: Vec<(Rational, Vec<(usize, usize)>)> = prior
        .reps_at(g, v)
        .iter()
        .map(|&(r, c)| {
            let (idx, p) = &prior.reps()[r];
            let w = p * Rational::new(&prior.multiplicities()[r] * BigInt::from(c), BigInt::from(sizes[g]));
            let mut opps = Vec::with_capacity(idx.len() - 1);
            let mut dropped = false;
            for (h, &size) in sizes.iter().enumerate() {
                let start = prior.group_start(h);
                for &u in &idx[start..start + size] {
                    if h == g && u == v && !dropped {
                        dropped = true;
                        continue;
                    }
                    opps.push((h, u));
                }
            }
            (w, opps)
        })
        .collect();
    let raw = (0..inst.bids.len())
        .map(|b| {
            weights
                .iter()
                .map(|(w, opps)| {
                    let share = win_share(opps.iter().map(|&(h, u)| groups[h].tie_mass(u, b)));
                    share * w
                })
                .sum()
        })
        .collect();
    Ok(normalize(raw, &f, norm))
}

pub fn utility_dfpa_symmetric<S: DiscreteStrategy>(
    inst: &DfpaSym,
    i: usize,
    v: usize,
    b: usize,
    groups: &[S],
    norm: Normalization,
) -> Result<Rational, Error> {
    bid_check(b, inst.bids.len())?;
    let h = win_probs_dfpa_sym(inst, i, v, groups, norm)?;
    let g = inst.prior.group_of(i)?;
    Ok((&inst.prior.value_space(g)[v] - inst.bids.get(b)) * &h[b])
}

/// Collapses a per-bidder profile to one strategy per group, rejecting asymmetric input.
pub fn group_profile<S: Clone + PartialEq>(inst: &DfpaSym, profile: &[S]) -> Result<Vec<S>, Error> {
    check_arity(profile.len(), inst.prior.n())?;
    let mut out = Vec::new();
    for (g, &size) in inst.prior.group_sizes().iter().enumerate() {
        let start = inst.prior.group_start(g);
        let first = &profile[start];
        if profile[start..start + size].iter().any(|s| s != first) {
            return Err(Error::Profile(format!("bidders of group {g} do not share a strategy")));
        }
        out.push(first.clone());
    }
    Ok(out)
}

pub(crate) fn normalize(raw: Vec<Rational>, f: &Rational, norm: Normalization) -> Vec<Rational> {
    match norm {
        Normalization::Raw => raw,
        Normalization::Interim => raw.into_iter().map(|x| x / f).collect(),
    }
}

pub(crate) fn bid_check(b: usize, len: usize) -> Result<(), Error> {
    if b >= len {
        return Err(Error::Argument(format!("bid index {b} out of range")));
    }
    Ok(())
}
