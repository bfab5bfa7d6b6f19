//! Best responses and ε-equilibrium verification.

use alloc::vec::Vec;
use num_traits::Zero;

use super::continuous::{iid_in_support, raw_from_pieces, win_probs_iid};
use super::discrete::{win_probs_dfpa, win_probs_dfpa_sym};
use super::Normalization;
use crate::error::Error;
use crate::model::{cells, BidSpace, CfpaBox, CfpaIid, Dfpa, DfpaSym, DiscreteStrategy, Instance, JumpStrategy, OwnBid, Profile, Symmetry};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestResponseReport {
    /// Bid indices attaining the maximum.
    pub argmax: Vec<usize>,
    pub max_utility: Rational,
    /// Gap to the best bid outside the argmax; `None` when every candidate is optimal.
    pub margin: Option<Rational>,
}

/// Best response given the winning probability of each bid.
pub fn best_response_from(value: &Rational, win: &[Rational], bids: &BidSpace, no_overbidding: bool) -> BestResponseReport {
    let utils: Vec<(usize, Rational)> = (0..bids.len())
        .filter(|&b| !no_overbidding || bids.get(b) <= value)
        .map(|b| (b, (value - bids.get(b)) * &win[b]))
        .collect();
    let max_utility = utils.iter().map(|(_, u)| u).max().cloned().unwrap_or_else(Rational::zero);
    let argmax = utils.iter().filter(|(_, u)| *u == max_utility).map(|(b, _)| *b).collect();
    let margin = utils.iter().filter(|(_, u)| *u != max_utility).map(|(_, u)| &max_utility - u).min();
    BestResponseReport { argmax, max_utility, margin }
}

pub fn best_response_dfpa<S: DiscreteStrategy>(
    inst: &Dfpa,
    i: usize,
    v: usize,
    profile: &[S],
    no_overbidding: bool,
) -> Result<BestResponseReport, Error> {
    let h = win_probs_dfpa(inst, i, v, profile, Normalization::Interim)?;
    Ok(best_response_from(&inst.prior.value_space(i)[v], &h, &inst.bids, no_overbidding))
}

/// A profitable deviation: at `value`, bidder `bidder` gains `gain` by bidding index `bid` instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation {
    pub bidder: usize,
    pub value: Rational,
    pub bid: usize,
    pub gain: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub eps: Rational,
    /// Largest deviation gain over all bidders and values: the smallest ε that passes.
    pub worst_gain: Rational,
    /// Every deviation whose gain exceeds ε.
    pub violations: Vec<Deviation>,
}

impl VerifyReport {
    fn new(eps: &Rational) -> Self {
        VerifyReport { eps: eps.clone(), worst_gain: Rational::zero(), violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Scores one decision point. Returns false when a violation was found and `stop` is set.
fn assess(
    report: &mut VerifyReport,
    bidder: usize,
    value: &Rational,
    win: &[Rational],
    own: OwnBid<'_>,
    bids: &BidSpace,
    stop: bool,
) -> bool {
    let utils: Vec<Rational> = (0..bids.len()).map(|b| (value - bids.get(b)) * &win[b]).collect();
    let current: Rational = match own {
        OwnBid::Pure(k) => utils[k].clone(),
        OwnBid::Mixed(w) => w.iter().zip(&utils).filter(|(w, _)| !w.is_zero()).map(|(w, u)| w * u).sum(),
    };
    let mut clean = true;
    for (b, u) in utils.iter().enumerate() {
        let gain = u - &current;
        if gain > report.worst_gain {
            report.worst_gain = gain.clone();
        }
        if gain > report.eps {
            report.violations.push(Deviation { bidder, value: value.clone(), bid: b, gain });
            clean = false;
            if stop {
                return false;
            }
        }
    }
    clean
}

fn verify_dfpa_impl<S: DiscreteStrategy>(inst: &Dfpa, profile: &[S], eps: &Rational, stop: bool) -> Result<VerifyReport, Error> {
    let mut report = VerifyReport::new(eps);
    for i in 0..inst.prior.n() {
        for v in 0..inst.prior.value_space(i).len() {
            if inst.prior.marginal_at(i, v).is_zero() {
                continue;
            }
            let h = win_probs_dfpa(inst, i, v, profile, Normalization::Interim)?;
            if !assess(&mut report, i, &inst.prior.value_space(i)[v], &h, profile[i].own_bid(v), &inst.bids, stop) {
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Pure or mixed profile on an explicit discrete instance.
pub fn verify_dfpa<S: DiscreteStrategy>(inst: &Dfpa, profile: &[S], eps: &Rational) -> Result<VerifyReport, Error> {
    verify_dfpa_impl(inst, profile, eps, false)
}

/// Stops at the first violation; `worst_gain` is then only a lower bound.
pub fn is_equilibrium_dfpa<S: DiscreteStrategy>(inst: &Dfpa, profile: &[S], eps: &Rational) -> Result<bool, Error> {
    Ok(verify_dfpa_impl(inst, profile, eps, true)?.passed())
}

fn verify_dfpa_sym_impl<S: DiscreteStrategy>(inst: &DfpaSym, groups: &[S], eps: &Rational, stop: bool) -> Result<VerifyReport, Error> {
    let mut report = VerifyReport::new(eps);
    for g in 0..inst.prior.group_count() {
        let i = inst.prior.group_start(g);
        let marginal = inst.prior.marginal(g);
        for v in 0..marginal.len() {
            if marginal[v].is_zero() {
                continue;
            }
            let h = win_probs_dfpa_sym(inst, i, v, groups, Normalization::Interim)?;
            if !assess(&mut report, i, &inst.prior.value_space(g)[v], &h, groups[g].own_bid(v), &inst.bids, stop) {
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Symmetric profile (one strategy per group). Gains are reported for the first bidder of each group.
pub fn verify_dfpa_sym<S: DiscreteStrategy>(inst: &DfpaSym, groups: &[S], eps: &Rational) -> Result<VerifyReport, Error> {
    verify_dfpa_sym_impl(inst, groups, eps, false)
}

pub fn is_equilibrium_dfpa_sym<S: DiscreteStrategy>(inst: &DfpaSym, groups: &[S], eps: &Rational) -> Result<bool, Error> {
    Ok(verify_dfpa_sym_impl(inst, groups, eps, true)?.passed())
}

/// Checks one bidder of a continuous instance cell by cell.
///
/// Winning probabilities are constant on each cell between the box cuts of the
/// bidder's axis and its own thresholds, and the bid is constant too, so the
/// deviation gain is affine in the value; its supremum over the cell is taken
/// at the two ends.
fn assess_cells(
    report: &mut VerifyReport,
    bidder: usize,
    mut cuts: Vec<Rational>,
    own: &JumpStrategy,
    bids: &BidSpace,
    stop: bool,
    win_at: &mut dyn FnMut(&Rational) -> Option<Vec<Rational>>,
) -> bool {
    cuts.extend(own.thresholds().iter().cloned());
    cuts.sort();
    cuts.dedup();
    for (lo, hi, mid) in cells(&cuts) {
        let Some(h) = win_at(&mid) else { continue };
        let k = own.bid_at(&mid);
        for x in [&lo, &hi] {
            if !assess(report, bidder, x, &h, OwnBid::Pure(k), bids, stop) {
                return false;
            }
        }
    }
    true
}

fn verify_box_impl(inst: &CfpaBox, profile: &[JumpStrategy], grouped: bool, eps: &Rational, stop: bool) -> Result<VerifyReport, Error> {
    let mut report = VerifyReport::new(eps);
    let expanded;
    let density = if grouped || matches!(inst.density.symmetry(), Symmetry::None) {
        &inst.density
    } else {
        expanded = inst.density.expand();
        &expanded
    };
    let expected = if grouped { density.slot_count() } else { density.n() };
    if profile.len() != expected {
        return Err(Error::Profile(alloc::format!("{} strategies supplied, expected {expected}", profile.len())));
    }
    let bidders: Vec<usize> = if grouped {
        (0..density.n()).filter(|&i| i == 0 || density.slot_of(i) != density.slot_of(i - 1)).collect()
    } else {
        (0..density.n()).collect()
    };
    for i in bidders {
        let own = &profile[if grouped { density.slot_of(i) } else { i }];
        let mut win_at = |x: &Rational| {
            let pieces = density.pieces(i, x);
            let f: Rational = pieces.iter().map(|p| p.mass.clone()).sum();
            if f.is_zero() {
                return None;
            }
            Some(raw_from_pieces(&pieces, profile, inst.bids.len()).into_iter().map(|y| y / &f).collect())
        };
        if !assess_cells(&mut report, i, density.axis_breakpoints(i), own, &inst.bids, stop, &mut win_at) {
            break;
        }
    }
    Ok(report)
}

/// Per-bidder step-function profile on a box instance.
pub fn verify_box(inst: &CfpaBox, profile: &[JumpStrategy], eps: &Rational) -> Result<VerifyReport, Error> {
    verify_box_impl(inst, profile, false, eps, false)
}

pub fn is_equilibrium_box(inst: &CfpaBox, profile: &[JumpStrategy], eps: &Rational) -> Result<bool, Error> {
    Ok(verify_box_impl(inst, profile, false, eps, true)?.passed())
}

/// One step function per group (per bidder when the density has no symmetry).
pub fn verify_box_symmetric(inst: &CfpaBox, groups: &[JumpStrategy], eps: &Rational) -> Result<VerifyReport, Error> {
    verify_box_impl(inst, groups, true, eps, false)
}

pub fn is_equilibrium_box_symmetric(inst: &CfpaBox, groups: &[JumpStrategy], eps: &Rational) -> Result<bool, Error> {
    Ok(verify_box_impl(inst, groups, true, eps, true)?.passed())
}

/// Step-function profile on an i.i.d. instance: one shared strategy or one per bidder.
pub fn verify_iid(inst: &CfpaIid, profile: &[JumpStrategy], eps: &Rational) -> Result<VerifyReport, Error> {
    let mut report = VerifyReport::new(eps);
    let bidders = if profile.len() == 1 { 1 } else { inst.n };
    for i in 0..bidders {
        let own = &profile[if profile.len() == 1 { 0 } else { i }];
        let probe = inst.marginal.support_left();
        let h = win_probs_iid(inst, i, &probe, profile, Normalization::Interim)?;
        let mut win_at = |x: &Rational| iid_in_support(&inst.marginal, x).then(|| h.clone());
        assess_cells(&mut report, i, inst.marginal.breakpoints().to_vec(), own, &inst.bids, false, &mut win_at);
    }
    Ok(report)
}

/// Dispatches on instance and profile kind. Profiles for symmetric instances
/// (and one-strategy profiles for i.i.d. instances) hold one strategy per group.
pub fn verify(inst: &Instance, profile: &Profile, eps: &Rational) -> Result<VerifyReport, Error> {
    let mismatch = || Error::Profile(alloc::string::String::from("strategy kind does not fit the instance"));
    match (inst, profile) {
        (Instance::Dfpa(d), Profile::Pure(p)) => verify_dfpa(d, p, eps),
        (Instance::Dfpa(d), Profile::Mixed(p)) => verify_dfpa(d, p, eps),
        (Instance::DfpaSym(d), Profile::Pure(p)) => verify_dfpa_sym(d, p, eps),
        (Instance::DfpaSym(d), Profile::Mixed(p)) => verify_dfpa_sym(d, p, eps),
        (Instance::CfpaBox(c), Profile::Jump(p)) => {
            if p.len() == c.density.n() {
                verify_box(c, p, eps)
            } else {
                verify_box_symmetric(c, p, eps)
            }
        }
        (Instance::CfpaIid(c), Profile::Jump(p)) => verify_iid(c, p, eps),
        _ => Err(mismatch()),
    }
}

/// Winning probability of every bid for bidder `i` at `value`, for any instance and profile kind.
pub fn win_probs(inst: &Instance, profile: &Profile, i: usize, value: &Rational, norm: Normalization) -> Result<Vec<Rational>, Error> {
    let mismatch = || Error::Profile(alloc::string::String::from("strategy kind does not fit the instance"));
    let outside = || Error::OutsideSupport { bidder: i, value: alloc::format!("{value}") };
    match inst {
        Instance::Dfpa(d) => {
            if i >= d.prior.n() {
                return Err(Error::BidderOutOfRange(i));
            }
            let v = d.prior.value_index(i, value).ok_or_else(outside)?;
            match profile {
                Profile::Pure(p) => win_probs_dfpa(d, i, v, p, norm),
                Profile::Mixed(p) => win_probs_dfpa(d, i, v, p, norm),
                Profile::Jump(_) => Err(mismatch()),
            }
        }
        Instance::DfpaSym(d) => {
            let g = d.prior.group_of(i)?;
            let v = crate::model::index_of(d.prior.value_space(g), value).ok_or_else(outside)?;
            match profile {
                Profile::Pure(p) => win_probs_dfpa_sym(d, i, v, p, norm),
                Profile::Mixed(p) => win_probs_dfpa_sym(d, i, v, p, norm),
                Profile::Jump(_) => Err(mismatch()),
            }
        }
        Instance::CfpaBox(c) => match profile {
            Profile::Jump(p) if p.len() == c.density.n() => super::win_probs_box(c, i, value, p, norm),
            Profile::Jump(p) => super::win_probs_box_symmetric(c, i, value, p, norm),
            _ => Err(mismatch()),
        },
        Instance::CfpaIid(c) => match profile {
            Profile::Jump(p) => win_probs_iid(c, i, value, p, norm),
            _ => Err(mismatch()),
        },
    }
}
