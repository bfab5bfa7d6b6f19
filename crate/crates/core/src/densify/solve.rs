use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::beta::{all_cuts, CanonicalBeta};
use crate::engine::{verify_box, verify_box_symmetric, verify_iid};
use crate::error::Error;
use crate::model::{BidSpace, BoxDensity, CfpaBox, CfpaIid, Instance, JumpStrategy, Symmetry};
use crate::rational::{int, Rational};

/// Constants that drive the approximation guarantee.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsProfile {
    /// Smallest positive density (joint for box densities, marginal for i.i.d.).
    pub phi_lo: Rational,
    pub phi_hi: Rational,
    /// Largest gap between consecutive points of the bid space with 0 and 1 added.
    pub delta: Rational,
    pub gamma: Rational,
    /// Upper bound on the slope of β.
    pub lipschitz: Rational,
    pub support_left: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensifyCertificate {
    pub strategy: JumpStrategy,
    pub bids: BidSpace,
    pub eps_inner: Rational,
    pub bounds: BoundsProfile,
    /// Bids whose threshold came from inverting β.
    pub inverted: Vec<usize>,
    /// `2γ(δ + 2ε)`.
    pub claimed: Rational,
    /// Largest deviation gain found by exact verification.
    pub measured: Rational,
}

impl DensifyCertificate {
    pub fn holds(&self) -> bool {
        self.measured <= self.claimed
    }
}

pub fn bid_denseness(bids: &BidSpace) -> Rational {
    let mut pts: Vec<Rational> = bids.bids().to_vec();
    pts.push(int(0));
    pts.push(int(1));
    pts.sort();
    pts.dedup();
    pts.windows(2).map(|w| &w[1] - &w[0]).max().unwrap_or_else(Rational::one)
}

fn odometer_midpoints(mids: &[Rational], n: usize, visit: &mut dyn FnMut(&[Rational]) -> bool) {
    let mut idx = vec![0usize; n];
    loop {
        let point: Vec<Rational> = idx.iter().map(|&k| mids[k].clone()).collect();
        if !visit(&point) {
            return;
        }
        let mut pos = 0;
        while pos < n {
            idx[pos] += 1;
            if idx[pos] < mids.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == n {
            return;
        }
    }
}

/// Checks symmetry and full support on `[v̲, 1]^n` and returns the joint density range there.
fn box_density_range(density: &BoxDensity, left: &Rational) -> Result<(Rational, Rational), Error> {
    let n = density.n();
    let flat = density.expand();
    let cuts: Vec<Rational> = all_cuts(density).into_iter().filter(|c| c >= left).collect();
    let mids: Vec<Rational> = cuts.windows(2).map(|w| (&w[0] + &w[1]) / int(2)).collect();
    let at = |p: &[Rational]| -> Rational {
        flat.boxes()
            .iter()
            .filter(|b| b.sides.iter().zip(p).all(|(s, x)| s.contains(x)))
            .map(|b| b.weight.clone())
            .sum()
    };
    let check_symmetry = matches!(density.symmetry(), Symmetry::None) && n > 1;
    if let Symmetry::Groups(g) = density.symmetry() {
        if g.len() != 1 {
            return Err(Error::Unsupported("the canonical strategy needs a single symmetry group".into()));
        }
    }
    let mut lo: Option<Rational> = None;
    let mut hi = Rational::zero();
    let mut failure = None;
    odometer_midpoints(&mids, n, &mut |p| {
        let f = at(p);
        if check_symmetry {
            let mut sorted = p.to_vec();
            sorted.sort();
            if at(&sorted) != f {
                failure = Some(Error::Unsupported("density is not symmetric across bidders".into()));
                return false;
            }
        }
        if !f.is_positive() {
            failure = Some(Error::Unsupported(format!(
                "density vanishes near {:?} inside [v̲,1]^n; the canonical strategy needs full support (open problem)",
                p.iter().map(|x| format!("{x}")).collect::<Vec<_>>()
            )));
            return false;
        }
        if lo.as_ref().is_none_or(|l| f < *l) {
            lo = Some(f.clone());
        }
        if f > hi {
            hi = f;
        }
        true
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((lo.expect("at least one cell"), hi))
}

fn iid_bounds(inst: &CfpaIid) -> BoundsProfile {
    let a = inst.marginal.breakpoints();
    let positive: Vec<(Rational, &Rational)> = a
        .windows(2)
        .zip(inst.marginal.densities())
        .filter(|(_, p)| p.is_positive())
        .map(|(w, p)| (&w[1] - &w[0], p))
        .collect();
    let len_max = positive.iter().map(|(l, _)| l).max().cloned().unwrap_or_else(Rational::one);
    let len_min = positive.iter().map(|(l, _)| l).min().cloned().unwrap_or_else(Rational::one);
    let phi_hi = positive.iter().map(|(_, p)| *p).max().cloned().unwrap_or_else(Rational::one);
    let phi_lo = positive.iter().map(|(_, p)| *p).min().cloned().unwrap_or_else(Rational::one);
    let n = int(inst.n as i64);
    BoundsProfile {
        lipschitz: &n * (len_max / len_min) * (&phi_hi / &phi_lo),
        gamma: &n * &phi_hi,
        phi_lo,
        phi_hi,
        delta: bid_denseness(&inst.bids),
        support_left: inst.marginal.support_left(),
    }
}

fn box_bounds(inst: &CfpaBox) -> Result<BoundsProfile, Error> {
    let left = inst.density.marginal(0)?.support_left();
    let (phi_lo, phi_hi) = box_density_range(&inst.density, &left)?;
    let opp = int(inst.density.n() as i64 - 1);
    let ratio = &phi_hi / &phi_lo;
    Ok(BoundsProfile {
        lipschitz: &opp * &ratio,
        gamma: int(2) * &opp * &ratio * &ratio,
        phi_lo,
        phi_hi,
        delta: bid_denseness(&inst.bids),
        support_left: left,
    })
}

/// Density, denseness and slope constants for an i.i.d. or symmetric box instance.
pub fn bounds_profile(inst: &Instance) -> Result<BoundsProfile, Error> {
    match inst {
        Instance::CfpaIid(i) => Ok(iid_bounds(i)),
        Instance::CfpaBox(b) => box_bounds(b),
        _ => Err(Error::Unsupported("densification needs a continuous instance".into())),
    }
}

pub fn lipschitz_bound(inst: &Instance) -> Result<Rational, Error> {
    Ok(bounds_profile(inst)?.lipschitz)
}

pub fn canonical_beta(inst: &Instance) -> Result<CanonicalBeta, Error> {
    match inst {
        Instance::CfpaIid(i) => CanonicalBeta::iid(&i.marginal, i.n),
        Instance::CfpaBox(b) => {
            box_bounds(b)?;
            CanonicalBeta::sapv(&b.density)
        }
        _ => Err(Error::Unsupported("densification needs a continuous instance".into())),
    }
}

/// Smallest `k` with `2^k >= r` (0 when `r <= 1`).
fn log2_ceil(r: &Rational) -> u64 {
    if *r <= Rational::one() {
        return 0;
    }
    let c: BigInt = r.ceil().to_integer();
    (c - 1u32).bits()
}

/// Bisection for a value `s` with `b <= β(s)` and `β(s) - b <= 2ε`.
pub fn approx_invert(beta: &CanonicalBeta, lipschitz: &Rational, b: &Rational, eps: &Rational) -> Result<Rational, Error> {
    if !eps.is_positive() {
        return Err(Error::Argument("ε must be positive".into()));
    }
    let mut lo = beta.support_left().clone();
    let mut hi = Rational::one();
    let mut beta_lo = beta.eval(&lo)?;
    let mut beta_hi = beta.eval(&hi)?;
    if *b < beta_lo || *b > beta_hi {
        return Err(Error::Argument(format!("bid {b} outside [{beta_lo}, {beta_hi}]")));
    }
    if *b == beta_lo {
        return Ok(lo);
    }
    let cap = log2_ceil(&(lipschitz * (&hi - &lo) / eps)) + 2;
    let mut steps = 0;
    while &beta_hi - &beta_lo > *eps && steps < cap {
        let mid = (&lo + &hi) / int(2);
        let bm = beta.eval(&mid)?;
        if bm < *b {
            lo = mid;
            beta_lo = bm;
        } else {
            hi = mid;
            beta_hi = bm;
        }
        steps += 1;
    }
    Ok(hi)
}

/// Rounds the canonical strategy down onto the bid space and verifies the result.
pub fn densify_solve(inst: &Instance, eps: &Rational) -> Result<DensifyCertificate, Error> {
    let bounds = bounds_profile(inst)?;
    let beta = canonical_beta(inst)?;
    let bids = match inst {
        Instance::CfpaIid(i) => &i.bids,
        Instance::CfpaBox(b) => &b.bids,
        _ => unreachable!("checked by bounds_profile"),
    };
    let left = bounds.support_left.clone();
    let beta_left = beta.eval(&left)?;
    let beta_top = beta.eval(&Rational::one())?;
    let m = bids.len();
    let mut thresholds = vec![Rational::zero()];
    let mut inverted = Vec::new();
    for j in 1..m {
        let b = bids.get(j);
        let t = if *b <= beta_left {
            left.clone()
        } else if *b <= beta_top {
            inverted.push(j);
            approx_invert(&beta, &bounds.lipschitz, b, eps)?
        } else {
            Rational::one()
        };
        let prev = thresholds.last().expect("nonempty").clone();
        thresholds.push(t.max(prev));
    }
    thresholds.push(Rational::one());
    let strategy = JumpStrategy::new(thresholds, bids)?;
    let claimed = int(2) * &bounds.gamma * (&bounds.delta + int(2) * eps);
    let report = match inst {
        Instance::CfpaIid(i) => verify_iid(i, core::slice::from_ref(&strategy), &claimed)?,
        Instance::CfpaBox(b) => match b.density.symmetry() {
            Symmetry::Groups(_) => verify_box_symmetric(b, core::slice::from_ref(&strategy), &claimed)?,
            Symmetry::None => verify_box(b, &vec![strategy.clone(); b.density.n()], &claimed)?,
        },
        _ => unreachable!("checked by bounds_profile"),
    };
    Ok(DensifyCertificate { strategy, bids: bids.clone(), eps_inner: eps.clone(), bounds, inverted, claimed, measured: report.worst_gain })
}

impl DensifyCertificate {
    /// Bid value played at `v` by the rounded strategy.
    pub fn strategy_bid(&self, v: &Rational) -> Rational {
        let k = self.strategy.bid_at(v);
        self.bids.get(k).clone()
    }
}
