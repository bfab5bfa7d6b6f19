use alloc::format;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::model::{
    BidSpace, BoxDensity, CfpaBox, Dfpa, DfpaSym, Interval, JumpStrategy, MixedStrategy, PureStrategy, Symmetry,
    WeightedBox,
};
use crate::rational::{factorial, int, overlap, Rational};

/// A discrete instance spread onto small cubes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub instance: CfpaBox,
    /// Cube side actually used.
    pub delta: Rational,
    /// Values were scaled by `1 - rescale` to make room below 1; zero when not needed.
    pub rescale: Rational,
    /// Original values per strategy slot (bidder, or group for symmetric input).
    pub values: Vec<Vec<Rational>>,
}

impl Lift {
    /// Left end of the cube standing for value `values[slot][k]`.
    pub fn cube_start(&self, slot: usize, k: usize) -> Rational {
        (Rational::one() - &self.rescale) * &self.values[slot][k]
    }

    pub fn cube(&self, slot: usize, k: usize) -> Interval {
        let lo = self.cube_start(slot, k);
        let hi = &lo + &self.delta;
        Interval::new(lo, hi)
    }
}

fn min_gap(points: &mut Vec<Rational>) -> Option<Rational> {
    points.sort();
    points.dedup();
    points.windows(2).map(|w| &w[1] - &w[0]).min()
}

/// Picks the rescale factor and a cube side no larger than `requested`.
fn plan(values: &[Vec<Rational>], bids: &BidSpace, requested: &Rational) -> Result<(Rational, Rational), Error> {
    if !requested.is_positive() {
        return Err(Error::Argument(format!("δ must be positive, got {requested}")));
    }
    let mut all: Vec<Rational> = values.iter().flatten().cloned().chain(bids.bids().iter().cloned()).collect();
    let one = Rational::one();
    let rescale = if values.iter().flatten().any(|v| v.is_one()) {
        let g = min_gap(&mut all).unwrap_or_else(|| one.clone());
        g / int(4)
    } else {
        Rational::zero()
    };
    let mut scaled: Vec<Rational> = values.iter().flatten().map(|v| (&one - &rescale) * v).collect();
    let top = scaled.iter().max().cloned().unwrap_or_else(Rational::zero);
    scaled.extend(bids.bids().iter().cloned());
    let mut bound = &one - top;
    if let Some(g) = min_gap(&mut scaled) {
        bound = bound.min(g);
    }
    let delta = if *requested < bound { requested.clone() } else { bound / int(2) };
    Ok((rescale, delta))
}

/// Replaces each support point by a cube of side δ carrying the same mass.
/// δ is shrunk automatically when it would let cubes straddle a bid or
/// another value, and values are scaled down slightly when 1 is a value.
pub fn lift_dfpa_to_cfpa(dfpa: &Dfpa, delta: &Rational) -> Result<Lift, Error> {
    let values: Vec<Vec<Rational>> = dfpa.prior.value_spaces().to_vec();
    let (rescale, delta) = plan(&values, &dfpa.bids, delta)?;
    let n = dfpa.prior.n();
    let vol = num_traits::pow(delta.clone(), n);
    let mut lift = Lift { instance: CfpaBox { density: BoxDensity::uniform(n), bids: dfpa.bids.clone() }, delta, rescale, values };
    let boxes = dfpa
        .prior
        .points()
        .iter()
        .map(|(idx, mass)| WeightedBox {
            sides: idx.iter().enumerate().map(|(i, &k)| lift.cube(i, k)).collect(),
            weight: mass / &vol,
        })
        .collect();
    lift.instance.density = BoxDensity::new(n, boxes, Symmetry::None)?;
    Ok(lift)
}

/// Symmetric variant: only canonical cubes are listed and group symmetry is kept.
pub fn lift_dfpa_sym_to_cfpa(dfpa: &DfpaSym, delta: &Rational) -> Result<Lift, Error> {
    let prior = &dfpa.prior;
    let values: Vec<Vec<Rational>> = prior.value_spaces().to_vec();
    let (rescale, delta) = plan(&values, &dfpa.bids, delta)?;
    let n = prior.n();
    let sizes = prior.group_sizes().to_vec();
    let perms: Rational = Rational::from_integer(sizes.iter().map(|&s| factorial(s)).product());
    let vol = num_traits::pow(delta.clone(), n);
    let mut lift = Lift { instance: CfpaBox { density: BoxDensity::uniform(n), bids: dfpa.bids.clone() }, delta, rescale, values };
    let mut boxes = Vec::new();
    for ((idx, p), m) in prior.reps().iter().zip(prior.multiplicities()) {
        let mut sides = Vec::with_capacity(n);
        for (g, &s) in sizes.iter().enumerate() {
            let start = prior.group_start(g);
            for &k in &idx[start..start + s] {
                sides.push(lift.cube(g, k));
            }
        }
        let weight = p * Rational::from_integer(m.clone()) / (&vol * &perms);
        boxes.push(WeightedBox { sides, weight });
    }
    lift.instance.density = BoxDensity::new(n, boxes, Symmetry::Groups(sizes))?;
    Ok(lift)
}

/// Plays β(v) on the whole cube of v. The discrete strategy must be monotone
/// and bid no more than the left end of each cube (after rescaling).
pub fn lift_pure_strategy(lift: &Lift, slot: usize, pure: &PureStrategy) -> Result<JumpStrategy, Error> {
    if !pure.is_monotone() {
        return Err(Error::Profile(format!("strategy for slot {slot} is not monotone")));
    }
    let bids = &lift.instance.bids;
    if let Some(j) = (0..pure.bids.len()).find(|&j| *bids.get(pure.bids[j]) > lift.cube_start(slot, j)) {
        return Err(Error::Profile(format!(
            "slot {slot} bids {} above its lifted cube starting at {}",
            bids.get(pure.bids[j]),
            lift.cube_start(slot, j)
        )));
    }
    let m = bids.len();
    let mut thresholds = Vec::with_capacity(m + 1);
    thresholds.push(Rational::zero());
    for k in 1..m {
        let t = match pure.bids.iter().position(|&b| b >= k) {
            Some(j) => lift.cube_start(slot, j),
            None => Rational::one(),
        };
        thresholds.push(t);
    }
    thresholds.push(Rational::one());
    JumpStrategy::new(thresholds, bids)
}

/// Reads each cube's bid distribution off a jump profile on the lift.
pub fn project_strategy(lift: &Lift, profile: &[JumpStrategy]) -> Result<Vec<MixedStrategy>, Error> {
    if profile.len() != lift.values.len() {
        return Err(Error::Profile(format!("{} strategies for {} slots", profile.len(), lift.values.len())));
    }
    let bids = &lift.instance.bids;
    profile
        .iter()
        .enumerate()
        .map(|(slot, s)| {
            let rows = (0..lift.values[slot].len())
                .map(|k| {
                    let c = lift.cube(slot, k);
                    (0..bids.len())
                        .map(|b| {
                            let p = s.preimage(b);
                            overlap(&c.lo, &c.hi, &p.lo, &p.hi) / &lift.delta
                        })
                        .collect()
                })
                .collect();
            MixedStrategy::new(rows, &lift.values[slot], bids)
        })
        .collect()
}
