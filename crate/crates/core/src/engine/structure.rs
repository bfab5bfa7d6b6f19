//! Affiliation and monotonicity checks.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::Zero;

use crate::model::{cells, BoxDensity, DiscretePrior, Instance, MixedStrategy, Profile, PureStrategy};
use crate::rational::Rational;

/// Two value vectors whose join and meet carry too little density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffiliationWitness {
    pub v: Vec<Rational>,
    pub w: Vec<Rational>,
}

/// Checks `f(v ∨ w) f(v ∧ w) >= f(v) f(w)` over all pairs of support points.
pub fn affiliation_violation_discrete(prior: &DiscretePrior) -> Option<AffiliationWitness> {
    let mass = prior.mass_map();
    let points = prior.points();
    let zero = Rational::zero();
    let to_values = |idx: &[usize]| idx.iter().enumerate().map(|(i, &k)| prior.value_space(i)[k].clone()).collect();
    for (a, (v, fv)) in points.iter().enumerate() {
        for (w, fw) in &points[a + 1..] {
            let join: Vec<usize> = v.iter().zip(w).map(|(x, y)| *x.max(y)).collect();
            let meet: Vec<usize> = v.iter().zip(w).map(|(x, y)| *x.min(y)).collect();
            let lhs = mass.get(&join).unwrap_or(&zero) * mass.get(&meet).unwrap_or(&zero);
            if lhs < fv * fw {
                return Some(AffiliationWitness { v: to_values(v), w: to_values(w) });
            }
        }
    }
    None
}

/// Same check for a box density, on the product grid of per-axis cells
/// (the density is constant on each grid cell).
pub fn affiliation_violation_boxes(density: &BoxDensity) -> Option<AffiliationWitness> {
    let explicit = density.expand();
    let n = explicit.n();
    let mids: Vec<Vec<Rational>> = (0..n)
        .map(|i| cells(&explicit.axis_breakpoints(i)).map(|(_, _, m)| m).collect())
        .collect();
    let mut grid: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    let mut idx = alloc::vec![0usize; n];
    loop {
        let point: Vec<Rational> = idx.iter().enumerate().map(|(i, &k)| mids[i][k].clone()).collect();
        let f = explicit.density_at(&point);
        if !f.is_zero() {
            grid.insert(idx.clone(), f);
        }
        let Some(pos) = (0..n).rev().find(|&i| idx[i] + 1 < mids[i].len()) else { break };
        idx[pos] += 1;
        for k in &mut idx[pos + 1..] {
            *k = 0;
        }
    }
    let zero = Rational::zero();
    let cellsv: Vec<(&Vec<usize>, &Rational)> = grid.iter().collect();
    let to_values = |c: &[usize]| c.iter().enumerate().map(|(i, &k)| mids[i][k].clone()).collect();
    for (a, (v, fv)) in cellsv.iter().enumerate() {
        for (w, fw) in &cellsv[a + 1..] {
            let join: Vec<usize> = v.iter().zip(w.iter()).map(|(x, y)| *x.max(y)).collect();
            let meet: Vec<usize> = v.iter().zip(w.iter()).map(|(x, y)| *x.min(y)).collect();
            let lhs = grid.get(&join).unwrap_or(&zero) * grid.get(&meet).unwrap_or(&zero);
            if lhs < *fv * *fw {
                return Some(AffiliationWitness { v: to_values(v), w: to_values(w) });
            }
        }
    }
    None
}

/// `None` when the prior is affiliated. Product (i.i.d.) priors always are.
pub fn check_affiliation(inst: &Instance) -> Option<AffiliationWitness> {
    match inst {
        Instance::Dfpa(d) => affiliation_violation_discrete(&d.prior),
        Instance::DfpaSym(d) => affiliation_violation_discrete(&d.prior.expand()),
        Instance::CfpaBox(c) => affiliation_violation_boxes(&c.density),
        Instance::CfpaIid(_) => None,
    }
}

pub fn check_monotone_pure(s: &PureStrategy) -> bool {
    s.is_monotone()
}

pub fn check_monotone_mixed(s: &MixedStrategy) -> bool {
    s.is_monotone()
}

/// Every strategy of the profile is monotone (step functions always are).
pub fn check_monotone(profile: &Profile) -> bool {
    match profile {
        Profile::Pure(p) => p.iter().all(PureStrategy::is_monotone),
        Profile::Mixed(p) => p.iter().all(MixedStrategy::is_monotone),
        Profile::Jump(_) => true,
    }
}
