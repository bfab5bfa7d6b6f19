use alloc::vec::Vec;

use super::{budget_check, odometer, profile_hash, LogRecord, SearchConfig, SearchLog, SearchOutcome};
use crate::engine::{is_equilibrium_box, is_equilibrium_box_symmetric, verify_box, verify_box_symmetric};
use crate::error::Error;
use crate::model::{BidSpace, BoxDensity, CfpaBox, JumpStrategy, Symmetry};
use crate::rational::{format_rational, in_unit_interval, rat, Rational};

/// Box endpoints of every axis together with the mesh `{0, 1/mesh, ..., 1}`.
pub fn default_grid(density: &BoxDensity, mesh: i64) -> Vec<Rational> {
    let mut grid: Vec<Rational> = (0..=mesh.max(1)).map(|k| rat(k, mesh.max(1))).collect();
    for i in 0..density.n() {
        grid.extend(density.axis_breakpoints(i));
    }
    grid.sort();
    grid.dedup();
    grid
}

/// Every step function whose inner thresholds lie on `grid` (nondecreasing,
/// never below their bid), in lexicographic order.
pub fn jump_candidates(grid: &[Rational], bids: &BidSpace) -> Vec<JumpStrategy> {
    let m = bids.len();
    let mut out = Vec::new();
    let mut acc = alloc::vec![rat(0, 1)];
    fn rec(k: usize, m: usize, grid: &[Rational], bids: &BidSpace, acc: &mut Vec<Rational>, out: &mut Vec<JumpStrategy>) {
        if k == m {
            acc.push(rat(1, 1));
            out.push(JumpStrategy::new(acc.clone(), bids).expect("grid candidates are valid"));
            acc.pop();
            return;
        }
        let floor = acc.last().unwrap().clone();
        for t in grid.iter().filter(|t| **t >= floor && *t >= bids.get(k)) {
            acc.push(t.clone());
            rec(k + 1, m, grid, bids, acc, out);
            acc.pop();
        }
    }
    rec(1, m, grid, bids, &mut acc, &mut out);
    out
}

fn jump_count(grid: &[Rational], bids: &BidSpace) -> u128 {
    // ways[g] = number of partial threshold sequences ending at grid[g]
    let mut ways: Vec<u128> = grid.iter().map(|t| u128::from(t.numer() == &0.into())).collect();
    for k in 1..bids.len() {
        let mut prefix = 0u128;
        ways = grid
            .iter()
            .zip(&ways)
            .map(|(t, w)| {
                prefix = prefix.saturating_add(*w);
                if t >= bids.get(k) { prefix } else { 0 }
            })
            .collect();
    }
    ways.iter().fold(0u128, |a, &w| a.saturating_add(w))
}

/// First monotone ε-PBNE with thresholds on `grid`, or exhaustion.
///
/// With `cfg.symmetric`, one step function is shared per group (all bidders
/// when the density has no symmetry).
pub fn jump_grid_search(
    inst: &CfpaBox,
    grid: &[Rational],
    cfg: &SearchConfig,
    mut log: SearchLog<'_>,
) -> Result<SearchOutcome<Vec<JumpStrategy>>, Error> {
    if let Some(t) = grid.iter().find(|t| !in_unit_interval(t)) {
        return Err(Error::Argument(alloc::format!("grid point {} outside [0,1]", format_rational(t))));
    }
    let mut grid = grid.to_vec();
    grid.push(rat(0, 1));
    grid.push(rat(1, 1));
    grid.sort();
    grid.dedup();
    let n = inst.density.n();
    let grouped = matches!(inst.density.symmetry(), Symmetry::Groups(_));
    let slots = match (cfg.symmetric, grouped) {
        (true, true) => inst.density.slot_count(),
        (true, false) => 1,
        (false, _) => n,
    };
    budget_check(&alloc::vec![jump_count(&grid, &inst.bids); slots], cfg.budget)?;
    let candidates = jump_candidates(&grid, &inst.bids);
    let lists: Vec<Vec<JumpStrategy>> = alloc::vec![candidates; slots];
    let to_profile = |current: &[&JumpStrategy]| -> Vec<JumpStrategy> {
        if cfg.symmetric && !grouped {
            alloc::vec![current[0].clone(); n]
        } else {
            current.iter().map(|s| (*s).clone()).collect()
        }
    };
    let per_group = cfg.symmetric && grouped;
    let check = |p: &[JumpStrategy]| if per_group { is_equilibrium_box_symmetric(inst, p, &cfg.eps) } else { is_equilibrium_box(inst, p, &cfg.eps) };
    let full = |p: &[JumpStrategy]| if per_group { verify_box_symmetric(inst, p, &cfg.eps) } else { verify_box(inst, p, &cfg.eps) };
    let mut checked = 0u64;
    let mut found = None;
    let mut failure = None;
    odometer(&lists, &mut |current| {
        let profile = to_profile(current);
        checked += 1;
        let outcome = match log.as_deref_mut() {
            Some(sink) => full(&profile).map(|r| {
                let bytes = current
                    .iter()
                    .flat_map(|s| s.thresholds().iter().flat_map(|t| format_rational(t).into_bytes().into_iter().chain(*b",")))
                    .collect::<Vec<u8>>();
                sink(&LogRecord { index: checked - 1, hash: profile_hash(bytes), passed: r.passed(), worst_gain: r.worst_gain.clone() });
                r.passed()
            }),
            None => check(&profile),
        };
        match outcome {
            Ok(true) => {
                found = Some(profile);
                true
            }
            Ok(false) => false,
            Err(e) => {
                failure = Some(e);
                true
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(match found {
        Some(profile) => {
            let report = full(&profile)?;
            SearchOutcome::Found { profile, report, checked }
        }
        None => SearchOutcome::Exhausted { checked },
    })
}
