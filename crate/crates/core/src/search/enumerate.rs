use alloc::vec::Vec;
use num_traits::Zero;

use super::{budget_check, odometer, profile_hash, LogRecord, SearchConfig, SearchLog, SearchOutcome};
use crate::engine::{is_equilibrium_dfpa, is_equilibrium_dfpa_sym, verify_dfpa, verify_dfpa_sym, VerifyReport};
use crate::error::Error;
use crate::model::{BidSpace, Dfpa, DfpaSym, PureStrategy};
use crate::rational::Rational;

/// All value→bid maps passing the filters, in lexicographic order.
///
/// Values outside the marginal support are never queried; they copy the bid
/// of the nearest lower support value (0 if none), which keeps the map
/// monotone and non-overbidding.
pub fn pure_candidates(values: &[Rational], in_support: &[bool], bids: &BidSpace, cfg: &SearchConfig) -> Vec<PureStrategy> {
    fn rec(
        k: usize,
        values: &[Rational],
        in_support: &[bool],
        bids: &BidSpace,
        cfg: &SearchConfig,
        acc: &mut Vec<usize>,
        out: &mut Vec<PureStrategy>,
    ) {
        if k == values.len() {
            out.push(PureStrategy { bids: acc.clone() });
            return;
        }
        let prev = acc.last().copied().unwrap_or(0);
        if !in_support[k] {
            acc.push(prev);
            rec(k + 1, values, in_support, bids, cfg, acc, out);
            acc.pop();
            return;
        }
        let lo = if cfg.monotone_only { prev } else { 0 };
        let hi = if cfg.no_overbidding { bids.highest_at_most(&values[k]) } else { bids.len() - 1 };
        for b in lo..=hi {
            acc.push(b);
            rec(k + 1, values, in_support, bids, cfg, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, values, in_support, bids, cfg, &mut Vec::new(), &mut out);
    out
}

fn candidate_count(values: &[Rational], in_support: &[bool], bids: &BidSpace, cfg: &SearchConfig) -> u128 {
    // ways[b] = number of partial maps whose last bid is b
    let m = bids.len();
    let mut ways = alloc::vec![0u128; m];
    ways[0] = 1;
    for (k, v) in values.iter().enumerate() {
        if !in_support[k] {
            continue;
        }
        let mut next = alloc::vec![0u128; m];
        let hi = if cfg.no_overbidding { bids.highest_at_most(v) } else { m - 1 };
        let total: u128 = ways.iter().fold(0u128, |a, &w| a.saturating_add(w));
        let mut prefix = 0u128;
        for b in 0..m {
            prefix = prefix.saturating_add(ways[b]);
            if b <= hi {
                next[b] = if cfg.monotone_only { prefix } else { total };
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |a, &w| a.saturating_add(w))
}

fn pure_hash(profile: &[&PureStrategy]) -> u64 {
    profile_hash(profile.iter().flat_map(|s| s.bids.iter().flat_map(|b| (*b as u32).to_le_bytes()).chain([0xff])))
}

fn search<F, G>(
    lists: Vec<Vec<PureStrategy>>,
    mut check: F,
    mut full: G,
    mut log: SearchLog<'_>,
) -> Result<SearchOutcome<Vec<PureStrategy>>, Error>
where
    F: FnMut(&[PureStrategy]) -> Result<bool, Error>,
    G: FnMut(&[PureStrategy]) -> Result<VerifyReport, Error>,
{
    let mut checked = 0u64;
    let mut found = None;
    let mut failure = None;
    odometer(&lists, &mut |current| {
        let profile: Vec<PureStrategy> = current.iter().map(|s| (*s).clone()).collect();
        checked += 1;
        let outcome = match log.as_deref_mut() {
            Some(sink) => full(&profile).map(|r| {
                sink(&LogRecord { index: checked - 1, hash: pure_hash(current), passed: r.passed(), worst_gain: r.worst_gain.clone() });
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

/// First ε-PBNE in lexicographic order among the filtered pure profiles, or exhaustion.
pub fn enumerate_pure_equilibria(inst: &Dfpa, cfg: &SearchConfig, log: SearchLog<'_>) -> Result<SearchOutcome<Vec<PureStrategy>>, Error> {
    let prior = &inst.prior;
    let support: Vec<Vec<bool>> =
        (0..prior.n()).map(|i| prior.marginal(i).unwrap().iter().map(|f| !f.is_zero()).collect()).collect();
    let counts: Vec<u128> =
        (0..prior.n()).map(|i| candidate_count(prior.value_space(i), &support[i], &inst.bids, cfg)).collect();
    budget_check(&counts, cfg.budget)?;
    let lists = (0..prior.n()).map(|i| pure_candidates(prior.value_space(i), &support[i], &inst.bids, cfg)).collect();
    search(lists, |p| is_equilibrium_dfpa(inst, p, &cfg.eps), |p| verify_dfpa(inst, p, &cfg.eps), log)
}

/// Same search over symmetric profiles: one strategy per group.
pub fn enumerate_symmetric_pure(inst: &DfpaSym, cfg: &SearchConfig, log: SearchLog<'_>) -> Result<SearchOutcome<Vec<PureStrategy>>, Error> {
    let prior = &inst.prior;
    let support: Vec<Vec<bool>> =
        (0..prior.group_count()).map(|g| prior.marginal(g).iter().map(|f| !f.is_zero()).collect()).collect();
    let counts: Vec<u128> = (0..prior.group_count())
        .map(|g| candidate_count(prior.value_space(g), &support[g], &inst.bids, cfg))
        .collect();
    budget_check(&counts, cfg.budget)?;
    let lists = (0..prior.group_count())
        .map(|g| pure_candidates(prior.value_space(g), &support[g], &inst.bids, cfg))
        .collect();
    search(lists, |p| is_equilibrium_dfpa_sym(inst, p, &cfg.eps), |p| verify_dfpa_sym(inst, p, &cfg.eps), log)
}
