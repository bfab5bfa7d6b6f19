//! Model, engine, search, reduction and densification invariants on random inputs.

mod common;

use fpa_core::densify::{canonical_beta, densify_solve};
use fpa_core::engine::{verify_dfpa, win_probs_box, win_probs_dfpa, Normalization};
use fpa_core::model::{BidSpace, CfpaIid, Dfpa, IidMarginal, Instance, JumpStrategy, PureStrategy};
use fpa_core::rational::{int, rat};
use fpa_core::reduce::{
    build_auction, encode_profile, extract_assignment, lift_dfpa_to_cfpa, lift_pure_strategy, Deltas, SatFormula,
};
use fpa_core::search::{enumerate_pure_equilibria, jump_candidates, SearchConfig};
use fpa_core::Rational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

/// Every value→bid map over `values` with bids in `0..m`, by plain counting.
fn all_maps(values: usize, m: usize) -> Vec<PureStrategy> {
    (0..m.pow(values as u32))
        .map(|mut code| {
            let mut bids = vec![0; values];
            for slot in bids.iter_mut().rev() {
                *slot = code % m;
                code /= m;
            }
            PureStrategy { bids }
        })
        .collect()
}

fn allowed(s: &PureStrategy, values: &[Rational], bids: &BidSpace, cfg: &SearchConfig) -> bool {
    (!cfg.monotone_only || s.is_monotone()) && (!cfg.no_overbidding || s.is_no_overbidding(values, bids))
}

fn random_formula(r: &mut rand_chacha::ChaCha8Rng) -> SatFormula {
    let vars = r.gen_range(2..=4);
    let mut left = vec![3usize; vars];
    let mut clauses = Vec::new();
    for _ in 0..r.gen_range(1..=3) {
        let width = r.gen_range(2..=3);
        let mut clause: Vec<i32> = Vec::new();
        for _ in 0..width {
            let free: Vec<usize> = (0..vars).filter(|&v| left[v] > 0 && !clause.iter().any(|l| l.unsigned_abs() as usize == v + 1)).collect();
            if free.is_empty() {
                break;
            }
            let v = free[r.gen_range(0..free.len())];
            left[v] -= 1;
            let lit = v as i32 + 1;
            clause.push(if r.gen_bool(0.5) { lit } else { -lit });
        }
        if clause.len() >= 2 {
            clauses.push(clause);
        }
    }
    SatFormula::new(vars, clauses).unwrap()
}

/// Expected total weight of the gadget points, counted per gadget.
fn expected_total(f: &SatFormula, d: &Deltas) -> Rational {
    let mut total = int(f.num_vars as i64) * (rat(3 * 33, 128) + int(9));
    for c in &f.clauses {
        let negated = c.iter().filter(|l| **l < 0).count() as i64;
        total += int(negated) * ((rat(33, 256) + int(3)) * &d.not + (rat(33, 256) + int(2)) * &d.proj);
        let or = rat(1, 128) + int(4);
        if c.len() == 3 {
            total += &or * &d.or1;
        }
        total += &or * &d.or2;
        total += rat(11, 4) * &d.out;
    }
    total
}

fn random_marginal(r: &mut rand_chacha::ChaCha8Rng) -> IidMarginal {
    let pieces = r.gen_range(1..=3);
    let mut cuts: Vec<i64> = (1..12).collect();
    let mut breaks = vec![0i64];
    for _ in 1..pieces {
        let k = cuts.remove(r.gen_range(0..cuts.len()));
        breaks.push(k);
    }
    breaks.push(12);
    breaks.sort();
    let weights: Vec<i64> = (0..pieces).map(|_| r.gen_range(1..=4)).collect();
    let mass: Rational = breaks.windows(2).zip(&weights).map(|(w, &c)| rat((w[1] - w[0]) * c, 12)).sum();
    IidMarginal::new(breaks.iter().map(|&b| rat(b, 12)).collect(), weights.iter().map(|&c| int(c) / &mass).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn marginals_and_conditionals_sum_to_one(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let inst = common::random_dfpa(&mut r, 3, 3, 3, 0.5);
        for i in 0..inst.prior.n() {
            let marginal = inst.prior.marginal(i).unwrap();
            prop_assert!(marginal.iter().sum::<Rational>().is_one());
            for k in 0..marginal.len() {
                if marginal[k].is_zero() { continue; }
                let cond = inst.prior.conditional(i, k).unwrap();
                prop_assert!(cond.iter().map(|c| &c.1).sum::<Rational>().is_one());
            }
        }
    }

    #[test]
    fn symmetric_expansion_keeps_group_marginals(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let inst = common::random_dfpa_sym(&mut r);
        let expanded = inst.prior.expand();
        prop_assert!(expanded.points().iter().map(|p| &p.1).sum::<Rational>().is_one());
        for i in 0..inst.prior.n() {
            let g = inst.prior.group_of(i).unwrap();
            prop_assert_eq!(expanded.marginal(i).unwrap().to_vec(), inst.prior.marginal(g));
        }
    }

    #[test]
    fn jump_candidates_are_monotone_without_overbidding(m in 1usize..4, mesh in 1i64..6) {
        let bids = if m == 1 { BidSpace::new(vec![int(0)]).unwrap() } else { BidSpace::grid(m as i64 - 1) };
        let grid: Vec<Rational> = (0..=mesh).map(|k| rat(k, mesh)).collect();
        for s in jump_candidates(&grid, &bids) {
            prop_assert!(JumpStrategy::new(s.thresholds().to_vec(), &bids).is_ok());
            let mut prev = 0;
            for k in 0..=4 * mesh {
                let x = rat(k, 4 * mesh);
                let b = s.bid_at(&x);
                prop_assert!(b >= prev);
                prop_assert!(bids.get(b) <= &x || b == 0);
                prev = b;
            }
        }
    }

    #[test]
    fn enumeration_matches_exhaustive_scan(seed in any::<u64>(), monotone_only: bool, no_overbidding: bool, k in 0i64..3) {
        let mut r = common::rng(seed);
        let inst = common::random_dfpa(&mut r, 2, 3, 2, 0.6);
        let cfg = SearchConfig { eps: rat(k, 8), monotone_only, no_overbidding, ..SearchConfig::default() };
        let out = enumerate_pure_equilibria(&inst, &cfg, None).unwrap();
        let n = inst.prior.n();
        let m = inst.bids.len();
        let lists: Vec<Vec<PureStrategy>> = (0..n)
            .map(|i| {
                let vs = inst.prior.value_space(i);
                all_maps(vs.len(), m).into_iter().filter(|s| allowed(s, vs, &inst.bids, &cfg)).collect()
            })
            .collect();
        let mut exists = false;
        let mut idx = vec![0usize; n];
        'scan: loop {
            if lists.iter().any(Vec::is_empty) { break; }
            let p: Vec<PureStrategy> = idx.iter().enumerate().map(|(i, &j)| lists[i][j].clone()).collect();
            if verify_dfpa(&inst, &p, &cfg.eps).unwrap().passed() {
                exists = true;
                break;
            }
            for i in (0..n).rev() {
                idx[i] += 1;
                if idx[i] < lists[i].len() { continue 'scan; }
                idx[i] = 0;
            }
            break;
        }
        prop_assert_eq!(out.profile().is_some(), exists);
        if let Some(p) = out.profile() {
            prop_assert!(verify_dfpa(&inst, p, &cfg.eps).unwrap().passed());
            for (i, s) in p.iter().enumerate() {
                prop_assert!(allowed(s, inst.prior.value_space(i), &inst.bids, &cfg));
            }
        }
    }

    #[test]
    fn lift_preserves_winning_probabilities(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let n = r.gen_range(2..=3);
        let inst: Dfpa = common::random_apv(&mut r, n, 2, 3);
        let lift = lift_dfpa_to_cfpa(&inst, &int(1)).unwrap();
        let pure: Vec<PureStrategy> = (0..n).map(|i| common::random_monotone(&mut r, inst.prior.value_space(i), &inst.bids)).collect();
        let mut jumps = Vec::new();
        for (i, p) in pure.iter().enumerate() {
            let fits = p.bids.iter().enumerate().all(|(k, &b)| inst.bids.get(b) <= &lift.cube_start(i, k));
            let lifted = lift_pure_strategy(&lift, i, p);
            prop_assert_eq!(lifted.is_ok(), fits);
            match lifted {
                Ok(s) => jumps.push(s),
                Err(_) => return Ok(()),
            }
        }
        for i in 0..n {
            for k in 0..inst.prior.value_space(i).len() {
                if inst.prior.marginal_at(i, k).is_zero() { continue; }
                let hd = win_probs_dfpa(&inst, i, k, &pure, Normalization::Interim).unwrap();
                let cube = lift.cube(i, k);
                for x in [cube.midpoint(), cube.hi.clone()] {
                    prop_assert_eq!(&hd, &win_probs_box(&lift.instance, i, &x, &jumps, Normalization::Interim).unwrap());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reduction_mass_and_round_trip(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let f = random_formula(&mut r);
        let (inst, map) = build_auction(&f, None).unwrap();
        prop_assert_eq!(&map.chain.total, &expected_total(&f, &map.chain.deltas));
        prop_assert!(inst.prior.points().iter().map(|p| &p.1).sum::<Rational>().is_one());
        let gadgets = 4 * f.num_vars + f.clauses.iter().map(|c| 2 * c.iter().filter(|l| **l < 0).count() + c.len() - 1 + 2).sum::<usize>();
        prop_assert_eq!(inst.prior.n(), gadgets);
        for code in 0..1u32 << f.num_vars {
            let a: Vec<bool> = (0..f.num_vars).map(|v| code >> v & 1 == 1).collect();
            let p = encode_profile(&a, &map).unwrap();
            prop_assert_eq!(extract_assignment(&p, &map).unwrap(), Some(a.clone()));
            if f.is_satisfied_by(&a) {
                prop_assert!(verify_dfpa(&inst, &p, &(&map.chain.eps_threshold / int(2))).unwrap().passed());
            }
        }
    }

    #[test]
    fn densified_strategy_underapproximates(seed in any::<u64>(), n in 2usize..4, grid in 4i64..16) {
        let mut r = common::rng(seed);
        let inst = Instance::CfpaIid(CfpaIid { n, marginal: random_marginal(&mut r), bids: BidSpace::grid(grid) });
        let eps = rat(1, 1 << 20);
        let cert = densify_solve(&inst, &eps).unwrap();
        prop_assert!(cert.holds());
        let beta = canonical_beta(&inst).unwrap();
        let slack = &cert.bounds.delta + int(2) * &eps;
        let mut prev = int(0);
        for k in 0..=24 {
            let v = rat(k, 24);
            let exact = beta.eval(&v).unwrap();
            let got = cert.strategy_bid(&v);
            prop_assert!(got <= exact, "β̃({}) = {} above β = {}", v, got, exact);
            prop_assert!(got >= &exact - &slack);
            prop_assert!(got >= prev);
            prev = got;
        }
    }
}
