#![allow(dead_code)]

use fpa_core::model::{
    BidSpace, BoxDensity, Dfpa, DfpaSym, DiscretePrior, Interval, MixedStrategy, PureStrategy, SymmetricDiscretePrior,
    Symmetry, WeightedBox,
};
use fpa_core::rational::{factorial, int, rat};
use fpa_core::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Strictly increasing values in (0, 1] with small denominators.
pub fn random_values(r: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let mut pool: Vec<i64> = (1..=12).collect();
    pool.shuffle(r);
    let mut v: Vec<Rational> = pool[..count].iter().map(|&k| rat(k, 12)).collect();
    v.sort();
    v
}

/// `{0}` plus random multiples of 1/12.
pub fn random_bids(r: &mut ChaCha8Rng, count: usize) -> BidSpace {
    let mut pool: Vec<i64> = (1..=12).collect();
    pool.shuffle(r);
    let mut b: Vec<Rational> = std::iter::once(int(0)).chain(pool[..count - 1].iter().map(|&k| rat(k, 12))).collect();
    b.sort();
    BidSpace::new(b).unwrap()
}

fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &s in sizes {
        out = out.into_iter().flat_map(|t| (0..s).map(move |k| [t.clone(), vec![k]].concat())).collect();
    }
    out
}

/// Random joint pmf; each tuple is kept with probability `keep`.
pub fn random_dfpa(r: &mut ChaCha8Rng, max_n: usize, max_bids: usize, max_values: usize, keep: f64) -> Dfpa {
    let n = r.gen_range(1..=max_n);
    let sizes: Vec<usize> = (0..n).map(|_| r.gen_range(1..=max_values)).collect();
    let spaces: Vec<Vec<Rational>> = sizes.iter().map(|&s| random_values(r, s)).collect();
    let count = r.gen_range(1..=max_bids);
    let bids = random_bids(r, count);
    let all = tuples(&sizes);
    let mut weights: Vec<(Vec<usize>, i64)> = Vec::new();
    for t in &all {
        if r.gen_bool(keep) {
            weights.push((t.clone(), r.gen_range(1..=5)));
        }
    }
    if weights.is_empty() {
        weights.push((all[r.gen_range(0..all.len())].clone(), 1));
    }
    let total: i64 = weights.iter().map(|w| w.1).sum();
    let support = weights
        .into_iter()
        .map(|(t, w)| (t.iter().enumerate().map(|(i, &k)| spaces[i][k].clone()).collect(), rat(w, total)))
        .collect();
    Dfpa { prior: DiscretePrior::new(spaces, support).unwrap(), bids }
}

/// Affiliated prior with full support: `f(k) ∝ Π h_i(k_i) Π_{i<j} c_ij^(k_i k_j)`.
pub fn random_apv(r: &mut ChaCha8Rng, n: usize, values: usize, bids: usize) -> Dfpa {
    let spaces: Vec<Vec<Rational>> = (0..n).map(|_| random_values(r, values)).collect();
    let singles: Vec<Vec<i64>> = (0..n).map(|_| (0..values).map(|_| r.gen_range(1..=4)).collect()).collect();
    let mut coupling = vec![vec![1i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            coupling[i][j] = r.gen_range(1..=3);
        }
    }
    let all = tuples(&vec![values; n]);
    let raw: Vec<BigInt> = all
        .iter()
        .map(|t| {
            let mut w = BigInt::one();
            for i in 0..n {
                w *= singles[i][t[i]];
                for j in i + 1..n {
                    w *= BigInt::from(coupling[i][j]).pow((t[i] * t[j]) as u32);
                }
            }
            w
        })
        .collect();
    let total: BigInt = raw.iter().sum();
    let support = all
        .iter()
        .zip(raw)
        .map(|(t, w)| (t.iter().enumerate().map(|(i, &k)| spaces[i][k].clone()).collect(), Rational::new(w, total.clone())))
        .collect();
    Dfpa { prior: DiscretePrior::new(spaces, support).unwrap(), bids: random_bids(r, bids) }
}

/// Random nondecreasing bid map that never bids above the value.
pub fn random_monotone(r: &mut ChaCha8Rng, values: &[Rational], bids: &BidSpace) -> PureStrategy {
    let mut out = Vec::with_capacity(values.len());
    let mut floor = 0;
    for v in values {
        let top = bids.highest_at_most(v).max(floor);
        let b = r.gen_range(floor..=top);
        out.push(b);
        floor = b;
    }
    PureStrategy { bids: out }
}

pub fn random_mixed(r: &mut ChaCha8Rng, values: usize, bids: usize) -> MixedStrategy {
    let rows = (0..values)
        .map(|_| {
            let w: Vec<i64> = (0..bids).map(|_| r.gen_range(0..=3)).collect();
            let total: i64 = w.iter().sum::<i64>().max(1);
            let mut row: Vec<Rational> = w.iter().map(|&x| rat(x, total)).collect();
            if w.iter().all(|&x| x == 0) {
                row[0] = int(1);
            }
            row
        })
        .collect();
    MixedStrategy { rows }
}

pub fn random_pure(r: &mut ChaCha8Rng, values: usize, bids: usize) -> PureStrategy {
    PureStrategy { bids: (0..values).map(|_| r.gen_range(0..bids)).collect() }
}

/// Group-symmetric prior over canonical tuples.
pub fn random_dfpa_sym(r: &mut ChaCha8Rng) -> DfpaSym {
    let groups: Vec<usize> = if r.gen_bool(0.5) { vec![r.gen_range(2..=3)] } else { vec![2, 1] };
    let spaces: Vec<Vec<Rational>> = groups
        .iter()
        .map(|_| {
            let size = r.gen_range(1..=3);
            random_values(r, size)
        })
        .collect();
    let per_group: Vec<Vec<Vec<usize>>> = groups
        .iter()
        .zip(&spaces)
        .map(|(&size, vs)| tuples(&vec![vs.len(); size]).into_iter().filter(|t| t.windows(2).all(|w| w[0] >= w[1])).collect())
        .collect();
    let mut reps: Vec<Vec<usize>> = vec![vec![]];
    for block in &per_group {
        reps = reps.into_iter().flat_map(|t| block.iter().map(move |b| [t.clone(), b.clone()].concat())).collect();
    }
    let mut chosen: Vec<(Vec<usize>, i64)> = Vec::new();
    for t in &reps {
        if r.gen_bool(0.6) {
            chosen.push((t.clone(), r.gen_range(1..=4)));
        }
    }
    if chosen.is_empty() {
        chosen.push((reps[0].clone(), 1));
    }
    let to_values = |t: &[usize]| -> Vec<Rational> {
        let mut out = Vec::new();
        let mut at = 0;
        for (g, &size) in groups.iter().enumerate() {
            out.extend(t[at..at + size].iter().map(|&k| spaces[g][k].clone()));
            at += size;
        }
        out
    };
    let mult = |vals: &[Rational]| fpa_core::model::multiplicity(vals, &groups).unwrap();
    let total: BigInt = chosen.iter().map(|(t, w)| mult(&to_values(t)) * BigInt::from(*w)).sum();
    let support = chosen.iter().map(|(t, w)| (to_values(t), Rational::new(BigInt::from(*w), total.clone()))).collect();
    let prior = SymmetricDiscretePrior::new(groups, spaces, support).unwrap();
    let count = r.gen_range(1..=4);
    DfpaSym { prior, bids: random_bids(r, count) }
}

/// Brute-force interim winning probability: every support point, every
/// realisation of the opponents' mixed bids, uniform tie-breaking.
pub fn brute_win_prob(inst: &Dfpa, i: usize, v: usize, b: usize, profile: &[MixedStrategy]) -> Rational {
    let n = inst.prior.n();
    let mut won = Rational::zero();
    let mut mass = Rational::zero();
    for (idx, m) in inst.prior.points() {
        if idx[i] != v {
            continue;
        }
        mass += m;
        let opps: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let mut stack: Vec<(usize, Rational, bool, usize)> = vec![(0, Rational::one(), true, 0)];
        while let Some((depth, p, ok, ties)) = stack.pop() {
            if p.is_zero() || !ok {
                continue;
            }
            if depth == opps.len() {
                won += m * &p * rat(1, ties as i64 + 1);
                continue;
            }
            let j = opps[depth];
            for (bj, w) in profile[j].rows[idx[j]].iter().enumerate() {
                stack.push((depth + 1, &p * w, bj <= b, ties + usize::from(bj == b)));
            }
        }
    }
    won / mass
}

/// Cube `[lo, hi]^n`.
pub fn cube(n: usize, lo: Rational, hi: Rational, weight: Rational) -> WeightedBox {
    WeightedBox { sides: vec![Interval::new(lo, hi); n], weight }
}

/// Symmetric affiliated density: a base cube `[floor,1]^n` plus nested upper
/// cubes, so the density is a nondecreasing function of the smallest value.
pub fn random_sapv_boxes(r: &mut ChaCha8Rng) -> BoxDensity {
    let n = r.gen_range(2..=3);
    let floor = if r.gen_bool(0.3) { rat(r.gen_range(1..=3), 8) } else { int(0) };
    let layers = r.gen_range(1..=3);
    let mut corners: Vec<Rational> = (0..layers).map(|_| rat(r.gen_range(1..=7), 8)).filter(|a| *a > floor).collect();
    corners.sort();
    corners.dedup();
    let mut masses: Vec<(Rational, Rational)> = vec![(floor.clone(), int(r.gen_range(1..=4)))];
    masses.extend(corners.into_iter().map(|a| (a, int(r.gen_range(1..=4)))));
    let total: Rational = masses.iter().map(|m| &m.1).sum();
    let perms = Rational::from_integer(factorial(n));
    let boxes = masses
        .into_iter()
        .map(|(lo, m)| {
            let side = int(1) - &lo;
            let vol = (0..n).fold(int(1), |acc, _| acc * &side);
            cube(n, lo, int(1), m / &total / &vol / &perms)
        })
        .collect();
    BoxDensity::new(n, boxes, Symmetry::Groups(vec![n])).unwrap()
}
