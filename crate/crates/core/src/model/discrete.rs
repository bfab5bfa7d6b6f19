use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{check_value_space, index_of};
use crate::error::{check, Error, Violation};
use crate::rational::{factorial, format_rational, Rational};

/// Explicit joint pmf: a list of value tuples with positive masses summing to 1.
///
/// Tuples are stored as indices into the per-bidder value spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscretePrior {
    value_spaces: Vec<Vec<Rational>>,
    points: Vec<(Vec<usize>, Rational)>,
    at_value: Vec<Vec<Vec<usize>>>,
    marginals: Vec<Vec<Rational>>,
}

impl DiscretePrior {
    pub fn new(
        value_spaces: Vec<Vec<Rational>>,
        support: Vec<(Vec<Rational>, Rational)>,
    ) -> Result<Self, Error> {
        let mut bad = Vec::new();
        if value_spaces.is_empty() {
            bad.push(Violation::new("value_spaces", "no bidders"));
        }
        for (i, vs) in value_spaces.iter().enumerate() {
            bad.extend(check_value_space(vs, &format!("value_spaces[{i}]")));
        }
        check(bad)?;
        let n = value_spaces.len();
        let mut bad = Vec::new();
        let mut points = Vec::with_capacity(support.len());
        let mut seen = BTreeMap::new();
        let mut total = Rational::zero();
        for (k, (tuple, mass)) in support.into_iter().enumerate() {
            if tuple.len() != n {
                bad.push(Violation::new(format!("support[{k}]"), format!("tuple has {} entries, expected {n}", tuple.len())));
                continue;
            }
            let mut idx = Vec::with_capacity(n);
            for (i, v) in tuple.iter().enumerate() {
                match index_of(&value_spaces[i], v) {
                    Some(j) => idx.push(j),
                    None => bad.push(Violation::new(format!("support[{k}][{i}]"), format!("{v} not in value space of bidder {i}"))),
                }
            }
            if !mass.is_positive() {
                bad.push(Violation::new(format!("support[{k}].mass"), "mass must be positive"));
            }
            if idx.len() == n && seen.insert(idx.clone(), k).is_some() {
                bad.push(Violation::new(format!("support[{k}]"), "duplicate tuple"));
            }
            total += &mass;
            points.push((idx, mass));
        }
        if bad.is_empty() && !total.is_one() {
            bad.push(Violation::new("support", format!("total mass is {}, not 1", format_rational(&total))));
        }
        check(bad)?;
        Ok(Self::from_points(value_spaces, points))
    }

    /// Builds from index tuples already known to be valid.
    pub(crate) fn from_points(value_spaces: Vec<Vec<Rational>>, points: Vec<(Vec<usize>, Rational)>) -> Self {
        let mut at_value: Vec<Vec<Vec<usize>>> = value_spaces.iter().map(|vs| vec![Vec::new(); vs.len()]).collect();
        let mut marginals: Vec<Vec<Rational>> =
            value_spaces.iter().map(|vs| vec![Rational::zero(); vs.len()]).collect();
        for (p, (idx, mass)) in points.iter().enumerate() {
            for (i, &k) in idx.iter().enumerate() {
                at_value[i][k].push(p);
                marginals[i][k] += mass;
            }
        }
        DiscretePrior { value_spaces, points, at_value, marginals }
    }

    pub fn n(&self) -> usize {
        self.value_spaces.len()
    }

    pub fn value_spaces(&self) -> &[Vec<Rational>] {
        &self.value_spaces
    }

    pub fn value_space(&self, i: usize) -> &[Rational] {
        &self.value_spaces[i]
    }

    pub fn value_index(&self, i: usize, v: &Rational) -> Option<usize> {
        index_of(self.value_spaces.get(i)?, v)
    }

    /// Support points as (index tuple, mass).
    pub fn points(&self) -> &[(Vec<usize>, Rational)] {
        &self.points
    }

    /// Indices into `points()` of the support points where bidder `i` has value index `k`.
    pub fn points_at(&self, i: usize, k: usize) -> &[usize] {
        &self.at_value[i][k]
    }

    /// Marginal pmf of bidder `i`, aligned with its value space.
    pub fn marginal(&self, i: usize) -> Result<&[Rational], Error> {
        self.marginals.get(i).map(|m| m.as_slice()).ok_or(Error::BidderOutOfRange(i))
    }

    pub fn marginal_at(&self, i: usize, k: usize) -> &Rational {
        &self.marginals[i][k]
    }

    /// Conditional pmf of the opponents' value indices (bidder order, `i` removed) given `v_i`.
    pub fn conditional(&self, i: usize, k: usize) -> Result<Vec<(Vec<usize>, Rational)>, Error> {
        if i >= self.n() {
            return Err(Error::BidderOutOfRange(i));
        }
        let fi = self.marginals[i].get(k).ok_or(Error::Argument(format!("value index {k} out of range")))?;
        if fi.is_zero() {
            return Err(Error::OutsideSupport { bidder: i, value: format_rational(&self.value_spaces[i][k]) });
        }
        Ok(self.at_value[i][k]
            .iter()
            .map(|&p| {
                let (idx, mass) = &self.points[p];
                let opp = idx.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
                (opp, mass / fi)
            })
            .collect())
    }

    /// Mass of an arbitrary index tuple (zero off the support).
    pub fn mass_map(&self) -> BTreeMap<Vec<usize>, Rational> {
        self.points.iter().cloned().collect()
    }
}

/// Group-symmetric pmf in succinct form.
///
/// Bidders are laid out group by group. Each representative tuple lists its
/// group blocks in non-increasing order and stands for all of its distinct
/// within-group permutations, each with probability `p_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricDiscretePrior {
    group_sizes: Vec<usize>,
    offsets: Vec<usize>,
    value_spaces: Vec<Vec<Rational>>,
    reps: Vec<(Vec<usize>, Rational)>,
    mults: Vec<BigInt>,
    at_value: Vec<Vec<Vec<(usize, usize)>>>,
}

impl SymmetricDiscretePrior {
    pub fn new(
        group_sizes: Vec<usize>,
        value_spaces: Vec<Vec<Rational>>,
        reps: Vec<(Vec<Rational>, Rational)>,
    ) -> Result<Self, Error> {
        let mut bad = Vec::new();
        if group_sizes.is_empty() || group_sizes.contains(&0) {
            bad.push(Violation::new("groups", "group sizes must be positive and nonempty"));
        }
        if value_spaces.len() != group_sizes.len() {
            bad.push(Violation::new("value_spaces", "need one value space per group"));
        }
        for (g, vs) in value_spaces.iter().enumerate() {
            bad.extend(check_value_space(vs, &format!("value_spaces[{g}]")));
        }
        check(bad)?;
        let n: usize = group_sizes.iter().sum();
        let offsets = offsets_of(&group_sizes);
        let mut bad = Vec::new();
        let mut seen = BTreeMap::new();
        let mut idx_reps = Vec::new();
        let mut mults = Vec::new();
        let mut total = Rational::zero();
        for (k, (tuple, p)) in reps.into_iter().enumerate() {
            if tuple.len() != n {
                bad.push(Violation::new(format!("support[{k}]"), format!("tuple has {} entries, expected {n}", tuple.len())));
                continue;
            }
            let mut idx = Vec::with_capacity(n);
            for (g, &size) in group_sizes.iter().enumerate() {
                for v in &tuple[offsets[g]..offsets[g] + size] {
                    match index_of(&value_spaces[g], v) {
                        Some(j) => idx.push(j),
                        None => bad.push(Violation::new(format!("support[{k}]"), format!("{v} not in value space of group {g}"))),
                    }
                }
            }
            if idx.len() != n {
                continue;
            }
            match multiplicity_idx(&idx, &group_sizes) {
                Ok(m) => {
                    total += Rational::from_integer(m.clone()) * &p;
                    mults.push(m);
                }
                Err(_) => {
                    bad.push(Violation::new(format!("support[{k}]"), "group block not sorted non-increasing"));
                    continue;
                }
            }
            if !p.is_positive() {
                bad.push(Violation::new(format!("support[{k}].mass"), "probability must be positive"));
            }
            if seen.insert(idx.clone(), k).is_some() {
                bad.push(Violation::new(format!("support[{k}]"), "duplicate tuple"));
            }
            idx_reps.push((idx, p));
        }
        if bad.is_empty() && !total.is_one() {
            bad.push(Violation::new("support", format!("total mass ≠ 1 (sum of m_j p_j is {})", format_rational(&total))));
        }
        check(bad)?;
        let mut at_value: Vec<Vec<Vec<(usize, usize)>>> =
            value_spaces.iter().map(|vs| vec![Vec::new(); vs.len()]).collect();
        for (r, (idx, _)) in idx_reps.iter().enumerate() {
            for (g, &size) in group_sizes.iter().enumerate() {
                let block = &idx[offsets[g]..offsets[g] + size];
                for k in 0..value_spaces[g].len() {
                    let c = block.iter().filter(|&&x| x == k).count();
                    if c > 0 {
                        at_value[g][k].push((r, c));
                    }
                }
            }
        }
        Ok(SymmetricDiscretePrior { group_sizes, offsets, value_spaces, reps: idx_reps, mults, at_value })
    }

    pub fn n(&self) -> usize {
        self.group_sizes.iter().sum()
    }

    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    pub fn group_count(&self) -> usize {
        self.group_sizes.len()
    }

    /// Group containing bidder `i`.
    pub fn group_of(&self, i: usize) -> Result<usize, Error> {
        if i >= self.n() {
            return Err(Error::BidderOutOfRange(i));
        }
        Ok(self.offsets.partition_point(|&o| o <= i) - 1)
    }

    /// First bidder of group `g`.
    pub fn group_start(&self, g: usize) -> usize {
        self.offsets[g]
    }

    pub fn value_space(&self, g: usize) -> &[Rational] {
        &self.value_spaces[g]
    }

    pub fn value_spaces(&self) -> &[Vec<Rational>] {
        &self.value_spaces
    }

    /// Representative tuples (value indices) with their per-permutation probability.
    pub fn reps(&self) -> &[(Vec<usize>, Rational)] {
        &self.reps
    }

    pub fn multiplicities(&self) -> &[BigInt] {
        &self.mults
    }

    /// Representatives containing value index `k` in group `g`, with its count in that block.
    pub fn reps_at(&self, g: usize, k: usize) -> &[(usize, usize)] {
        &self.at_value[g][k]
    }

    /// Marginal pmf of any bidder in group `g`.
    pub fn marginal(&self, g: usize) -> Vec<Rational> {
        let size = Rational::from_integer(BigInt::from(self.group_sizes[g]));
        (0..self.value_spaces[g].len())
            .map(|k| {
                self.at_value[g][k].iter().fold(Rational::zero(), |acc, &(r, c)| {
                    acc + &self.reps[r].1 * Rational::from_integer(&self.mults[r] * BigInt::from(c)) / &size
                })
            })
            .collect()
    }

    /// Explicit prior over all distinct group-valid permutations.
    pub fn expand(&self) -> DiscretePrior {
        let spaces: Vec<Vec<Rational>> = self
            .group_sizes
            .iter()
            .enumerate()
            .flat_map(|(g, &s)| core::iter::repeat_n(self.value_spaces[g].clone(), s))
            .collect();
        let mut points = Vec::new();
        for (idx, p) in &self.reps {
            let blocks: Vec<Vec<Vec<usize>>> = self
                .group_sizes
                .iter()
                .enumerate()
                .map(|(g, &s)| distinct_permutations(&idx[self.offsets[g]..self.offsets[g] + s]))
                .collect();
            for_each_product(&blocks, &mut |parts| {
                points.push((parts.concat(), p.clone()));
            });
        }
        DiscretePrior::from_points(spaces, points)
    }
}

pub(crate) fn offsets_of(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &s in sizes {
        out.push(acc);
        acc += s;
    }
    out
}

/// Number of distinct group-valid permutations of a canonical tuple:
/// `n_1! ... n_k!` divided by the factorials of the repeat counts within each group.
pub fn multiplicity(tuple: &[Rational], group_sizes: &[usize]) -> Result<BigInt, Error> {
    if tuple.len() != group_sizes.iter().sum::<usize>() {
        return Err(Error::Argument(format!("tuple length {} does not match groups", tuple.len())));
    }
    let mut ranks: Vec<Rational> = tuple.to_vec();
    ranks.sort();
    ranks.dedup();
    let idx: Vec<usize> = tuple.iter().map(|v| ranks.binary_search(v).unwrap()).collect();
    multiplicity_idx(&idx, group_sizes)
}

pub(crate) fn multiplicity_idx(idx: &[usize], group_sizes: &[usize]) -> Result<BigInt, Error> {
    let mut m = BigInt::one();
    let mut at = 0;
    for &s in group_sizes {
        let block = &idx[at..at + s];
        if block.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NonCanonical(format!("block starting at position {at} is not non-increasing")));
        }
        m *= factorial(s);
        let mut k = 0;
        while k < s {
            let run = block[k..].iter().take_while(|&&x| x == block[k]).count();
            m /= factorial(run);
            k += run;
        }
        at += s;
    }
    Ok(m)
}

/// All distinct orderings of a multiset, in lexicographic order.
pub(crate) fn distinct_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = items.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let Some(p) = (0..cur.len().saturating_sub(1)).rev().find(|&p| cur[p] < cur[p + 1]) else {
            return out;
        };
        let q = (p + 1..cur.len()).rev().find(|&q| cur[q] > cur[p]).unwrap();
        cur.swap(p, q);
        cur[p + 1..].reverse();
        out.push(cur.clone());
    }
}

pub(crate) fn for_each_product<T: Clone>(choices: &[Vec<T>], f: &mut dyn FnMut(&[T])) {
    fn rec<T: Clone>(choices: &[Vec<T>], acc: &mut Vec<T>, f: &mut dyn FnMut(&[T])) {
        match choices.split_first() {
            None => f(acc),
            Some((head, rest)) => {
                for c in head {
                    acc.push(c.clone());
                    rec(rest, acc, f);
                    acc.pop();
                }
            }
        }
    }
    rec(choices, &mut Vec::new(), f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn anti_diagonal() -> DiscretePrior {
        let vs = vec![rat(0, 1), rat(1, 2), rat(1, 1)];
        DiscretePrior::new(
            vec![vs.clone(), vs],
            vec![
                (vec![rat(0, 1), rat(1, 1)], rat(1, 3)),
                (vec![rat(1, 2), rat(1, 2)], rat(1, 3)),
                (vec![rat(1, 1), rat(0, 1)], rat(1, 3)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn marginal_and_conditional() {
        let p = anti_diagonal();
        assert_eq!(p.marginal(0).unwrap(), &[rat(1, 3), rat(1, 3), rat(1, 3)]);
        let c = p.conditional(0, 2).unwrap();
        assert_eq!(c, vec![(vec![0], rat(1, 1))]);
        assert!(p.marginal(2).is_err());
    }

    #[test]
    fn rejects_bad_mass() {
        let vs = vec![rat(0, 1), rat(1, 1)];
        let e = DiscretePrior::new(vec![vs.clone()], vec![(vec![rat(0, 1)], rat(1, 2))]);
        assert!(matches!(e, Err(Error::Invalid(_))));
        let e = DiscretePrior::new(vec![vs], vec![(vec![rat(1, 1)], rat(1, 2)), (vec![rat(1, 1)], rat(1, 2))]);
        assert!(e.is_err());
    }

    #[test]
    fn multiplicity_examples() {
        let (a, b, c) = (rat(3, 4), rat(1, 2), rat(1, 4));
        assert_eq!(multiplicity(&[a.clone(), a.clone(), b.clone()], &[3]).unwrap(), BigInt::from(3));
        assert_eq!(multiplicity(&[a.clone(), a.clone(), a.clone()], &[3]).unwrap(), BigInt::from(1));
        assert_eq!(multiplicity(&[a.clone(), b.clone(), c.clone()], &[2, 1]).unwrap(), BigInt::from(2));
        assert!(multiplicity(&[b, a], &[2]).is_err());
    }

    #[test]
    fn expansion_examples() {
        let vs = vec![rat(1, 4), rat(1, 2)];
        let s = SymmetricDiscretePrior::new(vec![2], vec![vs.clone()], vec![(vec![rat(1, 2), rat(1, 4)], rat(1, 2))]).unwrap();
        let e = s.expand();
        assert_eq!(e.points().len(), 2);
        assert!(e.points().iter().all(|(_, m)| *m == rat(1, 2)));
        let s = SymmetricDiscretePrior::new(vec![2], vec![vs], vec![(vec![rat(1, 2), rat(1, 2)], rat(1, 1))]).unwrap();
        assert_eq!(s.expand().points().len(), 1);
    }

    #[test]
    fn symmetric_total_mass_checked() {
        let vs = vec![rat(1, 4), rat(1, 2)];
        let e = SymmetricDiscretePrior::new(vec![2], vec![vs], vec![(vec![rat(1, 2), rat(1, 4)], rat(7, 16))]);
        let Err(Error::Invalid(report)) = e else { panic!() };
        assert!(report.0[0].message.contains("total mass ≠ 1"));
    }

    #[test]
    fn non_canonical_rejected() {
        let vs = vec![rat(1, 4), rat(1, 2)];
        assert!(SymmetricDiscretePrior::new(vec![2], vec![vs], vec![(vec![rat(1, 4), rat(1, 2)], rat(1, 2))]).is_err());
    }

    #[test]
    fn two_group_expansion_and_marginals() {
        let vs = vec![rat(0, 1), rat(1, 2), rat(1, 1)];
        let s = SymmetricDiscretePrior::new(
            vec![2, 1],
            vec![vs.clone(), vs],
            vec![
                (vec![rat(1, 1), rat(1, 2), rat(0, 1)], rat(1, 4)),
                (vec![rat(1, 2), rat(1, 2), rat(1, 1)], rat(1, 2)),
            ],
        )
        .unwrap();
        let e = s.expand();
        let total: Rational = e.points().iter().map(|(_, m)| m.clone()).sum();
        assert!(total.is_one());
        assert_eq!(e.points().len(), 3);
        for i in 0..3 {
            let g = s.group_of(i).unwrap();
            assert_eq!(e.marginal(i).unwrap(), s.marginal(g).as_slice());
        }
    }

    #[test]
    fn distinct_permutation_counts() {
        assert_eq!(distinct_permutations(&[2, 1, 1]).len(), 3);
        assert_eq!(distinct_permutations(&[0, 1, 2]).len(), 6);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }
}
