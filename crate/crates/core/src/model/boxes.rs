use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::discrete::{distinct_permutations, for_each_product, offsets_of};
use crate::error::{check, Error, Violation};
use crate::rational::{factorial, format_rational, in_unit_interval, int, rat, Rational};

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi }
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedBox {
    pub sides: Vec<Interval>,
    pub weight: Rational,
}

/// How the box list is read. Under `Groups(sizes)` every box also stands for
/// each within-group permutation of its sides (all of them, so a box that is
/// fixed by a permutation is counted once per such permutation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symmetry {
    None,
    Groups(Vec<usize>),
}

/// One conditional-support box as seen by a single bidder: its unnormalized
/// mass and the interval of every opponent, tagged with a strategy slot
/// (the opponent's bidder index, or its group index for grouped densities).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondPiece {
    pub mass: Rational,
    pub opponents: Vec<(usize, Interval)>,
}

/// Piecewise-constant joint density given by weighted hyperrectangles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxDensity {
    n: usize,
    boxes: Vec<WeightedBox>,
    symmetry: Symmetry,
}

impl BoxDensity {
    pub fn new(n: usize, boxes: Vec<WeightedBox>, symmetry: Symmetry) -> Result<Self, Error> {
        let mut bad = Vec::new();
        if n == 0 {
            bad.push(Violation::new("n", "no bidders"));
        }
        if let Symmetry::Groups(sizes) = &symmetry {
            if sizes.iter().sum::<usize>() != n || sizes.contains(&0) {
                bad.push(Violation::new("symmetry", "group sizes must be positive and sum to n"));
            }
        }
        for (k, b) in boxes.iter().enumerate() {
            if b.sides.len() != n {
                bad.push(Violation::new(format!("boxes[{k}]"), format!("{} sides, expected {n}", b.sides.len())));
            }
            for (i, s) in b.sides.iter().enumerate() {
                if !in_unit_interval(&s.lo) || !in_unit_interval(&s.hi) || s.lo >= s.hi {
                    bad.push(Violation::new(format!("boxes[{k}].sides[{i}]"), "need 0 <= lo < hi <= 1"));
                }
            }
            if b.weight.is_negative() {
                bad.push(Violation::new(format!("boxes[{k}].weight"), "negative weight"));
            }
        }
        check(bad)?;
        let d = BoxDensity { n, boxes, symmetry };
        let total = d.total_mass();
        if !total.is_one() {
            return Err(Error::invalid(vec![Violation::new(
                "boxes",
                format!("total mass is {}, not 1", format_rational(&total)),
            )]));
        }
        Ok(d)
    }

    /// `[0,1]^n` with the density spread evenly.
    pub fn uniform(n: usize) -> Self {
        let sides = vec![Interval::new(int(0), int(1)); n];
        BoxDensity { n, boxes: vec![WeightedBox { sides, weight: int(1) }], symmetry: Symmetry::None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn boxes(&self) -> &[WeightedBox] {
        &self.boxes
    }

    pub fn symmetry(&self) -> &Symmetry {
        &self.symmetry
    }

    fn group_sizes(&self) -> Vec<usize> {
        match &self.symmetry {
            Symmetry::None => vec![1; self.n],
            Symmetry::Groups(s) => s.clone(),
        }
    }

    /// Number of strategy slots the pieces refer to: bidders, or groups.
    pub fn slot_count(&self) -> usize {
        self.group_sizes().len()
    }

    /// Slot (bidder or group) of bidder `i`.
    pub fn slot_of(&self, i: usize) -> usize {
        let offsets = offsets_of(&self.group_sizes());
        offsets.partition_point(|&o| o <= i) - 1
    }

    fn perm_count(&self) -> BigInt {
        self.group_sizes().iter().map(|&s| factorial(s)).product()
    }

    pub fn total_mass(&self) -> Rational {
        let per_box: Rational = self
            .boxes
            .iter()
            .map(|b| b.sides.iter().fold(b.weight.clone(), |acc, s| acc * s.len()))
            .sum();
        per_box * Rational::from_integer(self.perm_count())
    }

    /// Equivalent density with every group permutation written out (identical boxes merged).
    pub fn expand(&self) -> BoxDensity {
        let Symmetry::Groups(sizes) = &self.symmetry else {
            return self.clone();
        };
        let offsets = offsets_of(sizes);
        let perms: Vec<Vec<Vec<usize>>> = sizes
            .iter()
            .zip(&offsets)
            .map(|(&s, &o)| distinct_permutations(&(o..o + s).collect::<Vec<_>>()))
            .collect();
        let mut merged: BTreeMap<Vec<Interval>, Rational> = BTreeMap::new();
        for b in &self.boxes {
            for_each_product(&perms, &mut |parts| {
                let order = parts.concat();
                let sides: Vec<Interval> = order.iter().map(|&p| b.sides[p].clone()).collect();
                *merged.entry(sides).or_insert_with(Rational::zero) += &b.weight;
            });
        }
        let boxes = merged.into_iter().map(|(sides, weight)| WeightedBox { sides, weight }).collect();
        BoxDensity { n: self.n, boxes, symmetry: Symmetry::None }
    }

    /// Conditional-support pieces for bidder `i` at value `x` (unnormalized).
    pub fn pieces(&self, i: usize, x: &Rational) -> Vec<CondPiece> {
        let mut out = Vec::new();
        match &self.symmetry {
            Symmetry::None => {
                for b in &self.boxes {
                    if b.weight.is_zero() || !b.sides[i].contains(x) {
                        continue;
                    }
                    let mut mass = b.weight.clone();
                    let mut opponents = Vec::with_capacity(self.n - 1);
                    for (j, s) in b.sides.iter().enumerate() {
                        if j != i {
                            mass *= s.len();
                            opponents.push((j, s.clone()));
                        }
                    }
                    out.push(CondPiece { mass, opponents });
                }
            }
            Symmetry::Groups(sizes) => {
                let offsets = offsets_of(sizes);
                let g = self.slot_of(i);
                let count = Rational::from_integer(self.perm_count()) / int(sizes[g] as i64);
                for b in &self.boxes {
                    if b.weight.is_zero() {
                        continue;
                    }
                    for p in offsets[g]..offsets[g] + sizes[g] {
                        if !b.sides[p].contains(x) {
                            continue;
                        }
                        let mut mass = &b.weight * &count;
                        let mut opponents = Vec::with_capacity(self.n - 1);
                        for (q, s) in b.sides.iter().enumerate() {
                            if q != p {
                                mass *= s.len();
                                opponents.push((offsets.partition_point(|&o| o <= q) - 1, s.clone()));
                            }
                        }
                        out.push(CondPiece { mass, opponents });
                    }
                }
            }
        }
        out
    }

    /// Marginal density of bidder `i` at `x`.
    pub fn marginal_density_at(&self, i: usize, x: &Rational) -> Rational {
        self.pieces(i, x).into_iter().map(|p| p.mass).sum()
    }

    /// Sorted cut points of bidder `i`'s axis, including 0 and 1.
    pub fn axis_breakpoints(&self, i: usize) -> Vec<Rational> {
        let positions: Vec<usize> = match &self.symmetry {
            Symmetry::None => vec![i],
            Symmetry::Groups(sizes) => {
                let offsets = offsets_of(sizes);
                let g = self.slot_of(i);
                (offsets[g]..offsets[g] + sizes[g]).collect()
            }
        };
        let mut cuts = vec![int(0), int(1)];
        for b in &self.boxes {
            for &p in &positions {
                cuts.push(b.sides[p].lo.clone());
                cuts.push(b.sides[p].hi.clone());
            }
        }
        cuts.sort();
        cuts.dedup();
        cuts
    }

    /// Marginal of bidder `i` as a piecewise-constant density on `[0, 1]`.
    pub fn marginal(&self, i: usize) -> Result<IidMarginal, Error> {
        if i >= self.n {
            return Err(Error::BidderOutOfRange(i));
        }
        let cuts = self.axis_breakpoints(i);
        let densities = cuts
            .windows(2)
            .map(|w| self.marginal_density_at(i, &((&w[0] + &w[1]) / int(2))))
            .collect();
        IidMarginal::new(cuts, densities)
    }

    /// Joint density at a point, counting every group permutation.
    pub fn density_at(&self, v: &[Rational]) -> Rational {
        self.expand()
            .boxes
            .iter()
            .filter(|b| b.sides.iter().zip(v).all(|(s, x)| s.contains(x)))
            .map(|b| b.weight.clone())
            .sum()
    }
}

/// Piecewise-constant density on `[0, 1]`: value `densities[j]` on `(a_j, a_{j+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IidMarginal {
    breakpoints: Vec<Rational>,
    densities: Vec<Rational>,
}

impl IidMarginal {
    pub fn new(breakpoints: Vec<Rational>, densities: Vec<Rational>) -> Result<Self, Error> {
        let mut bad = Vec::new();
        if breakpoints.len() < 2 || !breakpoints[0].is_zero() || !breakpoints[breakpoints.len() - 1].is_one() {
            bad.push(Violation::new("breakpoints", "must run from 0 to 1"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            bad.push(Violation::new("breakpoints", "not strictly increasing"));
        }
        if densities.len() + 1 != breakpoints.len() {
            bad.push(Violation::new("densities", "need one density per piece"));
        }
        for (k, p) in densities.iter().enumerate() {
            if p.is_negative() {
                bad.push(Violation::new(format!("densities[{k}]"), "negative density"));
            }
        }
        check(bad)?;
        let total: Rational = breakpoints.windows(2).zip(&densities).map(|(w, p)| (&w[1] - &w[0]) * p).sum();
        if !total.is_one() {
            return Err(Error::invalid(vec![Violation::new(
                "densities",
                format!("total mass is {}, not 1", format_rational(&total)),
            )]));
        }
        Ok(IidMarginal { breakpoints, densities })
    }

    pub fn uniform() -> Self {
        IidMarginal { breakpoints: vec![int(0), int(1)], densities: vec![int(1)] }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn densities(&self) -> &[Rational] {
        &self.densities
    }

    /// Piece index `j` with `a_j < x <= a_{j+1}` (the first piece for `x = 0`).
    pub fn piece_of(&self, x: &Rational) -> usize {
        self.breakpoints
            .partition_point(|a| a < x)
            .saturating_sub(1)
            .min(self.densities.len() - 1)
    }

    pub fn density_at(&self, x: &Rational) -> &Rational {
        &self.densities[self.piece_of(x)]
    }

    pub fn cdf(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (w, p) in self.breakpoints.windows(2).zip(&self.densities) {
            if *x <= w[0] {
                break;
            }
            let hi = if *x < w[1] { x } else { &w[1] };
            acc += (hi - &w[0]) * p;
        }
        acc
    }

    /// Left end of the support.
    pub fn support_left(&self) -> Rational {
        let j = self.densities.iter().position(|p| p.is_positive()).unwrap_or(0);
        self.breakpoints[j].clone()
    }

    /// Right end of the support.
    pub fn support_right(&self) -> Rational {
        let j = self.densities.iter().rposition(|p| p.is_positive()).unwrap_or(0);
        self.breakpoints[j + 1].clone()
    }

    /// The marginal's product over `n` bidders as an explicit box density.
    pub fn product_boxes(&self, n: usize) -> BoxDensity {
        let pieces: Vec<(Interval, Rational)> = self
            .breakpoints
            .windows(2)
            .zip(&self.densities)
            .filter(|(_, p)| p.is_positive())
            .map(|(w, p)| (Interval::new(w[0].clone(), w[1].clone()), p.clone()))
            .collect();
        let choices = vec![pieces; n];
        let mut boxes = Vec::new();
        for_each_product(&choices, &mut |parts| {
            let weight = parts.iter().fold(Rational::one(), |acc, (_, p)| acc * p);
            boxes.push(WeightedBox { sides: parts.iter().map(|(s, _)| s.clone()).collect(), weight });
        });
        BoxDensity { n, boxes, symmetry: Symmetry::None }
    }
}

/// Half-way point of consecutive cut points.
pub(crate) fn cells(cuts: &[Rational]) -> impl Iterator<Item = (Rational, Rational, Rational)> + '_ {
    cuts.windows(2).filter(|w| w[0] < w[1]).map(|w| (w[0].clone(), w[1].clone(), (&w[0] + &w[1]) * rat(1, 2)))
}
