use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use super::poly::{poly_add_assign, poly_mul, poly_pow, PiecewisePoly, Poly};
use crate::error::Error;
use crate::model::{BoxDensity, IidMarginal, Interval};
use crate::rational::{int, Rational};

/// Every box endpoint on any axis, plus 0 and 1.
pub(crate) fn all_cuts(density: &BoxDensity) -> Vec<Rational> {
    let mut cuts = vec![int(0), int(1)];
    for b in density.boxes() {
        for s in &b.sides {
            cuts.push(s.lo.clone());
            cuts.push(s.hi.clone());
        }
    }
    cuts.sort();
    cuts.dedup();
    cuts
}

/// `|[0, y] ∩ side| / |side|` as a polynomial in y on the piece `[a, b]`.
fn below_fraction(side: &Interval, a: &Rational, b: &Rational) -> Poly {
    if b <= &side.lo {
        Vec::new()
    } else if a >= &side.hi {
        vec![int(1)]
    } else {
        let len = side.len();
        vec![-&side.lo / &len, Rational::one() / len]
    }
}

/// Cdf of the highest opponent value given bidder 0 has value `v`, for a
/// symmetric box density. Degree at most n−1 per piece.
pub fn max_order_cdf(density: &BoxDensity, v: &Rational) -> Result<PiecewisePoly, Error> {
    let pieces = density.pieces(0, v);
    let total: Rational = pieces.iter().map(|p| &p.mass).sum();
    if !total.is_positive() {
        return Err(Error::OutsideSupport { bidder: 0, value: format!("{v}") });
    }
    let cuts = all_cuts(density);
    let polys = cuts
        .windows(2)
        .map(|w| {
            let mut acc = Poly::new();
            for p in &pieces {
                let mut term = vec![&p.mass / &total];
                for (_, side) in &p.opponents {
                    term = poly_mul(&term, &below_fraction(side, &w[0], &w[1]));
                }
                poly_add_assign(&mut acc, &term);
            }
            acc
        })
        .collect();
    PiecewisePoly::new(cuts, polys)
}

#[derive(Clone, Debug)]
enum Kind {
    /// `F^{n-1}` per marginal piece.
    Iid { cdf_power: PiecewisePoly },
    /// Per cell: the conditional cdf, its value at the cell's right end and its integral over the cell.
    Sapv { cells: Vec<Rational>, cdfs: Vec<PiecewisePoly>, at_right: Vec<Rational>, integrals: Vec<Rational> },
}

/// The symmetric equilibrium `β(x) = x − ∫_{v̲}^x L(y | x) dy`, evaluated exactly.
#[derive(Clone, Debug)]
pub struct CanonicalBeta {
    support_left: Rational,
    kind: Kind,
}

impl CanonicalBeta {
    pub fn iid(marginal: &IidMarginal, n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Argument("need at least one bidder".into()));
        }
        let a = marginal.breakpoints();
        let polys = a
            .windows(2)
            .zip(marginal.densities())
            .map(|(w, p)| {
                let lin = vec![marginal.cdf(&w[0]) - p * &w[0], p.clone()];
                poly_pow(&lin, n - 1)
            })
            .collect();
        Ok(CanonicalBeta {
            support_left: marginal.support_left(),
            kind: Kind::Iid { cdf_power: PiecewisePoly::new(a.to_vec(), polys)? },
        })
    }

    /// Requires a symmetric density with positive density on `[v̲, 1]^n`
    /// (checked on the marginal here; see `bounds_profile` for the joint check).
    pub fn sapv(density: &BoxDensity) -> Result<Self, Error> {
        let marginal = density.marginal(0)?;
        let left = marginal.support_left();
        let a = marginal.breakpoints();
        for (w, p) in a.windows(2).zip(marginal.densities()) {
            if w[0] >= left && p.is_zero() {
                return Err(Error::Unsupported(format!(
                    "marginal density vanishes on [{}, {}]; the canonical strategy needs full support (open problem)",
                    w[0], w[1]
                )));
            }
        }
        let cuts: Vec<Rational> = all_cuts(density).into_iter().filter(|c| *c >= left).collect();
        let mut cdfs = Vec::new();
        let mut at_right = Vec::new();
        let mut integrals = Vec::new();
        for w in cuts.windows(2) {
            let mid = (&w[0] + &w[1]) / int(2);
            let g = max_order_cdf(density, &mid)?;
            at_right.push(g.eval(&w[1]));
            integrals.push(g.integral(&w[0], &w[1]));
            cdfs.push(g);
        }
        Ok(CanonicalBeta { support_left: left, kind: Kind::Sapv { cells: cuts, cdfs, at_right, integrals } })
    }

    pub fn support_left(&self) -> &Rational {
        &self.support_left
    }

    /// Cell `c` with `cells[c] < x <= cells[c+1]`.
    fn cell_of(cells: &[Rational], x: &Rational) -> usize {
        cells.partition_point(|a| a < x).saturating_sub(1).min(cells.len() - 2)
    }

    /// `L(y | v)` for `v̲ <= y <= v <= 1`.
    pub fn l_value(&self, y: &Rational, v: &Rational) -> Rational {
        if y >= v {
            return Rational::one();
        }
        match &self.kind {
            Kind::Iid { cdf_power } => {
                let top = cdf_power.eval(v);
                if top.is_zero() {
                    Rational::one()
                } else {
                    cdf_power.eval(y) / top
                }
            }
            Kind::Sapv { cells, cdfs, at_right, .. } => {
                let c = Self::cell_of(cells, v);
                let k = Self::cell_of(cells, y);
                if k == c {
                    return cdfs[c].eval(y) / cdfs[c].eval(v);
                }
                let mut l = cdfs[c].eval(&cells[c]) / cdfs[c].eval(v);
                for j in (k + 1..c).rev() {
                    l *= cdfs[j].eval(&cells[j]) / &at_right[j];
                }
                l * cdfs[k].eval(y) / &at_right[k]
            }
        }
    }

    /// Exact `β(x)`; errors below the support.
    pub fn eval(&self, x: &Rational) -> Result<Rational, Error> {
        if *x < self.support_left {
            return Err(Error::Argument(format!("value {x} lies below the support start {}", self.support_left)));
        }
        if *x == self.support_left {
            return Ok(x.clone());
        }
        let shaded = match &self.kind {
            Kind::Iid { cdf_power } => cdf_power.integral(&self.support_left, x) / cdf_power.eval(x),
            Kind::Sapv { cells, cdfs, at_right, integrals } => {
                let c = Self::cell_of(cells, x);
                let gx = cdfs[c].eval(x);
                let mut total = cdfs[c].integral(&cells[c], x) / &gx;
                // L at the right end of the cell being integrated
                let mut l = cdfs[c].eval(&cells[c]) / &gx;
                for j in (0..c).rev() {
                    total += &l * &integrals[j] / &at_right[j];
                    l *= cdfs[j].eval(&cells[j]) / &at_right[j];
                }
                total
            }
        };
        Ok(x - shaded)
    }
}

pub fn eval_beta_iid(marginal: &IidMarginal, n: usize, x: &Rational) -> Result<Rational, Error> {
    CanonicalBeta::iid(marginal, n)?.eval(x)
}

pub fn eval_beta_sapv(density: &BoxDensity, x: &Rational) -> Result<Rational, Error> {
    CanonicalBeta::sapv(density)?.eval(x)
}
