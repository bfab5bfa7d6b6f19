use alloc::vec;
use alloc::vec::Vec;
use num_traits::Zero;

use crate::error::Error;
use crate::rational::{int, Rational};

/// Coefficients in ascending powers of the variable.
pub type Poly = Vec<Rational>;

pub(crate) fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub(crate) fn poly_mul(a: &[Rational], b: &[Rational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn poly_add_assign(a: &mut Poly, b: &[Rational]) {
    if a.len() < b.len() {
        a.resize(b.len(), Rational::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}


pub(crate) fn poly_pow(a: &[Rational], k: usize) -> Poly {
    (0..k).fold(vec![int(1)], |acc, _| poly_mul(&acc, a))
}

fn poly_antiderivative(p: &[Rational]) -> Poly {
    let mut out = vec![Rational::zero()];
    out.extend(p.iter().enumerate().map(|(k, c)| c / int(k as i64 + 1)));
    out
}

fn poly_derivative(p: &[Rational]) -> Poly {
    p.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect()
}

/// A function on `[breakpoints[0], breakpoints[last]]` given by one polynomial per piece.
///
/// Piece `j` covers `[breakpoints[j], breakpoints[j + 1]]`; where two pieces meet the
/// left piece is used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Poly>) -> Result<Self, Error> {
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(Error::Argument("need one polynomial per breakpoint interval".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument("breakpoints must increase strictly".into()));
        }
        Ok(PiecewisePoly { breakpoints, pieces })
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn degree(&self) -> usize {
        self.pieces.iter().map(|p| p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)).max().unwrap_or(0)
    }

    /// Piece containing `x`, clamped to the domain.
    fn piece_of(&self, x: &Rational) -> usize {
        let inner = &self.breakpoints[1..self.breakpoints.len() - 1];
        inner.partition_point(|a| a < x)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        poly_eval(&self.pieces[self.piece_of(x)], x)
    }

    /// Derivative from the left piece at breakpoints.
    pub fn derivative_at(&self, x: &Rational) -> Rational {
        poly_eval(&poly_derivative(&self.pieces[self.piece_of(x)]), x)
    }

    /// Exact `∫_lo^hi` over the domain.
    pub fn integral(&self, lo: &Rational, hi: &Rational) -> Rational {
        if lo >= hi {
            return -self.integral(hi, lo);
        }
        let mut total = Rational::zero();
        for (j, p) in self.pieces.iter().enumerate() {
            let a = (&self.breakpoints[j]).max(lo);
            let b = (&self.breakpoints[j + 1]).min(hi);
            if a < b {
                let anti = poly_antiderivative(p);
                total += poly_eval(&anti, b) - poly_eval(&anti, a);
            }
        }
        total
    }
}
