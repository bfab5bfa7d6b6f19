//! Canonical symmetric equilibrium of continuous-bid auctions and its rounding onto a finite bid space.

mod beta;
mod poly;
mod solve;

pub use beta::{eval_beta_iid, eval_beta_sapv, max_order_cdf, CanonicalBeta};
pub use poly::{PiecewisePoly, Poly};
pub use solve::{
    approx_invert, bid_denseness, bounds_profile, canonical_beta, densify_solve, lipschitz_bound, BoundsProfile,
    DensifyCertificate,
};
