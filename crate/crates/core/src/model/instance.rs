use alloc::vec::Vec;

use super::{BidSpace, BoxDensity, DiscretePrior, IidMarginal, JumpStrategy, MixedStrategy, PureStrategy, SymmetricDiscretePrior};

/// Discrete values, discrete bids, explicit prior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfpa {
    pub prior: DiscretePrior,
    pub bids: BidSpace,
}

/// Discrete values, discrete bids, group-symmetric prior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfpaSym {
    pub prior: SymmetricDiscretePrior,
    pub bids: BidSpace,
}

impl DfpaSym {
    pub fn expand(&self) -> Dfpa {
        Dfpa { prior: self.prior.expand(), bids: self.bids.clone() }
    }
}

/// Continuous values with a box density, discrete bids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfpaBox {
    pub density: BoxDensity,
    pub bids: BidSpace,
}

/// Continuous i.i.d. values, discrete bids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfpaIid {
    pub n: usize,
    pub marginal: IidMarginal,
    pub bids: BidSpace,
}

impl CfpaIid {
    pub fn to_boxes(&self) -> CfpaBox {
        CfpaBox { density: self.marginal.product_boxes(self.n), bids: self.bids.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Dfpa(Dfpa),
    DfpaSym(DfpaSym),
    CfpaBox(CfpaBox),
    CfpaIid(CfpaIid),
}

impl Instance {
    pub fn bids(&self) -> &BidSpace {
        match self {
            Instance::Dfpa(d) => &d.bids,
            Instance::DfpaSym(d) => &d.bids,
            Instance::CfpaBox(c) => &c.bids,
            Instance::CfpaIid(c) => &c.bids,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::Dfpa(d) => d.prior.n(),
            Instance::DfpaSym(d) => d.prior.n(),
            Instance::CfpaBox(c) => c.density.n(),
            Instance::CfpaIid(c) => c.n,
        }
    }
}

/// One strategy per bidder, or one per group for symmetric instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Profile {
    Pure(Vec<PureStrategy>),
    Mixed(Vec<MixedStrategy>),
    Jump(Vec<JumpStrategy>),
}

impl Profile {
    pub fn len(&self) -> usize {
        match self {
            Profile::Pure(v) => v.len(),
            Profile::Mixed(v) => v.len(),
            Profile::Jump(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
