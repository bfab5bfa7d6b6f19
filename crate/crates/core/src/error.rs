use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// One broken invariant, with a path-like location such as `support[3].mass`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub location: String,
    pub message: String,
}

impl Violation {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Violation { location: location.into(), message: message.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport(pub Vec<Violation>);

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(ValidationReport),
    #[error("bidder {0} out of range")]
    BidderOutOfRange(usize),
    #[error("value {value} of bidder {bidder} is outside the marginal support")]
    OutsideSupport { bidder: usize, value: String },
    #[error("tuple is not canonical: {0}")]
    NonCanonical(String),
    #[error("profile does not fit the instance: {0}")]
    Profile(String),
    #[error("search space has {needed} candidates, budget is {budget}")]
    Budget { needed: String, budget: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    Argument(String),
}

impl Error {
    pub(crate) fn invalid(violations: Vec<Violation>) -> Self {
        Error::Invalid(ValidationReport(violations))
    }
}

pub(crate) fn check(violations: Vec<Violation>) -> Result<(), Error> {
    if violations.is_empty() { Ok(()) } else { Err(Error::invalid(violations)) }
}
