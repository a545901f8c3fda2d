use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Which configured cap was exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resource {
    Rows,
    Columns,
    Eliminations,
    TripleSum,
    GroundSet,
    Terms,
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Resource::Rows => "max-rows",
            Resource::Columns => "max-cols",
            Resource::Eliminations => "elimination-budget",
            Resource::TripleSum => "budget",
            Resource::GroundSet => "max-ground",
            Resource::Terms => "max-terms",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{resource} limit of {limit} exceeded (needed {needed})")]
    ResourceLimit {
        resource: Resource,
        limit: u128,
        needed: u128,
    },
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("operation requires a polynomial in the scaled monomial basis")]
    ExpectedScaled,
    #[error("exponent vector has length {got}, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("invalid variable list: {0}")]
    Variables(String),
    #[error("invalid order specification: {0}")]
    Order(String),
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("invalid simplicial complex: {0}")]
    Complex(String),
    #[error("invalid parameters: {0}")]
    Parameter(String),
}

impl Error {
    pub(crate) fn limit(resource: Resource, limit: impl Into<u128>, needed: impl Into<u128>) -> Self {
        Error::ResourceLimit {
            resource,
            limit: limit.into(),
            needed: needed.into(),
        }
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}
