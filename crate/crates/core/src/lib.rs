//! Exact dimensions of spaces of partial derivatives of sparse multivariate
//! polynomials over the rationals, together with polynomial-time lower and
//! upper bounds on those dimensions and the graph / simplicial-complex
//! constructions whose derivative spaces encode face counts.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end and threading live in the `pdrank` crate.
//!
//! Conventions used throughout:
//!
//! * Polynomials are stored canonically ([`SparsePoly`]) with exact rational
//!   coefficients, either in the ordinary monomial basis or in the scaled
//!   basis `x^a / a!`, where `d_b x^a = x^(a-b)`. Every derivative matrix and
//!   every trace computation works on scaled coefficients.
//! * "Order k" derivative spaces allow repeated differentiation in the same
//!   variable ([`exact`], [`bounds`]); the trace method only differentiates
//!   at most once per variable ([`trace`]).

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod combinat;
pub mod corpus;
mod error;
pub mod exact;
pub mod poly;
pub mod reductions;
pub mod symmetric;
pub mod topology;
pub mod trace;

pub use error::{Error, Resource, Result};
pub use exact::{DerivMatrix, Limits, OrderSpec};
pub use poly::{Basis, ExponentVector, Rational, SparsePoly, Term};
pub use topology::{Graph, SimplicialComplex};
