//! Exact computation of the polynomial part of the reduced multivariable
//! zeta-function of a negative definite plumbed 3-manifold, and of its
//! normalized Seiberg-Witten invariants.
//!
//! The pipeline is:
//!
//! 1. [`graph`]: parse and validate a plumbing tree, classify nodes and ends,
//!    build the rooted orbifold graph.
//! 2. [`lattice`]: intersection form, dual basis, discriminant group, canonical
//!    class and projection to node coordinates.
//! 3. [`zeta`]: class-tracking expansion of the zeta-function, multivariable
//!    Euclidean division ([`laurent::divide`]) and the multiplicity function.
//! 4. [`knot`]: algebraic knots and the plumbing of surgeries along their
//!    connected sums, with the Alexander-polynomial route to the invariants.

pub mod error;
pub mod families;
pub mod graph;
pub mod knot;
pub mod laurent;
pub mod lattice;
mod linalg;
pub mod rational;
pub mod zeta;

pub use error::{Error, Result};
pub use graph::{OrbifoldGraph, PlumbingGraph, ValidationReport};
pub use laurent::{DenominatorFactors, DivisionResult, Exponent, LaurentPoly};
pub use lattice::{Class, DiscriminantGroup, Lattice, RationalVector};
pub use rational::Rational;
pub use zeta::{InvariantOptions, InvariantReport, ReducedZeta};


/// Default cap on enumerated terms; `PLUMB_TERM_CAP` overrides it.
pub const DEFAULT_TERM_CAP: u64 = 10_000_000;

/// Term cap from the environment, falling back to [`DEFAULT_TERM_CAP`].
pub fn term_cap_from_env() -> u64 {
    std::env::var("PLUMB_TERM_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_TERM_CAP)
}
