//! Exact arithmetic for Drinfeld modules over A = F_q[T]: cusp expansions of
//! lattice invariants, cyclic sublattices and rank-2 modular polynomials.

pub mod algebra;
pub mod error;

pub use error::{Error, Result};
pub mod invariant;
pub mod tau;
pub mod bridge;
pub mod expansion;
pub mod lattice;
pub mod modpoly;
