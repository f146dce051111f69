//! Closure operators on small finite ground sets.
//!
//! Build operators ([`constructors`]), measure them with the four rank
//! functions ([`ranks`]), assign coding functions made of partitions
//! ([`coding`]), bound their entropy by an exact rational LP ([`shannon`]),
//! and turn arbitrary set maps into equivalent closure operators
//! ([`reduction`]).
//!
//! The crate is `no_std` and only needs `alloc`. Subsets of `V = {1..n}`
//! are bitmasks ([`Subset`]); exhaustive sweeps are capped at
//! [`closure::TABLE_MAX_N`] vertices.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod closure;
pub mod coding;
pub mod constructors;
pub mod error;
pub mod lp;
pub mod partition;
pub mod ranks;
pub mod reduction;
pub mod shannon;
pub mod subset;

pub use closure::{
    closed_sets, closure_of, operator_le, rank_and_bases, validate_closure, Axiom,
    ClosureOperator, ValidationReport,
};
pub use error::{Error, Result};
pub use num_rational::BigRational;
pub use subset::Subset;
