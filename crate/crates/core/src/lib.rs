//! Exact chromatic symmetric functions of (3+1)-free posets.
//!
//! The crate is organised bottom-up:
//!
//! - [`symfunc`]: integer partitions and sparse rational symmetric functions in
//!   the monomial and elementary bases.
//! - [`poset`]: finite posets, induced-pattern tests, canonical keys and
//!   enumeration up to isomorphism.
//! - [`listing`]: part listings, the listing-to-poset construction and the
//!   poset-preserving rewrites (commutation, circulation, combination, peeling).
//! - [`csf`]: chromatic symmetric functions of posets, graphs and listings.
//! - [`modular`]: the modular law, probability functionals, udu/dud vectors and
//!   the reduction and 3-free expansion algorithms built on them.
//! - [`verify`]: batch harnesses over whole poset classes.

pub mod csf;
pub mod error;
pub mod listing;
pub mod modular;
pub mod poset;
pub mod symfunc;
pub mod verify;

pub use csf::{csf_graph, csf_lin, csf_listing, csf_poset, verify_modular, CsfCache, SimpleGraph};
pub use error::{Error, Result};
pub use listing::{BicolouredGraph, LinListing, Part, PartListing, Rewritten};
pub use modular::{FunctionalVector, GraphKey, LinGraph};
pub use poset::{CanonicalKey, Poset, PosetClass};
pub use symfunc::{partitions_of, Basis, Partition, Rational, SymFunc};
pub use verify::{Reductions, VerificationReport};
