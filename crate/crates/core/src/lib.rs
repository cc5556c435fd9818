//! Group shifts over finite abelian groups.
//!
//! The crate represents closed shift-invariant subgroups of `H^Z` by finite
//! generator words and answers structural questions about them on explicit
//! finite windows: controllability indices, canonical generating sets with
//! heights, and homomorphic encoders from full group shifts together with a
//! conjugacy certificate.
//!
//! Everything here is pure computation over `alloc`; parsing, reports and the
//! command line live in the companion `groupshift-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod canonical;
pub mod certify;
pub mod control;
pub mod derived;
pub mod encoder;
pub mod group;
pub mod horizon;
pub mod oracle;
pub mod ring;
pub mod shift;
pub mod word;

pub use group::{FiniteAbelianGroup, GroupElement, Height, PrimaryComponent, PrimaryFactor};
pub use ring::{HowellForm, ResidueMatrix, ResidueVector};
pub use shift::{GroupShift, Membership, WindowModule};
pub use word::Word;
