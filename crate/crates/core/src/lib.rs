//! Mechanical checks for elementary subalgebras of submaximal rank in the
//! nilradical of `sl_{n+1}` over `F_p`.
//!
//! The crate is organised bottom-up:
//!
//! * [`roots`]: type-A positive roots, root sets, the symmetric-group action.
//! * [`ordering`]: reverse-lexicographic total orders on `Φ⁺`.
//! * [`commuting`]: commuting root subsets, `p`-rank, the maximal-subset tables.
//! * [`field`], [`nilradical`]: `F_p` arithmetic and the Lie algebra `u`.
//! * [`subspace`]: echelon forms, leading terms, centralizers, maximality.
//! * [`actions`]: `exp(ad)`, torus and Weyl automorphisms, conjugacy search.
//! * [`solver`]: exhaustive LT-fiber solving and sampled lemma checks.
//! * [`cli`]: the `submax-lie` command line.

pub mod actions;
pub mod cli;
pub mod commuting;
pub mod error;
pub mod field;
pub mod nilradical;
pub mod ordering;
pub mod report;
pub mod roots;
pub mod solver;
pub mod subspace;
pub mod verify;

pub use error::{Error, Result};
