//! Exact combinatorics for comparable-pair minimization in graded posets.
//!
//! The crate provides two concrete poset realizations (the chain product
//! `{0,..,k}^n` and the subspace lattice of `F_q^n`), family machinery for
//! counting comparable pairs, matching-based compression transforms,
//! exhaustive and heuristic optimizers, symmetric chain decompositions and
//! the explicit families they are compared against.
//!
//! All counts are exact; there is no floating point anywhere in a counting
//! path.

pub mod chain_product;
pub mod compression;
pub mod constructions;
pub mod error;
pub mod family;
pub mod poly;
pub mod poset;
pub mod report;
pub mod search;
pub mod subspace;
pub mod util;

pub use chain_product::{ChainProduct, Comparability, Element, LayerWindow};
pub use error::{Error, Result};
pub use family::Family;
pub use poset::{GradedPoset, PosetTable};
pub use subspace::{Subspace, SubspaceLattice};

/// Arbitrary-precision nonnegative integer used for every count the crate
/// reports: layer sizes, shadow counts, comparable-pair totals, Gaussian
/// binomials.
pub type BigCount = num_bigint::BigUint;
