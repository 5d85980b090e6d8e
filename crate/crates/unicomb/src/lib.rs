//! Combinatorics of unitary simple modules over cyclotomic quiver Hecke and
//! rational Cherednik algebras: partitions and residues, alcove geometry,
//! abacus calculus, standard tableaux, BGG-style resolutions with explicit
//! diamond signs, Mullineux maps, and graded Betti invariants of e-equals
//! subspace arrangements.

pub mod abacus;
pub mod alcove;
pub mod bgg;
pub mod comm_alg;
pub mod partition_core;
pub mod simple_modules;
pub mod tableaux;

pub use partition_core::{ChargeContext, Multipartition, Node, Partition};

/// Error taxonomy shared by every module.
///
/// `Parse` covers malformed literals, `Domain` covers well-formed input
/// outside an operation's precondition, `Internal` covers broken invariants
/// that indicate a bug (these are never silently absorbed).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
