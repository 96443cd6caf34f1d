//! The `GL(V)` model over a prime field.
//!
//! A point of `Z_{J,y,1}` for `G = GL(V)` is a quadruple
//! `(V_*, V'_*, sigma, a)`: two filtrations of `V`, a matching of their blocks,
//! and isomorphisms between matched blocks. Refining a quadruple by the
//! cross filtrations and reading off types and relative positions recovers
//! the piece descriptor of the point. Everything here is exhaustive brute
//! force, meant for `d <= 3` (and `d = 4` at `q = 2`).

mod brute;
mod classify;
mod flag;
mod linalg;
mod quadruple;

pub use brute::{
    brute_force_partition, measure_unipotent_quotient, standard_parabolic, standard_unipotent,
    verify_double_coset, Bucket, Config, DoubleCosetCheck, PartitionReport, DEFAULT_GUARD,
};
pub use classify::{classify_line_hyperplane, classify_line_pair};
pub use flag::{
    block_matrix, count_with_blocks, element_to_perm, gl_datum, perm_matrix, perm_to_element,
    perm_word, rel_pos, rel_pos_perm, Filtration,
};
pub use linalg::{
    general_linear, gl_order, identity, inverse, mat_mul, mat_vec, Field, Matrix, Subquotient,
    Subspace,
};
pub use quadruple::{
    refine, signature, signature_guard, trace, verify_position_product, ModelSignature, Quadruple, Record,
    Trace,
};

use crate::pieces::PieceError;
use crate::weyl::WeylError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GlError {
    #[error("{0} is not a prime below 256")]
    NotPrime(u32),
    #[error("dimension {0} is outside the supported range 2..=8")]
    BadDimension(usize),
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("invalid quadruple: {0}")]
    InvalidQuadruple(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("refinement did not stabilize within {guard} iterations")]
    NoStabilization { guard: usize },
    #[error("{size} objects to enumerate exceeds the guard {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Piece(#[from] PieceError),
}
