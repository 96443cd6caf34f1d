//! G-stable pieces of the varieties `Z_{J,y,delta}` and of the wonderful
//! completion of a (possibly twisted) reductive group, computed from Weyl
//! group combinatorics and checked against brute force over small finite
//! fields.
//!
//! * [`weyl`]: finite Weyl groups, parabolic cosets, order polynomials.
//! * [`pieces`]: the piece descriptors of `Z_{J,y,delta}` and their point counts.
//! * [`glmodel`]: filtrations over `F_q` and the explicit `GL(V)` model.
//! * [`wonderful`]: the table of pieces of the completion.

pub mod glmodel;
pub mod pieces;
pub mod poly;
pub mod weyl;
pub mod wonderful;

pub use poly::{CountPolynomial, PolyError};
pub use weyl::{AdImage, NodeSubset, Side, WeylDatum, WeylElement, WeylError};
