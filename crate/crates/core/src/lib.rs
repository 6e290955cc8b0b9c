#![no_std]
#![allow(clippy::needless_range_loop)]
//! Exact computations for genus-5 fibrations cut out by 5x5 Pfaffians in a
//! rational normal scroll over the projective line.

extern crate alloc;

pub mod base;
pub mod cohomology;
pub mod fiber;
pub mod grading;
pub mod horikawa;
pub mod linalg;
pub mod pfaffian;
pub mod poly;
pub mod scalar;
pub mod unipoly;

pub use base::{BasePlace, BasePoint};
pub use linalg::{FieldMatrix, PolyMatrix};
pub use poly::{AmbientWeights, Bidegree, Monomial, Polynomial};
pub use scalar::{FieldMode, Scalar};
pub use unipoly::{Place, UniPoly};
