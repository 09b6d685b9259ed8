//! Combinatorics and certified geometry of ordered ideal triangulations of
//! one-cusped 3-manifolds.
//!
//! The crate decides whether an ideal triangulation admits orders
//! (branchings), builds the face adjacency matrices and the Neumann-Zagier
//! matrices of a peripheral curve, checks the FAMED conditions exactly over
//! the rationals, solves the gluing equations for the complete hyperbolic
//! structure with an interval-arithmetic certificate, and searches the
//! Pachner retriangulation graph for triangulations admitting a FAMED order.
//!
//! Everything here is pure computation over owned data: no IO, no global
//! state. File formats and the command line front end live in the companion
//! `famedkit` crate.
//!
//! The crate is `no_std` (with `alloc`); floating point transcendentals come
//! from `libm` through `num-traits`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod angles;
pub mod cusp;
pub mod exact;
pub mod face_matrices;
pub mod famed;
pub mod geometry;
pub mod homology;
pub mod interval;
pub mod nz;
pub mod ordering;
pub mod pachner;
pub mod perm;
pub mod quotient;
pub mod sample;
pub mod signature;
pub mod tri;

pub use cusp::{CuspTriangulation, HolonomyRow, PeripheralCurve};
pub use face_matrices::FaceMatrices;
pub use famed::{ConjectureDiagnostics, FamedReport};
pub use geometry::{CertifiedBox, ShapeVector};
pub use homology::AbelianGroup;
pub use nz::NZMatrices;
pub use ordering::Order;
pub use pachner::{SearchBudget, SearchResult};
pub use perm::Perm4;
pub use quotient::QuotientComplex;
pub use signature::CanonicalSignature;
pub use tri::{Gluing, IdealTriangulation, Slot, TriError};
