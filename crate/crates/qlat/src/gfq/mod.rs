//! Finite-field scalar and matrix kernel.
//!
//! Everything downstream (lattice enumeration, family construction,
//! intersection checks) reduces to three primitives implemented here:
//! arithmetic in `F_q` for small prime powers, reduced row echelon form,
//! and the derived meet/join/containment operations on subspaces given
//! by canonical bases.

mod field;
mod matrix;
mod subspace;

pub use field::{field_make, FieldDesc, SUPPORTED_ORDERS};
pub use matrix::{rref, Matrix};
pub use subspace::{contains, dim_meet, join, meet, Subspace};

use thiserror::Error;

/// Largest ambient dimension the kernel accepts. Row codes are packed
/// into a single `u64` as base-q digits, which caps `n` well below what
/// any enumeration budget would allow anyway.
pub const MAX_AMBIENT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfqError {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("field order {0} is outside the supported set {SUPPORTED_ORDERS:?}")]
    UnsupportedOrder(u64),
    #[error("matrix entry {value} at ({row}, {col}) is not an element of F_{q}")]
    InvalidEntry { row: usize, col: usize, value: u8, q: u64 },
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("ambient dimension {0} exceeds the supported maximum {MAX_AMBIENT}")]
    AmbientTooLarge(usize),
}
