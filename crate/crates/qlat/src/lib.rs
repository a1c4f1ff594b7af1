//! Exact-arithmetic toolkit for subspace lattices over small finite fields.
//!
//! The crate materializes the k-subspace lattices of `F_q^n` at desk scale,
//! evaluates Gaussian-binomial counting formulas in arbitrary precision,
//! builds the named intersecting-family constructions, and verifies their
//! intersection properties, covering numbers, size formulas, and the
//! inequality sweeps the `audit` module registers. Everything is exact:
//! no floating point appears anywhere in a computation or a report.

pub mod audit;
pub mod cli;
pub mod families;
pub mod gfq;
pub mod lattice;
pub mod qcount;
pub mod search;
pub mod verify;

pub use gfq::{FieldDesc, Matrix, Subspace};
pub use qcount::CountValue;
