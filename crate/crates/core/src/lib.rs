//! Complex conference matrices, complex Hadamard matrices, and the complex
//! equiangular tight frames they generate.
//!
//! The crate builds the classical families around the Paley construction —
//! real symmetric conference matrices of prime-power-plus-one order, their
//! two-parameter complex deformations `C(a,b)`, the doubled Hadamard matrices
//! `H(a,b)`, block-squared Hermitian Hadamard matrices, the explicit
//! parametric conference matrices of orders 6, 10 and 14, and Zauner's
//! character-sum frames — and verifies every defining identity either exactly
//! (symbolic unimodular parameters over Gaussian-integer coefficients) or
//! numerically (complex floats with pinned tolerances).
//!
//! Matrices move between tools as JSON documents; the `cetf` binary exposes
//! the same pipeline as subcommands (`construct`, `verify`, `frame`, `equiv`,
//! `catalog`).

pub mod arith;
pub mod catalog;
pub mod construct;
pub mod error;
pub mod field;
pub mod frame;
pub mod matrix;
pub mod scalar;
pub mod verify;
pub mod zauner;

pub use error::{Error, Result};
pub use matrix::{DesignMatrix, Matrix, MatrixKind, ScalarMode};
pub use scalar::{Assignment, GaussianInt, Param, SymExpr};
