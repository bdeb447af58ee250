//! Exact and truncated-series computations for Seifert fibered 3-manifolds.
//!
//! The crate is organised around five pieces:
//!
//! * [`lie`]: root systems, the fundamental alcove and conjugacy-class arithmetic
//!   for compact simply connected simple groups, including the `Δ` function.
//! * [`seifert`]: Seifert invariants, the finite label set of the irreducible
//!   character variety, component dimensions and the torsion prefactor
//!   relating the Reidemeister density to the Liouville measure.
//! * [`torsion`]: Reidemeister torsion of based chain complexes and the
//!   determinant-line calculus for short exact sequences.
//! * [`volumes`]: Witten-type character sums for symplectic volumes, Reidemeister
//!   volumes of Seifert components and the abelian `U(1)` case.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod error;
pub mod exec;
pub mod lie;
pub mod linalg;
pub mod seifert;
pub mod torsion;
pub mod volumes;

pub use error::{Error, Result};
pub use exec::ExecMode;
