//! Reidemeister torsion of based chain complexes and the determinant-line
//! calculus of short exact sequences.
//!
//! Torsion is only defined up to sign, so every value here is a magnitude.
//! Exact computations use `BigRational` scalars; the same code runs on `f64`
//! with a rank tolerance.

mod calculus;
mod complex;
pub mod format;
mod gluing;
pub mod suite;

pub use calculus::{
    circle_torsion, exact_sequence_det, kunneth_torsion, mv_torsion_compose, seifert_mv_scalar, CircleTorsion,
};
pub use complex::{chain_torsion, BasedChainComplex, HomologyBasis};
pub use gluing::GluingModel;

use crate::linalg::{powi, Field};

/// Magnitude of a torsion. `sign_defined` is always false: the sign depends
/// on orderings of bases that carry no meaning here.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionValue<T = f64> {
    pub magnitude: T,
    pub sign_defined: bool,
}

impl<T: Field> TorsionValue<T> {
    pub fn new(value: T) -> Self {
        TorsionValue {
            magnitude: value.abs_val(),
            sign_defined: false,
        }
    }

    pub fn one() -> Self {
        Self::new(T::one())
    }

    pub fn to_f64(&self) -> TorsionValue<f64> {
        TorsionValue {
            magnitude: self.magnitude.to_f64(),
            sign_defined: self.sign_defined,
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        Self::new(powi(&self.magnitude, e))
    }
}
