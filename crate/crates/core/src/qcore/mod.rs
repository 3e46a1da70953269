//! Dense complex linear algebra plus the two primitives the discriminators
//! are built from: phase estimation and amplitude amplification.
//!
//! Query accounting is not done here. Every primitive that applies a
//! caller-supplied operator takes a `charge` callback and reports how many
//! (controlled) applications it made, so the caller can bill the oracle that
//! the operator wraps.

mod amplify;
mod esgl;
mod fft;
pub mod linalg;
mod phase;

pub use amplify::{amplitude_amplify, target_probability};
pub use esgl::{esgl_check, EsglReport};
pub use linalg::{CMatrix, CVector, Projector, StateVector, UnitaryMatrix, C64};
pub use phase::{
    circular_median, phase_estimate, PhaseDistribution, PhaseEstimateResult, PhaseEstimation, PhaseMode,
};

use crate::{Error, Result};

/// `2 P - I` for `P` the orthogonal projector onto the span of `vectors`.
///
/// An empty list yields `-I`.
pub fn reflect_about_span(dim: usize, vectors: &[StateVector]) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let raw: alloc::vec::Vec<CVector> = vectors
        .iter()
        .map(|v| {
            if v.dim() != dim {
                Err(Error::DimensionMismatch { expected: dim, found: v.dim() })
            } else {
                Ok(v.amps().clone())
            }
        })
        .collect::<Result<_>>()?;
    Ok(Projector::onto_span(dim, &raw)?.reflection())
}
