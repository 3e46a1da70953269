use super::linalg::{Projector, StateVector, UnitaryMatrix};
use crate::{Error, Result};

/// Amplitude amplification of `setup * e0` towards the range of `target`.
///
/// Each round applies `-setup S_0 setup^* S_target`, with `S_0 = I - 2 e0 e0^*`
/// and `S_target = I - 2 target`. If `setup e0` has target amplitude
/// `sin(alpha)`, the result has target amplitude `sin((2 rounds + 1) alpha)`.
///
/// `charge` receives 1 for the initial application of `setup` and 2 per round.
pub fn amplitude_amplify(
    setup: &UnitaryMatrix,
    target: &Projector,
    rounds: usize,
    charge: &mut dyn FnMut(u64),
) -> Result<StateVector> {
    let n = setup.dim();
    if target.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: target.dim() });
    }
    let a = setup.matrix();
    let a_adj = a.adjoint();
    let mut state = a.column(0).into_owned();
    charge(1);
    for _ in 0..rounds {
        let flagged = target.matrix() * &state;
        state -= flagged.scale(2.0);
        state = &a_adj * &state;
        state[0] = -state[0];
        state = a * &state;
        state.neg_mut();
        charge(2);
    }
    StateVector::normalize(state)
}

/// `|| target * state ||^2`.
pub fn target_probability(state: &StateVector, target: &Projector) -> Result<f64> {
    Ok(target.apply(state.amps())?.norm_squared())
}
