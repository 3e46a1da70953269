
#[allow(unused_imports)] // std's inherent methods win when std is in the graph
use num_traits::Float;
use super::linalg::{signed_phase, unitary_eigen, Projector, StateVector};
use crate::{Error, Result, TOL};

/// Outcome of one effective spectral gap check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EsglReport {
    /// `|| P_delta Pi_B w ||`.
    pub lhs: f64,
    /// `(delta / 2) ||w||`.
    pub bound: f64,
    pub holds: bool,
}

/// Checks `|| P_delta Pi_B w || <= (delta/2) ||w||` for `w` in the kernel of
/// `Pi_A`, where `P_delta` projects onto the eigenvectors of
/// `(2 Pi_B - I)(2 Pi_A - I)` with eigenphase `|theta| <= delta`.
pub fn esgl_check(pi_a: &Projector, pi_b: &Projector, w: &StateVector, delta: f64) -> Result<EsglReport> {
    let n = pi_a.dim();
    if pi_b.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: pi_b.dim() });
    }
    if w.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: w.dim() });
    }
    if !(delta >= 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("delta must be nonnegative, got {delta}")));
    }
    let w_norm = w.norm();
    let residual = pi_a.apply(w.amps())?.norm();
    if residual > TOL * w_norm.max(1.0) {
        return Err(Error::NotInKernel { residual });
    }
    let walk = pi_b.reflection().compose(&pi_a.reflection())?;
    let eig = unitary_eigen(walk.matrix())?;
    let projected = pi_b.apply(w.amps())?;
    let coeffs = eig.vectors.adjoint() * projected;
    let lhs = eig
        .phases
        .iter()
        .zip(coeffs.iter())
        .filter(|(theta, _)| signed_phase(**theta).abs() <= delta)
        .map(|(_, c)| c.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let bound = 0.5 * delta * w_norm;
    Ok(EsglReport { lhs, bound, holds: lhs <= bound + TOL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::stream_rng;
    use crate::qcore::linalg::{haar_state, CVector};
    use alloc::vec::Vec;
    use core::f64::consts::PI;
    use rand::Rng;

    fn random_projector<R: Rng>(dim: usize, rank: usize, rng: &mut R) -> Projector {
        let vs: Vec<CVector> = (0..rank).map(|_| haar_state(dim, rng).into_amps()).collect();
        Projector::onto_span(dim, &vs).unwrap()
    }

    fn kernel_vector<R: Rng>(pi: &Projector, rng: &mut R) -> StateVector {
        let v = haar_state(pi.dim(), rng).into_amps();
        StateVector::unnormalized(pi.complement().apply(&v).unwrap())
    }

    #[test]
    fn equal_projectors_give_zero() {
        let mut rng = stream_rng(1, 0);
        let pi = random_projector(6, 3, &mut rng);
        let w = kernel_vector(&pi, &mut rng);
        let r = esgl_check(&pi, &pi, &w, 0.3).unwrap();
        assert!(r.lhs < 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn full_circle_bounds_by_norm() {
        let mut rng = stream_rng(2, 0);
        let a = random_projector(8, 3, &mut rng);
        let b = random_projector(8, 4, &mut rng);
        let w = kernel_vector(&a, &mut rng);
        let r = esgl_check(&a, &b, &w, 2.0 * PI).unwrap();
        let pb = b.apply(w.amps()).unwrap().norm();
        assert!((r.lhs - pb).abs() < 1e-9);
        assert!(r.holds && r.bound >= w.norm());
    }

    #[test]
    fn precondition_is_reported() {
        let mut rng = stream_rng(3, 0);
        let a = random_projector(5, 2, &mut rng);
        let w = haar_state(5, &mut rng);
        assert!(matches!(esgl_check(&a, &a, &w, 0.1), Err(Error::NotInKernel { .. })));
        let w = kernel_vector(&a, &mut rng);
        assert!(esgl_check(&a, &a, &w, -0.1).is_err());
    }

    #[test]
    fn random_instances_hold() {
        let mut rng = stream_rng(4, 0);
        for i in 0..100 {
            let dim = rng.random_range(2..=32);
            let a = random_projector(dim, rng.random_range(1..dim), &mut rng);
            let b = random_projector(dim, rng.random_range(1..dim), &mut rng);
            let w = kernel_vector(&a, &mut rng);
            let delta = [0.01, 0.1, 0.5][i % 3];
            let r = esgl_check(&a, &b, &w, delta).unwrap();
            assert!(r.holds, "instance {i}: {r:?}");
        }
    }
}
