//! Amplitude amplification on `U O`, where `U` rotates `mu_p` onto `|0>` and
//! `mu_q` into the plane of `|0>, |1>`. A `P` oracle never populates `|1>`.

#[allow(unused_imports)] // std's inherent methods win when std is in the graph
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use super::{AlgoParams, DiscriminationInstance, DiscriminationOutcome, Label};
use crate::distributions::{metrics, mu_state};
use crate::oracles::{embed, Model};
use crate::qcore::linalg::{basis_vector, complete_basis, orthonormalize, RANK_TOL};
use crate::qcore::{amplitude_amplify, target_probability, CVector, Projector, UnitaryMatrix};
use crate::{Error, Result};

/// `round(pi / (4 alpha) - 1/2)`, ties to even.
pub fn model3_rounds(alpha: f64) -> Result<u64> {
    if !(alpha > 0.0) {
        return Err(Error::IdenticalDistributions);
    }
    Ok(round_half_even(PI / (4.0 * alpha) - 0.5).max(0.0) as u64)
}

fn round_half_even(x: f64) -> f64 {
    let r = x.round();
    if (r - x).abs() == 0.5 && r % 2.0 != 0.0 {
        r - x.signum()
    } else {
        r
    }
}

/// Oracle-independent parts of the model (iii) algorithm.
#[derive(Clone, Debug)]
pub struct Model3Plan {
    pub alpha: f64,
    pub rounds: u64,
    /// `U` with `U mu_p = |0>` and `U mu_q = cos(alpha)|0> + sin(alpha)|1>`.
    pub rotation: UnitaryMatrix,
    pub flag: Projector,
}

impl Model3Plan {
    pub fn new(inst: &DiscriminationInstance, params: &AlgoParams) -> Result<Self> {
        inst.require_model(&[Model::StatePrep])?;
        let alpha = metrics(&inst.p, &inst.q)?.angle;
        let rounds = match params.amplification_rounds {
            Some(k) => k,
            None => model3_rounds(alpha)?,
        };
        let mu_p = embed(mu_state(&inst.p).amps());
        let mu_q = embed(mu_state(&inst.q).amps());
        let n = mu_p.len();
        let plane: Vec<CVector> = orthonormalize([&mu_p, &mu_q], RANK_TOL);
        if plane.len() < 2 {
            return Err(Error::IdenticalDistributions);
        }
        let v = complete_basis(n, &plane, RANK_TOL);
        let rotation = UnitaryMatrix::new(v.adjoint())?;
        let flag = Projector::onto_span(n, &[basis_vector(n, 1)])?;
        Ok(Model3Plan { alpha, rounds, rotation, flag })
    }

    /// Closed-form number of oracle applications.
    pub fn queries(&self) -> u64 {
        2 * self.rounds + 1
    }
}

/// Amplifies `|1>` on `U O` and measures the flag. Flag `1` means `Q`.
pub fn discriminate_model3<R: Rng + ?Sized>(
    inst: &mut DiscriminationInstance,
    params: &AlgoParams,
    rng: &mut R,
) -> Result<DiscriminationOutcome> {
    let plan = Model3Plan::new(inst, params)?;
    let oracle = inst.oracle_mut();
    let start = oracle.query_count();
    let setup = plan.rotation.compose(oracle.unitary())?;
    let mut charged = 0;
    let state = amplitude_amplify(&setup, &plan.flag, plan.rounds as usize, &mut |n| charged += n)?;
    oracle.charge(charged);
    let flag_probability = target_probability(&state, &plan.flag)?;
    let flag = rng.random::<f64>() < flag_probability;
    Ok(DiscriminationOutcome {
        decision: if flag { Label::Q } else { Label::P },
        queries_used: oracle.query_count() - start,
        auxiliary: if flag { 1.0 } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{generate, stream_rng, DistFamily, ProbDist};
    use crate::oracles::{Completion, GarbageSpec};
    use alloc::vec;

    fn instance(p: &ProbDist, q: &ProbDist, hidden: Label) -> DiscriminationInstance {
        let g = GarbageSpec::trivial();
        DiscriminationInstance::state_prep(Model::StatePrep, p, q, &g, &g, Completion::Householder, hidden).unwrap()
    }

    #[test]
    fn rounds_formula() {
        assert_eq!(model3_rounds(PI / 6.0).unwrap(), 1);
        assert_eq!(model3_rounds(PI / 4.0).unwrap(), 0);
        assert_eq!(model3_rounds(0.01).unwrap(), 78);
        assert!(model3_rounds(0.0).is_err());
    }

    #[test]
    fn angle_pi_over_six_is_certain() {
        // cos(pi/6)^2 = 3/4 = p_0 overlap with q = (1, 0)
        let p = ProbDist::new(vec![0.75, 0.25]).unwrap();
        let q = ProbDist::new(vec![1.0, 0.0]).unwrap();
        let alpha = metrics(&p, &q).unwrap().angle;
        assert!((alpha - PI / 6.0).abs() < 1e-12);
        let mut rng = stream_rng(1, 0);
        for _ in 0..100 {
            let mut inst = instance(&p, &q, Label::Q);
            let out = discriminate_model3(&mut inst, &AlgoParams::default(), &mut rng).unwrap();
            assert_eq!(out.decision, Label::Q);
            assert_eq!(out.queries_used, 3);
        }
    }

    #[test]
    fn p_instances_are_never_mislabelled() {
        let mut rng = stream_rng(2, 0);
        for fam in [
            DistFamily::Collision { n: 4 },
            DistFamily::Bernoulli { theta_p: 0.5, theta_q: 0.8 },
            DistFamily::Tiered { t: 2 },
        ] {
            let (p, q) = generate(&fam).unwrap();
            for k in 0..6 {
                let params = AlgoParams { amplification_rounds: Some(k), ..AlgoParams::default() };
                let mut inst = instance(&p, &q, Label::P);
                let plan = Model3Plan::new(&inst, &params).unwrap();
                let out = discriminate_model3(&mut inst, &params, &mut rng).unwrap();
                assert_eq!(out.decision, Label::P);
                assert_eq!(out.queries_used, plan.queries());
                assert_eq!(inst.oracle().query_count(), 2 * k + 1);
            }
        }
    }

    #[test]
    fn collision_q_success_is_one_half() {
        let (p, q) = generate(&DistFamily::Collision { n: 4 }).unwrap();
        let inst = instance(&p, &q, Label::Q);
        let plan = Model3Plan::new(&inst, &AlgoParams::default()).unwrap();
        assert_eq!(plan.rounds, 0);
        let setup = plan.rotation.compose(inst.oracle().unitary()).unwrap();
        let state = amplitude_amplify(&setup, &plan.flag, 0, &mut |_| {}).unwrap();
        assert!((target_probability(&state, &plan.flag).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rotation_maps_the_two_states() {
        let (p, q) = generate(&DistFamily::Bernoulli { theta_p: 0.3, theta_q: 0.6 }).unwrap();
        let inst = instance(&p, &q, Label::P);
        let plan = Model3Plan::new(&inst, &AlgoParams::default()).unwrap();
        let up = plan.rotation.apply(&embed(mu_state(&p).amps())).unwrap();
        let uq = plan.rotation.apply(&embed(mu_state(&q).amps())).unwrap();
        assert!((up[0].norm() - 1.0).abs() < 1e-12);
        assert!((uq[0].re - plan.alpha.cos()).abs() < 1e-12);
        assert!((uq[1].norm() - plan.alpha.sin()).abs() < 1e-12);
    }
}
