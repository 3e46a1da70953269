//! Rejection sampling followed by amplitude estimation.
//!
//! One oracle call and a controlled rotation produce a flag qubit that reads
//! `1` with probability `S = sum_a c_a |block_a|^2`, which is `S_p` or `S_q`.
//! Amplitude estimation with `M` evaluation points then separates the two.
//! The estimate is sampled from its exact outcome distribution.

#[allow(unused_imports)] // std's inherent methods win when std is in the graph
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use super::{DiscriminationInstance, DiscriminationOutcome, Label};
use crate::adversary::weighted_gap;
use crate::distributions::{check_alphabets, compensated_sum, ProbDist};
use crate::oracles::{Model, RegisterLayout};
use crate::qcore::linalg::basis_vector;
use crate::{Error, Result};

/// Default `kappa_ae` in `M = ceil(kappa_ae sqrt(S_p) / (S_p - S_q))`.
pub const DEFAULT_AE_CONSTANT: f64 = 2.0 * PI;

/// Zeroes the weights of symbols with `p_a < q_a`.
pub fn restrict_weights(p: &ProbDist, q: &ProbDist, c: &[f64]) -> Vec<f64> {
    c.iter().zip(p.probs().iter().zip(q.probs())).map(|(&c, (p, q))| if p >= q { c } else { 0.0 }).collect()
}

/// `c_a = 1` where `p_a > q_a`, else 0.
pub fn indicator_weights(p: &ProbDist, q: &ProbDist) -> Vec<f64> {
    p.probs().iter().zip(q.probs()).map(|(p, q)| if p > q { 1.0 } else { 0.0 }).collect()
}

/// `sqrt(sum c p) / sum c (p - q)`.
pub fn rejection_sampling_cost(p: &ProbDist, q: &ProbDist, c: &[f64]) -> Result<f64> {
    let plan = StandardPlan::new(p, q, c, DEFAULT_AE_CONSTANT)?;
    Ok(plan.s_p.sqrt() / (plan.s_p - plan.s_q))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StandardPlan {
    /// Weights after restriction to `p_a >= q_a`.
    pub weights: Vec<f64>,
    pub s_p: f64,
    pub s_q: f64,
    /// Number of amplitude-estimation points.
    pub points: u64,
}

impl StandardPlan {
    pub fn new(p: &ProbDist, q: &ProbDist, c: &[f64], ae_constant: f64) -> Result<Self> {
        check_alphabets(p, q)?;
        if c.len() != p.alphabet_size() {
            return Err(Error::DimensionMismatch { expected: p.alphabet_size(), found: c.len() });
        }
        if let Some(&x) = c.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidParameter(alloc::format!("weight {x} outside [0, 1]")));
        }
        if !(ae_constant > 0.0) {
            return Err(Error::InvalidParameter("amplitude-estimation constant must be positive".into()));
        }
        let weights = restrict_weights(p, q, c);
        let s_p = compensated_sum(weights.iter().zip(p.probs()).map(|(c, p)| c * p));
        let s_q = compensated_sum(weights.iter().zip(q.probs()).map(|(c, q)| c * q));
        let gap = weighted_gap(p, q, &weights);
        if !(gap > 0.0) {
            return Err(Error::DegenerateWitness { overlap: gap });
        }
        let points = ((ae_constant * s_p.sqrt() / gap).ceil() as u64).max(2);
        Ok(StandardPlan { weights, s_p, s_q, points })
    }

    /// `2 M - 1`: one preparation plus `M - 1` Grover steps of two calls each.
    pub fn queries(&self) -> u64 {
        2 * self.points - 1
    }

    pub fn threshold(&self) -> f64 {
        0.5 * (self.s_p + self.s_q)
    }
}

/// Fejer kernel `sin^2(M x / 2) / (M^2 sin^2(x / 2))`.
fn fejer(m: f64, x: f64) -> f64 {
    let s = (0.5 * x).sin();
    if s.abs() < 1e-300 {
        return 1.0;
    }
    let t = (0.5 * m * x).sin();
    (t * t) / (m * m * s * s)
}

/// Exact distribution of the amplitude-estimation outcome `y` in `0..M` for
/// flag probability `a`; `y` reports `sin^2(pi y / M)`.
pub fn amplitude_estimation_distribution(a: f64, points: u64) -> Vec<f64> {
    let theta = a.clamp(0.0, 1.0).sqrt().asin();
    let m = points as f64;
    (0..points)
        .map(|y| {
            let phi = 2.0 * PI * y as f64 / m;
            0.5 * (fejer(m, 2.0 * theta - phi) + fejer(m, -2.0 * theta - phi))
        })
        .collect()
}

/// Runs the standard method with weights `c` in `[0, 1]`.
pub fn standard_method<R: Rng + ?Sized>(
    inst: &mut DiscriminationInstance,
    c: &[f64],
    ae_constant: f64,
    rng: &mut R,
) -> Result<DiscriminationOutcome> {
    inst.require_model(&[Model::StatePrepGarbage, Model::StatePrep, Model::Frequency, Model::Iid])?;
    let plan = StandardPlan::new(&inst.p, &inst.q, c, ae_constant)?;
    let layout = inst.layout();
    let oracle = inst.oracle_mut();
    let start = oracle.query_count();
    let prepared = oracle.apply(&basis_vector(layout.dim(), 0))?;
    let blocks = match layout {
        RegisterLayout::StatePrep { .. } => layout.block_weights(&prepared),
        RegisterLayout::QueryAnswer { .. } => {
            return Err(Error::InvalidParameter("the standard method needs a state-preparation oracle".into()))
        }
    };
    let flag = compensated_sum(plan.weights.iter().zip(&blocks).map(|(c, b)| c * b));
    // The remaining M - 1 controlled Grover steps.
    oracle.charge(plan.queries() - 1);
    let probs = amplitude_estimation_distribution(flag, plan.points);
    let total: f64 = probs.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut y = probs.len() - 1;
    for (i, p) in probs.iter().enumerate() {
        u -= p;
        if u < 0.0 {
            y = i;
            break;
        }
    }
    let estimate = (PI * y as f64 / plan.points as f64).sin().powi(2);
    Ok(DiscriminationOutcome {
        decision: if estimate >= plan.threshold() { Label::P } else { Label::Q },
        queries_used: oracle.query_count() - start,
        auxiliary: estimate,
    })
}
