//! Text reports of verified facts, written as TOML.

use qdist_core::adversary::{
    build_witness, difference_identity_residual, lower_bound_certificate, optimal_weights, states_for,
    LowerBoundCertificate,
};
use qdist_core::distributions::{metrics, ProbDist};
use qdist_core::oracles::GarbageSpec;
use qdist_core::TOL;
use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub alphabet: usize,
    pub garbage_dim: usize,
    pub hellinger: f64,
    pub weights: Vec<f64>,
    /// `sum c (p - q)` after orientation.
    pub gap: f64,
    pub u_p: f64,
    pub u_q: f64,
    pub norm_v_p: f64,
    pub norm_v_q: f64,
    pub objective: f64,
    pub objective_times_hellinger: f64,
    /// Feasibility residual of the witness.
    pub residual: f64,
    /// Largest residual of the per-symbol difference identity.
    pub difference_identity: f64,
    pub verified: bool,
}

impl WitnessReport {
    pub fn new(p: &ProbDist, q: &ProbDist, garbage_p: &GarbageSpec, garbage_q: &GarbageSpec) -> Result<Self> {
        let gp = garbage_p.states(p.alphabet_size())?;
        let gq = garbage_q.states(q.alphabet_size())?;
        let c = optimal_weights(p, q)?;
        let w = build_witness(p, q, &gp, &gq, &c)?;
        let residual = w.residual(&states_for(&w.layout, p, &gp), &states_for(&w.layout, q, &gq))?;
        let difference_identity = p
            .probs()
            .iter()
            .zip(q.probs())
            .zip(gp.iter().zip(&gq))
            .map(|((&pa, &qa), (ga, ha))| difference_identity_residual(pa, qa, ga, ha))
            .fold(0.0, f64::max);
        let hellinger = metrics(p, q)?.hellinger;
        let objective_times_hellinger = w.objective * hellinger;
        let verified = residual <= TOL && difference_identity <= TOL && objective_times_hellinger <= 2f64.sqrt() + TOL;
        Ok(WitnessReport {
            alphabet: p.alphabet_size(),
            garbage_dim: garbage_p.dim,
            hellinger,
            gap: w.gap,
            u_p: w.u_p,
            u_q: w.u_q,
            norm_v_p: w.v_p.norm(),
            norm_v_q: w.v_q.norm(),
            objective: w.objective,
            objective_times_hellinger,
            residual,
            difference_identity,
            verified,
            weights: w.weights,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorSection {
    pub n: usize,
    pub dim: usize,
    pub overlap: f64,
    pub norm: f64,
    /// `|Gamma o Delta_j|` per coordinate.
    pub masked_norms: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub alphabet: usize,
    pub alpha: f64,
    pub norm_g: f64,
    pub norm_g_hadamard_delta: f64,
    pub masked_bound: f64,
    pub image_residual: f64,
    pub s_p: f64,
    pub s_q: f64,
    pub tau: f64,
    pub ratio: f64,
    pub verified: bool,
    /// Row-major entries of `G`.
    pub g: Vec<Vec<f64>>,
    pub tensor: Option<TensorSection>,
}

impl CertificateReport {
    pub fn new(p: &ProbDist, q: &ProbDist, n: usize, s_p: f64, s_q: f64) -> Result<Self> {
        Ok(Self::from_certificate(p.alphabet_size(), &lower_bound_certificate(p, q, n, s_p, s_q)?))
    }

    pub fn from_certificate(alphabet: usize, c: &LowerBoundCertificate) -> Self {
        CertificateReport {
            alphabet,
            alpha: c.alpha,
            norm_g: c.norm_g,
            norm_g_hadamard_delta: c.norm_g_hadamard_delta,
            masked_bound: c.masked_bound,
            image_residual: c.image_residual,
            s_p: c.value.s_p,
            s_q: c.value.s_q,
            tau: c.value.tau,
            ratio: c.value.ratio,
            verified: c.holds(TOL),
            g: c.g.row_iter().map(|r| r.iter().copied().collect()).collect(),
            tensor: c.tensor.as_ref().map(|t| TensorSection {
                n: t.n,
                dim: t.dim,
                overlap: t.overlap,
                norm: t.norm,
                masked_norms: t.coordinates.iter().map(|c| c.masked_norm).collect(),
            }),
        }
    }
}

pub fn to_toml<T: Serialize>(report: &T) -> String {
    toml::to_string(report).expect("reports contain only finite numbers, strings and arrays")
}
