//! Phase estimation on `U = (2 Lambda - I)(2 Pi_z - I)` for state-preparation
//! oracles with garbage.
//!
//! The workspace is `A (+) B (x) C (x) X` with `A` one-dimensional and `B`,
//! `C` qubits; `X` is the oracle register. Index 0 is `|0>_A` and
//! `|b>|c>|x>` sits at `1 + (2b + c) dim(X) + x`.
//!
//! For the `P` oracle `O` with witness `(u, v)` and `s = epsilon / sqrt(T)`,
//!
//! ```text
//! mu = |0>_A + s (|00> O* v + |01> v + |10> u e0 + |11> u psi)
//! ```
//!
//! is fixed by both reflections. For the `Q` oracle the vector
//!
//! ```text
//! w = |0>_A - (1/s) (|00> u' e0 - |01> u' phi - |10> O'* v' + |11> v')
//! ```
//!
//! is orthogonal to `mu` and satisfies `Pi w = |0>_A`, which bounds the
//! small-phase mass of `|0>_A`.

#[allow(unused_imports)] // std's inherent methods win when std is in the graph
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{AlgoParams, DiscriminationInstance, DiscriminationOutcome, Label, LambdaPath};
use crate::adversary::{build_witness, optimal_weights, states_for, Gamma2Witness};
use crate::distributions::{compensated_sum, ProbDist};
use crate::oracles::{GarbageSpec, Model, RegisterLayout};
use crate::qcore::linalg::{basis_vector, circular_distance, outer, real, CMatrix};
use crate::qcore::{circular_median, CVector, PhaseDistribution, PhaseEstimation, PhaseMode, StateVector, UnitaryMatrix};
use crate::{Error, Result, TOL};

pub const DEFAULT_EPSILON: f64 = 0.5;
pub const DEFAULT_KAPPA: f64 = 4.0;
pub const DEFAULT_ROUNDS: usize = 15;

/// Workspace index of `|b>|c>|x>`.
fn bcx(dx: usize, b: usize, c: usize, x: usize) -> usize {
    1 + (2 * b + c) * dx + x
}

fn place(target: &mut CVector, dx: usize, b: usize, c: usize, x: &CVector, scale: f64) {
    for i in 0..dx {
        target[bcx(dx, b, c, i)] += x[i] * scale;
    }
}

/// Everything the model (iv) algorithm builds before touching the hidden oracle.
#[derive(Clone, Debug)]
pub struct Model4Operators {
    pub witness: Gamma2Witness,
    pub layout: RegisterLayout,
    /// Dimension of the full workspace, `1 + 4 dim(X)`.
    pub dim: usize,
    /// `epsilon / sqrt(T)`.
    pub scale: f64,
    /// Phase-estimation precision `kappa epsilon^2 / T`.
    pub delta: f64,
    /// Orthonormal basis of the positive witness space.
    pub lambda_basis: Vec<CVector>,
    /// The positive witness vector of the known `P` candidate, if any.
    pub mu: Option<CVector>,
    pub estimation: PhaseEstimation,
}

impl Model4Operators {
    pub fn new(inst: &DiscriminationInstance, params: &AlgoParams) -> Result<Self> {
        params.validate()?;
        inst.require_model(&[Model::StatePrepGarbage, Model::Frequency, Model::Iid])?;
        let layout = inst.layout();
        let RegisterLayout::StatePrep { alphabet, garbage_dim } = layout else {
            return Err(Error::InvalidParameter("model (iv) needs a state-preparation layout".into()));
        };
        let c = optimal_weights(&inst.p, &inst.q)?;
        let (garbage_p, garbage_q) = match (&inst.candidates, params.lambda_path) {
            (Some(k), _) => (k.garbage_p.clone(), k.garbage_q.clone()),
            (None, LambdaPath::Block) => {
                let g = GarbageSpec::trivial_dim(garbage_dim);
                (g.states(alphabet)?, g.states(alphabet)?)
            }
            (None, LambdaPath::Span) => {
                return Err(Error::InvalidParameter("the span path needs the P candidate oracle".into()))
            }
        };
        let witness = build_witness(&inst.p, &inst.q, &garbage_p, &garbage_q, &c)?;
        let t = witness.objective;
        let scale = params.epsilon / t.sqrt();
        let delta = params.kappa * params.epsilon * params.epsilon / t;
        let dx = layout.dim();
        let dim = 1 + 4 * dx;

        let mu = inst
            .candidates
            .as_ref()
            .map(|k| positive_vector(&witness, k.oracle_p.unitary(), &k.oracle_p.prepared_state(), scale));
        let lambda_basis = match params.lambda_path {
            LambdaPath::Span => {
                let mu = mu.as_ref().expect("checked above");
                vec![mu.unscale(mu.norm())]
            }
            LambdaPath::Block => block_basis(&inst.p, &witness, scale, alphabet, garbage_dim),
        };
        let estimation = PhaseEstimation { rounds: params.rounds, ..PhaseEstimation::default() };
        Ok(Model4Operators { witness, layout, dim, scale, delta, lambda_basis, mu, estimation })
    }

    /// `2 Lambda - I`.
    pub fn lambda_reflection(&self) -> CMatrix {
        let mut r = -CMatrix::identity(self.dim, self.dim);
        for b in &self.lambda_basis {
            r += outer(b, b) * real(2.0);
        }
        r
    }

    /// Orthogonal projector onto the positive witness space.
    pub fn lambda_projector(&self) -> CMatrix {
        let mut r = CMatrix::zeros(self.dim, self.dim);
        for b in &self.lambda_basis {
            r += outer(b, b);
        }
        r
    }

    /// `2 Pi_z - I = I_A (+) I_B (x) [[0, O*], [O, 0]]`.
    pub fn pi_reflection(&self, oracle: &UnitaryMatrix) -> CMatrix {
        let dx = self.layout.dim();
        let o = oracle.matrix();
        let mut r = CMatrix::zeros(self.dim, self.dim);
        r[(0, 0)] = real(1.0);
        for b in 0..2 {
            let c0 = bcx(dx, b, 0, 0);
            let c1 = bcx(dx, b, 1, 0);
            r.view_mut((c1, c0), (dx, dx)).copy_from(o);
            r.view_mut((c0, c1), (dx, dx)).copy_from(&o.adjoint());
        }
        r
    }

    /// `Pi_z` as a projector.
    pub fn pi_projector(&self, oracle: &UnitaryMatrix) -> CMatrix {
        (self.pi_reflection(oracle) + CMatrix::identity(self.dim, self.dim)) * real(0.5)
    }

    /// The walk operator for oracle `O`.
    pub fn walk(&self, oracle: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix::from_parts(self.lambda_reflection() * self.pi_reflection(oracle))
    }

    /// Outcome distribution of one phase-estimation run from `|0>_A`.
    pub fn outcome_distribution(&self, oracle: &UnitaryMatrix) -> Result<PhaseDistribution> {
        let start = StateVector::basis(self.dim, 0)?;
        self.estimation.outcome_distribution(&self.walk(oracle), &start, self.delta)
    }

    /// Queries charged by one discrimination run: two per walk step.
    pub fn queries(&self) -> u64 {
        2 * self.estimation.budget(self.delta)
    }

    /// Acceptance threshold on the circular distance of the phase from 0.
    pub fn threshold(&self) -> f64 {
        0.5 * self.delta
    }

    /// Fraction of `trials` independent discrimination runs on `oracle` that
    /// decide `P`. The outcome distribution is computed once and reused.
    pub fn acceptance_rate<R: Rng + ?Sized>(&self, oracle: &UnitaryMatrix, trials: u32, rng: &mut R) -> Result<f64> {
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be positive".into()));
        }
        let dist = self.outcome_distribution(oracle)?;
        let mut phases = vec![0.0; self.estimation.rounds];
        let mut accepted = 0u32;
        for _ in 0..trials {
            for ph in phases.iter_mut() {
                *ph = dist.phase(dist.sample(rng));
            }
            let est = circular_median(&phases, self.delta);
            if circular_distance(est, 0.0) <= self.threshold() {
                accepted += 1;
            }
        }
        Ok(accepted as f64 / trials as f64)
    }

    /// The negative witness for a `Q` oracle `O'` preparing `phi`.
    pub fn negative_witness(&self, oracle_q: &UnitaryMatrix, phi: &CVector) -> CVector {
        negative_vector(&self.witness, oracle_q, phi, self.scale)
    }
}

/// `mu` for oracle `O` with `O e0 = psi`.
pub(crate) fn positive_vector(w: &Gamma2Witness, oracle: &UnitaryMatrix, psi: &CVector, scale: f64) -> CVector {
    let dx = psi.len();
    let mut mu = CVector::zeros(1 + 4 * dx);
    mu[0] = real(1.0);
    let e0 = basis_vector(dx, 0);
    place(&mut mu, dx, 0, 0, &oracle.matrix().ad_mul(&w.v_p), scale);
    place(&mut mu, dx, 0, 1, &w.v_p, scale);
    place(&mut mu, dx, 1, 0, &e0, scale * w.u_p);
    place(&mut mu, dx, 1, 1, psi, scale * w.u_p);
    mu
}

pub(crate) fn negative_vector(w: &Gamma2Witness, oracle: &UnitaryMatrix, phi: &CVector, scale: f64) -> CVector {
    let dx = phi.len();
    let mut v = CVector::zeros(1 + 4 * dx);
    v[0] = real(1.0);
    let k = -1.0 / scale;
    let e0 = basis_vector(dx, 0);
    place(&mut v, dx, 0, 0, &e0, k * w.u_q);
    place(&mut v, dx, 0, 1, phi, -k * w.u_q);
    place(&mut v, dx, 1, 0, &oracle.matrix().ad_mul(&w.v_q), -k);
    place(&mut v, dx, 1, 1, &w.v_q, k);
    v
}

/// Orthonormal basis of the span of `mu` over every `P` oracle of reflection
/// form, i.e. over all garbage choices. It splits into the vector carrying
/// `|0>_A` and one block `nu_a (x) |a> (x) C^(d_F)` per supported symbol.
fn block_basis(p: &ProbDist, w: &Gamma2Witness, scale: f64, alphabet: usize, d_f: usize) -> Vec<CVector> {
    let layout = RegisterLayout::StatePrep { alphabet, garbage_dim: d_f };
    let dx = layout.dim();
    let n_p = compensated_sum(w.weights.iter().zip(p.probs()).map(|(c, p)| c * c * p)).sqrt().sqrt();
    let g = 1.0 / w.gap.sqrt();
    let kappa = if n_p > 0.0 { g * compensated_sum(w.weights.iter().zip(p.probs()).map(|(c, p)| c * p)) / n_p } else { 0.0 };
    let mut basis = Vec::new();

    let mut head = CVector::zeros(1 + 4 * dx);
    head[0] = real(1.0);
    head[bcx(dx, 0, 0, 0)] = real(scale * kappa);
    head[bcx(dx, 1, 0, 0)] = real(scale * w.u_p);
    basis.push(head.unscale(head.norm()));

    for a in 0..alphabet {
        if p.prob(a) == 0.0 {
            continue;
        }
        let lead = if n_p > 0.0 { g * w.weights[a] / n_p } else { 0.0 };
        let nu = [lead - kappa, lead, 0.0, w.u_p];
        let norm = nu.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        for j in 0..d_f {
            let x = layout.symbol_index(a, j);
            let mut v = CVector::zeros(1 + 4 * dx);
            for (k, &coef) in nu.iter().enumerate() {
                v[bcx(dx, k / 2, k % 2, x)] = real(coef / norm);
            }
            basis.push(v);
        }
    }
    basis
}

/// Phase estimation from `|0>_A`; decision `P` iff the circular median phase
/// is within `delta / 2` of zero.
pub fn discriminate_model4<R: Rng + ?Sized>(
    inst: &mut DiscriminationInstance,
    params: &AlgoParams,
    rng: &mut R,
) -> Result<DiscriminationOutcome> {
    let ops = Model4Operators::new(inst, params)?;
    run_with(&ops, inst, rng)
}

pub(crate) fn run_with<R: Rng + ?Sized>(
    ops: &Model4Operators,
    inst: &mut DiscriminationInstance,
    rng: &mut R,
) -> Result<DiscriminationOutcome> {
    let oracle = inst.oracle_mut();
    let start_count = oracle.query_count();
    let walk = ops.walk(oracle.unitary());
    let start = StateVector::basis(ops.dim, 0)?;
    let mut applications = 0;
    let est = ops.estimation.estimate(&walk, &start, ops.delta, PhaseMode::Circuit, rng, &mut |n| applications += n)?;
    oracle.charge(2 * applications);
    let distance = circular_distance(est.phase, 0.0);
    Ok(DiscriminationOutcome {
        decision: if distance <= ops.threshold() { Label::P } else { Label::Q },
        queries_used: oracle.query_count() - start_count,
        auxiliary: distance,
    })
}

/// Residuals of the structural facts behind the algorithm for one instance
/// that knows both candidates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Model4Checks {
    /// `|U mu - mu|` for the `P` oracle.
    pub eigen_residual: f64,
    /// `|Pi_Q w - |0>_A|`.
    pub negative_image_residual: f64,
    /// `|<mu, w>|`.
    pub orthogonality: f64,
    /// `|w|`.
    pub negative_norm: f64,
    pub feasibility: f64,
}

impl Model4Checks {
    pub fn holds(&self) -> bool {
        self.eigen_residual <= TOL && self.negative_image_residual <= TOL && self.orthogonality <= TOL && self.feasibility <= TOL
    }
}

impl Model4Operators {
    pub fn checks(&self, inst: &DiscriminationInstance) -> Result<Model4Checks> {
        let k = inst
            .candidates
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("checks need both candidate oracles".into()))?;
        let mu = self.mu.as_ref().expect("present whenever candidates are");
        let walk_p = self.walk(k.oracle_p.unitary());
        let eigen_residual = (walk_p.matrix() * mu - mu).norm();
        let phi = k.oracle_q.prepared_state();
        let w = self.negative_witness(k.oracle_q.unitary(), &phi);
        let a0 = basis_vector(self.dim, 0);
        let negative_image_residual = (self.pi_projector(k.oracle_q.unitary()) * &w - a0).norm();
        let orthogonality = mu.dotc(&w).norm();
        let psi = states_for(&self.witness.layout, &inst.p, &k.garbage_p);
        let phi_ref = states_for(&self.witness.layout, &inst.q, &k.garbage_q);
        let feasibility = self.witness.residual(&psi, &phi_ref)?;
        Ok(Model4Checks { eigen_residual, negative_image_residual, orthogonality, negative_norm: w.norm(), feasibility })
    }
}
