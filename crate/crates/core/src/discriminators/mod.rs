//! Discriminators: given `p`, `q` and an oracle encoding one of them, decide
//! which one it is.
//!
//! * [`discriminate_model3`] amplitude amplification on a state-preparation oracle.
//! * [`discriminate_model4`] phase estimation on the walk built from the
//!   adversary witness, for oracles with garbage.
//! * [`standard_method`] rejection sampling plus amplitude estimation.
//! * [`ClassicalTest`] the likelihood-ratio test on samples.
//!
//! Every quantum discriminator reports `queries_used` as the change of the
//! oracle's query counter during the run.

mod classical;
mod model3;
mod model4;
mod separation;
mod standard;

use alloc::format;
use alloc::vec::Vec;

pub use classical::{classical_discriminate, ClassicalOutcome, ClassicalTest};
pub use model3::{discriminate_model3, model3_rounds, Model3Plan};
pub use model4::{
    discriminate_model4, Model4Checks, Model4Operators, DEFAULT_EPSILON, DEFAULT_KAPPA, DEFAULT_ROUNDS,
};
pub use separation::{separation_bounds, SeparationBounds};
pub use standard::{
    indicator_weights, rejection_sampling_cost, restrict_weights, standard_method, StandardPlan, DEFAULT_AE_CONSTANT,
};

pub use crate::oracles::Label;
use crate::distributions::{check_alphabets, ProbDist};
use crate::oracles::{
    lift_string_oracle, prepare_oracle, Completion, GarbageSpec, Model, OracleInstance, RegisterLayout,
};
use crate::qcore::CVector;
use crate::{Error, Result};

/// What the algorithm knows about the two candidate oracles beyond `p` and `q`.
#[derive(Clone, Debug)]
pub struct KnownCandidates {
    pub oracle_p: OracleInstance,
    pub oracle_q: OracleInstance,
    /// `psi_a` and `phi_a`.
    pub garbage_p: Vec<CVector>,
    pub garbage_q: Vec<CVector>,
}

/// A discrimination problem: two known distributions and a hidden oracle.
#[derive(Clone, Debug)]
pub struct DiscriminationInstance {
    pub p: ProbDist,
    pub q: ProbDist,
    pub model: Model,
    pub candidates: Option<KnownCandidates>,
    oracle: OracleInstance,
}

impl DiscriminationInstance {
    /// A model (iii) or (iv) instance. The hidden oracle is a fresh copy of
    /// the candidate named by `hidden`.
    pub fn state_prep(
        model: Model,
        p: &ProbDist,
        q: &ProbDist,
        garbage_p: &GarbageSpec,
        garbage_q: &GarbageSpec,
        completion: Completion,
        hidden: Label,
    ) -> Result<Self> {
        check_alphabets(p, q)?;
        if garbage_p.dim != garbage_q.dim {
            return Err(Error::DimensionMismatch { expected: garbage_p.dim, found: garbage_q.dim });
        }
        let (gp, gq) = match model {
            Model::StatePrep => (GarbageSpec::trivial(), GarbageSpec::trivial()),
            _ => (*garbage_p, *garbage_q),
        };
        let oracle_p = prepare_oracle(model, p, &gp, completion)?.with_label(Label::P);
        let oracle_q = prepare_oracle(model, q, &gq, completion)?.with_label(Label::Q);
        let oracle = match hidden {
            Label::P => oracle_p.fresh_clone(),
            Label::Q => oracle_q.fresh_clone(),
        };
        let candidates = KnownCandidates {
            oracle_p,
            oracle_q,
            garbage_p: gp.states(p.alphabet_size())?,
            garbage_q: gq.states(q.alphabet_size())?,
        };
        Ok(DiscriminationInstance { p: p.clone(), q: q.clone(), model, candidates: Some(candidates), oracle })
    }

    /// A string instance (model i or ii) accessed through the lifted oracle.
    /// Only `p` and `q` are known to the algorithm.
    pub fn from_string(model: Model, p: &ProbDist, q: &ProbDist, x: &[usize], hidden: Label) -> Result<Self> {
        check_alphabets(p, q)?;
        let oracle = lift_string_oracle(x, p.alphabet_size(), model)?.with_label(hidden);
        Ok(DiscriminationInstance { p: p.clone(), q: q.clone(), model, candidates: None, oracle })
    }

    /// Wraps an arbitrary oracle.
    pub fn with_oracle(model: Model, p: &ProbDist, q: &ProbDist, oracle: OracleInstance) -> Result<Self> {
        check_alphabets(p, q)?;
        Ok(DiscriminationInstance { p: p.clone(), q: q.clone(), model, candidates: None, oracle })
    }

    pub fn oracle(&self) -> &OracleInstance {
        &self.oracle
    }

    pub(crate) fn oracle_mut(&mut self) -> &mut OracleInstance {
        &mut self.oracle
    }

    pub fn layout(&self) -> RegisterLayout {
        self.oracle.layout()
    }

    /// Bookkeeping only; discriminators never call this.
    pub fn hidden_label(&self) -> Option<Label> {
        self.oracle.hidden_label()
    }

    pub(crate) fn require_model(&self, allowed: &[Model]) -> Result<()> {
        if allowed.contains(&self.model) && allowed.contains(&self.oracle.model()) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("model {} is not supported here", self.model)))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscriminationOutcome {
    pub decision: Label,
    pub queries_used: u64,
    /// Measured phase (model iv), amplitude estimate (standard method) or
    /// flag bit (model iii).
    pub auxiliary: f64,
}

/// How the reflection about the positive witness space is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LambdaPath {
    /// Reflection about the span of the positive witness vector of the known
    /// `P` candidate.
    #[default]
    Span,
    /// Reflection about the positive witness vectors of every `P` oracle
    /// of reflection form, assembled per symbol. Needs only `p` and `q`.
    Block,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgoParams {
    pub epsilon: f64,
    /// Phase-estimation precision is `kappa * epsilon^2 / T`.
    pub kappa: f64,
    /// Independent phase-estimation runs, combined by the circular median.
    pub rounds: usize,
    pub lambda_path: LambdaPath,
    /// Replaces the computed number of amplification rounds in model (iii).
    pub amplification_rounds: Option<u64>,
}

impl Default for AlgoParams {
    fn default() -> Self {
        AlgoParams {
            epsilon: DEFAULT_EPSILON,
            kappa: DEFAULT_KAPPA,
            rounds: DEFAULT_ROUNDS,
            lambda_path: LambdaPath::Span,
            amplification_rounds: None,
        }
    }
}

impl AlgoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidParameter(format!("kappa must be positive, got {}", self.kappa)));
        }
        if self.rounds == 0 || self.rounds.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("rounds must be odd, got {}", self.rounds)));
        }
        Ok(())
    }
}
