//! Phase estimation, simulated at the level of the ancilla register.
//!
//! Circuit mode prepares `(1/sqrt M) sum_k |k> U^k psi`, applies the inverse
//! QFT on the `M`-dimensional ancilla and measures it. The outcome `m` reports
//! the phase `2 pi m / M`. The register holds `M = ceil(oversampling / delta)`
//! basis states, i.e. `ceil(log2 M)` qubits, and a run uses `M - 1`
//! controlled applications of `U`. Several independent runs are combined by a
//! circular median.

#[allow(unused_imports)] // std's inherent methods win when std is in the graph
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use super::fft::Dft;
use super::linalg::{unitary_eigen, wrap_phase, circular_distance, StateVector, UnitaryMatrix, ZERO};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseMode {
    /// Simulate the estimation circuit; controlled applications are charged.
    Circuit,
    /// Ideal projective measurement in the eigenbasis (validation only).
    Spectral,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseEstimateResult {
    /// Radians in `[0, 2pi)`.
    pub phase: f64,
    pub controlled_applications: u64,
}

/// Parameters of the phase estimation routine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseEstimation {
    /// Independent runs combined by the circular median. Must be odd.
    pub rounds: usize,
    /// Ancilla dimension is `ceil(oversampling / delta)`.
    pub oversampling: f64,
}

impl Default for PhaseEstimation {
    fn default() -> Self {
        PhaseEstimation { rounds: 5, oversampling: 8.0 }
    }
}

impl PhaseEstimation {
    pub fn with_rounds(rounds: usize) -> Self {
        PhaseEstimation { rounds, ..Self::default() }
    }

    fn validate(&self, delta: f64) -> Result<()> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!("precision delta must be positive, got {delta}")));
        }
        if self.rounds == 0 || self.rounds.is_multiple_of(2) {
            return Err(Error::InvalidParameter(alloc::format!("rounds must be odd, got {}", self.rounds)));
        }
        if !(self.oversampling >= 1.0) {
            return Err(Error::InvalidParameter("oversampling must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of ancilla basis states for precision `delta`.
    pub fn register_size(&self, delta: f64) -> usize {
        ((self.oversampling / delta).ceil() as usize).max(2)
    }

    pub fn ancilla_qubits(&self, delta: f64) -> u32 {
        let m = self.register_size(delta);
        usize::BITS - (m - 1).leading_zeros()
    }

    /// Controlled applications of `U` charged by one circuit-mode call.
    pub fn budget(&self, delta: f64) -> u64 {
        self.rounds as u64 * (self.register_size(delta) as u64 - 1)
    }

    /// `kappa` such that `controlled_applications <= ceil(kappa / delta)`.
    pub fn kappa(&self) -> f64 {
        self.rounds as f64 * self.oversampling
    }

    /// Exact distribution of one measured ancilla outcome.
    pub fn outcome_distribution(
        &self,
        u: &UnitaryMatrix,
        input: &StateVector,
        delta: f64,
    ) -> Result<PhaseDistribution> {
        self.validate(delta)?;
        check_input(u, input)?;
        let m = self.register_size(delta);
        let n = u.dim();
        // series[i * m + k] = (U^k psi)_i
        let mut series = vec![ZERO; n * m];
        let mut v = input.amps().clone();
        for k in 0..m {
            for i in 0..n {
                series[i * m + k] = v[i];
            }
            if k + 1 < m {
                v = u.matrix() * &v;
            }
        }
        let dft = Dft::new(m);
        let mut probs = vec![0.0; m];
        let norm = 1.0 / (m as f64 * m as f64);
        for row in series.chunks_mut(m) {
            dft.forward(row);
            for (p, x) in probs.iter_mut().zip(row.iter()) {
                *p += x.norm_sqr() * norm;
            }
        }
        Ok(PhaseDistribution::new(probs))
    }

    pub fn estimate<R: Rng + ?Sized>(
        &self,
        u: &UnitaryMatrix,
        input: &StateVector,
        delta: f64,
        mode: PhaseMode,
        rng: &mut R,
        charge: &mut dyn FnMut(u64),
    ) -> Result<PhaseEstimateResult> {
        self.validate(delta)?;
        check_input(u, input)?;
        match mode {
            PhaseMode::Circuit => {
                let dist = self.outcome_distribution(u, input, delta)?;
                let phases: Vec<f64> = (0..self.rounds).map(|_| dist.phase(dist.sample(rng))).collect();
                let applications = self.budget(delta);
                charge(applications);
                Ok(PhaseEstimateResult {
                    phase: circular_median(&phases, delta),
                    controlled_applications: applications,
                })
            }
            PhaseMode::Spectral => {
                let eig = unitary_eigen(u.matrix())?;
                let coeffs = eig.vectors.adjoint() * input.amps();
                let mut order: Vec<usize> = (0..eig.phases.len()).collect();
                order.sort_by(|&a, &b| {
                    circular_distance(eig.phases[a], 0.0)
                        .partial_cmp(&circular_distance(eig.phases[b], 0.0))
                        .unwrap_or(core::cmp::Ordering::Equal)
                });
                let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
                let mut x = rng.random::<f64>() * total;
                let mut pick = order[order.len() - 1];
                for &j in &order {
                    x -= coeffs[j].norm_sqr();
                    if x < 0.0 {
                        pick = j;
                        break;
                    }
                }
                Ok(PhaseEstimateResult { phase: eig.phases[pick], controlled_applications: 0 })
            }
        }
    }
}

fn check_input(u: &UnitaryMatrix, input: &StateVector) -> Result<()> {
    if input.dim() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: input.dim() });
    }
    if !input.is_normalized() {
        return Err(Error::NotNormalized { norm: input.norm() });
    }
    Ok(())
}

/// [`PhaseEstimation::estimate`] with default parameters.
pub fn phase_estimate<R: Rng + ?Sized>(
    u: &UnitaryMatrix,
    input: &StateVector,
    delta: f64,
    mode: PhaseMode,
    rng: &mut R,
    charge: &mut dyn FnMut(u64),
) -> Result<PhaseEstimateResult> {
    PhaseEstimation::default().estimate(u, input, delta, mode, rng, charge)
}

/// Distribution of a single ancilla measurement.
#[derive(Clone, Debug)]
pub struct PhaseDistribution {
    probs: Vec<f64>,
    /// Outcomes sorted by circular distance of their phase from 0.
    order: Vec<usize>,
}

impl PhaseDistribution {
    fn new(probs: Vec<f64>) -> Self {
        let m = probs.len();
        let mut order = Vec::with_capacity(m);
        order.push(0);
        for d in 1..=m / 2 {
            order.push(d);
            if m - d != d {
                order.push(m - d);
            }
        }
        PhaseDistribution { probs, order }
    }

    pub fn register_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn phase(&self, outcome: usize) -> f64 {
        2.0 * PI * outcome as f64 / self.probs.len() as f64
    }

    /// Probability that the reported phase is within `radius` of 0 on the circle.
    pub fn mass_near_zero(&self, radius: f64) -> f64 {
        self.order
            .iter()
            .take_while(|&&m| circular_distance(self.phase(m), 0.0) <= radius)
            .map(|&m| self.probs[m])
            .sum()
    }

    /// Inverse-CDF sample, scanning outcomes in order of distance from phase 0.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total: f64 = self.probs.iter().sum();
        let mut x = rng.random::<f64>() * total;
        for &m in &self.order {
            x -= self.probs[m];
            if x < 0.0 {
                return m;
            }
        }
        *self
            .order
            .iter()
            .rev()
            .find(|&&m| self.probs[m] > 0.0)
            .unwrap_or(&self.order[0])
    }
}

/// Circular median of an odd number of phase estimates.
///
/// Picks the estimate with the most neighbours within `2 delta`, unwraps all
/// estimates around it and returns the ordinary median. When a strict majority
/// lies within `delta` of some phase and `delta < pi/4`, the result is within
/// `delta` of that phase.
pub fn circular_median(phases: &[f64], delta: f64) -> f64 {
    debug_assert!(!phases.is_empty());
    let mut center = phases[0];
    let mut best = 0;
    for &c in phases {
        let count = phases.iter().filter(|&&p| circular_distance(p, c) <= 2.0 * delta).count();
        if count > best {
            best = count;
            center = c;
        }
    }
    let mut unwrapped: Vec<f64> =
        phases.iter().map(|&p| center + super::linalg::signed_phase(p - center)).collect();
    unwrapped.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    wrap_phase(unwrapped[unwrapped.len() / 2])
}
