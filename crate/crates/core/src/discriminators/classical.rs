//! The sample-based baseline: a fixed-size likelihood-ratio test.

#[allow(unused_imports)] // std's inherent methods win when std is in the graph
use num_traits::Float;
use alloc::vec::Vec;

use rand::Rng;

use super::Label;
use crate::distributions::{check_alphabets, stream_rng, ProbDist, Sampler};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalOutcome {
    pub decision: Label,
    pub samples_used: u64,
}

/// Likelihood-ratio test with a calibrated number of samples.
#[derive(Clone, Debug)]
pub struct ClassicalTest {
    /// `log(p_a / q_a)`, infinite where one side vanishes.
    llr: Vec<f64>,
    pub samples: u64,
}

/// Largest sample size the calibration will try.
pub const MAX_SAMPLES: u64 = 1 << 22;

impl ClassicalTest {
    pub fn new(p: &ProbDist, q: &ProbDist, samples: u64) -> Result<Self> {
        check_alphabets(p, q)?;
        if p == q {
            return Err(Error::IdenticalDistributions);
        }
        if samples == 0 {
            return Err(Error::InvalidParameter("at least one sample is needed".into()));
        }
        let llr = p
            .probs()
            .iter()
            .zip(q.probs())
            .map(|(&a, &b)| match (a > 0.0, b > 0.0) {
                (true, true) => (a / b).ln(),
                (true, false) => f64::INFINITY,
                (false, true) => f64::NEG_INFINITY,
                (false, false) => 0.0,
            })
            .collect();
        Ok(ClassicalTest { llr, samples })
    }

    /// Decides from a sequence of observed symbols.
    pub fn decide<R: Rng + ?Sized>(&self, samples: impl IntoIterator<Item = usize>, rng: &mut R) -> Label {
        let mut sum = 0.0;
        for s in samples {
            sum += self.llr[s];
        }
        if sum > 0.0 {
            Label::P
        } else if sum < 0.0 {
            Label::Q
        } else if rng.random::<bool>() {
            // ties, and +inf + -inf
            Label::P
        } else {
            Label::Q
        }
    }

    /// Draws `self.samples` symbols from `source` and decides.
    pub fn run<R: Rng + ?Sized>(&self, source: &ProbDist, rng: &mut R) -> ClassicalOutcome {
        let sampler = Sampler::new(source);
        let mut draws = Vec::with_capacity(self.samples as usize);
        for _ in 0..self.samples {
            draws.push(sampler.sample(rng));
        }
        ClassicalOutcome { decision: self.decide(draws, rng), samples_used: self.samples }
    }

    /// Monte Carlo estimate of `max(P[decide Q | p], P[decide P | q])`.
    /// Every sample size is evaluated on the same seeds.
    pub fn error_rate(p: &ProbDist, q: &ProbDist, samples: u64, trials: u32, seed: u64) -> Result<f64> {
        let test = ClassicalTest::new(p, q, samples)?;
        let mut worst: f64 = 0.0;
        for (stream, (source, truth)) in [(p, Label::P), (q, Label::Q)].into_iter().enumerate() {
            let mut rng = stream_rng(seed, stream as u64);
            let wrong = (0..trials).filter(|_| test.run(source, &mut rng).decision != truth).count();
            worst = worst.max(wrong as f64 / trials as f64);
        }
        Ok(worst)
    }

    /// Smallest sample size whose estimated error is at most `target`, found
    /// by doubling and then bisection.
    pub fn calibrate(p: &ProbDist, q: &ProbDist, target: f64, trials: u32, seed: u64) -> Result<Self> {
        if !(target > 0.0 && target < 0.5) {
            return Err(Error::InvalidParameter(alloc::format!("target error must lie in (0, 1/2), got {target}")));
        }
        if trials == 0 {
            return Err(Error::InvalidParameter("at least one trial is needed".into()));
        }
        let ok = |n: u64| -> Result<bool> { Ok(Self::error_rate(p, q, n, trials, seed)? <= target) };
        let mut hi = 1;
        while !ok(hi)? {
            if hi >= MAX_SAMPLES {
                return Err(Error::InvalidParameter("calibration did not reach the target error".into()));
            }
            hi *= 2;
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        ClassicalTest::new(p, q, hi)
    }
}

/// Calibrates for `target` and runs once on samples from `source`.
pub fn classical_discriminate<R: Rng + ?Sized>(
    p: &ProbDist,
    q: &ProbDist,
    source: &ProbDist,
    target: f64,
    rng: &mut R,
) -> Result<ClassicalOutcome> {
    let test = ClassicalTest::calibrate(p, q, target, 2000, 0)?;
    Ok(test.run(source, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{generate, DistFamily};
    use alloc::vec;

    #[test]
    fn disjoint_supports_need_one_sample() {
        let p = ProbDist::new(vec![1.0, 0.0]).unwrap();
        let q = ProbDist::new(vec![0.0, 1.0]).unwrap();
        let t = ClassicalTest::calibrate(&p, &q, 0.01, 500, 1).unwrap();
        assert_eq!(t.samples, 1);
        let mut rng = stream_rng(1, 0);
        assert_eq!(t.run(&p, &mut rng).decision, Label::P);
        assert_eq!(t.run(&q, &mut rng).decision, Label::Q);
    }

    #[test]
    fn bernoulli_calibration_is_small() {
        let (p, q) = generate(&DistFamily::Bernoulli { theta_p: 0.5, theta_q: 0.8 }).unwrap();
        let t = ClassicalTest::calibrate(&p, &q, 1.0 / 3.0, 4000, 7).unwrap();
        assert!((2..=10).contains(&t.samples), "{}", t.samples);
    }

    #[test]
    fn halving_distance_quadruples_samples() {
        // theta_q chosen so the Hellinger distances differ by a factor of two
        let (p, q1) = generate(&DistFamily::Bernoulli { theta_p: 0.5, theta_q: 0.7 }).unwrap();
        let d1 = crate::distributions::metrics(&p, &q1).unwrap().hellinger;
        let mut lo = 0.5;
        let mut hi = 0.7;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let (_, q) = generate(&DistFamily::Bernoulli { theta_p: 0.5, theta_q: mid }).unwrap();
            if crate::distributions::metrics(&p, &q).unwrap().hellinger < d1 / 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (_, q2) = generate(&DistFamily::Bernoulli { theta_p: 0.5, theta_q: lo }).unwrap();
        let n1 = ClassicalTest::calibrate(&p, &q1, 0.1, 4000, 3).unwrap().samples as f64;
        let n2 = ClassicalTest::calibrate(&p, &q2, 0.1, 4000, 3).unwrap().samples as f64;
        let ratio = n2 / n1;
        assert!((3.0..=5.5).contains(&ratio), "{n1} {n2} {ratio}");
    }

    #[test]
    fn identical_pair_is_an_error() {
        let p = ProbDist::uniform(3).unwrap();
        assert!(matches!(ClassicalTest::new(&p, &p, 4), Err(Error::IdenticalDistributions)));
    }
}
