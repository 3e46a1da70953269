//! Finite probability distributions, the Hellinger family of metrics, the
//! distribution pairs used by the constructions, and seeded sampling.

#[allow(unused_imports)] // std's inherent methods win when std is in the graph
use num_traits::Float;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qcore::linalg::{real, CVector, StateVector};
use crate::{Error, Result};

/// Tolerance on `sum p_a` accepted by [`ProbDist::new`] before renormalizing.
const INPUT_SUM_TOL: f64 = 1e-9;

/// A probability vector over the alphabet `{0, .., n-1}`.
///
/// Entries are nonnegative and renormalized at construction so that they sum
/// to one within 1e-12. Zero-probability symbols stay in the alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    /// Accepts probabilities whose sum is within 1e-9 of one.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let sum = validate(&probs)?;
        if (sum - 1.0).abs() > INPUT_SUM_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {sum}, not 1")));
        }
        Ok(Self::renormalized(probs, sum))
    }

    /// Normalizes arbitrary nonnegative weights.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let sum = validate(&weights)?;
        Ok(Self::renormalized(weights, sum))
    }

    fn renormalized(mut probs: Vec<f64>, sum: f64) -> Self {
        for p in probs.iter_mut() {
            *p /= sum;
        }
        ProbDist { probs }
    }

    /// Point mass on `symbol`.
    pub fn point_mass(alphabet: usize, symbol: usize) -> Result<Self> {
        if symbol >= alphabet {
            return Err(Error::SymbolOutOfRange { symbol, alphabet });
        }
        let mut probs = vec![0.0; alphabet];
        probs[symbol] = 1.0;
        Ok(ProbDist { probs })
    }

    pub fn uniform(alphabet: usize) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(ProbDist { probs: vec![1.0 / alphabet as f64; alphabet] })
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, symbol: usize) -> f64 {
        self.probs[symbol]
    }

    /// Compensated `sum p_a`; one within 1e-12 for every constructed value.
    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.probs.iter().copied())
    }

    pub fn sqrt_probs(&self) -> impl Iterator<Item = f64> + '_ {
        self.probs.iter().map(|&p| if p > 0.0 { p.sqrt() } else { 0.0 })
    }
}

/// Neumaier summation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn validate(probs: &[f64]) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution("empty alphabet".into()));
    }
    for (a, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidDistribution(format!("entry {a} is {p}")));
        }
    }
    let sum = compensated_sum(probs.iter().copied());
    if !(sum > 0.0) {
        return Err(Error::InvalidDistribution("all entries are zero".into()));
    }
    Ok(sum)
}

/// Distances between two distributions on the same alphabet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistMetrics {
    /// `sqrt(1/2 sum (sqrt p - sqrt q)^2)`.
    pub hellinger: f64,
    /// `sum sqrt(p q) = <mu_p, mu_q>`.
    pub bhattacharyya: f64,
    /// Angle between `mu_p` and `mu_q`, in `[0, pi/2]`.
    pub angle: f64,
    /// `|| mu_p - mu_q ||`.
    pub mu_distance: f64,
}

pub fn metrics(p: &ProbDist, q: &ProbDist) -> Result<DistMetrics> {
    check_alphabets(p, q)?;
    let sq_diff = compensated_sum(p.sqrt_probs().zip(q.sqrt_probs()).map(|(a, b)| (a - b) * (a - b)));
    let bc = compensated_sum(p.sqrt_probs().zip(q.sqrt_probs()).map(|(a, b)| a * b));
    let mu_distance = sq_diff.sqrt();
    // The chord length gives the angle without the cancellation of acos near 1.
    let angle = 2.0 * (0.5 * mu_distance).min(1.0).asin();
    Ok(DistMetrics {
        hellinger: (0.5 * sq_diff).sqrt(),
        bhattacharyya: bc.clamp(0.0, 1.0),
        angle,
        mu_distance,
    })
}

pub(crate) fn check_alphabets(p: &ProbDist, q: &ProbDist) -> Result<()> {
    if p.alphabet_size() != q.alphabet_size() {
        return Err(Error::AlphabetMismatch { left: p.alphabet_size(), right: q.alphabet_size() });
    }
    Ok(())
}

/// `mu_p = sum_a sqrt(p_a) |a>`.
pub fn mu_state(p: &ProbDist) -> StateVector {
    let amps = CVector::from_iterator(p.alphabet_size(), p.sqrt_probs().map(real));
    StateVector::normalize(amps).expect("a probability vector has a unit-norm square root")
}

/// Distribution pairs used by the constructions.
#[derive(Clone, Debug, PartialEq)]
pub enum DistFamily {
    /// `p` uniform on `n` symbols, `q` uniform on the first `n/2`.
    Collision { n: usize },
    /// Tiered pair on `2n` symbols, `n = (4^t - 1)/3`.
    Tiered { t: u32 },
    /// `p = (theta_p, 1 - theta_p)`, `q = (theta_q, 1 - theta_q)`.
    Bernoulli { theta_p: f64, theta_q: f64 },
    Custom { p: ProbDist, q: ProbDist },
}

/// Largest alphabet the tiered family may produce.
pub const MAX_ALPHABET: usize = 1 << 16;

pub fn generate(kind: &DistFamily) -> Result<(ProbDist, ProbDist)> {
    match kind {
        DistFamily::Collision { n } => collision(*n),
        DistFamily::Tiered { t } => tiered(*t),
        DistFamily::Bernoulli { theta_p, theta_q } => {
            Ok((bernoulli(*theta_p)?, bernoulli(*theta_q)?))
        }
        DistFamily::Custom { p, q } => {
            check_alphabets(p, q)?;
            Ok((p.clone(), q.clone()))
        }
    }
}

fn collision(n: usize) -> Result<(ProbDist, ProbDist)> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("collision size must be even and >= 2, got {n}")));
    }
    let p = ProbDist::uniform(n)?;
    let mut q = vec![0.0; n];
    for x in q.iter_mut().take(n / 2) {
        *x = 2.0 / n as f64;
    }
    Ok((p, ProbDist { probs: q }))
}

fn bernoulli(theta: f64) -> Result<ProbDist> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!("Bernoulli parameter must lie in (0, 1), got {theta}")));
    }
    ProbDist::new(vec![theta, 1.0 - theta])
}

/// Half-alphabet size of the tiered family, `1 + 4 + .. + 4^(t-1)`.
pub fn tiered_half_size(t: u32) -> usize {
    ((1usize << (2 * t)) - 1) / 3
}

/// Exact scale of the tiered family: `alpha = 1 / (2n - 2^t + 1)`.
///
/// Returned as the integer denominator so callers can stay rational.
pub fn tiered_alpha_denominator(t: u32) -> u64 {
    2 * tiered_half_size(t) as u64 - (1u64 << t) + 1
}

fn tiered(t: u32) -> Result<(ProbDist, ProbDist)> {
    if t == 0 || 2 * tiered_half_size(t.min(9)) > MAX_ALPHABET || t > 8 {
        return Err(Error::InvalidParameter(format!("tier count must be in 1..=8, got {t}")));
    }
    let n = tiered_half_size(t);
    // Every probability is k / (2^(t-1) * den) for an integer k.
    let den = tiered_alpha_denominator(t);
    let common = (1u64 << (t - 1)) * den;
    let alpha_units = 1u64 << (t - 1);
    let mut p_units = vec![0u64; 2 * n];
    let mut q_units = vec![0u64; 2 * n];
    let mut a = 0;
    for i in 1..=t {
        // (1 - 2^(1-i)) alpha
        let q_i = alpha_units - (alpha_units >> (i - 1));
        for _ in 0..(1usize << (2 * (i - 1))) {
            p_units[a] = alpha_units;
            q_units[a] = q_i;
            a += 1;
        }
    }
    let (p_lo, p_hi) = p_units.split_at_mut(n);
    let (q_lo, q_hi) = q_units.split_at_mut(n);
    p_hi[..n].copy_from_slice(q_lo);
    q_hi[..n].copy_from_slice(p_lo);
    debug_assert_eq!(p_units.iter().sum::<u64>(), common);
    debug_assert_eq!(q_units.iter().sum::<u64>(), common);
    let to_dist = |units: Vec<u64>| ProbDist {
        probs: units.into_iter().map(|k| k as f64 / common as f64).collect(),
    };
    Ok((to_dist(p_units), to_dist(q_units)))
}

/// Seeded generator for worker `worker` of a run with seed `seed`. ChaCha is
/// counter based, so distinct workers get independent streams.
pub fn stream_rng(seed: u64, worker: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker);
    rng
}

/// Inverse-CDF sampler over a fixed distribution.
#[derive(Clone, Debug)]
pub struct Sampler {
    cumulative: Vec<f64>,
    last_support: usize,
}

impl Sampler {
    pub fn new(p: &ProbDist) -> Self {
        let mut acc = 0.0;
        let cumulative = p
            .probs()
            .iter()
            .map(|&x| {
                acc += x;
                acc
            })
            .collect();
        let last_support = p.probs().iter().rposition(|&x| x > 0.0).unwrap_or(0);
        Sampler { cumulative, last_support }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random::<f64>() * self.cumulative[self.cumulative.len() - 1];
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.last_support)
    }
}

/// Draws one symbol from `p`.
pub fn sample<R: Rng + ?Sized>(p: &ProbDist, rng: &mut R) -> usize {
    Sampler::new(p).sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    #[test]
    fn identical_pair_has_zero_distance() {
        let p = ProbDist::new(vec![0.2, 0.3, 0.5]).unwrap();
        let m = metrics(&p, &p).unwrap();
        assert!(m.hellinger.abs() < 1e-15);
        assert!((m.bhattacharyya - 1.0).abs() < 1e-15);
        assert_eq!(m.angle, 0.0);
    }

    #[test]
    fn collision_pair_golden_values() {
        let (p, q) = generate(&DistFamily::Collision { n: 4 }).unwrap();
        assert_eq!(p.probs(), &[0.25; 4]);
        assert_eq!(q.probs(), &[0.5, 0.5, 0.0, 0.0]);
        let m = metrics(&p, &q).unwrap();
        assert!((m.bhattacharyya - FRAC_1_SQRT_2).abs() < 1e-12);
        // direct evaluation: sqrt(1 - 1/sqrt 2)
        assert!((m.hellinger - 0.541_196_100_146_197).abs() < 1e-12);
        assert!((m.angle - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn collision_overlap_does_not_depend_on_n() {
        for n in (2..=64).step_by(2) {
            let (p, q) = generate(&DistFamily::Collision { n }).unwrap();
            let m = metrics(&p, &q).unwrap();
            assert!((m.bhattacharyya - FRAC_1_SQRT_2).abs() < 1e-12, "n = {n}");
        }
        assert!(generate(&DistFamily::Collision { n: 3 }).is_err());
        assert!(generate(&DistFamily::Collision { n: 0 }).is_err());
    }

    #[test]
    fn bernoulli_pair_distance() {
        let (p, q) = generate(&DistFamily::Bernoulli { theta_p: 0.5, theta_q: 0.8 }).unwrap();
        let m = metrics(&p, &q).unwrap();
        // sqrt(1 - sqrt(.4) - sqrt(.1))
        assert!((m.hellinger - 0.226_531_900_511_796).abs() < 1e-9);
        let (p, q) = generate(&DistFamily::Bernoulli { theta_p: 0.5, theta_q: 0.5 }).unwrap();
        assert_eq!(metrics(&p, &q).unwrap().hellinger, 0.0);
        assert!(generate(&DistFamily::Bernoulli { theta_p: 0.0, theta_q: 0.5 }).is_err());
    }

    #[test]
    fn tiered_two_levels() {
        let (p, q) = generate(&DistFamily::Tiered { t: 2 }).unwrap();
        assert_eq!(p.alphabet_size(), 10);
        let a = 1.0 / 7.0;
        let expect_q = [0.0, a / 2.0, a / 2.0, a / 2.0, a / 2.0, a, a, a, a, a];
        for (x, y) in q.probs().iter().zip(expect_q) {
            assert!((x - y).abs() < 1e-15);
        }
        for i in 0..5 {
            assert!((p.prob(i) - a).abs() < 1e-15);
            assert_eq!(p.prob(i + 5), q.prob(i));
        }
        assert_eq!(tiered_alpha_denominator(2), 7);
    }

    #[test]
    fn tiered_family_is_valid_and_mirrored() {
        for t in 1..=8 {
            let (p, q) = generate(&DistFamily::Tiered { t }).unwrap();
            let n = tiered_half_size(t);
            assert_eq!(p.alphabet_size(), 2 * n);
            assert!((p.total_mass() - 1.0).abs() < 1e-12);
            assert!((q.total_mass() - 1.0).abs() < 1e-12);
            for a in 0..n {
                assert_eq!(p.prob(a + n), q.prob(a));
                assert_eq!(q.prob(a + n), p.prob(a));
            }
        }
        assert!(generate(&DistFamily::Tiered { t: 0 }).is_err());
        assert!(generate(&DistFamily::Tiered { t: 9 }).is_err());
    }

    #[test]
    fn mu_state_examples() {
        let p = ProbDist::new(vec![1.0]).unwrap();
        assert_eq!(mu_state(&p).amps()[0].re, 1.0);
        let p = ProbDist::uniform(4).unwrap();
        for z in mu_state(&p).amps().iter() {
            assert!((z.re - 0.5).abs() < 1e-15 && z.im == 0.0);
        }
    }

    #[test]
    fn invalid_distributions_are_rejected() {
        assert!(ProbDist::new(vec![]).is_err());
        assert!(ProbDist::new(vec![0.5, -0.1, 0.6]).is_err());
        assert!(ProbDist::new(vec![0.5, 0.6]).is_err());
        assert!(ProbDist::new(vec![f64::NAN, 1.0]).is_err());
        assert!(ProbDist::from_weights(vec![0.0, 0.0]).is_err());
        let p = ProbDist::from_weights(vec![1.0, 3.0]).unwrap();
        assert_eq!(p.probs(), &[0.25, 0.75]);
        let q = ProbDist::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(metrics(&p, &q), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn point_mass_always_sampled() {
        let p = ProbDist::new(vec![1.0, 0.0]).unwrap();
        let mut rng = stream_rng(1, 0);
        for _ in 0..1000 {
            assert_eq!(sample(&p, &mut rng), 0);
        }
        let p = ProbDist::new(vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        for _ in 0..1000 {
            assert_eq!(sample(&p, &mut rng), 2);
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let p = ProbDist::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let draw = |seed| {
            let mut rng = stream_rng(seed, 3);
            let s = Sampler::new(&p);
            (0..200).map(|_| s.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
        let other_worker: Vec<usize> = {
            let mut rng = stream_rng(42, 4);
            let s = Sampler::new(&p);
            (0..200).map(|_| s.sample(&mut rng)).collect()
        };
        assert_ne!(draw(42), other_worker);
    }

    #[test]
    fn fair_coin_frequencies() {
        let p = ProbDist::new(vec![0.5, 0.5]).unwrap();
        let s = Sampler::new(&p);
        let mut rng = stream_rng(2024, 0);
        let n = 100_000;
        let ones = (0..n).filter(|_| s.sample(&mut rng) == 1).count();
        let freq = ones as f64 / n as f64;
        // sd = 0.0016; 0.01 is more than six standard deviations
        assert!((freq - 0.5).abs() < 0.01, "{freq}");
        let chi2 = 4.0 * (ones as f64 - n as f64 / 2.0).powi(2) / n as f64;
        assert!(chi2 < 10.83, "chi2 = {chi2}");
    }
}
