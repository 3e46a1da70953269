//! Optimal values of the two cost expressions on the tiered family.
//!
//! With `p_a - q_a = alpha w_a` on the first half, the unconstrained weights
//! give `1 / (sqrt(alpha) |w|)`. Weights restricted to `[0, 1]` are optimal
//! on prefixes of the (decreasing) gaps, giving
//! `min_k sqrt(k) / (sqrt(alpha) (w_1 + .. + w_k))`.

#[allow(unused_imports)] // std's inherent methods win when std is in the graph
use num_traits::Float;
use alloc::vec::Vec;

use crate::distributions::{tiered_alpha_denominator, tiered_half_size};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparationBounds {
    pub t: u32,
    pub n: usize,
    pub alpha: f64,
    pub unconstrained: f64,
    pub constrained: f64,
    /// Prefix length attaining the constrained value.
    pub best_prefix: usize,
}

impl SeparationBounds {
    pub fn ratio(&self) -> f64 {
        self.constrained / self.unconstrained
    }
}

/// `w_a = 2^(1-i)` on group `i`, whose length is `4^(i-1)`.
fn gaps(t: u32) -> Vec<f64> {
    (1..=t).flat_map(|i| core::iter::repeat_n(0.5f64.powi(i as i32 - 1), 1usize << (2 * (i - 1)))).collect()
}

pub fn separation_bounds(t: u32) -> Result<SeparationBounds> {
    if !(1..=8).contains(&t) {
        return Err(Error::InvalidParameter(alloc::format!("tier count must be in 1..=8, got {t}")));
    }
    let alpha = 1.0 / tiered_alpha_denominator(t) as f64;
    let w = gaps(t);
    let sqrt_alpha = alpha.sqrt();
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut best = f64::INFINITY;
    let mut best_prefix = 0;
    let mut prefix = 0.0;
    for (k, x) in w.iter().enumerate() {
        prefix += x;
        let v = ((k + 1) as f64).sqrt() / (sqrt_alpha * prefix);
        if v < best {
            best = v;
            best_prefix = k + 1;
        }
    }
    Ok(SeparationBounds {
        t,
        n: tiered_half_size(t),
        alpha,
        unconstrained: 1.0 / (sqrt_alpha * norm),
        constrained: best,
        best_prefix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::witness_objective;
    use crate::discriminators::rejection_sampling_cost;
    use crate::distributions::{generate, DistFamily};
    use alloc::vec;

    #[test]
    fn two_tiers() {
        let b = separation_bounds(2).unwrap();
        assert_eq!(b.n, 5);
        assert!((b.unconstrained - 3.5f64.sqrt()).abs() < 1e-12);
        assert!((b.constrained - 35f64.sqrt() / 3.0).abs() < 1e-12);
        assert_eq!(b.best_prefix, 5);
    }

    #[test]
    fn one_tier_bounds_coincide() {
        let b = separation_bounds(1).unwrap();
        assert!((b.unconstrained - b.constrained).abs() < 1e-12);
        assert!(separation_bounds(0).is_err() && separation_bounds(9).is_err());
    }

    #[test]
    fn ratio_is_nondecreasing() {
        let r: Vec<f64> = (1..=6).map(|t| separation_bounds(t).unwrap().ratio()).collect();
        for w in r.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "{r:?}");
        }
        assert!(r[5] > r[1]);
    }

    #[test]
    fn matches_direct_evaluation_on_the_distributions() {
        let (p, q) = generate(&DistFamily::Tiered { t: 2 }).unwrap();
        let b = separation_bounds(2).unwrap();
        // prefix weights on the first half
        let mut c = vec![0.0; 10];
        for x in c.iter_mut().take(b.best_prefix) {
            *x = 1.0;
        }
        assert!((rejection_sampling_cost(&p, &q, &c).unwrap() - b.constrained).abs() < 1e-12);
        // the gap vector itself on the first half attains the unconstrained value
        let w = gaps(2);
        let mut u = vec![0.0; 10];
        u[..5].copy_from_slice(&w);
        let sp = u.iter().zip(p.probs()).map(|(c, p)| c * c * p).sum::<f64>().sqrt();
        let s = u.iter().zip(p.probs().iter().zip(q.probs())).map(|(c, (p, q))| c * (p - q)).sum::<f64>();
        assert!((sp / s - b.unconstrained).abs() < 1e-12);
        assert!(witness_objective(&p, &q, &u).unwrap() > 0.0);
    }
}
