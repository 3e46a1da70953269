use proptest::prelude::*;
use rand::Rng;

use qdist_core::adversary::{
    build_witness, difference_identity_residual, lower_bound_certificate, optimal_weights, states_for, tau,
    tau_upper_bound,
};
use qdist_core::distributions::{generate, metrics, stream_rng, DistFamily, ProbDist};
use qdist_core::oracles::{embed, l_matrix, GarbageSpec};
use qdist_core::qcore::linalg::{basis_vector, haar_state, max_abs, outer, spectral_norm};
use qdist_core::qcore::{reflect_about_span, StateVector};

fn dist_strategy(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_len).prop_flat_map(|n| proptest::collection::vec(0.0f64..1.0, n))
}

fn pair_strategy(max_len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2..=max_len).prop_flat_map(|n| {
        (proptest::collection::vec(0.0f64..1.0, n), proptest::collection::vec(0.0f64..1.0, n))
    })
}

fn random_dist<R: Rng>(n: usize, rng: &mut R) -> ProbDist {
    // a few zeros now and then
    let w: Vec<f64> = (0..n).map(|_| if rng.random::<f64>() < 0.1 { 0.0 } else { rng.random::<f64>() }).collect();
    ProbDist::from_weights(w).unwrap_or_else(|_| ProbDist::uniform(n).unwrap())
}

proptest! {
    #[test]
    fn metric_consistency((a, b) in pair_strategy(16)) {
        prop_assume!(a.iter().sum::<f64>() > 0.0 && b.iter().sum::<f64>() > 0.0);
        let p = ProbDist::from_weights(a).unwrap();
        let q = ProbDist::from_weights(b).unwrap();
        prop_assert!((p.total_mass() - 1.0).abs() < 1e-12);
        let m = metrics(&p, &q).unwrap();
        let r = metrics(&q, &p).unwrap();
        prop_assert!((m.hellinger - r.hellinger).abs() < 1e-12);
        prop_assert!((m.bhattacharyya - r.bhattacharyya).abs() < 1e-12);
        prop_assert!((m.angle - r.angle).abs() < 1e-12);
        prop_assert!((m.hellinger.powi(2) - (1.0 - m.bhattacharyya)).abs() < 1e-12);
        prop_assert!((m.mu_distance.powi(2) - 2.0 * (1.0 - m.bhattacharyya)).abs() < 1e-12);
        // acos loses accuracy near 1, so compare through the cosine
        prop_assert!((m.angle.cos() - m.bhattacharyya).abs() < 1e-12);
        prop_assert!((0.0..=core::f64::consts::FRAC_PI_2 + 1e-15).contains(&m.angle));
    }

    #[test]
    fn mu_state_is_unit(a in dist_strategy(32)) {
        prop_assume!(a.iter().sum::<f64>() > 0.0);
        let p = ProbDist::from_weights(a).unwrap();
        prop_assert!((qdist_core::distributions::mu_state(&p).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tau_symmetric_and_bounded(s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let a = tau(s, t).unwrap();
        prop_assert!((a - tau(t, s).unwrap()).abs() < 1e-15);
        prop_assert!(a <= 1.0 + 1e-15);
        prop_assert!(a <= tau_upper_bound(s, t) + 1e-12);
    }
}

#[test]
fn hellinger_triangle_inequality() {
    let mut rng = stream_rng(100, 0);
    for _ in 0..1000 {
        let n = rng.random_range(1..=16);
        let (p, q, r) = (random_dist(n, &mut rng), random_dist(n, &mut rng), random_dist(n, &mut rng));
        let pq = metrics(&p, &q).unwrap().hellinger;
        let qr = metrics(&q, &r).unwrap().hellinger;
        let pr = metrics(&p, &r).unwrap().hellinger;
        assert!(pr <= pq + qr + 1e-9);
    }
}

#[test]
fn tau_grid() {
    for i in 0..=100 {
        for j in 0..=100 {
            let (s, t) = (i as f64 / 100.0, j as f64 / 100.0);
            let a = tau(s, t).unwrap();
            assert!(a <= 1.0 + 1e-15);
            assert!(a <= tau_upper_bound(s, t) + 1e-12, "{s} {t}");
        }
    }
}

#[test]
fn witness_sweep() {
    let mut rng = stream_rng(200, 0);
    let mut done = 0;
    while done < 200 {
        let n = rng.random_range(2..=16);
        let p = random_dist(n, &mut rng);
        let q = random_dist(n, &mut rng);
        if p == q {
            continue;
        }
        let d_f = rng.random_range(1..=3);
        let seed: u64 = rng.random();
        let gp = GarbageSpec::haar(seed, d_f).states(n).unwrap();
        let gq = GarbageSpec::haar(seed ^ 0x5555, d_f).states(n).unwrap();
        let c = optimal_weights(&p, &q).unwrap();
        let w = build_witness(&p, &q, &gp, &gq, &c).unwrap();
        let psi = states_for(&w.layout, &p, &gp);
        let phi = states_for(&w.layout, &q, &gq);
        assert!(w.residual(&psi, &phi).unwrap() <= 1e-9);
        let d_h = metrics(&p, &q).unwrap().hellinger;
        assert!(w.objective * d_h <= 2f64.sqrt() + 1e-9, "{}", w.objective * d_h);

        // fresh garbage, same p and q: rebuilt witness is feasible with the same objective
        let hp = GarbageSpec::haar(seed.wrapping_add(1), d_f).states(n).unwrap();
        let w2 = build_witness(&p, &q, &hp, &gq, &c).unwrap();
        assert!(w2.residual(&states_for(&w2.layout, &p, &hp), &phi).unwrap() <= 1e-9);
        assert!((w2.objective - w.objective).abs() < 1e-9);
        done += 1;
    }
}

#[test]
fn difference_identity_sweep() {
    let mut rng = stream_rng(300, 0);
    for _ in 0..1000 {
        let d = rng.random_range(1..=8);
        let psi = haar_state(d, &mut rng).into_amps();
        let phi = haar_state(d, &mut rng).into_amps();
        let (pa, qa) = (rng.random::<f64>(), rng.random::<f64>());
        assert!(difference_identity_residual(pa, qa, &psi, &phi) <= 1e-12);
    }
}

#[test]
fn l_matrix_identities() {
    let mut rng = stream_rng(400, 0);
    for _ in 0..100 {
        let m = rng.random_range(1..=12);
        let psi = haar_state(m, &mut rng).into_amps();
        let phi = haar_state(m, &mut rng).into_amps();
        let gap = spectral_norm(&(l_matrix(&psi) - l_matrix(&phi)));
        assert!((gap - (&psi - &phi).norm()).abs() <= 1e-9);
        let l = l_matrix(&psi);
        let e0 = basis_vector(m + 1, 0);
        let proj = outer(&e0, &e0) + outer(&embed(&psi), &embed(&psi));
        assert!(max_abs(&(&l * &l - proj)) <= 1e-9);
    }
}

#[test]
fn bernoulli_certificate() {
    let (p, q) = generate(&DistFamily::Bernoulli { theta_p: 0.5, theta_q: 0.8 }).unwrap();
    let cert = lower_bound_certificate(&p, &q, 2, 0.9, 0.1).unwrap();
    assert!(cert.holds(1e-9), "{cert:?}");
    // the masked matrix is the off-diagonal rotation part, of norm sin(alpha)
    assert!((cert.norm_g_hadamard_delta - cert.alpha.sin()).abs() < 1e-9);
}

#[test]
fn certificates_on_random_pairs() {
    let mut rng = stream_rng(500, 0);
    for _ in 0..50 {
        let n = rng.random_range(2..=6);
        let p = random_dist(n, &mut rng);
        let q = random_dist(n, &mut rng);
        if p == q {
            continue;
        }
        let k = if n <= 4 { 3 } else { 2 };
        let cert = lower_bound_certificate(&p, &q, k, 0.5, 0.5).unwrap();
        assert!(cert.holds(1e-9), "{cert:?}");
    }
}

#[test]
fn reflection_about_random_spans() {
    let mut rng = stream_rng(600, 0);
    for _ in 0..20 {
        let vs: Vec<StateVector> = (0..3).map(|_| haar_state(8, &mut rng)).collect();
        let r = reflect_about_span(8, &vs).unwrap();
        let sq = r.matrix() * r.matrix();
        assert!(max_abs(&(sq - qdist_core::qcore::linalg::CMatrix::identity(8, 8))) < 1e-9);
        let trace = r.matrix().trace().re;
        // (+1 multiplicity) - (-1 multiplicity) = 2 rank - 8
        assert!((trace - (2.0 * 3.0 - 8.0)).abs() < 1e-9);
    }
}
