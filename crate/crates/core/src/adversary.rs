//! The upper-bound witness for model (iv) and the lower-bound certificate for
//! string inputs.
//!
//! For two states `psi = sum_a sqrt(p_a) |a> psi_a` and
//! `phi = sum_a sqrt(q_a) |a> phi_a` with a one-dimensional workspace, the
//! witness is a feasible point `(u_P, v_P, u_Q, v_Q)` of
//!
//! ```text
//! <v_P, psi - phi> u_Q + u_P <psi - phi, v_Q> = 1,
//! ```
//!
//! and its objective `T = max(u_P^2 + |v_P|^2, u_Q^2 + |v_Q|^2)` bounds the
//! query complexity of telling the two oracles apart.

#[allow(unused_imports)] // std's inherent methods win when std is in the graph
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::distributions::{check_alphabets, compensated_sum, metrics, mu_state, ProbDist};
use crate::oracles::RegisterLayout;
use crate::qcore::linalg::{inner, real, spectral_norm_real, CVector};
use crate::{Error, Result, TOL};

/// `c_a = (sqrt p_a - sqrt q_a) / (sqrt p_a + sqrt q_a)`, and `0` where both vanish.
pub fn optimal_weights(p: &ProbDist, q: &ProbDist) -> Result<Vec<f64>> {
    check_alphabets(p, q)?;
    if p == q {
        return Err(Error::IdenticalDistributions);
    }
    Ok(p.sqrt_probs()
        .zip(q.sqrt_probs())
        .map(|(sp, sq)| if sp + sq > 0.0 { (sp - sq) / (sp + sq) } else { 0.0 })
        .collect())
}

/// `sum_a c_a (p_a - q_a)`.
pub fn weighted_gap(p: &ProbDist, q: &ProbDist, c: &[f64]) -> f64 {
    compensated_sum(c.iter().zip(p.probs().iter().zip(q.probs())).map(|(c, (p, q))| c * (p - q)))
}

fn weighted_second_moment(p: &ProbDist, c: &[f64]) -> f64 {
    compensated_sum(c.iter().zip(p.probs()).map(|(c, p)| c * c * p))
}

/// `(sqrt(sum c^2 p) + sqrt(sum c^2 q)) / |sum c (p - q)|`, the objective the
/// witness attains for weights `c`.
pub fn witness_objective(p: &ProbDist, q: &ProbDist, c: &[f64]) -> Result<f64> {
    check_alphabets(p, q)?;
    check_weights(p, c)?;
    let s = weighted_gap(p, q, c).abs();
    if !(s > 0.0) {
        return Err(Error::DegenerateWitness { overlap: s });
    }
    Ok((weighted_second_moment(p, c).sqrt() + weighted_second_moment(q, c).sqrt()) / s)
}

fn check_weights(p: &ProbDist, c: &[f64]) -> Result<()> {
    if c.len() != p.alphabet_size() {
        return Err(Error::DimensionMismatch { expected: p.alphabet_size(), found: c.len() });
    }
    if let Some(x) = c.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("weight {x} is not finite")));
    }
    Ok(())
}

/// A feasible point of the witness program for one pair of states.
#[derive(Clone, Debug)]
pub struct Gamma2Witness {
    /// Weights after orientation, so that `sum c (p - q) > 0`.
    pub weights: Vec<f64>,
    pub u_p: f64,
    pub u_q: f64,
    /// Vectors in the oracle register (coordinate 0 is `e0` and stays zero).
    pub v_p: CVector,
    pub v_q: CVector,
    pub objective: f64,
    /// `sum c (p - q)`.
    pub gap: f64,
    pub layout: RegisterLayout,
}

impl Gamma2Witness {
    /// `|<v_P, psi - phi> u_Q + u_P <psi - phi, v_Q> - 1|`.
    pub fn residual(&self, psi: &CVector, phi: &CVector) -> Result<f64> {
        verify_witness(self, psi, phi)
    }

    /// All four components multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Gamma2Witness {
        Gamma2Witness {
            u_p: self.u_p * factor,
            u_q: self.u_q * factor,
            v_p: &self.v_p * real(factor),
            v_q: &self.v_q * real(factor),
            ..self.clone()
        }
    }

    pub fn zero(layout: RegisterLayout) -> Gamma2Witness {
        Gamma2Witness {
            weights: Vec::new(),
            u_p: 0.0,
            u_q: 0.0,
            v_p: CVector::zeros(layout.dim()),
            v_q: CVector::zeros(layout.dim()),
            objective: 0.0,
            gap: 0.0,
            layout,
        }
    }

    fn norms(&self) -> (f64, f64) {
        (self.u_p * self.u_p + self.v_p.norm_squared(), self.u_q * self.u_q + self.v_q.norm_squared())
    }
}

/// Builds the witness for the states `sum_a sqrt(p_a)|a> psi_a` and
/// `sum_a sqrt(q_a)|a> phi_a`, laid out as in [`RegisterLayout::StatePrep`].
///
/// `garbage_p[a]` and `garbage_q[a]` are the unit vectors `psi_a`, `phi_a`.
/// If `sum c (p - q)` is negative the weights are negated first.
pub fn build_witness(
    p: &ProbDist,
    q: &ProbDist,
    garbage_p: &[CVector],
    garbage_q: &[CVector],
    c: &[f64],
) -> Result<Gamma2Witness> {
    check_alphabets(p, q)?;
    check_weights(p, c)?;
    if p == q {
        return Err(Error::IdenticalDistributions);
    }
    let alphabet = p.alphabet_size();
    if garbage_p.len() != alphabet || garbage_q.len() != alphabet {
        return Err(Error::DimensionMismatch { expected: alphabet, found: garbage_p.len().min(garbage_q.len()) });
    }
    let d_f = garbage_p.first().map_or(0, |v| v.len());
    if d_f == 0 {
        return Err(Error::EmptyDimension);
    }
    if let Some(v) = garbage_p.iter().chain(garbage_q).find(|v| v.len() != d_f) {
        return Err(Error::DimensionMismatch { expected: d_f, found: v.len() });
    }
    let layout = RegisterLayout::StatePrep { alphabet, garbage_dim: d_f };

    let mut weights = c.to_vec();
    let mut gap = weighted_gap(p, q, &weights);
    if gap < 0.0 {
        weights.iter_mut().for_each(|x| *x = -*x);
        gap = -gap;
    }
    if !(gap > 0.0) {
        return Err(Error::DegenerateWitness { overlap: gap });
    }

    let spread = |dist: &ProbDist, garbage: &[CVector]| {
        let mut v = CVector::zeros(layout.dim());
        for (a, (sp, g)) in dist.sqrt_probs().zip(garbage).enumerate() {
            let w = weights[a] * sp;
            for j in 0..d_f {
                v[layout.symbol_index(a, j)] = g[j] * w;
            }
        }
        v
    };
    let a_vec = spread(p, garbage_p);
    let b_vec = spread(q, garbage_q);
    let n_p = weighted_second_moment(p, &weights).sqrt().sqrt();
    let n_q = weighted_second_moment(q, &weights).sqrt().sqrt();
    let g = 1.0 / gap.sqrt();
    let div = |v: &CVector, n: f64| if n > 0.0 { v * real(g / n) } else { CVector::zeros(v.len()) };

    let mut w = Gamma2Witness {
        weights,
        u_p: g * n_q,
        u_q: g * n_p,
        v_p: div(&a_vec, n_p),
        v_q: div(&b_vec, n_q),
        objective: 0.0,
        gap,
        layout,
    };
    let (np, nq) = w.norms();
    w.objective = np.max(nq);

    let (psi, phi) = (states_for(&layout, p, garbage_p), states_for(&layout, q, garbage_q));
    if w.residual(&psi, &phi)? > TOL {
        // Exchange the fourth-root factors between the two sides.
        let alt = Gamma2Witness {
            u_p: g * n_p,
            u_q: g * n_q,
            v_p: div(&a_vec, n_q),
            v_q: div(&b_vec, n_p),
            ..w.clone()
        };
        if alt.residual(&psi, &phi)? < w.residual(&psi, &phi)? {
            let (np, nq) = alt.norms();
            w = Gamma2Witness { objective: np.max(nq), ..alt };
        }
    }
    Ok(w)
}

/// `sum_a sqrt(p_a) |a> g_a` in the state-preparation layout.
pub fn states_for(layout: &RegisterLayout, p: &ProbDist, garbage: &[CVector]) -> CVector {
    let mut v = CVector::zeros(layout.dim());
    for (a, (sp, g)) in p.sqrt_probs().zip(garbage).enumerate() {
        for j in 0..g.len() {
            v[layout.symbol_index(a, j)] = g[j] * sp;
        }
    }
    v
}

/// Residual of the bilinear constraint, `|<v_P, psi - phi> u_Q + u_P <psi - phi, v_Q> - 1|`.
pub fn verify_witness(w: &Gamma2Witness, psi: &CVector, phi: &CVector) -> Result<f64> {
    let n = w.v_p.len();
    for v in [&w.v_q, psi, phi] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
    }
    let d = psi - phi;
    let bilinear = inner(&w.v_p, &d) * w.u_q + inner(&d, &w.v_q) * w.u_p;
    Ok((bilinear - real(1.0)).norm())
}

/// Residual of `<x, x - y> + <x - y, y> = p_a - q_a` for `x = sqrt(p_a) psi_a`, `y = sqrt(q_a) phi_a`.
pub fn difference_identity_residual(p_a: f64, q_a: f64, psi_a: &CVector, phi_a: &CVector) -> f64 {
    let x = psi_a * real(p_a.sqrt());
    let y = phi_a * real(q_a.sqrt());
    let d = &x - &y;
    (inner(&x, &d) + inner(&d, &y) - real(p_a - q_a)).norm()
}

/// `sqrt(s_P s_Q) + sqrt((1 - s_P)(1 - s_Q))`.
pub fn tau(s_p: f64, s_q: f64) -> Result<f64> {
    for s in [s_p, s_q] {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidParameter(format!("acceptance probability {s} outside [0, 1]")));
        }
    }
    Ok((s_p * s_q).sqrt() + ((1.0 - s_p) * (1.0 - s_q)).sqrt())
}

/// `1 - |s_P - s_Q|^2 / 8`, an upper bound on [`tau`].
pub fn tau_upper_bound(s_p: f64, s_q: f64) -> f64 {
    1.0 - (s_p - s_q) * (s_p - s_q) / 8.0
}

/// Largest `|A|^n` for which the tensor power is formed explicitly.
pub const MAX_TENSOR_DIM: usize = 1024;

/// One coordinate of the tensor-power check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TensorCheck {
    pub coordinate: usize,
    pub masked_norm: f64,
}

/// The tensor-power certificate for strings of length `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorReport {
    pub n: usize,
    pub dim: usize,
    /// `delta_P* Gamma delta_Q`.
    pub overlap: f64,
    pub norm: f64,
    pub coordinates: Vec<TensorCheck>,
}

/// Evaluation of the lower bound at acceptance probabilities `s_P`, `s_Q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdversaryValue {
    pub n: usize,
    pub s_p: f64,
    pub s_q: f64,
    pub tau: f64,
    /// `min_j (delta_P* Gamma delta_Q - tau |Gamma|) / |Gamma o Delta_j|`, constant omitted.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundCertificate {
    pub g: DMatrix<f64>,
    pub alpha: f64,
    pub norm_g: f64,
    /// `|G o Delta|`, with `Delta` the off-diagonal mask.
    pub norm_g_hadamard_delta: f64,
    /// `|G mu_q - mu_p|`.
    pub image_residual: f64,
    /// `2 sin(alpha)`.
    pub masked_bound: f64,
    pub tensor: Option<TensorReport>,
    pub value: AdversaryValue,
}

impl LowerBoundCertificate {
    /// Whether every checked fact holds within `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        let mut ok = self.image_residual <= tol
            && (self.norm_g - 1.0).abs() <= tol
            && self.norm_g_hadamard_delta <= self.masked_bound + tol;
        if let Some(t) = &self.tensor {
            ok &= (t.overlap - 1.0).abs() <= tol && (t.norm - 1.0).abs() <= tol;
            ok &= t.coordinates.iter().all(|c| (c.masked_norm - self.norm_g_hadamard_delta).abs() <= tol);
        }
        ok
    }
}

fn real_mu(p: &ProbDist) -> DVector<f64> {
    DVector::from_iterator(p.alphabet_size(), mu_state(p).amps().iter().map(|z| z.re))
}

/// Rotation by `alpha` in the plane of `mu_q, mu_p`, `cos(alpha)` times the
/// identity on the orthogonal complement.
pub fn certificate_matrix(p: &ProbDist, q: &ProbDist) -> Result<(DMatrix<f64>, f64)> {
    check_alphabets(p, q)?;
    let alpha = metrics(p, q)?.angle;
    let mu_p = real_mu(p);
    let b1 = real_mu(q);
    let n = b1.len();
    let mut g = DMatrix::identity(n, n) * alpha.cos();
    let mut b2 = &mu_p - &b1 * b1.dot(&mu_p);
    let r = b2.norm();
    if r > 1e-8 {
        b2 /= r;
        g += (&b2 * b1.transpose() - &b1 * b2.transpose()) * alpha.sin();
    }
    Ok((g, alpha))
}

fn zero_diagonal(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    out.fill_diagonal(0.0);
    out
}

/// Builds and checks the certificate; forms `G^(x)n` explicitly when `|A|^n`
/// is at most [`MAX_TENSOR_DIM`] and `n > 0`.
pub fn lower_bound_certificate(p: &ProbDist, q: &ProbDist, n: usize, s_p: f64, s_q: f64) -> Result<LowerBoundCertificate> {
    check_alphabets(p, q)?;
    if p == q {
        return Err(Error::IdenticalDistributions);
    }
    let t = tau(s_p, s_q)?;
    let (g, alpha) = certificate_matrix(p, q)?;
    let norm_g = spectral_norm_real(&g);
    let masked = spectral_norm_real(&zero_diagonal(&g));
    let image_residual = (&g * real_mu(q) - real_mu(p)).norm();
    let alphabet = p.alphabet_size();

    let tensor = if n == 0 {
        None
    } else {
        let dim = alphabet
            .checked_pow(n as u32)
            .filter(|&d| d <= MAX_TENSOR_DIM)
            .ok_or(Error::TensorTooLarge { dim: alphabet.saturating_pow(n as u32), limit: MAX_TENSOR_DIM })?;
        Some(tensor_report(&g, &real_mu(p), &real_mu(q), n, dim))
    };

    let ratio = match &tensor {
        Some(tr) => {
            let worst = tr.coordinates.iter().map(|c| c.masked_norm).fold(0.0, f64::max);
            (tr.overlap - t * tr.norm) / worst
        }
        None => (1.0 - t) / masked,
    };
    Ok(LowerBoundCertificate {
        g,
        alpha,
        norm_g,
        norm_g_hadamard_delta: masked,
        image_residual,
        masked_bound: 2.0 * alpha.sin(),
        tensor,
        value: AdversaryValue { n, s_p, s_q, tau: t, ratio },
    })
}

fn tensor_report(g: &DMatrix<f64>, mu_p: &DVector<f64>, mu_q: &DVector<f64>, n: usize, dim: usize) -> TensorReport {
    let alphabet = g.nrows();
    let mut gamma = g.clone();
    let mut dp = mu_p.clone();
    let mut dq = mu_q.clone();
    for _ in 1..n {
        gamma = gamma.kronecker(g);
        dp = dp.kronecker(mu_p);
        dq = dq.kronecker(mu_q);
    }
    debug_assert_eq!(gamma.nrows(), dim);
    let overlap = dp.dot(&(&gamma * &dq));
    let norm = spectral_norm_real(&gamma);
    // Coordinate j is the j-th base-|A| digit, most significant first.
    let digit = |x: usize, j: usize| (x / alphabet.pow((n - 1 - j) as u32)) % alphabet;
    let coordinates = (0..n)
        .map(|j| {
            let masked = DMatrix::from_fn(dim, dim, |x, y| if digit(x, j) != digit(y, j) { gamma[(x, y)] } else { 0.0 });
            TensorCheck { coordinate: j, masked_norm: spectral_norm_real(&masked) }
        })
        .collect();
    TensorReport { n, dim, overlap, norm, coordinates }
}
