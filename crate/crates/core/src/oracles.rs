//! The access models as explicit unitaries with query accounting.
//!
//! Every state-generating oracle acts on a register whose basis vector 0 is
//! the reference state `e0`. For the state-preparation models the remaining
//! coordinates are `E (x) F`: symbol `a` with garbage coordinate `j` sits at
//! index `1 + a * d_F + j`.

#[allow(unused_imports)] // std's inherent methods win when std is in the graph
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::distributions::{stream_rng, ProbDist, Sampler};
use crate::qcore::linalg::{basis_vector, haar_state, haar_unitary, outer, real, CMatrix, CVector, StateVector};
use crate::qcore::UnitaryMatrix;
use crate::{Error, Result, TOL};

/// Which of the two candidate distributions an oracle encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    P,
    Q,
}

impl Label {
    pub fn other(self) -> Label {
        match self {
            Label::P => Label::Q,
            Label::Q => Label::P,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::P => "P",
            Label::Q => "Q",
        })
    }
}

/// Access models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// (i) a string whose symbol frequencies are the probabilities.
    Frequency,
    /// (ii) a string of independent samples.
    Iid,
    /// (iii) preparation of `mu_p`.
    StatePrep,
    /// (iv) preparation of `sum_a sqrt(p_a) |a> psi_a` with garbage `psi_a`.
    StatePrepGarbage,
    /// `|i>|0> -> |i>|x_i>` for a fixed string.
    Standard,
}

impl Model {
    pub fn short_name(self) -> &'static str {
        match self {
            Model::Frequency => "i",
            Model::Iid => "ii",
            Model::StatePrep => "iii",
            Model::StatePrepGarbage => "iv",
            Model::Standard => "standard",
        }
    }

    pub fn parse(s: &str) -> Option<Model> {
        Some(match s {
            "i" => Model::Frequency,
            "ii" => Model::Iid,
            "iii" => Model::StatePrep,
            "iv" => Model::StatePrepGarbage,
            "standard" => Model::Standard,
            _ => return None,
        })
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegisterLayout {
    /// `D (+) E (x) F` with `D` spanned by `e0`.
    StatePrep { alphabet: usize, garbage_dim: usize },
    /// `C^n (x) C^(|A|+1)`; answer 0 is the blank symbol, `a + 1` is symbol `a`.
    QueryAnswer { length: usize, alphabet: usize },
}

impl RegisterLayout {
    pub fn dim(&self) -> usize {
        match *self {
            RegisterLayout::StatePrep { alphabet, garbage_dim } => 1 + alphabet * garbage_dim,
            RegisterLayout::QueryAnswer { length, alphabet } => length * (alphabet + 1),
        }
    }

    pub fn alphabet(&self) -> usize {
        match *self {
            RegisterLayout::StatePrep { alphabet, .. } | RegisterLayout::QueryAnswer { alphabet, .. } => alphabet,
        }
    }

    /// Index of `|a>|f_j>` in a state-preparation layout.
    pub fn symbol_index(&self, symbol: usize, garbage: usize) -> usize {
        match *self {
            RegisterLayout::StatePrep { garbage_dim, .. } => 1 + symbol * garbage_dim + garbage,
            RegisterLayout::QueryAnswer { alphabet, .. } => garbage * (alphabet + 1) + symbol + 1,
        }
    }

    /// Index of `|i>|answer>` in a query-answer layout.
    pub fn query_index(&self, position: usize, answer: usize) -> usize {
        match *self {
            RegisterLayout::QueryAnswer { alphabet, .. } => position * (alphabet + 1) + answer,
            RegisterLayout::StatePrep { .. } => panic!("query_index on a state-preparation layout"),
        }
    }

    /// Squared norm of each symbol block of `v`.
    pub fn block_weights(&self, v: &CVector) -> Vec<f64> {
        let (alphabet, inner) = match *self {
            RegisterLayout::StatePrep { alphabet, garbage_dim } => (alphabet, garbage_dim),
            RegisterLayout::QueryAnswer { alphabet, length } => (alphabet, length),
        };
        (0..alphabet)
            .map(|a| (0..inner).map(|j| v[self.symbol_index(a, j)].norm_sqr()).sum())
            .collect()
    }
}

impl fmt::Display for RegisterLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegisterLayout::StatePrep { alphabet, garbage_dim } => write!(f, "D+E{alphabet}xF{garbage_dim}"),
            RegisterLayout::QueryAnswer { length, alphabet } => write!(f, "I{length}xA{}", alphabet + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GarbageKind {
    /// `psi_a = f_0` for every symbol.
    Trivial,
    /// Independent Haar-random `psi_a`, one ChaCha stream per symbol.
    Haar { seed: u64 },
    /// `psi_a = f_((a + slot) mod d_F)`. Two specs with different slots give
    /// orthogonal garbage on every symbol when `d_F >= 2`.
    OrthogonalAdversarial { slot: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GarbageSpec {
    pub kind: GarbageKind,
    pub dim: usize,
}

impl GarbageSpec {
    pub fn trivial() -> Self {
        GarbageSpec { kind: GarbageKind::Trivial, dim: 1 }
    }

    /// `psi_a = f_0` in a `dim`-dimensional garbage register.
    pub fn trivial_dim(dim: usize) -> Self {
        GarbageSpec { kind: GarbageKind::Trivial, dim }
    }

    pub fn haar(seed: u64, dim: usize) -> Self {
        GarbageSpec { kind: GarbageKind::Haar { seed }, dim }
    }

    pub fn adversarial(slot: usize, dim: usize) -> Self {
        GarbageSpec { kind: GarbageKind::OrthogonalAdversarial { slot }, dim }
    }

    /// The unit vectors `psi_a`, one per symbol.
    pub fn states(&self, alphabet: usize) -> Result<Vec<CVector>> {
        if self.dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok((0..alphabet)
            .map(|a| match self.kind {
                GarbageKind::Trivial => basis_vector(self.dim, 0),
                GarbageKind::Haar { seed } => haar_state(self.dim, &mut stream_rng(seed, a as u64)).into_amps(),
                GarbageKind::OrthogonalAdversarial { slot } => basis_vector(self.dim, (a + slot) % self.dim),
            })
            .collect())
    }
}

/// How the oracle acts away from `e0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Completion {
    /// The reflection `R_psi`.
    #[default]
    Householder,
    /// `R_psi (1 (+) V)` with `V` Haar random on the complement of `e0`.
    Randomized { seed: u64 },
}

/// A unitary oracle with a query counter.
#[derive(Clone, Debug)]
pub struct OracleInstance {
    model: Model,
    unitary: UnitaryMatrix,
    layout: RegisterLayout,
    query_count: u64,
    hidden_label: Option<Label>,
}

impl OracleInstance {
    pub fn new(model: Model, unitary: UnitaryMatrix, layout: RegisterLayout) -> Result<Self> {
        if unitary.dim() != layout.dim() {
            return Err(Error::DimensionMismatch { expected: layout.dim(), found: unitary.dim() });
        }
        Ok(OracleInstance { model, unitary, layout, query_count: 0, hidden_label: None })
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.hidden_label = Some(label);
        self
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn dim(&self) -> usize {
        self.unitary.dim()
    }

    /// The matrix of `O`. Reading it is free; callers that build operators out
    /// of it must bill their applications through [`OracleInstance::charge`].
    pub fn unitary(&self) -> &UnitaryMatrix {
        &self.unitary
    }

    pub fn query_count(&self) -> u64 {
        self.query_count
    }

    pub fn charge(&mut self, queries: u64) {
        self.query_count += queries;
    }

    /// `O v`, charged one query.
    pub fn apply(&mut self, v: &CVector) -> Result<CVector> {
        let out = self.unitary.apply(v)?;
        self.query_count += 1;
        Ok(out)
    }

    /// `O* v`, charged one query.
    pub fn apply_adjoint(&mut self, v: &CVector) -> Result<CVector> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        let out = self.unitary.matrix().ad_mul(v);
        self.query_count += 1;
        Ok(out)
    }

    /// `O e0`, uncharged. For tests and reports.
    pub fn prepared_state(&self) -> CVector {
        self.unitary.matrix().column(0).into_owned()
    }

    /// The encoded label, for bookkeeping outside the discriminators.
    pub fn hidden_label(&self) -> Option<Label> {
        self.hidden_label
    }

    /// A copy with the counter reset.
    pub fn fresh_clone(&self) -> Self {
        OracleInstance { query_count: 0, ..self.clone() }
    }
}

/// `e0 (+) psi`: prepends the reference coordinate.
pub fn embed(psi: &CVector) -> CVector {
    let mut v = CVector::zeros(psi.len() + 1);
    v.rows_mut(1, psi.len()).copy_from(psi);
    v
}

/// `R_psi = I - (e0 - psi)(e0 - psi)*`, for `psi` a unit vector orthogonal to
/// `e0` (coordinate 0). It exchanges `e0` and `psi` and fixes everything
/// orthogonal to both, so it is also the swap oracle.
pub fn reflection_oracle(psi: &StateVector) -> Result<UnitaryMatrix> {
    if !psi.is_normalized() {
        return Err(Error::NotNormalized { norm: psi.norm() });
    }
    let overlap = psi.amps()[0].norm();
    if overlap > TOL {
        return Err(Error::NotOrthogonalToReference { overlap });
    }
    let mut d = -psi.amps().clone();
    d[0] += real(1.0);
    let n = psi.dim();
    Ok(UnitaryMatrix::from_parts(CMatrix::identity(n, n) - outer(&d, &d)))
}

/// `O e0` for the state-preparation models.
pub fn prepared_amplitudes(model: Model, p: &ProbDist, garbage: &GarbageSpec) -> Result<(CVector, RegisterLayout)> {
    let alphabet = p.alphabet_size();
    match model {
        Model::StatePrep => {
            let layout = RegisterLayout::StatePrep { alphabet, garbage_dim: 1 };
            let v = CVector::from_iterator(1 + alphabet, core::iter::once(0.0).chain(p.sqrt_probs()).map(real));
            Ok((v, layout))
        }
        Model::StatePrepGarbage => {
            let states = garbage.states(alphabet)?;
            let layout = RegisterLayout::StatePrep { alphabet, garbage_dim: garbage.dim };
            let mut v = CVector::zeros(layout.dim());
            for (a, (sp, psi)) in p.sqrt_probs().zip(&states).enumerate() {
                for j in 0..garbage.dim {
                    v[layout.symbol_index(a, j)] = psi[j] * sp;
                }
            }
            Ok((v, layout))
        }
        other => Err(Error::InvalidParameter(format!("model {other} is not a state-preparation model"))),
    }
}

/// A state-preparation oracle for `p` in model (iii) or (iv).
pub fn prepare_oracle(
    model: Model,
    p: &ProbDist,
    garbage: &GarbageSpec,
    completion: Completion,
) -> Result<OracleInstance> {
    let (amps, layout) = prepared_amplitudes(model, p, garbage)?;
    let psi = StateVector::normalize(amps)?;
    let u = complete(&psi, completion)?;
    OracleInstance::new(model, u, layout)
}

fn complete(psi: &StateVector, completion: Completion) -> Result<UnitaryMatrix> {
    let r = reflection_oracle(psi)?;
    match completion {
        Completion::Householder => Ok(r),
        Completion::Randomized { seed } => {
            let n = psi.dim();
            let mut v = CMatrix::identity(n, n);
            if n > 1 {
                let h = haar_unitary(n - 1, &mut stream_rng(seed, u64::MAX));
                v.view_mut((1, 1), (n - 1, n - 1)).copy_from(h.matrix());
            }
            r.compose(&UnitaryMatrix::from_parts(v))
        }
    }
}

fn check_symbols(x: &[usize], alphabet: usize) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptyDimension);
    }
    match x.iter().find(|&&s| s >= alphabet) {
        Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, alphabet }),
        None => Ok(()),
    }
}

/// `O_x |i>|0> = |i>|x_i>`, completed by the transposition
/// `|i>|0> <-> |i>|x_i>` on each query position, so `O_x` is an involution.
pub fn standard_oracle(x: &[usize], alphabet: usize) -> Result<OracleInstance> {
    check_symbols(x, alphabet)?;
    let layout = RegisterLayout::QueryAnswer { length: x.len(), alphabet };
    let n = layout.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    for (i, &s) in x.iter().enumerate() {
        perm.swap(layout.query_index(i, 0), layout.query_index(i, s + 1));
    }
    let mut m = CMatrix::zeros(n, n);
    for (from, &to) in perm.iter().enumerate() {
        m[(to, from)] = real(1.0);
    }
    OracleInstance::new(Model::Standard, UnitaryMatrix::from_parts(m), layout)
}

/// The model (iv) oracle obtained from one standard query on a uniform index
/// superposition: `O e0 = (1/sqrt n) sum_i |x_i>|i>`, whose garbage for symbol
/// `a` is the normalized superposition of the positions holding `a`.
///
/// `model` records which string model the oracle came from.
pub fn lift_string_oracle(x: &[usize], alphabet: usize, model: Model) -> Result<OracleInstance> {
    check_symbols(x, alphabet)?;
    let n = x.len();
    let layout = RegisterLayout::StatePrep { alphabet, garbage_dim: n };
    let amp = real(1.0 / (n as f64).sqrt());
    let mut v = CVector::zeros(layout.dim());
    for (i, &s) in x.iter().enumerate() {
        v[layout.symbol_index(s, i)] = amp;
    }
    let u = reflection_oracle(&StateVector::normalize(v)?)?;
    OracleInstance::new(model, u, layout)
}

/// A string of length `n` in which symbol `a` occurs `n p_a` times, in
/// nondecreasing order.
pub fn frequency_string(p: &ProbDist, n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut x = Vec::with_capacity(n);
    for (a, &pa) in p.probs().iter().enumerate() {
        let scaled = pa * n as f64;
        let count = scaled.round();
        if (scaled - count).abs() > TOL {
            return Err(Error::FrequencyConstraint { symbol: a, scaled });
        }
        x.extend(core::iter::repeat_n(a, count as usize));
    }
    if x.len() != n {
        return Err(Error::InvalidParameter(format!("counts add up to {} instead of {n}", x.len())));
    }
    Ok(x)
}

/// `n` independent samples from `p`.
pub fn iid_string<R: Rng + ?Sized>(p: &ProbDist, n: usize, rng: &mut R) -> Vec<usize> {
    let sampler = Sampler::new(p);
    (0..n).map(|_| sampler.sample(rng)).collect()
}

/// `L_psi = psi e0* + e0 psi*` on `C (+) C^m`, with `e0` first.
pub fn l_matrix(psi: &CVector) -> CMatrix {
    let e = embed(psi);
    let e0 = basis_vector(psi.len() + 1, 0);
    outer(&e, &e0) + outer(&e0, &e)
}

/// `L_psi` for a vector that already carries the `e0` coordinate (which must be zero).
pub fn l_matrix_embedded(psi: &CVector) -> CMatrix {
    let e0 = basis_vector(psi.len(), 0);
    outer(psi, &e0) + outer(&e0, psi)
}

/// Bound on `||O_p - O_q||` for reflection oracles of two states at angle `alpha`.
pub fn reflection_gap(alpha: f64) -> f64 {
    let c = (0.5 * alpha).cos();
    2.0 * (1.0 - c * c * c * c).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{generate, metrics, DistFamily};
    use crate::qcore::linalg::spectral_norm;
    use alloc::vec;

    fn sub_norm(a: &UnitaryMatrix, b: &UnitaryMatrix) -> f64 {
        spectral_norm(&(a.matrix() - b.matrix()))
    }

    #[test]
    fn model3_uniform_state() {
        let p = ProbDist::uniform(4).unwrap();
        let o = prepare_oracle(Model::StatePrep, &p, &GarbageSpec::trivial(), Completion::Householder).unwrap();
        let v = o.prepared_state();
        assert!(v[0].norm() < 1e-15);
        for i in 1..5 {
            assert!((v[i] - real(0.5)).norm() < 1e-15);
        }
        assert!(o.unitary().residual() < 1e-12);
    }

    #[test]
    fn trivial_garbage_matches_model3() {
        let (p, _) = generate(&DistFamily::Bernoulli { theta_p: 0.3, theta_q: 0.6 }).unwrap();
        let a = prepare_oracle(Model::StatePrep, &p, &GarbageSpec::trivial(), Completion::Householder).unwrap();
        let b = prepare_oracle(Model::StatePrepGarbage, &p, &GarbageSpec::trivial(), Completion::Householder).unwrap();
        assert!((a.prepared_state() - b.prepared_state()).norm() < 1e-15);
    }

    #[test]
    fn haar_garbage_block_norms() {
        let p = ProbDist::new(vec![0.3, 0.7]).unwrap();
        for seed in 0..10 {
            let o = prepare_oracle(Model::StatePrepGarbage, &p, &GarbageSpec::haar(seed, 2), Completion::Householder)
                .unwrap();
            let w = o.layout().block_weights(&o.prepared_state());
            assert!((w[0] - 0.3).abs() < 1e-12 && (w[1] - 0.7).abs() < 1e-12);
            assert!(o.unitary().residual() < 1e-9);
        }
        let bad = GarbageSpec::haar(0, 0);
        assert!(prepare_oracle(Model::StatePrepGarbage, &p, &bad, Completion::Householder).is_err());
    }

    #[test]
    fn randomized_completion_keeps_prepared_state() {
        let p = ProbDist::new(vec![0.1, 0.2, 0.7]).unwrap();
        let g = GarbageSpec::haar(5, 3);
        let h = prepare_oracle(Model::StatePrepGarbage, &p, &g, Completion::Householder).unwrap();
        let r = prepare_oracle(Model::StatePrepGarbage, &p, &g, Completion::Randomized { seed: 9 }).unwrap();
        assert!((h.prepared_state() - r.prepared_state()).norm() < 1e-12);
        assert!(sub_norm(h.unitary(), r.unitary()) > 0.1);
        assert!(r.unitary().residual() < 1e-9);
    }

    #[test]
    fn reflection_swaps_e0_and_e1() {
        let psi = StateVector::basis(3, 1).unwrap();
        let r = reflection_oracle(&psi).unwrap();
        let expect = CMatrix::from_row_slice(
            3,
            3,
            &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0].map(real),
        );
        assert!((r.matrix() - expect).norm() < 1e-15);
        let bad = StateVector::basis(3, 0).unwrap();
        assert!(matches!(reflection_oracle(&bad), Err(Error::NotOrthogonalToReference { .. })));
    }

    #[test]
    fn reflection_properties_random() {
        let mut rng = stream_rng(11, 0);
        for dim in 2..10 {
            let psi = StateVector::normalize(embed(haar_state(dim, &mut rng).amps())).unwrap();
            let r = reflection_oracle(&psi).unwrap();
            let e0 = basis_vector(dim + 1, 0);
            assert!((r.matrix() * &e0 - psi.amps()).norm() < 1e-12);
            assert!((r.matrix() * psi.amps() - &e0).norm() < 1e-12);
            let sq = r.matrix() * r.matrix();
            assert!((sq - CMatrix::identity(dim + 1, dim + 1)).norm() < 1e-12);
        }
    }

    #[test]
    fn collision_reflection_gap_within_three_l_gaps() {
        let (p, q) = generate(&DistFamily::Collision { n: 4 }).unwrap();
        let g = GarbageSpec::trivial();
        let op = prepare_oracle(Model::StatePrep, &p, &g, Completion::Householder).unwrap();
        let oq = prepare_oracle(Model::StatePrep, &q, &g, Completion::Householder).unwrap();
        let l_gap = spectral_norm(&(l_matrix_embedded(&op.prepared_state()) - l_matrix_embedded(&oq.prepared_state())));
        let mu_gap = (2.0 - 2f64.sqrt()).sqrt();
        assert!((l_gap - mu_gap).abs() < 1e-9);
        let r_gap = sub_norm(op.unitary(), oq.unitary());
        assert!(r_gap <= 3.0 * l_gap + 1e-9, "{r_gap} vs {l_gap}");
        let alpha = metrics(&p, &q).unwrap().angle;
        assert!((r_gap - reflection_gap(alpha)).abs() < 1e-9);
        assert!(r_gap <= 2.0 * alpha);
    }

    #[test]
    fn standard_oracle_examples() {
        let mut o = standard_oracle(&[1], 3).unwrap();
        let l = o.layout();
        let v = basis_vector(l.dim(), l.query_index(0, 0));
        let w = o.apply(&v).unwrap();
        assert_eq!(w[l.query_index(0, 2)], real(1.0));
        let back = o.apply(&w).unwrap();
        assert_eq!(back, v);
        assert_eq!(o.query_count(), 2);

        let x = [1, 1, 2, 2];
        let mut o = standard_oracle(&x, 3).unwrap();
        let l = o.layout();
        let mut v = CVector::zeros(l.dim());
        for i in 0..4 {
            v[l.query_index(i, 0)] = real(0.5);
        }
        let w = o.apply(&v).unwrap();
        for (i, &s) in x.iter().enumerate() {
            assert_eq!(w[l.query_index(i, s + 1)], real(0.5));
        }
        assert!(matches!(standard_oracle(&[3], 3), Err(Error::SymbolOutOfRange { symbol: 3, .. })));
        assert!(standard_oracle(&[], 3).is_err());
    }

    #[test]
    fn lifted_frequency_string() {
        let x = [0, 0, 1, 1];
        let o = lift_string_oracle(&x, 2, Model::Frequency).unwrap();
        let w = o.layout().block_weights(&o.prepared_state());
        assert!((w[0] - 0.5).abs() < 1e-15 && (w[1] - 0.5).abs() < 1e-15);

        let o = lift_string_oracle(&[1, 1, 1], 3, Model::Frequency).unwrap();
        let w = o.layout().block_weights(&o.prepared_state());
        assert!((w[1] - 1.0).abs() < 1e-15);
        let q = ProbDist::point_mass(3, 1).unwrap();
        let empirical = ProbDist::from_weights(w).unwrap();
        assert_eq!(metrics(&empirical, &q).unwrap().hellinger, 0.0);
    }

    #[test]
    fn frequency_constraint() {
        let p = ProbDist::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(frequency_string(&p, 4).unwrap(), vec![0, 1, 1, 1]);
        assert!(matches!(frequency_string(&p, 6), Err(Error::FrequencyConstraint { symbol: 0, .. })));
    }

    #[test]
    fn iid_lift_block_norms() {
        let p = ProbDist::uniform(2).unwrap();
        for seed in 0..5 {
            let x = iid_string(&p, 1000, &mut stream_rng(seed, 0));
            let w = (0..2).map(|a| x.iter().filter(|&&s| s == a).count() as f64 / 1000.0);
            for wa in w {
                assert!((wa - 0.5).abs() < 0.05);
            }
        }
    }

    #[test]
    fn l_matrix_example_and_square() {
        let psi = CVector::from_vec(vec![real(1.0), real(0.0)]);
        let l = l_matrix(&psi);
        let expect = CMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0].map(real));
        assert_eq!(l, expect);
        let mut rng = stream_rng(3, 0);
        let psi = haar_state(4, &mut rng).into_amps();
        let l = l_matrix(&psi);
        let proj = outer(&basis_vector(5, 0), &basis_vector(5, 0)) + outer(&embed(&psi), &embed(&psi));
        assert!((&l * &l - proj).norm() < 1e-12);
    }

    #[test]
    fn counter_and_fresh_clone() {
        let p = ProbDist::uniform(2).unwrap();
        let mut o = prepare_oracle(Model::StatePrep, &p, &GarbageSpec::trivial(), Completion::Householder)
            .unwrap()
            .with_label(Label::Q);
        let e0 = basis_vector(3, 0);
        let v = o.apply(&e0).unwrap();
        let back = o.apply_adjoint(&v).unwrap();
        assert!((back - e0).norm() < 1e-12);
        o.charge(2);
        assert_eq!(o.query_count(), 4);
        let c = o.fresh_clone();
        assert_eq!(c.query_count(), 0);
        assert_eq!(c.hidden_label(), Some(Label::Q));
    }

    #[test]
    fn adversarial_garbage_is_orthogonal_across_slots() {
        let a = GarbageSpec::adversarial(0, 3).states(4).unwrap();
        let b = GarbageSpec::adversarial(1, 3).states(4).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.dotc(y).norm(), 0.0);
        }
    }
}
