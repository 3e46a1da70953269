//! Dense complex vectors and matrices with the invariants the rest of the
//! crate relies on: unit-norm states, unitaries and orthogonal projectors.

#[allow(unused_imports)] // std's inherent methods win when std is in the graph
use num_traits::Float;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result, TOL};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Norm tolerance for states flagged as normalized.
pub const NORM_TOL: f64 = 1e-10;

pub(crate) const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = Complex { re: 1.0, im: 0.0 };

#[inline]
pub fn real(x: f64) -> C64 {
    Complex::new(x, 0.0)
}

/// `a b^*`.
pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

/// Conjugate-linear in the first argument.
pub fn inner(a: &CVector, b: &CVector) -> C64 {
    a.dotc(b)
}

pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

/// Maximum absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn unitarity_residual(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let mut g = m.adjoint() * m;
    for i in 0..g.nrows() {
        g[(i, i)] -= ONE;
    }
    max_abs(&g)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().fold(0.0, |a, &s| a.max(s))
}

pub fn spectral_norm_real(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().fold(0.0, |a, &s| a.max(s))
}

/// A state (or, when not flagged normalized, an arbitrary vector) in `C^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: CVector,
    normalized: bool,
}

impl StateVector {
    /// Unit-norm state; fails if `| ||amps|| - 1 | > 1e-10`.
    pub fn new(amps: CVector) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyDimension);
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector { amps, normalized: true })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalize(amps: CVector) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyDimension);
        }
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector { amps: amps.unscale(norm), normalized: true })
    }

    /// A vector with no norm constraint (witness vectors, unnormalized
    /// superpositions).
    pub fn unnormalized(amps: CVector) -> Self {
        StateVector { amps, normalized: false }
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(CVector::from_iterator(values.len(), values.iter().map(|&x| real(x))))
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index + 1 });
        }
        Ok(StateVector { amps: basis_vector(dim, index), normalized: true })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &CVector {
        &self.amps
    }

    pub fn into_amps(self) -> CVector {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        inner(&self.amps, &other.amps)
    }
}

/// A square matrix with `max |U*U - I| <= 1e-9`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    entries: CMatrix,
}

impl UnitaryMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() == 0 {
            return Err(Error::EmptyDimension);
        }
        if !entries.is_square() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), found: entries.ncols() });
        }
        let residual = unitarity_residual(&entries);
        if residual > TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(UnitaryMatrix { entries })
    }

    /// Skips the unitarity check; callers build the matrix from unitary factors.
    pub(crate) fn from_parts(entries: CMatrix) -> Self {
        debug_assert!(unitarity_residual(&entries) <= TOL);
        UnitaryMatrix { entries }
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix { entries: CMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix { entries: self.entries.adjoint() }
    }

    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: rhs.dim() });
        }
        Ok(UnitaryMatrix { entries: &self.entries * &rhs.entries })
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(&self.entries * v)
    }

    pub fn residual(&self) -> f64 {
        unitarity_residual(&self.entries)
    }
}

/// An orthogonal projector: `P^2 = P = P^*` within 1e-9.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    entries: CMatrix,
}

impl Projector {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() == 0 {
            return Err(Error::EmptyDimension);
        }
        if !entries.is_square() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), found: entries.ncols() });
        }
        let idempotent = max_abs(&(&entries * &entries - &entries));
        let hermitian = max_abs(&(&entries - entries.adjoint()));
        let residual = idempotent.max(hermitian);
        if residual > TOL {
            return Err(Error::NotProjector { residual });
        }
        Ok(Projector { entries })
    }

    /// Projector onto the span of `vectors` (which may be linearly dependent).
    pub fn onto_span(dim: usize, vectors: &[CVector]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        for v in vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
        }
        let basis = orthonormalize(vectors.iter(), RANK_TOL);
        let mut p = CMatrix::zeros(dim, dim);
        for b in &basis {
            p += outer(b, b);
        }
        Ok(Projector { entries: p })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn complement(&self) -> Projector {
        let n = self.dim();
        Projector { entries: CMatrix::identity(n, n) - &self.entries }
    }

    /// `2P - I`.
    pub fn reflection(&self) -> UnitaryMatrix {
        let n = self.dim();
        UnitaryMatrix { entries: self.entries.scale(2.0) - CMatrix::identity(n, n) }
    }

    pub fn rank(&self) -> usize {
        let tr: f64 = (0..self.dim()).map(|i| self.entries[(i, i)].re).sum();
        tr.round() as usize
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(&self.entries * v)
    }
}

/// Relative threshold below which a Gram-Schmidt residual is treated as
/// linearly dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Modified Gram-Schmidt with one re-orthogonalization pass. A vector whose
/// residual norm drops below `threshold` times its original norm is skipped.
pub fn orthonormalize<'a, I>(vectors: I, threshold: f64) -> Vec<CVector>
where
    I: IntoIterator<Item = &'a CVector>,
{
    let mut basis: Vec<CVector> = Vec::new();
    for v in vectors {
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &r);
                r.axpy(-c, b, ONE);
            }
        }
        let n = r.norm();
        if n > threshold * scale {
            basis.push(r.unscale(n));
        }
    }
    basis
}

/// Unitary whose leading columns are `leading` (assumed orthonormal), completed
/// by Gram-Schmidt against the standard basis.
pub fn complete_basis(dim: usize, leading: &[CVector], threshold: f64) -> CMatrix {
    let standard: Vec<CVector> = (0..dim).map(|i| basis_vector(dim, i)).collect();
    let cols = orthonormalize(leading.iter().chain(standard.iter()), threshold);
    debug_assert_eq!(cols.len(), dim);
    CMatrix::from_columns(&cols[..dim])
}

/// Eigendecomposition of a unitary: eigenphases in `[0, 2pi)` and an
/// orthonormal matrix of eigenvectors (columns), via the complex Schur form.
#[derive(Clone, Debug)]
pub struct UnitaryEigen {
    pub phases: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn unitary_eigen(u: &CMatrix) -> Result<UnitaryEigen> {
    let n = u.nrows();
    let schur = nalgebra::linalg::Schur::try_new(u.clone(), 1e-15, 10_000)
        .ok_or(Error::Decomposition("complex Schur decomposition"))?;
    let (q, t) = schur.unpack();
    let phases = (0..n).map(|i| wrap_phase(t[(i, i)].arg())).collect();
    Ok(UnitaryEigen { phases, vectors: q })
}

/// Maps an angle to `[0, 2pi)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let tau = 2.0 * core::f64::consts::PI;
    let mut w = theta % tau;
    if w < 0.0 {
        w += tau;
    }
    if w >= tau {
        w -= tau;
    }
    w
}

/// Signed representative of an angle in `(-pi, pi]`.
pub fn signed_phase(theta: f64) -> f64 {
    let pi = core::f64::consts::PI;
    let w = wrap_phase(theta);
    if w > pi {
        w - 2.0 * pi
    } else {
        w
    }
}

/// Distance on the circle between two angles.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    signed_phase(a - b).abs()
}

/// Haar-random unitary (QR of a complex Ginibre matrix with the phases of
/// `R`'s diagonal divided out).
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let n = d.norm();
        let phase = if n > 0.0 { d / n } else { ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::from_parts(q)
}

/// Haar-random unit vector.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| gaussian(rng));
        if let Ok(s) = StateVector::normalize(v) {
            return s;
        }
    }
}

pub(crate) fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}
