//! Dense complex matrices and Hermitian spectral routines.
//!
//! Storage is `nalgebra::DMatrix<Complex64>`. The validated wrappers
//! [`DensityMatrix`] and [`UnitaryMatrix`] are immutable after construction.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative Hermiticity tolerance for validated types.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative Hermiticity tolerance accepted by the spectral routines.
pub const SPECTRAL_HERMITIAN_TOL: f64 = 1e-8;
/// Absolute tolerance on `U^dag U - I`.
pub const UNITARY_TOL: f64 = 1e-10;
/// Negative eigenvalues above this are treated as rounding noise in density matrices.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues below this make `psd_sqrt` reject its input.
pub const SQRT_REJECT_TOL: f64 = 1e-6;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Hilbert-Schmidt inner product `Tr(A^dag B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    frobenius_norm(&(m - m.adjoint()))
}

pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `|v><v|`.
pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn ensure_same_square(a: &CMatrix, b: &CMatrix) -> Result<usize> {
    let d = ensure_square(a)?;
    let e = ensure_square(b)?;
    if d != e {
        return Err(Error::DimensionMismatch { expected: d, found: e });
    }
    Ok(d)
}

/// Checks Hermiticity against `tol * max(1, ||m||_F)` and returns the symmetrized matrix.
fn hermitian_part(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let residual = hermiticity_residual(m);
    if residual > tol * frobenius_norm(m).max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(symmetrize(m))
}

/// `AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    ensure_same_square(a, b)?;
    Ok(a * b - b * a)
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    /// `V f(Lambda) V^dag`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

pub fn hermitian_eig(h: &CMatrix) -> Result<HermitianEigen> {
    let sym = hermitian_part(h, SPECTRAL_HERMITIAN_TOL)?;
    let d = sym.nrows();
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

pub fn hermitian_eigenvalues(h: &CMatrix) -> Result<Vec<f64>> {
    let sym = hermitian_part(h, SPECTRAL_HERMITIAN_TOL)?;
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigenvalues at or below this are rounding noise of the solver:
/// `16 n eps max|lambda|`. Their square roots would otherwise leak
/// `O(sqrt(eps))` errors into roots and fidelities.
pub fn spectral_floor(values: &[f64]) -> f64 {
    let top = values.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    16.0 * values.len() as f64 * f64::EPSILON * top
}

/// Principal square root of a PSD matrix. Eigenvalues in `[-1e-6, 0)` and
/// those below [`spectral_floor`] are treated as zero.
pub fn psd_sqrt(p: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(p)?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -SQRT_REJECT_TOL {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    let floor = spectral_floor(&eig.values);
    Ok(symmetrize(&eig.map(|l| c64(if l > floor { l.sqrt() } else { 0.0 }, 0.0))))
}

/// `exp(i theta H)` for Hermitian `H`.
pub fn exp_i_hermitian(h: &CMatrix, theta: f64) -> Result<UnitaryMatrix> {
    let eig = hermitian_eig(h)?;
    UnitaryMatrix::new(eig.map(|l| Complex64::from_polar(1.0, theta * l)))
}

/// Unit-trace, Hermitian, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    /// Validates and stores `m`.
    ///
    /// Within-tolerance asymmetry is symmetrized away. Eigenvalues in
    /// `[-1e-10, 0)` are clipped to zero and the trace renormalized; anything
    /// more negative is rejected.
    pub fn new(m: CMatrix) -> Result<Self> {
        let sym = hermitian_part(&m, HERMITIAN_TOL)?;
        let tr = trace(&sym).re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnitTrace { trace: tr });
        }
        let eig = hermitian_eig(&sym)?;
        let min = eig.values[0];
        if min < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
        if min < 0.0 {
            let total: f64 = eig.values.iter().map(|l| l.max(0.0)).sum();
            let clipped = eig.map(|l| c64(l.max(0.0) / total, 0.0));
            return Ok(DensityMatrix(symmetrize(&clipped)));
        }
        Ok(DensityMatrix(sym))
    }

    /// Normalizes a nonzero PSD matrix by its trace.
    pub fn from_unnormalized(m: CMatrix) -> Result<Self> {
        ensure_square(&m)?;
        let tr = trace(&m).re;
        if tr.is_nan() || tr <= 0.0 {
            return Err(Error::NotUnitTrace { trace: tr });
        }
        Self::new(m.unscale(tr))
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let n = psi.norm();
        if n.is_nan() || n <= 0.0 || !n.is_finite() {
            return Err(Error::invalid("pure state vector must be nonzero and finite"));
        }
        Self::new(projector(&psi.unscale(n)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix(identity(d).unscale(d as f64))
    }

    /// Basis projector `|k><k|` in dimension `d`.
    pub fn basis_state(d: usize, k: usize) -> Self {
        let mut m = CMatrix::zeros(d, d);
        m[(k, k)] = c64(1.0, 0.0);
        DensityMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0).expect("density matrix is Hermitian")
    }

    pub fn eigen(&self) -> HermitianEigen {
        hermitian_eig(&self.0).expect("density matrix is Hermitian")
    }

    pub fn purity(&self) -> f64 {
        hs_inner(&self.0, &self.0).re
    }

    /// `(1 - eps) rho + eps I/d`.
    pub fn mix_with_identity(&self, eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::invalid(format!("mixing weight {eps} outside [0, 1]")));
        }
        let d = self.dim();
        let m = self.0.scale(1.0 - eps) + identity(d).scale(eps / d as f64);
        Self::new(m)
    }
}

/// Square matrix with `||U^dag U - I||_F <= 1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let d = ensure_square(&m)?;
        ensure_finite(&m)?;
        let residual = unitarity_residual(&m, d);
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(UnitaryMatrix(m))
    }

    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        UnitaryMatrix(m)
    }

    pub fn identity(d: usize) -> Self {
        UnitaryMatrix(identity(d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMatrix(self.0.adjoint())
    }

    pub fn compose(&self, other: &UnitaryMatrix) -> Self {
        UnitaryMatrix(&self.0 * &other.0)
    }

    /// `U M U^dag`.
    pub fn conjugate(&self, m: &CMatrix) -> CMatrix {
        &self.0 * m * self.0.adjoint()
    }

    pub fn residual(&self) -> f64 {
        unitarity_residual(&self.0, self.dim())
    }
}

fn unitarity_residual(m: &CMatrix, d: usize) -> f64 {
    frobenius_norm(&(m.adjoint() * m - identity(d)))
}

/// Minimum over phases of `||A - e^{i phi} B||_F`.
pub fn phase_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap = hs_inner(b, a);
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c64(1.0, 0.0) };
    frobenius_norm(&(a - b * phase))
}
