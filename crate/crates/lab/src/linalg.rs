//! Dense complex linear algebra used as the ground truth.

use nalgebra::{DMatrix, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use gapcert_core::structured::NumRangeBounds;

use crate::error::{LabError, Result};

pub type CMatrix = DMatrix<Complex64>;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

/// Relative distance to an eigenvalue below which the resolvent is not evaluated.
pub const NEAR_SINGULAR: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real diagonal matrix as a complex matrix.
pub fn diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(values.len(), values.iter().map(|&v| c(v, 0.0))))
}

/// All eigenvalues with algebraic multiplicity, in the order of the Schur diagonal.
pub fn eig(m: &CMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(LabError::InvalidParameter(format!("matrix is {}x{}", m.nrows(), m.ncols())));
    }
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(LabError::NumericalFailure("matrix has non-finite entries".into()));
    }
    let schur = Schur::try_new(m.clone(), SCHUR_EPS, SCHUR_MAX_ITER).ok_or_else(|| {
        LabError::NumericalFailure(format!(
            "Schur iteration did not converge in {SCHUR_MAX_ITER} steps (dim {}, norm {:.3e})",
            m.nrows(),
            m.norm()
        ))
    })?;
    let (_, t) = schur.unpack();
    let ev: Vec<Complex64> = t.diagonal().iter().copied().collect();
    if ev.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(LabError::NumericalFailure(format!("non-finite eigenvalue (norm {:.3e})", m.norm())));
    }
    Ok(ev)
}

/// Eigenvalues of a Hermitian matrix in increasing order.
pub fn eig_hermitian(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    let sv: Vec<f64> = SVD::try_new_unordered(m.clone(), false, false, SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| LabError::NumericalFailure(format!("SVD did not converge (dim {})", m.nrows())))?
        .singular_values
        .iter()
        .copied()
        .collect();
    if sv.iter().any(|s| !s.is_finite()) {
        return Err(LabError::NumericalFailure(format!("non-finite singular value (norm {:.3e})", m.norm())));
    }
    Ok(sv)
}

/// `‖(M − z)⁻¹‖ = 1/σ_min(M − z)`.
pub fn resolvent_norm(m: &CMatrix, z: Complex64) -> Result<f64> {
    let mut shifted = m.clone();
    for i in 0..m.nrows() {
        shifted[(i, i)] -= z;
    }
    let sv = singular_values(&shifted)?;
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = sv.iter().copied().fold(0.0, f64::max).max(z.norm()).max(1.0);
    if smin <= NEAR_SINGULAR * scale {
        return Err(LabError::NearSingular(format!("sigma_min(M - z) = {smin:.3e} at z = {z}")));
    }
    Ok(1.0 / smin)
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    let scale = m.norm().max(1.0);
    (m - m.adjoint()).norm() <= tol * scale
}

/// Smallest `a ≥ 0` with `‖Ax‖² ≤ a²‖x‖² + b²‖Tx‖²`:
/// `√(max(0, λ_max(A*A − b²T*T)))`.
pub fn measure_quad_bound(a: &CMatrix, t: &CMatrix, b: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&b) {
        return Err(LabError::InvalidParameter(format!("b must lie in [0, 1), got {b}")));
    }
    Ok(measure_relative(a, t, b))
}

/// As [`measure_quad_bound`] without the restriction `b < 1`; block constants
/// may exceed one.
pub fn measure_relative(a: &CMatrix, t: &CMatrix, b: f64) -> f64 {
    let gram = a.adjoint() * a - (t.adjoint() * t) * c(b * b, 0.0);
    let herm = (&gram + gram.adjoint()) * c(0.5, 0.0);
    let top = eig_hermitian(&herm).last().copied().unwrap_or(0.0);
    top.max(0.0).sqrt()
}

/// Extreme points of the numerical range of a Hermitian matrix.
pub fn numrange_extremes(a: &CMatrix) -> Result<NumRangeBounds> {
    if !is_hermitian(a, 1e-12) {
        return Err(LabError::InvalidParameter("numerical range extremes need a Hermitian matrix".into()));
    }
    let ev = eig_hermitian(a);
    let (lo, hi) = (ev.first().copied().unwrap_or(0.0), ev.last().copied().unwrap_or(0.0));
    Ok(NumRangeBounds { inf_w: Some(lo), sup_w: Some(hi) })
}

/// Determinant via LU.
pub fn determinant(m: &CMatrix) -> Complex64 {
    m.clone().lu().determinant()
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}
