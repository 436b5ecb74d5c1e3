//! Small dense-matrix helpers shared across modules.

use crate::{C64, CMat};
use nalgebra::Complex;

/// Max absolute entry of a complex matrix.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Max-norm distance between two matrices.
pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

/// `‖U^*U − I‖_max`.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.nrows();
    max_diff(&(u.adjoint() * u), &CMat::identity(n, n))
}

/// `‖A + A^*‖_max`, zero iff anti-Hermitian.
pub fn anti_hermitian_defect(a: &CMat) -> f64 {
    max_abs(&(a + a.adjoint()))
}

/// Trace of a complex matrix.
pub fn trace(m: &CMat) -> C64 {
    m.diagonal().iter().sum()
}

/// Commutator `[a, b]`.
pub fn comm(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Exponential of an anti-Hermitian matrix, through the Hermitian
/// eigendecomposition of `-i a`. The result is unitary to roundoff, which
/// keeps flows exactly on the group.
pub fn exp_anti_hermitian(a: &CMat) -> CMat {
    let h = a * Complex::new(0.0, -1.0);
    let eig = h.symmetric_eigen();
    let phases = CMat::from_diagonal(&eig.eigenvalues.map(|x| C64::from_polar(1.0, x)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}
