//! Functional calculus `f(A) = Q f(Λ) Q*` for Hermitian matrices.

use num_complex::Complex64;

use crate::eig::{hermitian_eig, SpectralDecomposition};
use crate::error::Result;
use crate::matrix::{ComplexMatrix, HermitianMatrix};

pub fn spectral_function(a: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let d = hermitian_eig(a)?;
    Ok(apply_to_decomposition(&d, f))
}

/// `f(A)` from an existing decomposition.
pub fn apply_to_decomposition(
    d: &SpectralDecomposition,
    f: impl Fn(f64) -> f64,
) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&d.reconstruct_with(f))
}

/// `|A|`.
pub fn abs_matrix(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    spectral_function(a, f64::abs)
}

/// `A_+ = max(A, 0)`.
pub fn pos_part(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    spectral_function(a, |x| x.max(0.0))
}

/// `A_− = max(−A, 0)`, so that `A = A_+ − A_−`.
pub fn neg_part(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    spectral_function(a, |x| (-x).max(0.0))
}

/// `|A − t·I|`.
pub fn shifted_abs(a: &HermitianMatrix, t: f64) -> Result<HermitianMatrix> {
    spectral_function(a, |x| (x - t).abs())
}

/// Default support threshold `n · 1e−12 · ‖A‖_∞`.
pub fn default_support_threshold(a: &HermitianMatrix, d: &SpectralDecomposition) -> f64 {
    let op_norm = d.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    a.dim() as f64 * 1e-12 * op_norm
}

/// Spectral projection onto the eigenvalues with `|λ| > eps_supp`.
pub fn support_projection(a: &HermitianMatrix, eps_supp: Option<f64>) -> Result<HermitianMatrix> {
    let d = hermitian_eig(a)?;
    let eps = eps_supp.unwrap_or_else(|| default_support_threshold(a, &d));
    Ok(apply_to_decomposition(&d, |x| {
        if x.abs() > eps {
            1.0
        } else {
            0.0
        }
    }))
}

/// `e^{iεB} = Q e^{iεΛ} Q*`.
pub fn unitary_exp(b: &HermitianMatrix, eps: f64) -> Result<ComplexMatrix> {
    let d = hermitian_eig(b)?;
    let n = d.dim();
    let q = &d.unitary;
    let mut scaled = q.clone();
    for j in 0..n {
        let phase = Complex64::from_polar(1.0, eps * d.eigenvalues[j]);
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    scaled.matmul(&q.adjoint())
}
