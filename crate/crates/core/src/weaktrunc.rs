//! Triangular truncation `T` (keeps `i ≥ j`), its reflection `2T − 1`, and the
//! multiplier `S(A) = Σ (α_k − α_l)/(α_k + α_l) p_k A p_l` together with the
//! factorisation `S = (2T − 1)(2M_Φ − 1)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::{C_S, C_TRUNC, C_TRUNC_SA};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix, HERMITIAN_TOL};
use crate::norms::{trace_norm, weak_l1_norm};
use crate::report::Report;
use crate::schur::{
    block_schur, hadamard, phi_matrix, validate_projections, DecreasingPositiveSeq,
};

/// `T(A)_{ij} = A_{ij}` for `i ≥ j`, zero above the diagonal.
pub fn tri_trunc(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.square_dim()?;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            a[(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `(2T − 1)(A)`: negates the strict upper triangle.
pub fn reflect_trunc(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.square_dim()?;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            a[(i, j)]
        } else {
            -a[(i, j)]
        }
    }))
}

/// Coefficients `(m_k − m_l)/(m_k + m_l)`, with `0/0` read as `0`.
pub fn ratio_coefficients(m: &[f64]) -> ComplexMatrix {
    let n = m.len();
    ComplexMatrix::from_fn(n, n, |k, l| {
        let sum = m[k] + m[l];
        if sum == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((m[k] - m[l]) / sum, 0.0)
        }
    })
}

/// `S(A)` with the coordinate rank-one projections, or with a custom family
/// of mutually orthogonal rank-one projections.
pub fn s_operator(
    alpha: &DecreasingPositiveSeq,
    a: &ComplexMatrix,
    projections: Option<&[HermitianMatrix]>,
) -> Result<ComplexMatrix> {
    let n = a.square_dim()?;
    if n != alpha.len() {
        return Err(Error::ShapeMismatch {
            left: (alpha.len(), alpha.len()),
            right: a.shape(),
        });
    }
    let coef = ratio_coefficients(alpha.values());
    match projections {
        None => hadamard(&coef, a),
        Some(ps) => {
            validate_projections(ps, n)?;
            if let Some((i, p)) = ps
                .iter()
                .enumerate()
                .find(|(_, p)| (p.trace().re - 1.0).abs() > 1e-10)
            {
                return Err(Error::InvalidProjections(format!(
                    "projection {i} has trace {:.6}, expected rank one",
                    p.trace().re
                )));
            }
            block_schur(&coef, ps, a)
        }
    }
}

/// `S` for the rank-one projections onto the orthonormal columns of `w`
/// (`m` columns in an `n`-dimensional space): `W (G ∘ W*AW) W*`.
pub fn s_operator_in_basis(
    m: &[f64],
    w: &ComplexMatrix,
    a: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let compressed = w.adjoint_matmul(&a.matmul(w)?)?;
    let inner = hadamard(&ratio_coefficients(m), &compressed)?;
    w.matmul(&inner)?.matmul(&w.adjoint())
}

/// `‖S(A) − (2T − 1)(2·Φ∘A − A)‖_F`.
pub fn verify_s_factorization(alpha: &DecreasingPositiveSeq, a: &ComplexMatrix) -> Result<f64> {
    let s = s_operator(alpha, a, None)?;
    let phi = phi_matrix(alpha);
    let inner = &hadamard(&phi, a)?.scale(2.0) - a;
    Ok((&s - &reflect_trunc(&inner)?).frobenius_norm())
}

/// Outcome of the reflected-truncation weak-norm check.
#[derive(Debug, Clone, Serialize)]
pub struct TruncationBounds {
    pub weak_reflected: f64,
    pub trace_input: f64,
    /// `‖(2T − 1)X‖_{1,∞} / ‖X‖_1`, zero for `X = 0`.
    pub ratio: f64,
    pub self_adjoint: bool,
    pub report: Report,
}

/// Weak-norm bounds for `2T − 1` on zero-diagonal input: `4e/π` when `X` is
/// self-adjoint and `16e/π` always.
pub fn check_truncation_bounds(x: &ComplexMatrix, slack: f64) -> Result<TruncationBounds> {
    let n = x.square_dim()?;
    if let Some(i) = (0..n).find(|&i| x[(i, i)].norm() != 0.0) {
        return Err(Error::NonZeroDiagonal {
            index: i,
            value: x[(i, i)].norm(),
        });
    }
    let weak = weak_l1_norm(&reflect_trunc(x)?)?;
    let trace = trace_norm(x)?;
    let ratio = if trace > 0.0 { weak / trace } else { 0.0 };
    let self_adjoint = x.hermitian_defect() <= HERMITIAN_TOL * x.frobenius_norm();
    let mut report = Report::new(slack);
    if self_adjoint {
        report.le(
            "reflected truncation (self-adjoint)",
            weak,
            C_TRUNC_SA * trace,
            0.0,
        );
    }
    report.le("reflected truncation (general)", weak, C_TRUNC * trace, 0.0);
    Ok(TruncationBounds {
        weak_reflected: weak,
        trace_input: trace,
        ratio,
        self_adjoint,
        report,
    })
}

/// `‖S(A)‖_{1,∞} ≤ (80e/π)‖A‖_1` and `‖2Φ∘A − A‖_1 ≤ 5‖A‖_1`.
pub fn check_s_bounds(
    alpha: &DecreasingPositiveSeq,
    a: &ComplexMatrix,
    slack: f64,
) -> Result<Report> {
    let s = s_operator(alpha, a, None)?;
    let trace = trace_norm(a)?;
    let mut report = Report::new(slack);
    report.le(
        "multiplier S weak bound",
        weak_l1_norm(&s)?,
        C_S * trace,
        0.0,
    );
    let phi = phi_matrix(alpha);
    let reflected_schur = &hadamard(&phi, a)?.scale(2.0) - a;
    report.le(
        "2M_phi - 1 trace bound",
        trace_norm(&reflected_schur)?,
        5.0 * trace,
        0.0,
    );
    Ok(report)
}
