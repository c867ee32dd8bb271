//! Schur (Hadamard) multipliers: the entrywise product, its block form over a
//! family of orthogonal projections, and the PSD matrices built from a
//! decreasing positive sequence `α`.

use serde::Serialize;

use crate::eig::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};

/// Tolerance used when validating projection families.
pub const PROJECTION_TOL: f64 = 1e-10;

/// `α_0 ≥ α_1 ≥ … > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecreasingPositiveSeq(Vec<f64>);

impl DecreasingPositiveSeq {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidSequence("sequence must be non-empty".into()));
        }
        if alpha.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidSequence(
                "entries must be finite and strictly positive".into(),
            ));
        }
        if alpha.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSequence(
                "entries must be nonincreasing".into(),
            ));
        }
        Ok(Self(alpha))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `(A ∘ B)_{kl} = A_{kl} B_{kl}`.
pub fn hadamard(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.try_hadamard(b)
}

/// Checks that `projections` are self-adjoint idempotents, pairwise
/// orthogonal, of the given size.
pub fn validate_projections(projections: &[HermitianMatrix], dim: usize) -> Result<()> {
    for (i, p) in projections.iter().enumerate() {
        if p.dim() != dim {
            return Err(Error::InvalidProjections(format!(
                "projection {i} has size {}, expected {dim}",
                p.dim()
            )));
        }
        let idem = (&(p.as_matrix() * p.as_matrix()) - p.as_matrix()).frobenius_norm();
        if idem > PROJECTION_TOL {
            return Err(Error::InvalidProjections(format!(
                "projection {i} is not idempotent (defect {idem:.3e})"
            )));
        }
    }
    for i in 0..projections.len() {
        for j in (i + 1)..projections.len() {
            let cross = (projections[i].as_matrix() * projections[j].as_matrix()).frobenius_norm();
            if cross > PROJECTION_TOL {
                return Err(Error::InvalidProjections(format!(
                    "projections {i} and {j} are not orthogonal (defect {cross:.3e})"
                )));
            }
        }
    }
    Ok(())
}

/// `Σ_{i,j} B_{ij} p_i X p_j` for mutually orthogonal projections `p_i`.
pub fn block_schur(
    bmat: &ComplexMatrix,
    projections: &[HermitianMatrix],
    x: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let k = bmat.square_dim()?;
    if projections.len() != k {
        return Err(Error::InvalidProjections(format!(
            "{} projections for a {k}x{k} coefficient matrix",
            projections.len()
        )));
    }
    let dim = x.square_dim()?;
    validate_projections(projections, dim)?;
    let left: Vec<ComplexMatrix> = projections.iter().map(|p| p.as_matrix() * x).collect();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..k {
        for j in 0..k {
            let coef = bmat[(i, j)];
            if coef.norm() == 0.0 {
                continue;
            }
            let block = &left[i] * projections[j].as_matrix();
            out = &out + &block.scale_complex(coef);
        }
    }
    Ok(out)
}

/// Diagonal projections `diag(1_{block = i})` for consecutive blocks of the
/// given sizes.
pub fn coordinate_block_projections(sizes: &[usize]) -> Vec<HermitianMatrix> {
    let dim: usize = sizes.iter().sum();
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let d: Vec<f64> = (0..dim)
                .map(|i| {
                    if (start..start + s).contains(&i) {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            start += s;
            HermitianMatrix::from_real_diag(&d)
        })
        .collect()
}

/// Cauchy matrix `Φ₁ = (1/(α_k + α_l))`.
pub fn cauchy_matrix(alpha: &DecreasingPositiveSeq) -> HermitianMatrix {
    let a = alpha.values();
    HermitianMatrix::hermitian_part(&ComplexMatrix::from_fn(a.len(), a.len(), |k, l| {
        (1.0 / (a[k] + a[l])).into()
    }))
}

/// `Φ = (α_{max(k,l)}/(α_k + α_l))`.
pub fn phi_matrix(alpha: &DecreasingPositiveSeq) -> HermitianMatrix {
    let a = alpha.values();
    HermitianMatrix::hermitian_part(&ComplexMatrix::from_fn(a.len(), a.len(), |k, l| {
        (a[k.max(l)] / (a[k] + a[l])).into()
    }))
}

/// One summand `coefficient · matrix` of the decomposition of `Φ`.
#[derive(Debug, Clone)]
pub struct PhiTerm {
    pub coefficient: f64,
    pub matrix: HermitianMatrix,
}

impl PhiTerm {
    pub fn scaled(&self) -> ComplexMatrix {
        self.matrix.scale(self.coefficient).into_matrix()
    }
}

/// `Φ = Σ_{k<n−1} (α_k − α_{k+1})·P_kΦ₁P_k + α_{n−1}·Φ₁` with
/// `P_k = p_0 + … + p_k` the coordinate projection onto the first `k+1`
/// basis vectors. Every term is PSD because `Φ₁` is; terms with a zero gap
/// are kept so that term `k` always belongs to gap `k`.
pub fn phi_decomposition(alpha: &DecreasingPositiveSeq) -> Vec<PhiTerm> {
    let a = alpha.values();
    let n = a.len();
    let phi1 = cauchy_matrix(alpha);
    let mut terms = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(1) {
        let compressed = ComplexMatrix::from_fn(n, n, |i, j| {
            if i <= k && j <= k {
                phi1[(i, j)]
            } else {
                0.0f64.into()
            }
        });
        terms.push(PhiTerm {
            coefficient: a[k] - a[k + 1],
            matrix: HermitianMatrix::hermitian_part(&compressed),
        });
    }
    terms.push(PhiTerm {
        coefficient: a[n - 1],
        matrix: phi1,
    });
    terms
}

/// Smallest eigenvalue and whether it clears `−tol·max(1, ‖A‖_∞)`.
pub fn is_psd(a: &HermitianMatrix, tol: f64) -> Result<(bool, f64)> {
    let ev = hermitian_eigenvalues(a)?;
    let lambda_min = *ev.last().expect("non-empty spectrum");
    let op = ev[0].abs().max(lambda_min.abs());
    Ok((lambda_min >= -tol * op.max(1.0), lambda_min))
}
