//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq = |a_pq|·v` with
//! `diag(v, 1)` and then applies the real symmetric Jacobi rotation, so the
//! 2×2 unitary is `J = [[v·c, v·s], [−s, c]]` acting on columns `p, q`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};

/// Sweeps stop once the off-diagonal Frobenius norm drops below
/// `SWEEP_THRESHOLD · ‖A‖_F`.
pub const SWEEP_THRESHOLD: f64 = 1e-14;
pub const MAX_SWEEPS: usize = 40;

/// Eigenvalues sorted nonincreasing, eigenvectors as the columns of `unitary`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub unitary: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Q · diag(f(λ)) · Q*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let q = &self.unitary;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut scaled = q.clone();
        for i in 0..n {
            for j in 0..n {
                scaled[(i, j)] *= weights[j];
            }
        }
        scaled.matmul(&q.adjoint()).expect("square factors")
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    /// `‖Q*Q − I‖_F`.
    pub fn orthogonality_defect(&self) -> f64 {
        let q = &self.unitary;
        let gram = q.adjoint_matmul(q).expect("square");
        (&gram - &ComplexMatrix::identity(self.dim())).frobenius_norm()
    }
}

/// Rotation parameters `(t, c, s, v)` that annihilate the off-diagonal entry
/// `z` of the Hermitian block `[[a, z], [z̄, b]]`.
#[inline]
pub(crate) fn rotation(a: f64, b: f64, z: Complex64) -> (f64, f64, f64, Complex64) {
    let g = z.norm();
    let v = z / g;
    let theta = (b - a) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (t, c, t * c, v)
}

fn off_diagonal_norm(m: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi(a: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let n = a.square_dim()?;
    if n == 0 {
        return Err(Error::Empty);
    }
    let mut m = a.as_slice().to_vec();
    let mut q = want_vectors.then(|| ComplexMatrix::identity(n));
    let tol = SWEEP_THRESHOLD * a.frobenius_norm();
    let skip = tol / n as f64;

    let mut off = off_diagonal_norm(&m, n);
    let mut sweeps = 0;
    while off > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for r in (p + 1)..n {
                let z = m[p * n + r];
                if z.norm() <= skip {
                    continue;
                }
                let app = m[p * n + p].re;
                let arr = m[r * n + r].re;
                let (t, c, s, v) = rotation(app, arr, z);
                let g = z.norm();
                let vc = v * c;
                let vs = v * s;
                // A ← A·J
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akr = m[k * n + r];
                    m[k * n + p] = akp * vc - akr * s;
                    m[k * n + r] = akp * vs + akr * c;
                }
                // A ← J*·A
                let (vcc, vsc) = (vc.conj(), vs.conj());
                for k in 0..n {
                    let apk = m[p * n + k];
                    let ark = m[r * n + k];
                    m[p * n + k] = vcc * apk - ark * s;
                    m[r * n + k] = vsc * apk + ark * c;
                }
                m[p * n + p] = Complex64::new(app - t * g, 0.0);
                m[r * n + r] = Complex64::new(arr + t * g, 0.0);
                m[p * n + r] = Complex64::new(0.0, 0.0);
                m[r * n + p] = Complex64::new(0.0, 0.0);
                if let Some(q) = q.as_mut() {
                    let qs = q.as_mut_slice();
                    for k in 0..n {
                        let qkp = qs[k * n + p];
                        let qkr = qs[k * n + r];
                        qs[k * n + p] = qkp * vc - qkr * s;
                        qs[k * n + r] = qkp * vs + qkr * c;
                    }
                }
            }
        }
        off = off_diagonal_norm(&m, n);
    }

    let raw: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    // stable sort: ties keep Jacobi output order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].total_cmp(&raw[i]));
    let eigenvalues = order.iter().map(|&i| raw[i]).collect();
    let vectors = q.map(|q| q.select_columns(&order));
    Ok((eigenvalues, vectors))
}

/// Full eigendecomposition `A = Q Λ Q*`.
pub fn hermitian_eig(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let (eigenvalues, q) = jacobi(a.as_matrix(), true)?;
    Ok(SpectralDecomposition {
        eigenvalues,
        unitary: q.expect("vectors requested"),
    })
}

/// Eigenvalues only (nonincreasing); skips accumulating the eigenvectors.
pub fn hermitian_eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(a.as_matrix(), false)?.0)
}

/// Singular values of an arbitrary matrix by one-sided (Hestenes) Jacobi,
/// sorted nonincreasing, length `min(rows, cols)`.
///
/// Columns are rotated pairwise until mutually orthogonal; the singular values
/// are then the column norms. Accuracy is absolute `O(ε·‖M‖)` for every value,
/// including those near zero.
pub(crate) fn jacobi_singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let work = if m.nrows() >= m.ncols() {
        m.clone()
    } else {
        m.adjoint()
    };
    let (rows, cols) = work.shape();
    if cols == 0 {
        return Ok(Vec::new());
    }
    // column-major copy so rotations touch contiguous memory
    let mut c: Vec<Vec<Complex64>> = (0..cols).map(|j| work.column(j)).collect();
    let tol = rows.max(2) as f64 * f64::EPSILON;
    let mut norms: Vec<f64> = c
        .iter()
        .map(|col| col.iter().map(Complex64::norm_sqr).sum())
        .collect();

    let mut converged = false;
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..cols - 1 {
            for r in (p + 1)..cols {
                let (alpha, beta) = (norms[p], norms[r]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: Complex64 = c[p].iter().zip(&c[r]).map(|(x, y)| x.conj() * y).sum();
                if gamma.norm() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (_, cs, sn, v) = rotation(alpha, beta, gamma);
                let (vc, vs) = (v * cs, v * sn);
                let (left, right) = c.split_at_mut(r);
                let (cp, cr) = (&mut left[p], &mut right[0]);
                let (mut np, mut nr) = (0.0, 0.0);
                for (x, y) in cp.iter_mut().zip(cr.iter_mut()) {
                    let (a, b) = (*x, *y);
                    *x = a * vc - b * sn;
                    *y = a * vs + b * cs;
                    np += x.norm_sqr();
                    nr += y.norm_sqr();
                }
                norms[p] = np;
                norms[r] = nr;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: 60,
            residual: f64::NAN,
        });
    }
    let mut sv: Vec<f64> = norms.iter().map(|x| x.sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::rng::trial_rng;
    use crate::harness::sample::sample_hermitian;
    use crate::harness::sample::{conjugate_diag, random_unitary};
    use proptest::prelude::*;

    #[test]
    fn diagonal_input_sorts_and_permutes() {
        let a = HermitianMatrix::from_real_diag(&[3.0, -1.0, 2.0]);
        let d = hermitian_eig(&a).unwrap();
        assert_eq!(d.eigenvalues, vec![3.0, 2.0, -1.0]);
        // Q is a permutation here: each column has a single unit entry
        for j in 0..3 {
            let col = d.unitary.column(j);
            let nonzero: Vec<_> = col.iter().filter(|z| z.norm() > 0.0).collect();
            assert_eq!(nonzero.len(), 1);
            assert!((nonzero[0].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let d = hermitian_eig(&HermitianMatrix::identity(4)).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0; 4]);
        assert!(d.orthogonality_defect() < 1e-15);
    }

    #[test]
    fn random_reconstruction_seed_7() {
        let a = sample_hermitian(8, &mut trial_rng(7, 0));
        let d = hermitian_eig(&a).unwrap();
        let err = (&d.reconstruct() - a.as_matrix()).frobenius_norm();
        assert!(err <= 8e-12 * a.frobenius_norm(), "err = {err:e}");
        assert!(d.orthogonality_defect() <= 8.0 * 1e-13);
        assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn complex_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 2 and 0
        let m = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        let d = hermitian_eig(&HermitianMatrix::new(m.clone()).unwrap()).unwrap();
        assert!((d.eigenvalues[0] - 2.0).abs() < 1e-15);
        assert!(d.eigenvalues[1].abs() < 1e-15);
        assert!((&d.reconstruct() - &m).frobenius_norm() < 1e-14);
    }

    #[test]
    fn empty_matrix_is_an_error() {
        assert_eq!(
            hermitian_eig(&HermitianMatrix::zeros(0)).unwrap_err(),
            Error::Empty
        );
    }

    #[test]
    fn eigenvalues_only_match_full_decomposition() {
        let a = sample_hermitian(12, &mut trial_rng(19, 3));
        let full = hermitian_eig(&a).unwrap();
        let vals = hermitian_eigenvalues(&a).unwrap();
        assert_eq!(full.eigenvalues, vals);
    }

    #[test]
    fn hestenes_matches_hand_singular_values() {
        let m = ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![-2.0, 0.0]]).unwrap();
        let sv = jacobi_singular_values(&m).unwrap();
        assert!((sv[0] - 2.0).abs() < 1e-15 && (sv[1] - 2.0).abs() < 1e-15);
        let rect =
            ComplexMatrix::from_real_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 0.0, 4.0]]).unwrap();
        assert_eq!(jacobi_singular_values(&rect).unwrap(), vec![4.0, 3.0]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn decomposition_meets_accuracy_contract(seed in 0u64..10_000, n in 1usize..24) {
            let a = sample_hermitian(n, &mut trial_rng(seed, 0));
            let d = hermitian_eig(&a).unwrap();
            let scale = a.frobenius_norm();
            prop_assert!((&d.reconstruct() - a.as_matrix()).frobenius_norm() <= n as f64 * 1e-12 * scale.max(f64::MIN_POSITIVE));
            prop_assert!(d.orthogonality_defect() <= n as f64 * 1e-13);
            prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn prescribed_spectrum_is_recovered(seed in 0u64..10_000, mut lambda in proptest::collection::vec(-5.0f64..5.0, 1..12)) {
            let w = random_unitary(lambda.len(), &mut trial_rng(seed, 1));
            let a = conjugate_diag(&w, &lambda);
            lambda.sort_by(|x, y| y.total_cmp(x));
            for (got, want) in hermitian_eigenvalues(&a).unwrap().iter().zip(&lambda) {
                prop_assert!((got - want).abs() <= 1e-11);
            }
        }
    }
}
