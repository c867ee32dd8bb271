//! Random instance generators.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::absdiff::SYMMETRIC_DELTA_FLOOR;
use crate::matrix::{ComplexMatrix, HermitianMatrix};

use super::rng::{trial_rng, TrialRng};
use super::sweep::{Structure, TrialConfig};

fn normal(rng: &mut TrialRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_gaussian(rng: &mut TrialRng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

/// I.i.d. complex Gaussian entries scaled so the operator norm is `O(1)`.
pub fn sample_complex(rows: usize, cols: usize, rng: &mut TrialRng) -> ComplexMatrix {
    let scale = 1.0 / (rows.max(cols).max(1) as f64).sqrt();
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng) * scale)
}

/// GUE-type Hermitian matrix `(G + G*)/√(2n)`, spectrum roughly in `[−2, 2]`.
pub fn sample_hermitian(n: usize, rng: &mut TrialRng) -> HermitianMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let sum = &g + &g.adjoint();
    HermitianMatrix::hermitian_part(&sum.scale(1.0 / (2.0 * n.max(1) as f64).sqrt()))
}

/// Haar-like unitary: Gram–Schmidt (each column orthogonalised twice) on a
/// complex Gaussian matrix. Gram–Schmidt yields the QR factorisation with a
/// positive diagonal in `R`, which is the normalisation that makes `Q` Haar.
pub fn random_unitary(n: usize, rng: &mut TrialRng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        let (done, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        for _ in 0..2 {
            for q in done.iter() {
                let proj: Complex64 = q.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, qi) in col.iter_mut().zip(q) {
                    *x -= proj * qi;
                }
            }
        }
        let norm = col.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        for x in col.iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_columns(n, &cols)
}

/// `W · diag(λ) · W*` for a unitary `W`.
pub fn conjugate_diag(w: &ComplexMatrix, lambda: &[f64]) -> HermitianMatrix {
    let n = lambda.len();
    let scaled = ComplexMatrix::from_fn(w.nrows(), n, |i, j| w[(i, j)] * lambda[j]);
    HermitianMatrix::hermitian_part(&scaled.matmul(&w.adjoint()).expect("conforming shapes"))
}

/// Standard normal real spectrum.
pub fn sample_spectrum(n: usize, rng: &mut TrialRng) -> Vec<f64> {
    (0..n).map(|_| normal(rng)).collect()
}

/// Positive magnitudes `|g| + floor`, sorted nonincreasing.
pub fn sample_magnitudes(n: usize, floor: f64, rng: &mut TrialRng) -> Vec<f64> {
    let mut mu: Vec<f64> = (0..n).map(|_| normal(rng).abs() + floor).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    mu
}

/// Unit vector, uniformly distributed on the complex sphere.
pub fn random_unit_vector(n: usize, rng: &mut TrialRng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// The pair `(A, B)` for trial `trial_index` of `config`.
pub fn sample_pair(config: &TrialConfig, trial_index: u64) -> (HermitianMatrix, HermitianMatrix) {
    let mut rng = trial_rng(config.seed, trial_index);
    let n = config.n;
    let eps = config.perturb_scale;
    match config.structure {
        Structure::Generic => {
            let a = sample_hermitian(n, &mut rng);
            let e = sample_hermitian(n, &mut rng);
            let b = HermitianMatrix::hermitian_part(&(a.as_matrix() + &e.scale(eps)));
            (a, b)
        }
        Structure::Commuting => {
            let w = random_unitary(n, &mut rng);
            let la = sample_spectrum(n, &mut rng);
            let lb: Vec<f64> = la.iter().map(|&l| l + eps * normal(&mut rng)).collect();
            (conjugate_diag(&w, &la), conjugate_diag(&w, &lb))
        }
        Structure::Rank1Perturb => {
            let a = sample_hermitian(n, &mut rng);
            let v = random_unit_vector(n, &mut rng);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let vv = ComplexMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj() * (sign * eps));
            let b = HermitianMatrix::hermitian_part(&(a.as_matrix() + &vv));
            (a, b)
        }
        Structure::IdenticallyDistributed => {
            let lambda = sample_spectrum(n, &mut rng);
            let wa = random_unitary(n, &mut rng);
            let wb = random_unitary(n, &mut rng);
            (conjugate_diag(&wa, &lambda), conjugate_diag(&wb, &lambda))
        }
        Structure::SymmetricPair => {
            // spectrum (μ, −μ), padded with a single 0 when n is odd
            let mu = sample_magnitudes(n / 2, SYMMETRIC_DELTA_FLOOR, &mut rng);
            let mut d: Vec<f64> = mu.iter().copied().chain(mu.iter().map(|&m| -m)).collect();
            if n % 2 == 1 {
                d.push(0.0);
            }
            let wa = random_unitary(n, &mut rng);
            let wb = random_unitary(n, &mut rng);
            (conjugate_diag(&wa, &d), conjugate_diag(&wb, &d))
        }
    }
}
