//! Fixed, seeded inputs shared by the criterion benchmarks.

use opweak_core::harness::{sample_hermitian, sample_pair, trial_rng, Structure, TrialConfig};
use opweak_core::HermitianMatrix;

/// Seed used for every benchmark input.
pub const BENCH_SEED: u64 = 2024;

/// Sizes at which the kernels are timed.
pub const BENCH_SIZES: [usize; 4] = [8, 16, 32, 64];

/// A GUE-type Hermitian matrix of size `n`.
pub fn hermitian_input(n: usize) -> HermitianMatrix {
    sample_hermitian(n, &mut trial_rng(BENCH_SEED, n as u64))
}

/// A generic perturbed pair of size `n`.
pub fn pair_input(n: usize) -> (HermitianMatrix, HermitianMatrix) {
    sample_pair(&TrialConfig::new(n, 1, Structure::Generic, BENCH_SEED), 0)
}
