//! Singular values and the norm functionals built on them: Schatten norms,
//! the weak-L1 quasi-norm `sup (k+1)μ(k)`, and the logarithmic `M_{1,∞}` norm.

use serde::Serialize;

use crate::eig::{hermitian_eigenvalues, jacobi_singular_values};
use crate::error::{Error, Result};
use crate::matrix::{direct_sum, ComplexMatrix, HermitianMatrix};
use crate::report::Report;

/// Nonincreasing, nonnegative sequence `μ(0) ≥ μ(1) ≥ … ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularValueSeq(Vec<f64>);

impl SingularValueSeq {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&v| !(v >= 0.0)) {
            return Err(Error::InvalidSequence(
                "entries must be finite and nonnegative".into(),
            ));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSequence(
                "entries must be nonincreasing".into(),
            ));
        }
        Ok(Self(values))
    }

    /// Sorts and clamps arbitrary magnitudes into a valid sequence.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        for v in values.iter_mut() {
            *v = v.max(0.0);
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
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

    /// `μ(k)`, zero past the stored length.
    pub fn get(&self, k: usize) -> f64 {
        self.0.get(k).copied().unwrap_or(0.0)
    }

    pub fn weak_l1(&self) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &m)| (k + 1) as f64 * m)
            .fold(0.0, f64::max)
    }

    pub fn schatten(&self, p: f64) -> f64 {
        if p == 1.0 {
            return self.0.iter().sum();
        }
        let top = self.get(0);
        if top == 0.0 {
            return 0.0;
        }
        top * self
            .0
            .iter()
            .map(|&m| (m / top).powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    pub fn m1inf(&self) -> f64 {
        let mut partial = 0.0;
        let mut best: f64 = 0.0;
        for (n, &m) in self.0.iter().enumerate() {
            partial += m;
            best = best.max(partial / ((n + 2) as f64).ln());
        }
        best
    }
}

/// Singular values of `M`, nonincreasing, length `min(rows, cols)`.
///
/// Hermitian input uses the eigenvalue magnitudes; everything else goes
/// through one-sided Jacobi on `M` itself (no `M*M` product).
pub fn singular_values(m: &ComplexMatrix) -> Result<SingularValueSeq> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(SingularValueSeq(Vec::new()));
    }
    if m.is_square() && m.hermitian_defect() == 0.0 {
        let h = HermitianMatrix::hermitian_part(m);
        return hermitian_singular_values(&h);
    }
    Ok(SingularValueSeq::from_unsorted(jacobi_singular_values(m)?))
}

pub fn hermitian_singular_values(h: &HermitianMatrix) -> Result<SingularValueSeq> {
    if h.dim() == 0 {
        return Ok(SingularValueSeq(Vec::new()));
    }
    let ev = hermitian_eigenvalues(h)?;
    Ok(SingularValueSeq::from_unsorted(
        ev.into_iter().map(f64::abs).collect(),
    ))
}

pub fn schatten_norm(m: &ComplexMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    Ok(singular_values(m)?.schatten(p))
}

pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    schatten_norm(m, 1.0)
}

pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.get(0))
}

/// `max_k (k+1)·μ(k; M)`.
pub fn weak_l1_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.weak_l1())
}

/// `max_N (Σ_{k≤N} μ(k; M)) / ln(N+2)`; the logarithm is natural.
pub fn m1inf_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.m1inf())
}

/// `(a0, a1, …) ↦ (a0, a0, a1, a1, …)`.
pub fn sigma2_dilate(s: &SingularValueSeq) -> SingularValueSeq {
    SingularValueSeq(s.0.iter().flat_map(|&x| [x, x]).collect())
}

/// Entrywise sum of two sequences, padding the shorter with zeros.
fn seq_sum(a: &SingularValueSeq, b: &SingularValueSeq) -> SingularValueSeq {
    let len = a.len().max(b.len());
    SingularValueSeq((0..len).map(|k| a.get(k) + b.get(k)).collect())
}

/// Checks, for the pair `(A, B)`:
/// * `μ(AB) ≤ ‖B‖_∞ μ(A)`, `μ(BA) ≤ ‖B‖_∞ μ(A)` and `μ(A*) = μ(A)`
/// * `μ(A + B) ≤ σ₂(μ(A) + μ(B))`
/// * `‖A + B‖_{1,∞} ≤ 2‖A‖_{1,∞} + 2‖B‖_{1,∞}`
pub fn check_singular_inequalities(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    slack: f64,
) -> Result<Report> {
    let n = a.square_dim()?;
    if b.shape() != a.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let mu_a = singular_values(a)?;
    let mu_b = singular_values(b)?;
    let op_b = mu_b.get(0);
    let scale = mu_a.get(0).max(mu_b.get(0)).max(f64::MIN_POSITIVE);
    let mut report = Report::new(slack);

    let scaled_a: Vec<f64> = mu_a.values().iter().map(|&m| op_b * m).collect();
    let mu_ab = singular_values(&a.matmul(b)?)?;
    let mu_ba = singular_values(&b.matmul(a)?)?;
    report.le_seq(
        "mu(AB) <= |B| mu(A)",
        mu_ab.values(),
        &scaled_a,
        scale * scale,
    );
    report.le_seq(
        "mu(BA) <= |B| mu(A)",
        mu_ba.values(),
        &scaled_a,
        scale * scale,
    );
    let mu_a_adj = singular_values(&a.adjoint())?;
    let adj_gap = mu_a_adj
        .values()
        .iter()
        .zip(mu_a.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    report.small("mu(A*) = mu(A)", adj_gap, slack * scale);

    let mu_sum = singular_values(&a.try_add(b)?)?;
    let dilated = sigma2_dilate(&seq_sum(&mu_a, &mu_b));
    report.le_seq(
        "mu(A+B) <= sigma2(mu(A)+mu(B))",
        mu_sum.values(),
        &dilated.values()[..n],
        scale,
    );

    let w_sum = mu_sum.weak_l1();
    let (w_a, w_b) = (mu_a.weak_l1(), mu_b.weak_l1());
    report.le("weak quasi-triangle", w_sum, 2.0 * w_a + 2.0 * w_b, scale);
    Ok(report)
}

/// `‖⊕ A_k‖_{1,∞} ≤ Σ ‖A_k‖_{1,∞}` (a genuine triangle inequality for
/// orthogonal summands).
pub fn direct_sum_weak_bound(blocks: &[ComplexMatrix], slack: f64) -> Result<Report> {
    let sum = direct_sum(blocks)?;
    let lhs = weak_l1_norm(&sum)?;
    let norms = blocks
        .iter()
        .map(weak_l1_norm)
        .collect::<Result<Vec<_>>>()?;
    let rhs: f64 = norms.iter().sum();
    let mut report = Report::new(slack);
    report.le("direct-sum weak triangle", lhs, rhs, rhs);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::rng::trial_rng;
    use crate::harness::sample::{random_unitary, sample_complex, sample_hermitian};
    use crate::matrix::kron;
    use proptest::prelude::*;

    fn diag(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(v)
    }

    #[test]
    fn singular_value_examples() {
        assert_eq!(
            singular_values(&diag(&[3.0, -1.0, 2.0])).unwrap().values(),
            &[3.0, 2.0, 1.0]
        );
        let skew = ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![-2.0, 0.0]]).unwrap();
        let sv = singular_values(&skew).unwrap();
        assert!((sv.get(0) - 2.0).abs() < 1e-15 && (sv.get(1) - 2.0).abs() < 1e-15);
        assert!((trace_norm(&skew).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn adjoint_has_same_singular_values() {
        let a = sample_complex(6, 6, &mut trial_rng(11, 0));
        let s1 = singular_values(&a).unwrap();
        let s2 = singular_values(&a.adjoint()).unwrap();
        for (x, y) in s1.values().iter().zip(s2.values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(trace_norm(&diag(&[3.0, -1.0, 2.0])).unwrap(), 6.0);
        assert!((schatten_norm(&ComplexMatrix::identity(4), 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(
            schatten_norm(&diag(&[1.0]), 0.5),
            Err(Error::InvalidExponent(0.5))
        );
        assert_eq!(weak_l1_norm(&diag(&[1.0, 0.5, 1.0 / 3.0])).unwrap(), 1.0);
        assert_eq!(weak_l1_norm(&ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
        assert_eq!(m1inf_norm(&ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn m1inf_two_term_value() {
        // candidates 1/ln 2 and 1.5/ln 3; the first dominates
        let v = m1inf_norm(&diag(&[1.0, 0.5])).unwrap();
        let expect = (1.0f64 / 2f64.ln()).max(1.5 / 3f64.ln());
        assert_eq!(v, expect);
        assert!((v - std::f64::consts::LOG2_E).abs() < 1e-12);
    }

    #[test]
    fn m1inf_is_bounded_by_weak_norm_over_ln2() {
        for t in 0..500 {
            let mut rng = trial_rng(500, t);
            let n = 1 + (t as usize % 12);
            let a = sample_complex(n, n, &mut rng);
            let w = weak_l1_norm(&a).unwrap();
            let m = m1inf_norm(&a).unwrap();
            assert!(
                m <= w / 2f64.ln() * (1.0 + 1e-12),
                "trial {t}: {m} > {w}/ln2"
            );
        }
    }

    #[test]
    fn tensor_with_identity_doubles_weak_norm() {
        let x = sample_hermitian(6, &mut trial_rng(5, 0));
        let big = kron(&x, &ComplexMatrix::identity(2)).unwrap();
        let lhs = weak_l1_norm(&big).unwrap();
        let rhs = 2.0 * weak_l1_norm(&x).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn sigma2_examples() {
        let s = SingularValueSeq::new(vec![3.0, 1.0]).unwrap();
        assert_eq!(sigma2_dilate(&s).values(), &[3.0, 3.0, 1.0, 1.0]);
        let e = SingularValueSeq::new(vec![]).unwrap();
        assert!(sigma2_dilate(&e).is_empty());
        assert!(SingularValueSeq::new(vec![1.0, 2.0]).is_err());
        assert!(SingularValueSeq::new(vec![-1.0]).is_err());
    }

    #[test]
    fn inequality_suite_cases() {
        let i = ComplexMatrix::identity(3);
        assert!(check_singular_inequalities(&i, &i, 1e-9).unwrap().passed());
        let mut rng = trial_rng(2, 0);
        let a = sample_complex(8, 8, &mut rng);
        let b = sample_complex(8, 8, &mut rng);
        let r = check_singular_inequalities(&a, &b, 1e-9).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = check_singular_inequalities(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), 1e-9).unwrap();
        assert!(r.passed());
        let e = r.get("mu(A+B) <= sigma2(mu(A)+mu(B))").unwrap();
        assert!(e.lhs <= e.rhs);
    }

    #[test]
    fn direct_sum_cases() {
        let one = diag(&[1.0]);
        let r = direct_sum_weak_bound(&[one.clone(), one.clone()], 1e-9).unwrap();
        assert!(r.passed());
        assert_eq!((r.entries[0].lhs, r.entries[0].rhs), (2.0, 2.0));
        let r = direct_sum_weak_bound(&[diag(&[1.0, 0.5])], 1e-9).unwrap();
        assert_eq!(r.entries[0].lhs, r.entries[0].rhs);
        let mut rng = trial_rng(9, 0);
        let blocks: Vec<_> = (0..5).map(|_| sample_complex(4, 4, &mut rng)).collect();
        assert!(direct_sum_weak_bound(&blocks, 1e-9).unwrap().passed());
    }

    #[test]
    fn hestenes_agrees_with_hermitian_route() {
        let h = sample_hermitian(10, &mut trial_rng(77, 0));
        let via_eig = hermitian_singular_values(&h).unwrap();
        let via_svd = SingularValueSeq::from_unsorted(jacobi_singular_values(&h).unwrap());
        for (x, y) in via_eig.values().iter().zip(via_svd.values()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn unitarily_invariant(seed in 0u64..10_000, n in 1usize..8) {
            let mut rng = trial_rng(seed, 0);
            let a = sample_complex(n, n, &mut rng);
            let u = random_unitary(n, &mut rng);
            let v = random_unitary(n, &mut rng);
            let uav = &(&u * &a) * &v;
            let s1 = singular_values(&a).unwrap();
            let s2 = singular_values(&uav).unwrap();
            for (x, y) in s1.values().iter().zip(s2.values()) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
        }

        #[test]
        fn weak_norm_is_homogeneous(seed in 0u64..10_000, c in -5.0f64..5.0) {
            let a = sample_complex(5, 5, &mut trial_rng(seed, 1));
            let lhs = weak_l1_norm(&a.scale(c)).unwrap();
            let rhs = c.abs() * weak_l1_norm(&a).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.max(1.0));
        }

        #[test]
        fn holder_ordering(seed in 0u64..10_000, p in 1.01f64..20.0) {
            let a = sample_complex(6, 6, &mut trial_rng(seed, 2));
            let s1 = schatten_norm(&a, 1.0).unwrap();
            let sp = schatten_norm(&a, p).unwrap();
            let sinf = operator_norm(&a).unwrap();
            prop_assert!(s1 >= sp * (1.0 - 1e-12));
            prop_assert!(sp >= sinf * (1.0 - 1e-12));
        }

        #[test]
        fn sigma2_preserves_order(mut v in proptest::collection::vec(0.0f64..10.0, 0..20)) {
            v.sort_by(|a, b| b.total_cmp(a));
            let s = sigma2_dilate(&SingularValueSeq::new(v.clone()).unwrap());
            prop_assert_eq!(s.len(), 2 * v.len());
            prop_assert!(s.values().windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
