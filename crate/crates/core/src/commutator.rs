//! The commutator estimate `‖[|A|, B]‖_{1,∞} ≤ c·‖[A, B]‖_1` and the
//! exponential-conjugation route to it: `C = e^{iεB} A e^{−iεB}` satisfies
//! `|C| = e^{iεB}|A|e^{−iεB}`, and `ε^{−1}[e^{iεB}, ·] → i[B, ·]`.

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::C_MAIN;
use crate::eig::hermitian_eig;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::norms::{hermitian_singular_values, operator_norm, singular_values, trace_norm};
use crate::report::{guarded_ratio, Report};
use crate::spectral::abs_matrix;

/// Bounds for the halving ratio `err(ε)/err(ε/2)` of a first-order limit.
pub const LIMIT_RATIO_RANGE: (f64, f64) = (1.5, 2.5);

/// `[A, B] = AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.square_dim()?;
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(&a.matmul(b)? - &b.matmul(a)?)
}

/// `i[X, Y]` for Hermitian `X, Y`, which is Hermitian.
fn i_commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<HermitianMatrix> {
    let c = commutator(x, y)?;
    Ok(HermitianMatrix::hermitian_part(
        &c.scale_complex(Complex64::new(0.0, 1.0)),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutatorRatio {
    /// `‖[|A|, B]‖_{1,∞}`.
    pub lhs: f64,
    /// `‖[A, B]‖_1`.
    pub denominator: f64,
    /// `lhs / denominator` under the `0/0 → 0` policy.
    pub ratio: Option<f64>,
    /// Denominator vanishes while the numerator does not.
    pub inconclusive: bool,
    pub report: Report,
}

/// `‖[|A|, B]‖_{1,∞} / ‖[A, B]‖_1` against `c_main`.
pub fn weak_commutator_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    slack: f64,
) -> Result<CommutatorRatio> {
    let abs_a = abs_matrix(a)?;
    let lhs = hermitian_singular_values(&i_commutator(&abs_a, b)?)?.weak_l1();
    let denominator = hermitian_singular_values(&i_commutator(a, b)?)?.schatten(1.0);
    let scale = a.frobenius_norm() * b.frobenius_norm();
    let ratio = guarded_ratio(lhs, denominator, 1e-12 * scale, 1e-14 * scale);
    let mut report = Report::new(slack);
    match ratio {
        Some(r) => {
            report.le("commutator weak bound", r, C_MAIN, 0.0);
        }
        None => {
            // no verdict is possible; recorded, but not counted as a violation
            report.small(
                "commutator denominator vanishes",
                denominator,
                1e-14 * scale,
            );
        }
    }
    Ok(CommutatorRatio {
        lhs,
        denominator,
        ratio,
        inconclusive: ratio.is_none(),
        report,
    })
}

/// `Σ_{k=1}^{K} (iε)^k/k! [B^k, A]`.
pub fn exp_commutator_partial_sum(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    eps: f64,
    k_max: usize,
) -> Result<ComplexMatrix> {
    let n = a.square_dim()?;
    let mut sum = ComplexMatrix::zeros(n, n);
    let mut power = ComplexMatrix::identity(n);
    let mut coef = Complex64::new(1.0, 0.0);
    for k in 1..=k_max {
        power = power.matmul(b)?;
        coef *= Complex64::new(0.0, eps) / k as f64;
        sum = &sum + &commutator(&power, a)?.scale_complex(coef);
    }
    Ok(sum)
}

/// `Σ_{k>K} ε^k/k! · k‖B‖^{k−1} · ‖[B, A]‖_1`, summed until the terms stop
/// contributing.
pub fn exp_series_tail_bound(eps: f64, b_norm: f64, comm_trace: f64, k_max: usize) -> f64 {
    // term_k = ε^k k ‖B‖^{k−1} / k! = ε (ε‖B‖)^{k−1}/(k−1)!
    let x = eps * b_norm;
    let mut term = eps; // k = 1
    for k in 2..=k_max + 1 {
        term *= x / (k - 1) as f64;
    }
    let mut tail = 0.0;
    let mut k = k_max + 1;
    while term > 0.0 && term > 1e-18 * tail {
        tail += term;
        term *= x / k as f64;
        k += 1;
        if k > k_max + 10_000 {
            break;
        }
    }
    tail * comm_trace
}

/// The series identity for `[e^{iεB}, A]` (truncated at `K` with the
/// analytic tail bound), and `‖[e^{iεB}, A]‖_1 ≤ εe^{ε‖B‖}‖[A, B]‖_1`.
pub fn exp_commutator_series_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    eps: f64,
    k_max: usize,
    slack: f64,
) -> Result<Report> {
    if !(eps > 0.0) || k_max == 0 {
        return Err(Error::InvalidConfig("need eps > 0 and K >= 1".into()));
    }
    let u = crate::spectral::unitary_exp(b, eps)?;
    let exact = commutator(&u, a)?;
    let partial = exp_commutator_partial_sum(a, b, eps, k_max)?;
    let residual = trace_norm(&(&exact - &partial))?;
    let b_norm = operator_norm(b)?;
    let comm_ab = hermitian_singular_values(&i_commutator(a, b)?)?.schatten(1.0);
    let tail = exp_series_tail_bound(eps, b_norm, comm_ab, k_max);
    let a_trace = hermitian_singular_values(a)?.schatten(1.0);

    let mut report = Report::new(slack);
    report.le("exponential series remainder", residual, tail, a_trace);
    let lhs = trace_norm(&exact)?;
    let rhs = eps * (eps * b_norm).exp() * comm_ab;
    report.le("exponential commutator trace bound", lhs, rhs, a_trace);
    Ok(report)
}

/// `|C| = U|A|U*` for `C = UAU*`, `U = e^{iεB}`, and the weak-type bound
/// `‖[U, |A|]‖_{1,∞} ≤ c_main‖[U, A]‖_1` for this conjugation.
pub fn conjugation_abs_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    eps: f64,
    slack: f64,
) -> Result<Report> {
    let u = crate::spectral::unitary_exp(b, eps)?;
    let c = HermitianMatrix::hermitian_part(&(&(&u * a.as_matrix()) * &u.adjoint()));
    let abs_a = abs_matrix(a)?;
    let abs_c = abs_matrix(&c)?;
    let conj = &(&u * abs_a.as_matrix()) * &u.adjoint();
    let scale = a.frobenius_norm();
    let mut report = Report::new(slack);
    report.small(
        "abs commutes with conjugation",
        (abs_c.as_matrix() - &conj).frobenius_norm(),
        1e-10 * scale.max(1.0),
    );
    let lhs = singular_values(&commutator(&u, &abs_a)?)?.weak_l1();
    let rhs = C_MAIN * trace_norm(&commutator(&u, a)?)?;
    report.le("conjugation weak bound", lhs, rhs, 0.0);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitCheck {
    pub err_eps: f64,
    pub err_half: f64,
    /// `err(ε)/err(ε/2)`; `None` when `err(ε/2)` vanishes.
    pub ratio: Option<f64>,
    /// Both errors are at rounding level (|A| and B essentially commute).
    pub trivial: bool,
    pub report: Report,
}

/// `err(ε) = ‖ε^{−1}[e^{iεB}, |A|] − i[B, |A|]‖_∞` at `ε` and `ε/2`; first-order
/// convergence shows as a halving ratio near 2.
pub fn conjugation_limit_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    eps: f64,
    slack: f64,
) -> Result<LimitCheck> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    let abs_a = abs_matrix(a)?;
    let db = hermitian_eig(b)?;
    let target = commutator(b, &abs_a)?.scale_complex(Complex64::new(0.0, 1.0));
    let err = |e: f64| -> Result<f64> {
        let u = exp_from(&db, e);
        let diff = &commutator(&u, &abs_a)?.scale(1.0 / e) - &target;
        operator_norm(&diff)
    };
    let err_eps = err(eps)?;
    let err_half = err(eps / 2.0)?;
    let scale = a.frobenius_norm() * b.frobenius_norm().max(1.0);
    let trivial = err_eps <= 1e-12 * scale;
    let ratio = (err_half > 0.0).then(|| err_eps / err_half);
    let mut report = Report::new(slack);
    if trivial {
        report.small(
            "conjugation limit (trivially convergent)",
            err_eps,
            1e-12 * scale,
        );
    } else {
        let r = ratio.unwrap_or(f64::INFINITY);
        let (lo, hi) = LIMIT_RATIO_RANGE;
        report.le("conjugation limit halving ratio (upper)", r, hi, 0.0);
        report.le("conjugation limit halving ratio (lower)", lo, r, 0.0);
    }
    Ok(LimitCheck {
        err_eps,
        err_half,
        ratio,
        trivial,
        report,
    })
}

fn exp_from(db: &crate::eig::SpectralDecomposition, eps: f64) -> ComplexMatrix {
    let n = db.dim();
    let q = &db.unitary;
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| {
        q[(i, j)] * Complex64::from_polar(1.0, eps * db.eigenvalues[j])
    });
    &scaled * &q.adjoint()
}

/// `max_k ‖[B^k, A] − Σ_m B^m [B, A] B^{k−1−m}‖_F / ‖[B^k, A]‖-scale` for
/// `k = 1..=k_max`.
pub fn telescoping_residual(a: &ComplexMatrix, b: &ComplexMatrix, k_max: usize) -> Result<f64> {
    let n = a.square_dim()?;
    let ba = commutator(b, a)?;
    let mut powers = vec![ComplexMatrix::identity(n)];
    for k in 1..=k_max {
        powers.push(powers[k - 1].matmul(b)?);
    }
    let mut worst: f64 = 0.0;
    for k in 1..=k_max {
        let lhs = commutator(&powers[k], a)?;
        let mut rhs = ComplexMatrix::zeros(n, n);
        for m in 0..k {
            rhs = &rhs + &(&(&powers[m] * &ba) * &powers[k - 1 - m]);
        }
        let scale =
            (k as f64) * powers[k - 1].frobenius_norm().max(1.0) * ba.frobenius_norm().max(1.0);
        worst = worst.max((&lhs - &rhs).frobenius_norm() / scale);
    }
    Ok(worst)
}
