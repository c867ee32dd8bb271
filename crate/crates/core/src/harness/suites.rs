//! The randomized check suites behind `opweak check`.
//!
//! Each check draws its instances from its own seeded stream, evaluates the
//! library's [`Report`]s, and turns every violated entry into a [`Failure`]
//! carrying a descriptive label and the offending matrices as JSON for
//! replay.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::absdiff::{
    certified_abs_diff_bound, decompose_symmetric_pair, SymmetricPairSpec, SYMMETRIC_DELTA_FLOOR,
};
use crate::commutator::{
    conjugation_abs_check, conjugation_limit_check, exp_commutator_series_check,
    telescoping_residual, weak_commutator_check,
};
use crate::constants::C_MAIN;
use crate::davies::{
    davies_bound_check, discretization_check, distorted_variation, weighted_weak_sum_bound,
    DiscreteMeasure, Measure, PiecewiseConstantMeasure,
};
use crate::eig::hermitian_eig;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix, MatrixJson};
use crate::norms::{check_singular_inequalities, direct_sum_weak_bound};
use crate::report::{guarded_ratio, Report, DEFAULT_SLACK};
use crate::schur::{
    block_schur, coordinate_block_projections, hadamard, is_psd, phi_decomposition, phi_matrix,
    DecreasingPositiveSeq,
};
use crate::weaktrunc::{check_s_bounds, check_truncation_bounds, verify_s_factorization};

use super::rng::{trial_rng, TrialRng};
use super::sample::{
    conjugate_diag, random_unitary, sample_complex, sample_hermitian, sample_magnitudes,
    sample_pair,
};
use super::search::{adversarial_search, Objective, SearchConfig};
use super::sweep::{Structure, TrialConfig, MAX_TRIAL_N};

/// Matrix sizes cycled through by the weak-type sweep.
pub const SWEEP_SIZES: [usize; 12] = [1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64];
/// Sizes for the eigensolver accuracy check.
pub const EIG_SIZES: [usize; 8] = [1, 2, 4, 8, 16, 32, 64, 128];
/// Evaluation budget of the adversarial weak-ratio search.
pub const SEARCH_BUDGET: usize = 10_000;
/// Evaluation budget per size of the exploratory trace-ratio search.
pub const L1_SEARCH_BUDGET: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Norms,
    Schur,
    Trunc,
    Absdiff,
    Davies,
    Comm,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Norms,
        Suite::Schur,
        Suite::Trunc,
        Suite::Absdiff,
        Suite::Davies,
        Suite::Comm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Norms => "norms",
            Suite::Schur => "schur",
            Suite::Trunc => "trunc",
            Suite::Absdiff => "absdiff",
            Suite::Davies => "davies",
            Suite::Comm => "comm",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::EACH)
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides every check's default trial count.
    pub trials: Option<usize>,
    /// Caps every generated matrix size.
    pub max_n: Option<usize>,
    pub slack: f64,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            trials: None,
            max_n: None,
            slack: DEFAULT_SLACK,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == Some(0) {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if let Some(n) = self.max_n {
            if !(1..=MAX_TRIAL_N).contains(&n) {
                return Err(Error::InvalidConfig(format!(
                    "max-n = {n} outside [1, {MAX_TRIAL_N}]"
                )));
            }
        }
        if !(self.slack.is_finite() && self.slack >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "invalid slack {}",
                self.slack
            )));
        }
        Ok(())
    }

    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn cap(&self, n: usize) -> usize {
        self.max_n.map_or(n, |m| n.min(m)).max(1)
    }

    /// The `t`-th size of `sizes` (cyclically), capped.
    fn size(&self, sizes: &[usize], t: u64) -> usize {
        self.cap(sizes[t as usize % sizes.len()])
    }

    /// A uniformly drawn size in `1..=hi`, capped.
    fn draw_size(&self, hi: usize, rng: &mut TrialRng) -> usize {
        let hi = self.cap(hi);
        rng.random_range(1..=hi)
    }
}

/// A violated inequality with everything needed to replay it.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub trial: u64,
    /// Descriptive name of the violated inequality or identity.
    pub violated: String,
    pub detail: String,
    /// Named parts of the instance (matrices as matrix JSON, measures as
    /// measure JSON).
    pub instance: Vec<(String, serde_json::Value)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: String,
    pub trials: usize,
    pub failures: Vec<Failure>,
    /// Largest tracked quantity (a ratio or residual, see `metric`).
    pub worst: Option<f64>,
    pub metric: String,
    /// Trials without a verdict (vanishing denominators); not failures.
    pub inconclusive: usize,
    /// Exploratory observations that carry no verdict.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn failure_count(&self) -> usize {
        self.checks.iter().map(|c| c.failures.len()).sum()
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// What one trial contributes to a check.
struct TrialResult {
    report: Report,
    value: Option<f64>,
    inconclusive: bool,
    instance: Vec<(&'static str, serde_json::Value)>,
}

impl TrialResult {
    fn new(report: Report) -> Self {
        Self {
            report,
            value: None,
            inconclusive: false,
            instance: Vec::new(),
        }
    }

    fn value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    fn with(mut self, name: &'static str, m: &ComplexMatrix) -> Self {
        let json = MatrixJson::from_matrix(m)
            .ok()
            .and_then(|j| serde_json::to_value(j).ok())
            .unwrap_or(serde_json::Value::Null);
        self.instance.push((name, json));
        self
    }

    fn with_json(mut self, name: &'static str, value: &impl Serialize) -> Self {
        self.instance.push((
            name,
            serde_json::to_value(value).unwrap_or(serde_json::Value::Null),
        ));
        self
    }
}

/// A separate random stream per check: the trial streams of check `tag`
/// never overlap those of another check.
fn check_rng(seed: u64, tag: u64, trial: u64) -> TrialRng {
    trial_rng(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15), trial)
}

fn run_check(
    suite: Suite,
    name: &str,
    metric: &str,
    trials: usize,
    mut trial: impl FnMut(u64) -> Result<TrialResult>,
) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    let mut worst: Option<f64> = None;
    let mut inconclusive = 0;
    for t in 0..trials as u64 {
        let r = trial(t)?;
        if let Some(v) = r.value {
            worst = Some(worst.map_or(v, |w| w.max(v)));
        }
        inconclusive += usize::from(r.inconclusive);
        for e in r.report.failures() {
            let instance = r
                .instance
                .iter()
                .map(|(k, v)| ((*k).to_string(), v.clone()))
                .collect();
            failures.push(Failure {
                trial: t,
                violated: e.label.clone(),
                detail: format!(
                    "lhs = {:e}, rhs = {:e}, allowance = {:e}{}",
                    e.lhs,
                    e.rhs,
                    e.allowance,
                    e.index.map(|i| format!(", index {i}")).unwrap_or_default()
                ),
                instance,
            });
        }
    }
    Ok(CheckOutcome {
        suite,
        name: name.to_string(),
        trials,
        failures,
        worst,
        metric: metric.to_string(),
        inconclusive,
        notes: Vec::new(),
    })
}

/// Runs one suite, or all of them in a fixed order.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    cfg.validate()?;
    let mut checks = Vec::new();
    let selected: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    for s in selected {
        let mut part = match s {
            Suite::Norms => norms_suite(cfg)?,
            Suite::Schur => schur_suite(cfg)?,
            Suite::Trunc => trunc_suite(cfg)?,
            Suite::Absdiff => absdiff_suite(cfg)?,
            Suite::Davies => davies_suite(cfg)?,
            Suite::Comm => comm_suite(cfg)?,
            Suite::All => unreachable!("expanded above"),
        };
        checks.append(&mut part);
    }
    Ok(SuiteOutcome {
        suite,
        seed: cfg.seed,
        checks,
    })
}

// ---------------------------------------------------------------- norms

pub fn norms_suite(cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_eigensolver(cfg)?,
        check_singular_value_inequalities(cfg)?,
        check_direct_sum(cfg)?,
    ])
}

/// Reconstruction within `n·1e−12·‖A‖_F` and orthogonality within `n·1e−13`,
/// on generic and on degenerate spectra.
pub fn check_eigensolver(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let sizes = EIG_SIZES;
    let trials = cfg.trials(2 * sizes.len());
    run_check(
        Suite::Norms,
        "eigensolver accuracy",
        "relative reconstruction error",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 1, t);
            let n = cfg.size(&sizes, t / 2);
            let a = if t % 2 == 0 {
                sample_hermitian(n, &mut rng)
            } else {
                // clustered spectrum with exact repetitions
                let lambda: Vec<f64> = (0..n).map(|i| ((i % 3) as f64) - 1.0).collect();
                conjugate_diag(&random_unitary(n, &mut rng), &lambda)
            };
            let d = hermitian_eig(&a)?;
            let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
            let recon = (&d.reconstruct() - a.as_matrix()).frobenius_norm();
            let mut r = Report::new(cfg.slack);
            r.small(
                "eigendecomposition reconstruction",
                recon,
                n as f64 * 1e-12 * scale,
            );
            r.small(
                "eigenvector orthogonality",
                d.orthogonality_defect(),
                n as f64 * 1e-13,
            );
            let sorted = d.eigenvalues.windows(2).filter(|w| w[0] < w[1]).count();
            r.small("eigenvalues sorted nonincreasing", sorted as f64, 0.0);
            Ok(TrialResult::new(r).value(recon / scale).with("a", &a))
        },
    )
}

/// Singular-value inequalities for products, adjoints and sums, and the weak
/// quasi-triangle inequality; also tracks how close the quasi-triangle ratio
/// gets to its factor 2.
pub fn check_singular_value_inequalities(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(500);
    let mut out = run_check(
        Suite::Norms,
        "singular-value inequalities",
        "weak(A+B) / (weak(A) + weak(B))",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 2, t);
            let n = cfg.draw_size(16, &mut rng);
            let a = sample_complex(n, n, &mut rng);
            // vary the relative scale so that sums are not always balanced
            let b = sample_complex(n, n, &mut rng).scale(rng.random_range(0.1..3.0));
            let r = check_singular_inequalities(&a, &b, cfg.slack)?;
            let e = r.get("weak quasi-triangle").expect("entry present");
            let ratio = if e.rhs > 0.0 {
                2.0 * e.lhs / e.rhs
            } else {
                0.0
            };
            Ok(TrialResult::new(r).value(ratio).with("a", &a).with("b", &b))
        },
    )?;
    if let Some(w) = out.worst {
        out.notes.push(format!(
            "largest quasi-triangle ratio {w:.6} (factor 2 allowed)"
        ));
    }
    Ok(out)
}

/// `‖⊕ A_k‖_{1,∞} ≤ Σ ‖A_k‖_{1,∞}` on random block lists.
pub fn check_direct_sum(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(500);
    run_check(
        Suite::Norms,
        "direct-sum weak inequality",
        "lhs / rhs",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 3, t);
            let k = rng.random_range(1..=4);
            let blocks: Vec<ComplexMatrix> = (0..k)
                .map(|_| {
                    let n = cfg.draw_size(6, &mut rng);
                    sample_complex(n, n, &mut rng).scale(rng.random_range(0.1..3.0))
                })
                .collect();
            let r = direct_sum_weak_bound(&blocks, cfg.slack)?;
            let e = r.get("direct-sum weak triangle").expect("entry present");
            let ratio = if e.rhs > 0.0 { e.lhs / e.rhs } else { 0.0 };
            let mut res = TrialResult::new(r).value(ratio);
            for b in &blocks {
                res = res.with("block", b);
            }
            Ok(res)
        },
    )
}

// ---------------------------------------------------------------- schur

pub fn schur_suite(cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_phi_decomposition(cfg)?,
        check_schur_product(cfg)?,
        check_block_schur(cfg)?,
    ])
}

/// Random nonincreasing positive sequence; every fifth one has ties.
fn sample_alpha(n: usize, t: u64, rng: &mut TrialRng) -> DecreasingPositiveSeq {
    let mut a = sample_magnitudes(n, 1e-3, rng);
    if t % 5 == 4 {
        for x in a.iter_mut() {
            *x = (*x * 4.0).ceil() / 4.0;
        }
    }
    DecreasingPositiveSeq::new(a).expect("positive, sorted")
}

/// The `Φ` decomposition reconstructs `Φ` within `1e−12·n` (relative) and
/// every term is PSD within `1e−10·scale`.
pub fn check_phi_decomposition(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(200);
    run_check(
        Suite::Schur,
        "phi decomposition",
        "relative reconstruction error",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 10, t);
            let n = cfg.draw_size(32, &mut rng);
            let alpha = sample_alpha(n, t, &mut rng);
            let phi = phi_matrix(&alpha);
            let terms = phi_decomposition(&alpha);
            let mut sum = ComplexMatrix::zeros(n, n);
            let mut r = Report::new(cfg.slack);
            for (k, term) in terms.iter().enumerate() {
                let scaled = term.scaled();
                sum = &sum + &scaled;
                let (_, lambda_min) = is_psd(&HermitianMatrix::hermitian_part(&scaled), 1e-10)?;
                let allowed = 1e-10 * scaled.frobenius_norm().max(1.0);
                r.le(
                    format!("phi term {k} positive semidefinite"),
                    -lambda_min,
                    allowed,
                    0.0,
                );
            }
            let rel = (&sum - phi.as_matrix()).frobenius_norm() / phi.frobenius_norm();
            r.small("phi decomposition reconstruction", rel, 1e-12 * n as f64);
            let alpha_m = ComplexMatrix::from_real_diag(alpha.values());
            Ok(TrialResult::new(r).value(rel).with("diag(alpha)", &alpha_m))
        },
    )
}

fn sample_psd(n: usize, rng: &mut TrialRng) -> HermitianMatrix {
    let g = sample_complex(n, n, rng);
    HermitianMatrix::hermitian_part(&g.matmul(&g.adjoint()).expect("square"))
}

/// Schur product theorem `A, B ≥ 0 ⇒ A∘B ≥ 0`, and the multiplier bound
/// `‖B∘A‖_1 ≤ 4‖diag(B)‖_∞‖A‖_1` for PSD `B` and arbitrary `A`.
pub fn check_schur_product(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(500);
    run_check(
        Suite::Schur,
        "schur product and multiplier bound",
        "multiplier ratio",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 11, t);
            let n = cfg.draw_size(16, &mut rng);
            let a = sample_psd(n, &mut rng);
            let b = sample_psd(n, &mut rng);
            let prod = HermitianMatrix::hermitian_part(&hadamard(&a, &b)?);
            let (_, lambda_min) = is_psd(&prod, 1e-10)?;
            let scale = a.frobenius_norm() * b.frobenius_norm();
            let mut r = Report::new(cfg.slack);
            r.le(
                "Schur product positivity",
                -lambda_min,
                1e-10 * scale.max(1.0),
                0.0,
            );

            let x = sample_complex(n, n, &mut rng);
            let lhs = crate::norms::trace_norm(&hadamard(&b, &x)?)?;
            let diag_max = b.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max);
            let rhs = 4.0 * diag_max * crate::norms::trace_norm(&x)?;
            r.le("PSD Schur multiplier trace bound", lhs, rhs, 0.0);
            Ok(TrialResult::new(r)
                .value(if rhs > 0.0 { lhs / rhs } else { 0.0 })
                .with("a", &a)
                .with("b", &b)
                .with("x", &x))
        },
    )
}

/// Block Schur multipliers with a PSD coefficient matrix preserve
/// positivity, for random block partitions in a random basis.
pub fn check_block_schur(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(100);
    run_check(
        Suite::Schur,
        "block schur positivity",
        "-lambda_min / scale",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 12, t);
            let k = rng.random_range(1..=4);
            let sizes: Vec<usize> = (0..k).map(|_| cfg.draw_size(4, &mut rng)).collect();
            let dim: usize = sizes.iter().sum();
            let w = random_unitary(dim, &mut rng);
            let projections: Vec<HermitianMatrix> = coordinate_block_projections(&sizes)
                .iter()
                .map(|p| HermitianMatrix::hermitian_part(&(&(&w * p.as_matrix()) * &w.adjoint())))
                .collect();
            let coef = sample_psd(k, &mut rng);
            let x = sample_psd(dim, &mut rng);
            let out = HermitianMatrix::hermitian_part(&block_schur(&coef, &projections, &x)?);
            let (_, lambda_min) = is_psd(&out, 1e-10)?;
            let scale = (coef.frobenius_norm() * x.frobenius_norm()).max(1.0);
            let mut r = Report::new(cfg.slack);
            r.le(
                "block Schur multiplier positivity",
                -lambda_min,
                1e-10 * scale,
                0.0,
            );
            Ok(TrialResult::new(r)
                .value(-lambda_min / scale)
                .with("coefficients", &coef)
                .with("basis", &w)
                .with("x", &x))
        },
    )
}

// ---------------------------------------------------------------- trunc

pub fn trunc_suite(cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_s_factorization(cfg)?,
        check_truncation(cfg, true)?,
        check_truncation(cfg, false)?,
        check_s_bound(cfg)?,
    ])
}

/// `S = (2T − 1)(2M_Φ − 1)` within `1e−13·‖A‖_F`.
pub fn check_s_factorization(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(200);
    run_check(
        Suite::Trunc,
        "multiplier factorization",
        "residual / |A|_F",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 20, t);
            let n = cfg.draw_size(32, &mut rng);
            let alpha = sample_alpha(n, t, &mut rng);
            let a = sample_complex(n, n, &mut rng);
            let residual = verify_s_factorization(&alpha, &a)?;
            let scale = a.frobenius_norm();
            let mut r = Report::new(cfg.slack);
            r.small("S = (2T - 1)(2M_phi - 1)", residual, 1e-13 * scale);
            Ok(TrialResult::new(r)
                .value(residual / scale)
                .with(
                    "diag(alpha)",
                    &ComplexMatrix::from_real_diag(alpha.values()),
                )
                .with("a", &a))
        },
    )
}

fn zero_diagonal(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.nrows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(0.0, 0.0)
        } else {
            m[(i, j)]
        }
    })
}

/// `‖(2T − 1)X‖_{1,∞} ≤ (4e/π)‖X‖_1` (self-adjoint) or `(16e/π)‖X‖_1`
/// (general) for zero-diagonal `X`.
pub fn check_truncation(cfg: &SuiteConfig, self_adjoint: bool) -> Result<CheckOutcome> {
    let trials = cfg.trials(500);
    let (name, tag) = if self_adjoint {
        ("reflected truncation, self-adjoint", 21)
    } else {
        ("reflected truncation, general", 22)
    };
    run_check(Suite::Trunc, name, "weak / trace ratio", trials, |t| {
        let mut rng = check_rng(cfg.seed, tag, t);
        let n = cfg.draw_size(32, &mut rng);
        let raw = sample_complex(n, n, &mut rng);
        let x = if self_adjoint {
            HermitianMatrix::hermitian_part(&zero_diagonal(&raw)).into_matrix()
        } else {
            zero_diagonal(&raw)
        };
        let b = check_truncation_bounds(&x, cfg.slack)?;
        Ok(TrialResult::new(b.report).value(b.ratio).with("x", &x))
    })
}

/// `‖S(A)‖_{1,∞} ≤ (80e/π)‖A‖_1`.
pub fn check_s_bound(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(200);
    run_check(
        Suite::Trunc,
        "multiplier S weak bound",
        "weak / trace ratio",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 23, t);
            let n = cfg.draw_size(32, &mut rng);
            let alpha = sample_alpha(n, t, &mut rng);
            let a = sample_complex(n, n, &mut rng);
            let r = check_s_bounds(&alpha, &a, cfg.slack)?;
            let e = r.get("multiplier S weak bound").expect("entry present");
            let ratio = if e.rhs > 0.0 {
                e.lhs / (e.rhs / crate::constants::C_S)
            } else {
                0.0
            };
            Ok(TrialResult::new(r)
                .value(ratio)
                .with(
                    "diag(alpha)",
                    &ComplexMatrix::from_real_diag(alpha.values()),
                )
                .with("a", &a))
        },
    )
}

// ---------------------------------------------------------------- absdiff

pub fn absdiff_suite(cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_four_term_identity(cfg)?,
        check_weak_type_sweep(cfg)?,
        check_adversarial_weak_search(cfg)?,
        check_l1_ratio_search(cfg)?,
    ])
}

/// The four-term reconstruction on synthesised identically and
/// symmetrically distributed pairs (`2n ≤ 64`); every third instance has a
/// degenerate spectrum.
pub fn check_four_term_identity(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(200);
    run_check(
        Suite::Absdiff,
        "four-term decomposition identity",
        "residual / scale",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 30, t);
            let half = (cfg.cap(64) / 2).max(1);
            let n = rng.random_range(1..=half);
            let mut mu = sample_magnitudes(n, SYMMETRIC_DELTA_FLOOR, &mut rng);
            if t % 3 == 2 {
                // few distinct magnitudes, each repeated
                for x in mu.iter_mut() {
                    *x = (*x * 2.0).ceil() / 2.0;
                }
            }
            let spec = SymmetricPairSpec {
                n,
                mu,
                seed_a: rng.random(),
                seed_b: rng.random(),
            };
            let (a, b) = crate::absdiff::synth_symmetric_pair(&spec)?;
            let cert = decompose_symmetric_pair(&a, &b)?;
            Ok(TrialResult::new(cert.report(cfg.slack))
                .value(cert.residual / cert.scale)
                .with("a", &a)
                .with("b", &b))
        },
    )
}

/// The certified weak-type bound on random pairs of every structure and
/// sizes up to 64.
pub fn check_weak_type_sweep(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(1000);
    let mut out = run_check(
        Suite::Absdiff,
        "weak-type bound, random pairs",
        "ratio",
        trials,
        |t| {
            let n = cfg.size(&SWEEP_SIZES, t);
            let structure = Structure::ALL[(t as usize / SWEEP_SIZES.len()) % Structure::ALL.len()];
            let mut tc = TrialConfig::new(n, 1, structure, cfg.seed ^ 0x5EED);
            tc.tol_slack = cfg.slack;
            // vary the perturbation size over several decades
            tc.perturb_scale = [1.0, 0.1, 1e-3][(t % 3) as usize];
            let (a, b) = sample_pair(&tc, t);
            let cert = certified_abs_diff_bound(&a, &b, cfg.slack)?;
            let mut res = TrialResult::new(cert.report).with("a", &a).with("b", &b);
            match cert.ratio {
                Some(r) => res = res.value(r),
                None => res.inconclusive = true,
            }
            Ok(res)
        },
    )?;
    out.notes.push(format!("c_main = {C_MAIN:.6}"));
    Ok(out)
}

/// Hill-climbing search for a large weak ratio at `n = 16`; the best
/// instance must stay below `c_main` with a passing certificate.
pub fn check_adversarial_weak_search(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let budget = cfg.trials.map_or(SEARCH_BUDGET, |t| (10 * t).max(1));
    let sc = SearchConfig {
        n: cfg.cap(16),
        budget,
        restarts: 8.min(budget),
        seed: cfg.seed,
        objective: Objective::WeakRatio,
    };
    let out = adversarial_search(&sc)?;
    let mut report = Report::new(cfg.slack);
    report.le(
        "adversarial weak ratio below c_main",
        out.best_value,
        C_MAIN,
        0.0,
    );
    let a = out.a.to_matrix()?;
    let b = out.b.to_matrix()?;
    let mut check = run_check(
        Suite::Absdiff,
        "adversarial weak-ratio search",
        "best ratio",
        1,
        |_| {
            let cert = certified_abs_diff_bound(
                &HermitianMatrix::hermitian_part(&a),
                &HermitianMatrix::hermitian_part(&b),
                cfg.slack,
            )?;
            let mut r = report.clone();
            r.extend(cert.report);
            Ok(TrialResult::new(r)
                .value(out.best_value)
                .with("a", &a)
                .with("b", &b))
        },
    )?;
    check.notes.push(format!(
        "n = {}, budget = {}, {} improvements",
        sc.n,
        sc.budget,
        out.trace.len()
    ));
    Ok(check)
}

/// Exploratory: best trace-norm ratio `‖|A| − |B|‖_1/‖A − B‖_1` found at
/// `n ∈ {8, 16, 32}` with equal budgets. Recorded, never asserted.
pub fn check_l1_ratio_search(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let budget = cfg.trials.map_or(L1_SEARCH_BUDGET, |t| t.max(1));
    let mut notes = Vec::new();
    let mut best = Vec::new();
    for n in [8, 16, 32] {
        let n = cfg.cap(n);
        let out = adversarial_search(&SearchConfig {
            n,
            budget,
            restarts: 4.min(budget),
            seed: cfg.seed,
            objective: Objective::L1Ratio,
        })?;
        notes.push(format!("n = {n}: best trace ratio {:.6}", out.best_value));
        best.push(out.best_value);
    }
    let nondecreasing = best.windows(2).all(|w| w[0] <= w[1]);
    notes.push(format!("best values nondecreasing in n: {nondecreasing}"));
    Ok(CheckOutcome {
        suite: Suite::Absdiff,
        name: "trace-ratio search (exploratory)".into(),
        trials: 3,
        failures: Vec::new(),
        worst: best.iter().copied().reduce(f64::max),
        metric: "best trace ratio".into(),
        inconclusive: 0,
        notes,
    })
}

// ---------------------------------------------------------------- davies

pub fn davies_suite(cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_dv_oracle(cfg)?,
        check_discretisation(cfg)?,
        check_weighted_sum(cfg)?,
        check_davies_bound(cfg)?,
    ])
}

/// Random measure with up to `max_atoms` atoms drawn from `[lo, hi)`.
fn sample_measure(max_atoms: usize, lo: f64, hi: f64, rng: &mut TrialRng) -> DiscreteMeasure {
    let k = rng.random_range(1..=max_atoms);
    let mut atoms: Vec<f64> = (0..k).map(|_| rng.random_range(lo..hi)).collect();
    atoms.sort_by(f64::total_cmp);
    atoms.dedup();
    let weights = atoms
        .iter()
        .map(|_| {
            let w: f64 = rng.random_range(0.05..2.0);
            if rng.random::<bool>() {
                w
            } else {
                -w
            }
        })
        .collect();
    DiscreteMeasure::new(atoms, weights).expect("sorted, deduplicated, nonzero")
}

/// Closed-form distorted variation equals the brute-force maximum.
pub fn check_dv_oracle(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(300);
    run_check(
        Suite::Davies,
        "distorted variation oracle",
        "|closed - brute|",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 40, t);
            let nu = sample_measure(10, -2.0, 2.0, &mut rng);
            let dv = distorted_variation(&nu);
            let brute = dv.brute_force.expect("below the cap");
            let mut r = Report::new(cfg.slack);
            r.eq_abs(
                "distorted variation closed form",
                dv.closed_form,
                brute,
                0.0,
            );
            Ok(TrialResult::new(r)
                .value((dv.closed_form - brute).abs())
                .with_json("measure", &nu))
        },
    )
}

/// `DV(ν_m) ≤ DV(ν)` and the grid bound for `m ∈ {4, 16}`, alternating
/// discrete and piecewise-constant measures.
pub fn check_discretisation(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(200);
    run_check(
        Suite::Davies,
        "measure discretisation",
        "sup error / (2|nu|/m)",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 41, t);
            let m = if t % 2 == 0 { 4 } else { 16 };
            let nu = if (t / 2) % 2 == 0 {
                Measure::Discrete(sample_measure(10, 0.0, 1.0, &mut rng))
            } else {
                let k = rng.random_range(1..=6);
                let mut breaks: Vec<f64> = std::iter::once(0.0)
                    .chain((1..k).map(|_| rng.random::<f64>()))
                    .collect();
                breaks.sort_by(f64::total_cmp);
                breaks.dedup();
                let densities: Vec<f64> =
                    breaks.iter().map(|_| rng.random_range(-2.0..2.0)).collect();
                Measure::Piecewise(PiecewiseConstantMeasure::new(breaks, densities)?)
            };
            let r = discretization_check(&nu, m, cfg.slack)?;
            let e = r.get("discretisation grid bound").expect("entry present");
            let ratio = if e.rhs > 0.0 { e.lhs / e.rhs } else { 0.0 };
            Ok(TrialResult::new(r).value(ratio).with_json("measure", &nu))
        },
    )
}

/// `‖Σ A_k‖_{1,∞} ≤ Σ 2^{k+1}‖A_k‖_{1,∞}` with summands ordered by
/// decreasing weak norm.
pub fn check_weighted_sum(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(100);
    run_check(
        Suite::Davies,
        "weighted weak quasi-triangle",
        "lhs / rhs",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 42, t);
            let n = cfg.draw_size(12, &mut rng);
            let k = rng.random_range(1..=8);
            let mut summands: Vec<(f64, ComplexMatrix)> = (0..k)
                .map(|_| {
                    let m = sample_complex(n, n, &mut rng).scale(rng.random_range(0.01..3.0));
                    Ok((crate::norms::weak_l1_norm(&m)?, m))
                })
                .collect::<Result<_>>()?;
            summands.sort_by(|x, y| y.0.total_cmp(&x.0));
            let ms: Vec<ComplexMatrix> = summands.into_iter().map(|(_, m)| m).collect();
            let r = weighted_weak_sum_bound(&ms, cfg.slack)?;
            let e = r.get("weighted weak sum").expect("entry present");
            let ratio = if e.rhs > 0.0 { e.lhs / e.rhs } else { 0.0 };
            let mut res = TrialResult::new(r).value(ratio);
            for m in &ms {
                res = res.with("summand", m);
            }
            Ok(res)
        },
    )
}

/// The assembled weak-type bound for Davies-class functions, with one
/// certified absolute-value bound per atom.
pub fn check_davies_bound(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(200);
    let mut worst_dv_ratio: f64 = 0.0;
    let mut out = run_check(
        Suite::Davies,
        "Davies-class weak-type bound",
        "lhs / assembled bound",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 43, t);
            let n = cfg.draw_size(16, &mut rng);
            let nu = sample_measure(4, -1.0, 1.0, &mut rng);
            let a = sample_hermitian(n, &mut rng);
            let b = HermitianMatrix::hermitian_part(
                &(a.as_matrix()
                    + &sample_hermitian(n, &mut rng).scale(rng.random_range(0.01..1.0))),
            );
            let outcome = davies_bound_check(&nu, &a, &b, cfg.slack)?;
            let mut r = outcome.report.clone();
            let cross = crate::davies::apply_function_cross_check(&nu, &a)?;
            r.small(
                "Davies function two-route evaluation",
                cross,
                1e-10 * a.frobenius_norm().max(1.0) * nu.total_variation(),
            );
            if let Some(x) = outcome.dv_ratio {
                worst_dv_ratio = worst_dv_ratio.max(x);
            }
            let ratio = if outcome.assembled_bound > 0.0 {
                outcome.lhs / outcome.assembled_bound
            } else {
                0.0
            };
            Ok(TrialResult::new(r)
                .value(ratio)
                .with("a", &a)
                .with("b", &b)
                .with_json("measure", &nu))
        },
    )?;
    out.notes.push(format!(
        "largest lhs / (DV * |A - B|_1) = {worst_dv_ratio:.6}"
    ));
    Ok(out)
}

// ---------------------------------------------------------------- comm

pub fn comm_suite(cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_commutator_bound(cfg)?,
        check_exponential_series(cfg)?,
        check_conjugation_limit(cfg)?,
        check_telescoping(cfg)?,
    ])
}

fn sample_two(n: usize, rng: &mut TrialRng) -> (HermitianMatrix, HermitianMatrix) {
    let a = sample_hermitian(n, rng);
    let b = sample_hermitian(n, rng);
    (a, b)
}

/// `‖[|A|, B]‖_{1,∞} ≤ c_main‖[A, B]‖_1`.
pub fn check_commutator_bound(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(500);
    run_check(Suite::Comm, "commutator weak bound", "ratio", trials, |t| {
        let mut rng = check_rng(cfg.seed, 50, t);
        let n = cfg.draw_size(32, &mut rng);
        let (a, b) = sample_two(n, &mut rng);
        let out = weak_commutator_check(&a, &b, cfg.slack)?;
        let mut res = TrialResult::new(out.report).with("a", &a).with("b", &b);
        res.inconclusive = out.inconclusive;
        if let Some(r) = out.ratio {
            res = res.value(r);
        }
        Ok(res)
    })
}

/// Series identity and trace bound for `[e^{iεB}, A]`, plus the conjugation
/// identity `|C| = e^{iεB}|A|e^{−iεB}` and its weak-type bound, at
/// `ε ∈ {0.1, 0.01}`.
pub fn check_exponential_series(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(100);
    run_check(
        Suite::Comm,
        "exponential commutator series",
        "trace-bound ratio",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 51, t);
            let n = cfg.draw_size(16, &mut rng);
            let (a, b) = sample_two(n, &mut rng);
            let mut r = Report::new(cfg.slack);
            let mut worst: Option<f64> = None;
            for eps in [0.1, 0.01] {
                let series = exp_commutator_series_check(&a, &b, eps, 20, cfg.slack)?;
                if let Some(e) = series.get("exponential commutator trace bound") {
                    if let Some(q) = guarded_ratio(e.lhs, e.rhs, 1e-14, 1e-14) {
                        worst = Some(worst.map_or(q, |w| w.max(q)));
                    }
                }
                r.extend(series);
                r.extend(conjugation_abs_check(&a, &b, eps, cfg.slack)?);
            }
            let mut res = TrialResult::new(r).with("a", &a).with("b", &b);
            if let Some(q) = worst {
                res = res.value(q);
            }
            Ok(res)
        },
    )
}

/// Halving ratio of the first-order limit at `ε = 1e−3` on non-degenerate
/// pairs (`n ≥ 2`).
pub fn check_conjugation_limit(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(50);
    run_check(
        Suite::Comm,
        "conjugation limit",
        "halving ratio",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 52, t);
            let hi = cfg.cap(16);
            let n = if hi < 2 { 1 } else { rng.random_range(2..=hi) };
            let (a, b) = sample_two(n, &mut rng);
            let out = conjugation_limit_check(&a, &b, 1e-3, cfg.slack)?;
            let mut res = TrialResult::new(out.report).with("a", &a).with("b", &b);
            if let Some(r) = out.ratio {
                res = res.value(r);
            }
            // a trivially convergent pair says nothing about the convergence order
            res.inconclusive = out.trivial;
            Ok(res)
        },
    )
}

/// `[B^k, A] = Σ_m B^m[B, A]B^{k−1−m}` for `k ≤ 10`.
pub fn check_telescoping(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let trials = cfg.trials(100);
    run_check(
        Suite::Comm,
        "commutator telescoping identity",
        "normalised residual",
        trials,
        |t| {
            let mut rng = check_rng(cfg.seed, 53, t);
            let n = cfg.draw_size(12, &mut rng);
            let (a, b) = sample_two(n, &mut rng);
            let residual = telescoping_residual(&a, &b, 10)?;
            let mut r = Report::new(cfg.slack);
            r.small("commutator telescoping identity", residual, 1e-12);
            Ok(TrialResult::new(r)
                .value(residual)
                .with("a", &a)
                .with("b", &b))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SuiteConfig {
        SuiteConfig {
            seed,
            trials: Some(3),
            max_n: Some(6),
            slack: DEFAULT_SLACK,
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in std::iter::once(Suite::All).chain(Suite::EACH) {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = SuiteConfig::new(1);
        assert!(c.validate().is_ok());
        c.trials = Some(0);
        assert!(c.validate().is_err());
        c.trials = None;
        c.max_n = Some(0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn every_suite_passes_at_small_scale() {
        let out = run_suite(Suite::All, &small(1)).unwrap();
        assert_eq!(out.checks.len(), 22);
        for c in &out.checks {
            assert!(c.passed(), "{}: {:?}", c.name, c.failures.first());
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = serde_json::to_string(&run_suite(Suite::Comm, &small(4)).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(Suite::Comm, &small(4)).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn failures_carry_label_and_instance() {
        let cfg = SuiteConfig {
            slack: 0.0,
            ..small(2)
        };
        let out = run_check(Suite::Norms, "forced", "none", 1, |_| {
            let a = sample_hermitian(2, &mut trial_rng(cfg.seed, 0));
            let mut r = Report::new(cfg.slack);
            r.le("deliberately violated", 1.0, 0.0, 0.0);
            Ok(TrialResult::new(r).with("a", &a))
        })
        .unwrap();
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.failures[0].violated, "deliberately violated");
        assert_eq!(out.failures[0].instance[0].0, "a");
        assert!(!out.passed());
    }
}
