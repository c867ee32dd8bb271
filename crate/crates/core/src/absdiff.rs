//! The four-term decomposition of `|A| − |B|` for identically and
//! symmetrically distributed pairs, and the reduction of arbitrary
//! self-adjoint pairs to that case (auxiliary commuting matrix `C`, tensoring
//! with `F = diag(1, −1)`), evaluated link by link into a certificate.
//!
//! A pair in `M_{2n}` is handled through a [`SymmetricSplit`]: magnitudes
//! `μ_0 ≥ … ≥ μ_{n−1} ≥ 0` with orthonormal columns `W₁` (eigenvectors for
//! `+μ`) and `W₂` (eigenvectors for `−μ`), so that `A = W₁ΜW₁* − W₂ΜW₂*` and
//! `|A| = W₁ΜW₁* + W₂ΜW₂*`.

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::{C_MAIN, C_S, C_SYM, QUASI_TRI, SCHUR_FACTOR};
use crate::eig::{hermitian_eig, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::harness::rng::{trial_rng, TrialRng};
use crate::harness::sample::{conjugate_diag, random_unitary};
use crate::matrix::{kron, ComplexMatrix, HermitianMatrix, MatrixJson};
use crate::norms::{hermitian_singular_values, sigma2_dilate, singular_values, SingularValueSeq};
use crate::report::{guarded_ratio, Report};
use crate::weaktrunc::{ratio_coefficients, s_operator_in_basis};

/// Smallest magnitude admitted on the direct decomposition path.
pub const SYMMETRIC_DELTA_FLOOR: f64 = 1e-3;
/// Relative tolerance for "identically and symmetrically distributed".
pub const DISTRIBUTION_TOL: f64 = 1e-8;

/// Recipe for a synthetic pair `A = W_A D W_A*`, `B = W_B D W_B*` with
/// `D = diag(μ, −μ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricPairSpec {
    pub n: usize,
    pub mu: Vec<f64>,
    pub seed_a: u64,
    pub seed_b: u64,
}

impl SymmetricPairSpec {
    pub fn validate(&self) -> Result<()> {
        if self.mu.len() != self.n || self.n == 0 {
            return Err(Error::InvalidConfig(format!(
                "mu has length {}, expected n = {} >= 1",
                self.mu.len(),
                self.n
            )));
        }
        if self.mu.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSequence("mu must be nonincreasing".into()));
        }
        if let Some(&m) = self.mu.iter().find(|&&m| !(m >= SYMMETRIC_DELTA_FLOOR)) {
            return Err(Error::Hypothesis(format!(
                "magnitude {m:e} is below the floor {SYMMETRIC_DELTA_FLOOR:e}"
            )));
        }
        Ok(())
    }
}

fn symmetric_diag(mu: &[f64]) -> Vec<f64> {
    mu.iter().copied().chain(mu.iter().map(|&m| -m)).collect()
}

/// Synthesises the pair of a [`SymmetricPairSpec`]; each unitary depends only
/// on its own seed.
pub fn synth_symmetric_pair(
    spec: &SymmetricPairSpec,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    spec.validate()?;
    let d = symmetric_diag(&spec.mu);
    let wa = random_unitary(2 * spec.n, &mut trial_rng(spec.seed_a, 0));
    let wb = random_unitary(2 * spec.n, &mut trial_rng(spec.seed_b, 0));
    Ok((conjugate_diag(&wa, &d), conjugate_diag(&wb, &d)))
}

/// As [`synth_symmetric_pair`], drawing both unitaries from `rng`.
pub fn synth_symmetric_pair_with(
    mu: &[f64],
    rng: &mut TrialRng,
) -> (HermitianMatrix, HermitianMatrix) {
    let d = symmetric_diag(mu);
    let wa = random_unitary(d.len(), rng);
    let wb = random_unitary(d.len(), rng);
    (conjugate_diag(&wa, &d), conjugate_diag(&wb, &d))
}

/// `W · diag(m) · W*` for a matrix `W` with `m.len()` columns.
fn weighted_gram(w: &ComplexMatrix, m: &[f64]) -> ComplexMatrix {
    let scaled = ComplexMatrix::from_fn(w.nrows(), w.ncols(), |i, j| w[(i, j)] * m[j]);
    scaled.matmul(&w.adjoint()).expect("conforming shapes")
}

/// Eigen-split of a symmetrically distributed matrix in `M_{2n}`.
#[derive(Debug, Clone)]
pub struct SymmetricSplit {
    /// `μ_k`, nonincreasing, length `n`.
    pub mu: Vec<f64>,
    /// `2n × n`, column `k` spans the range of `p_{1k}`.
    pub positive: ComplexMatrix,
    /// `2n × n`, column `k` spans the range of `p_{2k}`.
    pub negative: ComplexMatrix,
}

impl SymmetricSplit {
    pub fn dim(&self) -> usize {
        self.positive.nrows()
    }

    pub fn half(&self) -> usize {
        self.mu.len()
    }

    /// Pairs the `k`-th largest eigenvalue with the `k`-th smallest; fails if
    /// the spectrum is not symmetric within `DISTRIBUTION_TOL`.
    pub fn from_decomposition(d: &SpectralDecomposition) -> Result<Self> {
        let dim = d.dim();
        if !dim.is_multiple_of(2) {
            return Err(Error::Hypothesis(format!("dimension {dim} is odd")));
        }
        let n = dim / 2;
        let ev = &d.eigenvalues;
        let scale = ev
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let asym = (0..n)
            .map(|k| (ev[k] + ev[dim - 1 - k]).abs())
            .fold(0.0, f64::max);
        if asym > DISTRIBUTION_TOL * scale {
            return Err(Error::Hypothesis(format!(
                "spectrum is not symmetric (defect {:.3e})",
                asym / scale
            )));
        }
        let pos_idx: Vec<usize> = (0..n).collect();
        let neg_idx: Vec<usize> = (0..n).map(|k| dim - 1 - k).collect();
        Ok(Self {
            mu: ev[..n].to_vec(),
            positive: d.unitary.select_columns(&pos_idx),
            negative: d.unitary.select_columns(&neg_idx),
        })
    }

    /// Split of `A ⊗ F` read off the decomposition of `A`: the eigenvector
    /// `q` of `λ` yields `q⊗e₁` with eigenvalue `λ` and `q⊗e₂` with `−λ`.
    /// For `λ ≥ 0` the first is the positive member of the pair, otherwise
    /// the second; zero eigenvalues therefore still pair up.
    pub fn tensor_sign(d: &SpectralDecomposition) -> Self {
        let n = d.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| d.eigenvalues[j].abs().total_cmp(&d.eigenvalues[i].abs()));
        let zero = Complex64::new(0.0, 0.0);
        let lift = |j: usize, slot: usize| -> Vec<Complex64> {
            let mut v = vec![zero; 2 * n];
            for r in 0..n {
                v[2 * r + slot] = d.unitary[(r, j)];
            }
            v
        };
        let mut pos = Vec::with_capacity(n);
        let mut neg = Vec::with_capacity(n);
        for &j in &order {
            let (p, q) = if d.eigenvalues[j] >= 0.0 {
                (0, 1)
            } else {
                (1, 0)
            };
            pos.push(lift(j, p));
            neg.push(lift(j, q));
        }
        Self {
            mu: order.iter().map(|&j| d.eigenvalues[j].abs()).collect(),
            positive: ComplexMatrix::from_columns(2 * n, &pos),
            negative: ComplexMatrix::from_columns(2 * n, &neg),
        }
    }

    /// Same eigenprojections, new magnitudes.
    pub fn with_magnitudes(&self, mu: &[f64]) -> Result<Self> {
        if mu.len() != self.half() {
            return Err(Error::InvalidSequence(format!(
                "{} magnitudes for a split of size {}",
                mu.len(),
                self.half()
            )));
        }
        Ok(Self {
            mu: mu.to_vec(),
            positive: self.positive.clone(),
            negative: self.negative.clone(),
        })
    }

    /// `Σ μ_k p_{1k} − Σ μ_k p_{2k}`.
    pub fn signed_matrix(&self) -> HermitianMatrix {
        let pos = weighted_gram(&self.positive, &self.mu);
        let neg = weighted_gram(&self.negative, &self.mu);
        HermitianMatrix::hermitian_part(&(&pos - &neg))
    }

    /// `Σ μ_k p_{1k} + Σ μ_k p_{2k}`.
    pub fn abs_matrix(&self) -> HermitianMatrix {
        let pos = weighted_gram(&self.positive, &self.mu);
        let neg = weighted_gram(&self.negative, &self.mu);
        HermitianMatrix::hermitian_part(&(&pos + &neg))
    }

    /// `P₁ = Σ p_{1k}`.
    pub fn positive_projection(&self) -> ComplexMatrix {
        &self.positive * &self.positive.adjoint()
    }

    /// `P₂ = Σ p_{2k}`.
    pub fn negative_projection(&self) -> ComplexMatrix {
        &self.negative * &self.negative.adjoint()
    }
}

/// The four summands of `|A| − |B|` with the unitaries that route the mixed
/// terms through the multipliers `S₁`, `S₂`.
#[derive(Debug, Clone)]
pub struct DecompositionCertificate {
    /// `P₁(A − B)Q₁`.
    pub term_pp: ComplexMatrix,
    /// `−P₂(A − B)Q₂`.
    pub term_mm: ComplexMatrix,
    /// `S₁(P₁(A − B)UP₁)U*`.
    pub term_pm: ComplexMatrix,
    /// `−S₂(P₂(A − B)VP₂)V*`.
    pub term_mp: ComplexMatrix,
    /// `U p_{1l} U* = q_{2l}`.
    pub u: ComplexMatrix,
    /// `V p_{2l} V* = q_{1l}`.
    pub v: ComplexMatrix,
    /// `‖Σ terms − (|A| − |B|)‖_F`.
    pub residual: f64,
    /// `‖A‖_F + ‖B‖_F`.
    pub scale: f64,
    /// `max(‖U*U − I‖_F, ‖V*V − I‖_F)`.
    pub unitary_defect: f64,
    /// `max(‖UW₁ − W₂'‖_F, ‖VW₂ − W₁'‖_F)` (columnwise matching).
    pub matching_defect: f64,
    /// Weak-L1 norms of `term_pp, term_mm, term_pm, term_mp`.
    pub weak_norms: [f64; 4],
}

impl DecompositionCertificate {
    pub fn terms(&self) -> [&ComplexMatrix; 4] {
        [&self.term_pp, &self.term_mm, &self.term_pm, &self.term_mp]
    }

    pub fn sum(&self) -> ComplexMatrix {
        &(&self.term_pp + &self.term_mm) + &(&self.term_pm + &self.term_mp)
    }

    /// Residual within `1e−9·scale`, unitaries within `dim·1e−10`, matching
    /// within `1e−9`.
    pub fn report(&self, slack: f64) -> Report {
        let dim = self.u.nrows() as f64;
        let mut r = Report::new(slack);
        r.small("four-term reconstruction", self.residual, 1e-9 * self.scale);
        r.small("matching unitaries", self.unitary_defect, dim * 1e-10);
        r.small("eigenprojection matching", self.matching_defect, 1e-9);
        r
    }

    pub fn to_json(&self) -> Result<CertificateJson> {
        Ok(CertificateJson {
            term_pp: MatrixJson::from_matrix(&self.term_pp)?,
            term_mm: MatrixJson::from_matrix(&self.term_mm)?,
            term_pm: MatrixJson::from_matrix(&self.term_pm)?,
            term_mp: MatrixJson::from_matrix(&self.term_mp)?,
            u: MatrixJson::from_matrix(&self.u)?,
            v: MatrixJson::from_matrix(&self.v)?,
            residual: self.residual,
            scale: self.scale,
            unitary_defect: self.unitary_defect,
            matching_defect: self.matching_defect,
            weak_norms: WeakNorms {
                term_pp: self.weak_norms[0],
                term_mm: self.weak_norms[1],
                term_pm: self.weak_norms[2],
                term_mp: self.weak_norms[3],
            },
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakNorms {
    pub term_pp: f64,
    pub term_mm: f64,
    pub term_pm: f64,
    pub term_mp: f64,
}

/// Wire form of a [`DecompositionCertificate`].
#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub term_pp: MatrixJson,
    pub term_mm: MatrixJson,
    pub term_pm: MatrixJson,
    pub term_mp: MatrixJson,
    pub u: MatrixJson,
    pub v: MatrixJson,
    pub residual: f64,
    pub scale: f64,
    pub unitary_defect: f64,
    pub matching_defect: f64,
    pub weak_norms: WeakNorms,
}

/// Four-term decomposition of `|X| − |Y|` given splits of `X` and `Y` that
/// share their magnitudes. `abs_diff` is the reference `|X| − |Y|` the
/// residual is measured against.
pub fn four_term_decomposition(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    sx: &SymmetricSplit,
    sy: &SymmetricSplit,
    abs_diff: &ComplexMatrix,
) -> Result<DecompositionCertificate> {
    if sx.mu != sy.mu {
        return Err(Error::Hypothesis(
            "splits must share their magnitudes".into(),
        ));
    }
    let dim = x.square_dim()?;
    if y.shape() != x.shape() || sx.dim() != dim || sy.dim() != dim {
        return Err(Error::ShapeMismatch {
            left: x.shape(),
            right: y.shape(),
        });
    }
    let mu = &sx.mu;
    let (w1a, w2a) = (&sx.positive, &sx.negative);
    let (w1b, w2b) = (&sy.positive, &sy.negative);
    let diff = x.try_sub(y)?;

    // U p_{1l} U* = q_{2l}, completed by sending span p_2 onto span q_1;
    // V p_{2l} V* = q_{1l}, completed by sending span p_1 onto span q_2.
    let u = &(w2b * &w1a.adjoint()) + &(w1b * &w2a.adjoint());
    let v = &(w1b * &w2a.adjoint()) + &(w2b * &w1a.adjoint());

    let p1 = sx.positive_projection();
    let p2 = sx.negative_projection();
    let q1 = sy.positive_projection();
    let q2 = sy.negative_projection();

    let term_pp = &(&p1 * &diff) * &q1;
    let term_mm = -&(&(&p2 * &diff) * &q2);
    let inner_pm = &(&(&p1 * &diff) * &u) * &p1;
    let term_pm = &s_operator_in_basis(mu, w1a, &inner_pm)? * &u.adjoint();
    let inner_mp = &(&(&p2 * &diff) * &v) * &p2;
    let term_mp = -&(&s_operator_in_basis(mu, w2a, &inner_mp)? * &v.adjoint());

    let sum = &(&term_pp + &term_mm) + &(&term_pm + &term_mp);
    let residual = (&sum - abs_diff).frobenius_norm();

    let eye = ComplexMatrix::identity(dim);
    let unitary_defect = (&u.adjoint_matmul(&u)? - &eye)
        .frobenius_norm()
        .max((&v.adjoint_matmul(&v)? - &eye).frobenius_norm());
    let matching_defect = (&(&u * w1a) - w2b)
        .frobenius_norm()
        .max((&(&v * w2a) - w1b).frobenius_norm());

    // Isometric compressions carry the same singular values as the full terms:
    // term_pp = W₁ₐ(W₁ₐ*ΔW₁ᵦ)W₁ᵦ*, term_pm = W₁ₐ(G∘W₁ₐ*ΔW₂ᵦ)W₂ᵦ*, etc.
    let coef = ratio_coefficients(mu);
    let compress = |l: &ComplexMatrix, r: &ComplexMatrix| -> Result<ComplexMatrix> {
        l.adjoint_matmul(&diff.matmul(r)?)
    };
    let weak = |m: &ComplexMatrix| -> Result<f64> { Ok(singular_values(m)?.weak_l1()) };
    let weak_norms = [
        weak(&compress(w1a, w1b)?)?,
        weak(&compress(w2a, w2b)?)?,
        weak(&coef.try_hadamard(&compress(w1a, w2b)?)?)?,
        weak(&coef.try_hadamard(&compress(w2a, w1b)?)?)?,
    ];

    Ok(DecompositionCertificate {
        term_pp,
        term_mm,
        term_pm,
        term_mp,
        u,
        v,
        residual,
        scale: x.frobenius_norm() + y.frobenius_norm(),
        unitary_defect,
        matching_defect,
        weak_norms,
    })
}

/// Largest gap between the sorted spectra of `A` and `B`, relative to their
/// size.
fn spectral_mismatch(da: &SpectralDecomposition, db: &SpectralDecomposition) -> f64 {
    let scale = da
        .eigenvalues
        .iter()
        .chain(&db.eigenvalues)
        .map(|x| x.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    da.eigenvalues
        .iter()
        .zip(&db.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Four-term decomposition for an identically and symmetrically distributed
/// pair whose magnitudes are all at least `delta_floor`.
pub fn decompose_symmetric_pair_with_floor(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    delta_floor: f64,
) -> Result<DecompositionCertificate> {
    if a.dim() != b.dim() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let da = hermitian_eig(a)?;
    let db = hermitian_eig(b)?;
    let mismatch = spectral_mismatch(&da, &db);
    if mismatch > DISTRIBUTION_TOL {
        return Err(Error::Hypothesis(format!(
            "pair is not identically distributed (spectral gap {mismatch:.3e})"
        )));
    }
    let sa = SymmetricSplit::from_decomposition(&da)?;
    let sb_raw = SymmetricSplit::from_decomposition(&db)?;
    if let Some(&m) = sa.mu.iter().find(|&&m| m < delta_floor) {
        return Err(Error::Hypothesis(format!(
            "magnitude {m:e} is below the floor {delta_floor:e}"
        )));
    }
    // Both splits use A's magnitudes; B's differ only by rounding.
    let sb = sb_raw.with_magnitudes(&sa.mu)?;
    let abs_diff = &da.reconstruct_with(f64::abs) - &db.reconstruct_with(f64::abs);
    four_term_decomposition(a, b, &sa, &sb, &abs_diff)
}

/// [`decompose_symmetric_pair_with_floor`] at the default floor.
pub fn decompose_symmetric_pair(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<DecompositionCertificate> {
    decompose_symmetric_pair_with_floor(a, b, SYMMETRIC_DELTA_FLOOR)
}

/// `C = Σ t_k p_{1k} − Σ t_k p_{2k}` on the eigenprojections of the
/// symmetrically distributed `A`.
pub fn auxiliary_commuting_approximant(
    a: &HermitianMatrix,
    target: &SingularValueSeq,
) -> Result<HermitianMatrix> {
    let split = SymmetricSplit::from_decomposition(&hermitian_eig(a)?)?;
    Ok(split.with_magnitudes(target.values())?.signed_matrix())
}

/// `‖μ(A) − μ(B)‖_1 ≤ ‖A − B‖_1` with `μ` the sorted eigenvalue magnitudes.
pub fn singular_value_lipschitz_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    slack: f64,
) -> Result<Report> {
    let mu_a = hermitian_singular_values(a)?;
    let mu_b = hermitian_singular_values(b)?;
    let diff = HermitianMatrix::hermitian_part(&a.try_sub(b)?);
    let rhs = hermitian_singular_values(&diff)?.schatten(1.0);
    let lhs = seq_l1_distance(&mu_a, &mu_b);
    let mut r = Report::new(slack);
    r.le(
        "singular-value Lipschitz",
        lhs,
        rhs,
        a.frobenius_norm() + b.frobenius_norm(),
    );
    Ok(r)
}

fn seq_l1_distance(a: &SingularValueSeq, b: &SingularValueSeq) -> f64 {
    let len = a.len().max(b.len());
    (0..len).map(|k| (a.get(k) - b.get(k)).abs()).sum()
}

fn weak_h(m: &HermitianMatrix) -> Result<f64> {
    Ok(hermitian_singular_values(m)?.weak_l1())
}

fn trace_h(m: &HermitianMatrix) -> Result<f64> {
    Ok(hermitian_singular_values(m)?.schatten(1.0))
}

fn sub_h(a: &ComplexMatrix, b: &ComplexMatrix) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&(a - b))
}

/// Everything the reduction chain computes for one pair.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCertificate {
    pub n: usize,
    /// `‖|A| − |B|‖_{1,∞}`.
    pub lhs: f64,
    /// `‖A − B‖_1`.
    pub l1_diff: f64,
    /// `c_main · ‖A − B‖_1`.
    pub bound: f64,
    /// `lhs / l1_diff` under the `0/0 → 0` policy; `None` if inconclusive.
    pub ratio: Option<f64>,
    /// Residual of the four-term identity on the symmetrised pair.
    pub four_term_residual: f64,
    pub pass: bool,
    pub report: Report,
}

/// Certifies `‖|A| − |B|‖_{1,∞} ≤ (34 + 2560e/π)‖A − B‖_1` and every link of
/// the chain that proves it:
///
/// 1. `A' = A⊗F`, `B' = B⊗F` are symmetrically distributed, with
///    `|A'| − |B'| = (|A| − |B|)⊗1`, doubling both norms;
/// 2. `C` (B's magnitudes on A's eigenprojections) commutes with `A'` and
///    satisfies `‖A' − C‖_1 = ‖μ(A') − μ(B')‖_1 ≤ ‖A' − B'‖_1`;
/// 3. `(C, B')` is identically and symmetrically distributed, so the
///    four-term bound gives `‖|C| − |B'|‖_{1,∞} ≤ (8 + 640e/π)‖C − B'‖_1`;
/// 4. the quasi-triangle inequality assembles the pieces.
pub fn certified_abs_diff_bound(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    slack: f64,
) -> Result<BoundCertificate> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let scale = a.frobenius_norm() + b.frobenius_norm();
    let fp = scale.max(f64::MIN_POSITIVE);
    let mut report = Report::new(slack);

    let da = hermitian_eig(a)?;
    let db = hermitian_eig(b)?;
    let abs_diff = sub_h(
        &da.reconstruct_with(f64::abs),
        &db.reconstruct_with(f64::abs),
    );
    let lhs = weak_h(&abs_diff)?;
    let l1_diff = trace_h(&sub_h(a, b))?;

    // Symmetrisation by F = diag(1, −1).
    let f = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
    let a2 = HermitianMatrix::hermitian_part(&kron(a, &f)?);
    let b2 = HermitianMatrix::hermitian_part(&kron(b, &f)?);
    let abs_a2 = crate::spectral::abs_matrix(&a2)?;
    let abs_b2 = crate::spectral::abs_matrix(&b2)?;
    let tensor_lhs = sub_h(&abs_a2, &abs_b2);
    let lifted = kron(&abs_diff, &ComplexMatrix::identity(2))?;
    report.small(
        "tensor-abs identity",
        (tensor_lhs.as_matrix() - &lifted).frobenius_norm(),
        1e-10 * fp,
    );
    let lhs2 = weak_h(&tensor_lhs)?;
    report.eq_abs("tensor weak doubling", lhs2, 2.0 * lhs, slack * fp);
    let l1_2 = trace_h(&sub_h(&a2, &b2))?;
    report.eq_abs("tensor trace doubling", l1_2, 2.0 * l1_diff, slack * fp);

    // Splits of A' and B' read off the decompositions of A and B.
    let sa = SymmetricSplit::tensor_sign(&da);
    let sb = SymmetricSplit::tensor_sign(&db);
    let split_defect = (sa.signed_matrix().as_matrix() - a2.as_matrix())
        .frobenius_norm()
        .max((sb.signed_matrix().as_matrix() - b2.as_matrix()).frobenius_norm());
    report.small("symmetric split reconstruction", split_defect, 1e-10 * fp);

    // Auxiliary C: B's magnitudes on A's eigenprojections.
    let sc = sa.with_magnitudes(&sb.mu)?;
    let c = sc.signed_matrix();
    let abs_c = sc.abs_matrix();
    let comm =
        (&(a2.as_matrix() * c.as_matrix()) - &(c.as_matrix() * a2.as_matrix())).frobenius_norm();
    report.small("auxiliary matrix commutes", comm, 1e-10 * fp * fp);

    let mu_a2 = sigma2_dilate(&SingularValueSeq::from_unsorted(
        da.eigenvalues.iter().map(|x| x.abs()).collect(),
    ));
    let mu_b2 = sigma2_dilate(&SingularValueSeq::from_unsorted(
        db.eigenvalues.iter().map(|x| x.abs()).collect(),
    ));
    let mu_gap = seq_l1_distance(&mu_a2, &mu_b2);
    let a_minus_c = sub_h(&a2, &c);
    let sv_ac = hermitian_singular_values(&a_minus_c)?;
    let trace_ac = sv_ac.schatten(1.0);
    report.eq_abs("auxiliary trace identity", trace_ac, mu_gap, 1e-9 * fp);
    report.le("singular-value Lipschitz", mu_gap, l1_2, fp);

    let weak_abs_ac = weak_h(&sub_h(&abs_a2, &abs_c))?;
    let weak_ac = sv_ac.weak_l1();
    report.le("commuting abs contraction", weak_abs_ac, weak_ac, fp);
    report.le("weak below trace", weak_ac, trace_ac, fp);

    // Four-term decomposition of |C| − |B'|.
    let abs_cb = sub_h(&abs_c, &sb.abs_matrix());
    let cert = four_term_decomposition(&c, &b2, &sc, &sb, &abs_cb)?;
    report.extend(cert.report(slack));
    let d_cb = trace_h(&sub_h(&b2, &c))?;
    let [w_pp, w_mm, w_pm, w_mp] = cert.weak_norms;
    report.le("plain term pp", w_pp, d_cb, fp);
    report.le("plain term mm", w_mm, d_cb, fp);
    report.le("multiplier term pm", w_pm, C_S * d_cb, fp);
    report.le("multiplier term mp", w_mp, C_S * d_cb, fp);
    let weak_cb = weak_h(&abs_cb)?;
    report.le(
        "four-term assembly",
        weak_cb,
        SCHUR_FACTOR * (w_pp + w_mm + w_pm + w_mp),
        fp,
    );
    report.le("symmetric-pair bound", weak_cb, C_SYM * d_cb, fp);
    report.le("trace triangle", d_cb, l1_2 + trace_ac, fp);
    report.le(
        "weak quasi-triangle",
        lhs2,
        QUASI_TRI * weak_cb + QUASI_TRI * weak_abs_ac,
        fp,
    );

    let bound = C_MAIN * l1_diff;
    // absolute rounding floor 1e−12·scale for the A ≈ B regime
    report.le("main bound", lhs, bound, 1e-3 * fp);

    let ratio = guarded_ratio(lhs, l1_diff, 1e-12 * fp, 1e-14 * fp);
    Ok(BoundCertificate {
        n,
        lhs,
        l1_diff,
        bound,
        ratio,
        four_term_residual: cert.residual,
        pass: report.passed(),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sample::{sample_hermitian, sample_magnitudes};
    use crate::spectral::abs_matrix;
    use proptest::prelude::*;

    fn spec(mu: Vec<f64>, seed_a: u64, seed_b: u64) -> SymmetricPairSpec {
        SymmetricPairSpec {
            n: mu.len(),
            mu,
            seed_a,
            seed_b,
        }
    }

    fn h(rows: &[&[f64]]) -> HermitianMatrix {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        HermitianMatrix::from_real_rows(&rows).unwrap()
    }

    #[test]
    fn equal_seeds_give_equal_matrices() {
        let (a, b) = synth_symmetric_pair(&spec(vec![1.0], 3, 3)).unwrap();
        assert_eq!(a, b);
        let cert = decompose_symmetric_pair(&a, &b).unwrap();
        assert!(cert.residual <= 1e-12);
        assert!(cert.terms().iter().all(|t| t.frobenius_norm() <= 1e-12));
    }

    #[test]
    fn synthesised_spectrum_is_symmetric() {
        let (a, b) = synth_symmetric_pair(&spec(vec![2.0, 1.0], 1, 2)).unwrap();
        for m in [&a, &b] {
            let sv = hermitian_singular_values(m).unwrap();
            for (got, want) in sv.values().iter().zip([2.0, 2.0, 1.0, 1.0]) {
                assert!((got - want).abs() < 1e-11);
            }
            let ev = hermitian_eig(m).unwrap().eigenvalues;
            for (got, want) in ev.iter().zip([2.0, 1.0, -1.0, -2.0]) {
                assert!((got - want).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(synth_symmetric_pair(&spec(vec![1.0, 2.0], 0, 0)).is_err());
        assert!(synth_symmetric_pair(&spec(vec![1.0, 1e-4], 0, 0)).is_err());
        assert!(synth_symmetric_pair(&spec(vec![], 0, 0)).is_err());
    }

    #[test]
    fn four_terms_reconstruct_the_difference() {
        let (a, b) = synth_symmetric_pair(&spec(vec![2.0, 1.0], 1, 2)).unwrap();
        let cert = decompose_symmetric_pair(&a, &b).unwrap();
        // independent oracle: |A| − |B| from the spectral calculus
        let oracle = abs_matrix(&a).unwrap().as_matrix() - abs_matrix(&b).unwrap().as_matrix();
        assert!((&cert.sum() - &oracle).frobenius_norm() <= 1e-9 * cert.scale);
        assert!(cert.report(1e-9).passed(), "{:?}", cert.report(1e-9));
    }

    #[test]
    fn degenerate_spectrum_in_rotated_eigenbasis() {
        let mu = [1.0, 1.0, 0.5];
        let d: Vec<f64> = mu.iter().copied().chain(mu.iter().map(|m| -m)).collect();
        let w = random_unitary(6, &mut trial_rng(8, 0));
        // rotate inside the doubly degenerate eigenvalue 1 eigenspace
        let (c, s) = (0.6, 0.8);
        let w_rot = ComplexMatrix::from_fn(6, 6, |i, j| match j {
            0 => w[(i, 0)] * c + w[(i, 1)] * s,
            1 => w[(i, 1)] * c - w[(i, 0)] * s,
            _ => w[(i, j)],
        });
        let a = conjugate_diag(&w, &d);
        let b = conjugate_diag(&w_rot, &d);
        let cert = decompose_symmetric_pair(&a, &b).unwrap();
        assert!(cert.report(1e-9).passed());
        // a genuinely different pair with the same degenerate spectrum
        let b2 = conjugate_diag(&random_unitary(6, &mut trial_rng(9, 0)), &d);
        assert!(decompose_symmetric_pair(&a, &b2)
            .unwrap()
            .report(1e-9)
            .passed());
    }

    #[test]
    fn decomposition_rejects_broken_hypotheses() {
        let a = h(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let b = h(&[&[2.0, 0.0], &[0.0, -1.0]]);
        assert!(matches!(
            decompose_symmetric_pair(&a, &b),
            Err(Error::Hypothesis(_))
        ));
        let z = h(&[&[0.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(
            decompose_symmetric_pair(&z, &z),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn auxiliary_matrix_examples() {
        let (a, _) = synth_symmetric_pair(&spec(vec![2.0, 1.0], 4, 5)).unwrap();
        let c =
            auxiliary_commuting_approximant(&a, &SingularValueSeq::new(vec![2.0, 1.0]).unwrap())
                .unwrap();
        assert!((c.as_matrix() - a.as_matrix()).frobenius_norm() < 1e-12);

        let a = h(&[&[2.0, 0.0], &[0.0, -2.0]]);
        let c = auxiliary_commuting_approximant(&a, &SingularValueSeq::new(vec![1.0]).unwrap())
            .unwrap();
        let want = h(&[&[1.0, 0.0], &[0.0, -1.0]]);
        assert!((c.as_matrix() - want.as_matrix()).frobenius_norm() < 1e-14);
    }

    #[test]
    fn lipschitz_examples() {
        let a = h(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let b = h(&[&[-1.0, 0.0], &[0.0, 1.0]]);
        let r = singular_value_lipschitz_check(&a, &b, 1e-9).unwrap();
        let e = r.get("singular-value Lipschitz").unwrap();
        assert_eq!(e.lhs, 0.0);
        assert!((e.rhs - 4.0).abs() < 1e-12);
        // aligned signs: equality
        let a = h(&[&[3.0, 0.0], &[0.0, -1.0]]);
        let b = h(&[&[2.0, 0.0], &[0.0, -0.5]]);
        let e = singular_value_lipschitz_check(&a, &b, 1e-9).unwrap();
        let e = e.get("singular-value Lipschitz").unwrap();
        assert!((e.lhs - e.rhs).abs() < 1e-12);
    }

    #[test]
    fn certificate_for_equal_pair() {
        let a = sample_hermitian(5, &mut trial_rng(1, 1));
        let cert = certified_abs_diff_bound(&a, &a, 1e-9).unwrap();
        assert_eq!(cert.lhs, 0.0);
        assert_eq!(cert.ratio, Some(0.0));
        assert!(
            cert.pass,
            "{:?}",
            cert.report.failures().collect::<Vec<_>>()
        );
    }

    #[test]
    fn certificate_scalar_case() {
        for (x, y) in [(0.7, -0.2), (-1.0, 1.0), (2.0, 3.0), (0.0, -0.5)] {
            let a = h(&[&[x]]);
            let b = h(&[&[y]]);
            let cert = certified_abs_diff_bound(&a, &b, 1e-9).unwrap();
            assert!((cert.lhs - (f64::abs(x) - f64::abs(y)).abs()).abs() < 1e-14);
            assert!((cert.l1_diff - (x - y).abs()).abs() < 1e-14);
            assert!(cert.ratio.unwrap() <= 1.0 + 1e-12);
            assert!(cert.pass);
        }
    }

    #[test]
    fn certificate_random_pair_seed_42() {
        let mut rng = trial_rng(42, 0);
        let a = sample_hermitian(16, &mut rng);
        let b = sample_hermitian(16, &mut rng);
        let cert = certified_abs_diff_bound(&a, &b, 1e-9).unwrap();
        assert!(
            cert.pass,
            "{:?}",
            cert.report.failures().collect::<Vec<_>>()
        );
        assert!(cert.ratio.unwrap() > 0.0 && cert.ratio.unwrap() <= C_MAIN);
        assert!(cert.four_term_residual <= 1e-9 * 4.0 * (a.frobenius_norm() + b.frobenius_norm()));
    }

    #[test]
    fn certificate_with_zero_eigenvalues() {
        let a = h(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
        let b = h(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        let cert = certified_abs_diff_bound(&a, &b, 1e-9).unwrap();
        assert!(
            cert.pass,
            "{:?}",
            cert.report.failures().collect::<Vec<_>>()
        );
    }

    #[test]
    fn certificate_json_has_all_terms() {
        let (a, b) = synth_symmetric_pair(&spec(vec![2.0, 1.0], 1, 2)).unwrap();
        let json =
            serde_json::to_value(decompose_symmetric_pair(&a, &b).unwrap().to_json().unwrap())
                .unwrap();
        for key in [
            "term_pp",
            "term_mm",
            "term_pm",
            "term_mp",
            "u",
            "v",
            "residual",
            "weak_norms",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn reconstruction_holds_for_random_pairs(seed in 0u64..10_000, half in 1usize..6) {
            let mu = sample_magnitudes(half, SYMMETRIC_DELTA_FLOOR, &mut trial_rng(seed, 99));
            let (a, b) = synth_symmetric_pair(&spec(mu, seed, seed + 1)).unwrap();
            let cert = decompose_symmetric_pair(&a, &b).unwrap();
            prop_assert!(cert.report(1e-9).passed());
        }

        #[test]
        fn chain_holds_for_random_pairs(seed in 0u64..10_000, n in 1usize..8) {
            let mut rng = trial_rng(seed, 7);
            let a = sample_hermitian(n, &mut rng);
            let b = sample_hermitian(n, &mut rng);
            let cert = certified_abs_diff_bound(&a, &b, 1e-9).unwrap();
            prop_assert!(cert.pass, "{:?}", cert.report.failures().collect::<Vec<_>>());
        }

        #[test]
        fn auxiliary_matrix_commutes_and_matches_trace(seed in 0u64..10_000, half in 1usize..5) {
            let mut rng = trial_rng(seed, 3);
            let mu = sample_magnitudes(half, SYMMETRIC_DELTA_FLOOR, &mut rng);
            let target = sample_magnitudes(half, 0.0, &mut rng);
            let (a, _) = synth_symmetric_pair_with(&mu, &mut rng);
            let c = auxiliary_commuting_approximant(&a, &SingularValueSeq::new(target.clone()).unwrap()).unwrap();
            let comm = (&(a.as_matrix() * c.as_matrix()) - &(c.as_matrix() * a.as_matrix())).frobenius_norm();
            prop_assert!(comm <= 1e-10 * a.frobenius_norm() * c.frobenius_norm().max(1.0));
            let trace = hermitian_singular_values(&sub_h(&a, &c)).unwrap().schatten(1.0);
            let gap: f64 = mu.iter().zip(&target).map(|(x, y)| 2.0 * (x - y).abs()).sum();
            prop_assert!((trace - gap).abs() <= 1e-9 * a.frobenius_norm().max(1.0));
        }
    }
}
