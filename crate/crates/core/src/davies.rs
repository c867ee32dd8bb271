//! Davies-class functions `f(t) = ∫|t − s| dν(s)`, their distorted variation,
//! discretisation of measures on `[0, 1)`, and the weak-type bound for
//! `f(A) − f(B)` assembled from the absolute-value case.

use serde::{Deserialize, Serialize};

use crate::absdiff::{certified_abs_diff_bound, BoundCertificate};
use crate::constants::C_MAIN;
use crate::eig::hermitian_eig;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::norms::{hermitian_singular_values, weak_l1_norm};
use crate::report::{guarded_ratio, Report};
use crate::spectral::apply_to_decomposition;

/// Largest atom count for which the brute-force distorted variation runs
/// (it enumerates `2^(atoms−1)` compositions).
pub const DV_BRUTE_FORCE_CAP: usize = 16;
/// Longest summand list accepted by [`weighted_weak_sum_bound`].
pub const MAX_WEIGHTED_SUMMANDS: usize = 30;

/// `ν = Σ α_k δ_{t_k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiscreteWire")]
pub struct DiscreteMeasure {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct DiscreteWire {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl TryFrom<DiscreteWire> for DiscreteMeasure {
    type Error = Error;
    fn try_from(w: DiscreteWire) -> Result<Self> {
        Self::new(w.atoms, w.weights)
    }
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if atoms.iter().chain(&weights).any(|x| !x.is_finite()) {
            return Err(Error::InvalidMeasure(
                "atoms and weights must be finite".into(),
            ));
        }
        if atoms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMeasure(
                "atoms must be strictly increasing".into(),
            ));
        }
        if weights.contains(&0.0) {
            return Err(Error::InvalidMeasure("weights must be nonzero".into()));
        }
        Ok(Self { atoms, weights })
    }

    /// `δ_t`.
    pub fn dirac(t: f64) -> Self {
        Self::new(vec![t], vec![1.0]).expect("valid single atom")
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `|ν|(ℝ) = Σ |α_k|`.
    pub fn total_variation(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    /// The measure translated by `c`.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        Self::new(
            self.atoms.iter().map(|t| t + c).collect(),
            self.weights.clone(),
        )
    }
}

/// Density `d_i` on the cell `[b_i, b_{i+1})`, the last cell ending at 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PiecewiseWire")]
pub struct PiecewiseConstantMeasure {
    breaks: Vec<f64>,
    densities: Vec<f64>,
}

#[derive(Deserialize)]
struct PiecewiseWire {
    breaks: Vec<f64>,
    densities: Vec<f64>,
}

impl TryFrom<PiecewiseWire> for PiecewiseConstantMeasure {
    type Error = Error;
    fn try_from(w: PiecewiseWire) -> Result<Self> {
        Self::new(w.breaks, w.densities)
    }
}

impl PiecewiseConstantMeasure {
    pub fn new(breaks: Vec<f64>, densities: Vec<f64>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != densities.len() {
            return Err(Error::InvalidMeasure(
                "need one density per break and at least one cell".into(),
            ));
        }
        if breaks.iter().chain(&densities).any(|x| !x.is_finite()) {
            return Err(Error::InvalidMeasure(
                "breaks and densities must be finite".into(),
            ));
        }
        if breaks.iter().any(|&b| !(0.0..1.0).contains(&b)) {
            return Err(Error::InvalidMeasure("breaks must lie in [0, 1)".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMeasure(
                "breaks must be strictly increasing".into(),
            ));
        }
        Ok(Self { breaks, densities })
    }

    /// Uniform density `c` on `[0, 1)`.
    pub fn uniform(c: f64) -> Self {
        Self::new(vec![0.0], vec![c]).expect("valid uniform density")
    }

    /// `(start, end, density)` for every cell.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breaks.iter().enumerate().map(move |(i, &a)| {
            let b = self.breaks.get(i + 1).copied().unwrap_or(1.0);
            (a, b, self.densities[i])
        })
    }

    pub fn total_variation(&self) -> f64 {
        self.cells().map(|(a, b, d)| d.abs() * (b - a)).sum()
    }

    /// `ν([lo, hi))`.
    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        self.cells()
            .map(|(a, b, d)| d * (b.min(hi) - a.max(lo)).max(0.0))
            .sum()
    }
}

/// Either measure format; JSON `{"atoms", "weights"}` or `{"breaks", "densities"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Measure {
    Discrete(DiscreteMeasure),
    Piecewise(PiecewiseConstantMeasure),
}

impl Measure {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn total_variation(&self) -> f64 {
        match self {
            Measure::Discrete(m) => m.total_variation(),
            Measure::Piecewise(m) => m.total_variation(),
        }
    }

    /// `f(t) = ∫|t − s| dν(s)`.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Measure::Discrete(m) => eval_function(m, t),
            Measure::Piecewise(m) => m
                .cells()
                .map(|(a, b, d)| {
                    // ∫_a^b |t − s| ds = (g(t − a) − g(t − b)) with g(x) = x|x|/2
                    let g = |x: f64| 0.5 * x * x.abs();
                    d * (g(t - a) - g(t - b))
                })
                .sum(),
        }
    }

    /// Distorted variation where it is computable (discrete measures).
    pub fn distorted_variation(&self) -> Option<DistortedVariation> {
        match self {
            Measure::Discrete(m) => Some(distorted_variation(m)),
            Measure::Piecewise(_) => None,
        }
    }
}

/// `f(t) = Σ α_k |t − t_k|`.
pub fn eval_function(nu: &DiscreteMeasure, t: f64) -> f64 {
    nu.atoms
        .iter()
        .zip(&nu.weights)
        .map(|(s, a)| a * (t - s).abs())
        .sum()
}

/// `f(A)` by spectral calculus.
pub fn apply_function(nu: &DiscreteMeasure, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let d = hermitian_eig(a)?;
    Ok(apply_to_decomposition(&d, |x| eval_function(nu, x)))
}

/// `‖f(A) − Σ α_k |A − t_k|‖_F`, the second route summing shifted absolute
/// values.
pub fn apply_function_cross_check(nu: &DiscreteMeasure, a: &HermitianMatrix) -> Result<f64> {
    let d = hermitian_eig(a)?;
    let direct = apply_to_decomposition(&d, |x| eval_function(nu, x));
    let mut summed = ComplexMatrix::zeros(a.dim(), a.dim());
    for (&t, &w) in nu.atoms.iter().zip(&nu.weights) {
        let shifted = apply_to_decomposition(&d, |x| (x - t).abs());
        summed = &summed + &shifted.scale(w);
    }
    Ok((direct.as_matrix() - &summed).frobenius_norm())
}

/// Distorted variation: the closed form and, below the atom cap, the
/// brute-force maximum over compositions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistortedVariation {
    pub closed_form: f64,
    pub brute_force: Option<f64>,
}

impl DistortedVariation {
    pub fn value(&self) -> f64 {
        self.closed_form
    }

    /// `None` when the oracle was skipped.
    pub fn oracle_agrees(&self) -> Option<bool> {
        self.brute_force.map(|b| b == self.closed_form)
    }
}

/// `Σ_j 2^j v_(j)` for magnitudes sorted nonincreasing (zeros contribute
/// nothing because they sort last).
fn dv_cost(magnitudes: &mut [f64]) -> f64 {
    magnitudes.sort_by(|a, b| b.total_cmp(a));
    let mut power = 1.0;
    let mut total = 0.0;
    for &v in magnitudes.iter() {
        total += power * v;
        power *= 2.0;
    }
    total
}

/// The distorted variation of a finitely atomic measure.
///
/// Interval partitions only see the atoms through consecutive groups, so the
/// supremum runs over compositions of the atom sequence; for each, the best
/// permutation pays the smallest powers of two to the largest block masses.
/// Merging two blocks never raises the cost, so the singleton composition is
/// optimal — the closed form — and the brute-force enumeration confirms it.
pub fn distorted_variation(nu: &DiscreteMeasure) -> DistortedVariation {
    let mut singles: Vec<f64> = nu.weights.iter().map(|w| w.abs()).collect();
    let closed_form = dv_cost(&mut singles);
    let brute_force = (nu.len() <= DV_BRUTE_FORCE_CAP).then(|| dv_brute_force(&nu.weights));
    DistortedVariation {
        closed_form,
        brute_force,
    }
}

/// Maximum over all compositions of `weights` into consecutive blocks.
pub fn dv_brute_force(weights: &[f64]) -> f64 {
    let n = weights.len();
    if n == 0 {
        return 0.0;
    }
    let mut best: f64 = 0.0;
    let mut blocks = Vec::with_capacity(n);
    // bit i of `cuts` set ⇔ a block boundary between atoms i and i+1
    for cuts in 0u32..(1u32 << (n - 1)) {
        blocks.clear();
        let mut acc = weights[0];
        for (i, &w) in weights.iter().enumerate().skip(1) {
            if cuts & (1 << (i - 1)) != 0 {
                blocks.push(acc.abs());
                acc = w;
            } else {
                acc += w;
            }
        }
        blocks.push(acc.abs());
        best = best.max(dv_cost(&mut blocks));
    }
    best
}

/// Index of the grid cell `[k/m, (k+1)/m)` containing `t ∈ [0, 1)`, decided
/// against the grid points as they are represented in floating point.
fn grid_cell(t: f64, m: usize) -> usize {
    let mf = m as f64;
    let mut k = ((t * mf).floor().max(0.0) as usize).min(m - 1);
    while k + 1 < m && (k + 1) as f64 / mf <= t {
        k += 1;
    }
    while k > 0 && (k as f64 / mf) > t {
        k -= 1;
    }
    k
}

/// `ν_m = Σ_k ν([k/m, (k+1)/m)) δ_{k/m}`, empty cells dropped.
pub fn discretize(nu: &Measure, m: usize) -> Result<DiscreteMeasure> {
    if m == 0 {
        return Err(Error::InvalidConfig(
            "grid size m must be at least 1".into(),
        ));
    }
    let mut cells = vec![0.0; m];
    match nu {
        Measure::Discrete(d) => {
            if d.atoms.iter().any(|t| !(0.0..1.0).contains(t)) {
                return Err(Error::InvalidMeasure("support must lie in [0, 1)".into()));
            }
            for (&t, &w) in d.atoms.iter().zip(&d.weights) {
                cells[grid_cell(t, m)] += w;
            }
        }
        Measure::Piecewise(p) => {
            let mf = m as f64;
            for (k, cell) in cells.iter_mut().enumerate() {
                *cell = p.mass(k as f64 / mf, (k + 1) as f64 / mf);
            }
        }
    }
    let (atoms, weights) = cells
        .iter()
        .enumerate()
        .filter(|(_, &w)| w != 0.0)
        .map(|(k, &w)| (k as f64 / m as f64, w))
        .unzip();
    DiscreteMeasure::new(atoms, weights)
}

/// `sup |f_m − f| ≤ 2|ν|/m` on `10m` points of `[−1, 2]`, and
/// `DV(ν_m) ≤ DV(ν)` when both are computable.
pub fn discretization_check(nu: &Measure, m: usize, slack: f64) -> Result<Report> {
    let nu_m = discretize(nu, m)?;
    let points = 10 * m;
    let sup = (0..points)
        .map(|i| {
            let t = -1.0 + 3.0 * i as f64 / (points - 1).max(1) as f64;
            (eval_function(&nu_m, t) - nu.eval(t)).abs()
        })
        .fold(0.0, f64::max);
    let tv = nu.total_variation();
    let mut r = Report::new(slack);
    r.le("discretisation grid bound", sup, 2.0 * tv / m as f64, tv);
    if let Some(dv) = nu.distorted_variation() {
        r.le(
            "discretisation does not raise DV",
            distorted_variation(&nu_m).value(),
            dv.value(),
            dv.value(),
        );
    }
    Ok(r)
}

/// `‖Σ A_k‖_{1,∞} ≤ Σ 2^{k+1}‖A_k‖_{1,∞}` in the given order.
pub fn weighted_weak_sum_bound(summands: &[ComplexMatrix], slack: f64) -> Result<Report> {
    if summands.len() > MAX_WEIGHTED_SUMMANDS {
        return Err(Error::InvalidConfig(format!(
            "at most {MAX_WEIGHTED_SUMMANDS} summands, got {}",
            summands.len()
        )));
    }
    let mut r = Report::new(slack);
    let Some(first) = summands.first() else {
        r.le("weighted weak sum", 0.0, 0.0, 0.0);
        return Ok(r);
    };
    let mut sum = ComplexMatrix::zeros(first.nrows(), first.ncols());
    let mut rhs = 0.0;
    let mut power = 2.0;
    for a in summands {
        sum = sum.try_add(a)?;
        rhs += power * weak_l1_norm(a)?;
        power *= 2.0;
    }
    let lhs = weak_l1_norm(&sum)?;
    r.le("weighted weak sum", lhs, rhs, rhs);
    Ok(r)
}

/// Per-atom certificate inside [`davies_bound_check`].
#[derive(Debug, Clone, Serialize)]
pub struct AtomTerm {
    pub atom: f64,
    pub weight: f64,
    pub certificate: BoundCertificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct DaviesBoundOutcome {
    /// `‖f(A) − f(B)‖_{1,∞}`.
    pub lhs: f64,
    pub l1_diff: f64,
    /// `(Σ_k 2^{k+1}|α_(k)|) · c_main · ‖A − B‖_1`.
    pub assembled_bound: f64,
    pub dv: f64,
    /// `lhs / (DV · ‖A − B‖_1)`; `None` if inconclusive.
    pub dv_ratio: Option<f64>,
    pub terms: Vec<AtomTerm>,
    pub report: Report,
}

impl DaviesBoundOutcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// `‖f(A) − f(B)‖_{1,∞}` against the bound assembled from one
/// absolute-value certificate per atom:
/// `f(A) − f(B) = Σ α_k (|A − t_k| − |B − t_k|)`.
pub fn davies_bound_check(
    nu: &DiscreteMeasure,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    slack: f64,
) -> Result<DaviesBoundOutcome> {
    if a.dim() != b.dim() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let fp = a.frobenius_norm() + b.frobenius_norm();
    let fa = apply_function(nu, a)?;
    let fb = apply_function(nu, b)?;
    let lhs = hermitian_singular_values(&HermitianMatrix::hermitian_part(
        &(fa.as_matrix() - fb.as_matrix()),
    ))?
    .weak_l1();
    let diff = HermitianMatrix::hermitian_part(&(a.as_matrix() - b.as_matrix()));
    let l1_diff = hermitian_singular_values(&diff)?.schatten(1.0);

    let mut report = Report::new(slack);
    let mut terms = Vec::with_capacity(nu.len());
    for (&t, &w) in nu.atoms.iter().zip(&nu.weights) {
        let cert = certified_abs_diff_bound(&a.shift(t), &b.shift(t), slack)?;
        report.le(
            format!("atom {t} term bound"),
            cert.lhs,
            C_MAIN * cert.l1_diff,
            1e-3 * fp,
        );
        if !cert.pass {
            for e in cert.report.failures() {
                report.entries.push(crate::report::CheckEntry {
                    label: format!("atom {t}: {}", e.label),
                    ..e.clone()
                });
            }
        }
        terms.push(AtomTerm {
            atom: t,
            weight: w,
            certificate: cert,
        });
    }

    // Order the weighted terms by decreasing |α| and pay 2^{k+1} each.
    let mut order: Vec<usize> = (0..terms.len()).collect();
    order.sort_by(|&i, &j| terms[j].weight.abs().total_cmp(&terms[i].weight.abs()));
    let mut power = 2.0;
    let mut weighted_terms = 0.0;
    let mut weight_sum = 0.0;
    for &i in &order {
        weighted_terms += power * terms[i].weight.abs() * terms[i].certificate.lhs;
        weight_sum += power * terms[i].weight.abs();
        power *= 2.0;
    }
    report.le(
        "weighted quasi-triangle over atoms",
        lhs,
        weighted_terms,
        fp,
    );
    let assembled_bound = weight_sum * C_MAIN * l1_diff;
    // absolute rounding floor 1e−12·scale for the A ≈ B regime
    report.le("assembled Davies bound", lhs, assembled_bound, 1e-3 * fp);

    let dv = distorted_variation(nu).value();
    let dv_ratio = guarded_ratio(lhs, dv * l1_diff, 1e-12 * fp * dv, 1e-14 * fp * dv.max(1.0));
    Ok(DaviesBoundOutcome {
        lhs,
        l1_diff,
        assembled_bound,
        dv,
        dv_ratio,
        terms,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::rng::trial_rng;
    use crate::harness::sample::{sample_complex, sample_hermitian};
    use crate::spectral::abs_matrix;
    use proptest::prelude::*;
    use rand::Rng;

    fn measure(atoms: &[f64], weights: &[f64]) -> DiscreteMeasure {
        DiscreteMeasure::new(atoms.to_vec(), weights.to_vec()).unwrap()
    }

    #[test]
    fn measure_validation() {
        assert!(DiscreteMeasure::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0], vec![0.0]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0], vec![1.0, 2.0]).is_err());
        assert!(PiecewiseConstantMeasure::new(vec![0.5, 0.2], vec![1.0, 1.0]).is_err());
        assert!(PiecewiseConstantMeasure::new(vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn measure_json_formats() {
        let d = Measure::from_json(r#"{"atoms": [0.0, 1.0], "weights": [1.0, -1.0]}"#).unwrap();
        assert!(matches!(d, Measure::Discrete(_)));
        let p = Measure::from_json(r#"{"breaks": [0.0], "densities": [1.0]}"#).unwrap();
        assert!(matches!(p, Measure::Piecewise(_)));
        assert!(Measure::from_json(r#"{"atoms": [1.0, 0.0], "weights": [1.0, 1.0]}"#).is_err());
    }

    #[test]
    fn eval_examples() {
        let d0 = DiscreteMeasure::dirac(0.0);
        for t in [-2.0, -0.3, 0.0, 1.5] {
            assert_eq!(eval_function(&d0, t), f64::abs(t));
        }
        assert_eq!(eval_function(&measure(&[0.0, 1.0], &[1.0, -1.0]), 0.5), 0.0);
        // slope jumps by 2α_k at t_k
        let nu = measure(&[-0.5, 0.25], &[0.7, -1.3]);
        let h = 1e-6;
        for (&t, &w) in nu.atoms().iter().zip(nu.weights()) {
            let right = (eval_function(&nu, t + h) - eval_function(&nu, t)) / h;
            let left = (eval_function(&nu, t) - eval_function(&nu, t - h)) / h;
            assert!((right - left - 2.0 * w).abs() < 1e-6);
        }
    }

    #[test]
    fn apply_function_examples() {
        let a = sample_hermitian(8, &mut trial_rng(13, 0));
        let d0 = DiscreteMeasure::dirac(0.0);
        let fa = apply_function(&d0, &a).unwrap();
        assert!((fa.as_matrix() - abs_matrix(&a).unwrap().as_matrix()).frobenius_norm() < 1e-12);
        let nu = measure(&[-0.5, 0.1, 0.9], &[1.0, -2.0, 0.5]);
        assert!(apply_function_cross_check(&nu, &a).unwrap() <= 1e-10 * a.frobenius_norm());
        let diag = HermitianMatrix::from_real_diag(&[0.3, -1.0, 2.0]);
        let fd = apply_function(&nu, &diag).unwrap();
        for (i, &x) in [0.3, -1.0, 2.0].iter().enumerate() {
            assert!((fd[(i, i)].re - eval_function(&nu, x)).abs() < 1e-14);
        }
    }

    #[test]
    fn dv_examples() {
        let dv = distorted_variation(&DiscreteMeasure::dirac(0.0));
        assert_eq!((dv.value(), dv.oracle_agrees()), (1.0, Some(true)));
        let dv = distorted_variation(&measure(&[0.0, 1.0], &[1.0, -1.0]));
        assert_eq!((dv.value(), dv.oracle_agrees()), (3.0, Some(true)));
        let dv = distorted_variation(&measure(&[0.0, 1.0], &[4.0, 1.0]));
        assert_eq!((dv.value(), dv.oracle_agrees()), (6.0, Some(true)));
    }

    #[test]
    fn dv_oracle_skipped_above_cap() {
        let n = DV_BRUTE_FORCE_CAP + 1;
        let atoms: Vec<f64> = (0..n).map(|k| k as f64).collect();
        let dv = distorted_variation(&measure(&atoms, &vec![1.0; n]));
        assert_eq!(dv.oracle_agrees(), None);
        assert_eq!(dv.value(), (2f64.powi(n as i32)) - 1.0);
    }

    #[test]
    fn discretize_examples() {
        let nu = Measure::Discrete(DiscreteMeasure::dirac(0.3));
        let d = discretize(&nu, 10).unwrap();
        assert_eq!(d.atoms(), &[3.0 / 10.0]);
        assert_eq!(d.weights(), &[1.0]);

        let u = Measure::Piecewise(PiecewiseConstantMeasure::uniform(1.0));
        let d = discretize(&u, 2).unwrap();
        assert_eq!(d.atoms(), &[0.0, 0.5]);
        assert_eq!(d.weights(), &[0.5, 0.5]);

        assert!(discretize(&Measure::Discrete(DiscreteMeasure::dirac(1.0)), 4).is_err());
        assert!(discretize(&u, 0).is_err());
    }

    #[test]
    fn grid_bound_for_uniform_density() {
        let u = Measure::Piecewise(PiecewiseConstantMeasure::uniform(1.0));
        for m in [4, 16] {
            let r = discretization_check(&u, m, 1e-9).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.get("discretisation does not raise DV").is_none());
        }
        // the cell integral agrees with a midpoint-rule quadrature
        let f_exact = u.eval(0.37);
        let k = 20_000;
        let quad: f64 = (0..k)
            .map(|i| ((i as f64 + 0.5) / k as f64 - 0.37).abs() / k as f64)
            .sum();
        assert!((f_exact - quad).abs() < 1e-8);
    }

    #[test]
    fn weighted_sum_examples() {
        let r = weighted_weak_sum_bound(
            &[
                ComplexMatrix::from_real_diag(&[1.0, 0.0]),
                ComplexMatrix::from_real_diag(&[0.0, 1.0]),
            ],
            1e-9,
        )
        .unwrap();
        let e = r.get("weighted weak sum").unwrap();
        assert!((e.lhs - 2.0).abs() < 1e-14 && (e.rhs - 6.0).abs() < 1e-14 && e.pass);
        let single = sample_complex(5, 5, &mut trial_rng(1, 1));
        assert!(weighted_weak_sum_bound(&[single], 1e-9).unwrap().passed());
        let mut rng = trial_rng(17, 0);
        let summands: Vec<ComplexMatrix> = (0..8).map(|_| sample_complex(6, 6, &mut rng)).collect();
        assert!(weighted_weak_sum_bound(&summands, 1e-9).unwrap().passed());
        let too_many = vec![ComplexMatrix::zeros(1, 1); MAX_WEIGHTED_SUMMANDS + 1];
        assert!(weighted_weak_sum_bound(&too_many, 1e-9).is_err());
    }

    #[test]
    fn davies_bound_for_dirac_matches_abs_case() {
        let mut rng = trial_rng(3, 0);
        let a = sample_hermitian(6, &mut rng);
        let b = sample_hermitian(6, &mut rng);
        let out = davies_bound_check(&DiscreteMeasure::dirac(0.0), &a, &b, 1e-9).unwrap();
        let cert = certified_abs_diff_bound(&a, &b, 1e-9).unwrap();
        assert!((out.lhs - cert.lhs).abs() <= 1e-12 * cert.lhs.max(1.0));
        assert!((out.l1_diff - cert.l1_diff).abs() <= 1e-12 * cert.l1_diff);
        assert!(out.passed());
        assert_eq!(out.dv, 1.0);
    }

    #[test]
    fn davies_bound_examples() {
        let a = sample_hermitian(5, &mut trial_rng(4, 0));
        let out = davies_bound_check(&measure(&[0.0, 1.0], &[1.0, -1.0]), &a, &a, 1e-9).unwrap();
        assert_eq!(out.lhs, 0.0);
        assert!(out.passed());

        let mut rng = trial_rng(21, 0);
        let a = sample_hermitian(8, &mut rng);
        let b = sample_hermitian(8, &mut rng);
        let out = davies_bound_check(&measure(&[0.0, 1.0], &[1.0, -1.0]), &a, &b, 1e-9).unwrap();
        assert!(
            out.passed(),
            "{:?}",
            out.report.failures().collect::<Vec<_>>()
        );
        assert!(out.dv_ratio.is_some());
        assert_eq!(out.terms.len(), 2);
    }

    fn random_measure(seed: u64, max_atoms: usize, on_unit: bool) -> DiscreteMeasure {
        let mut rng = trial_rng(seed, 0);
        let k = rng.random_range(1..=max_atoms);
        let mut atoms: Vec<f64> = (0..k)
            .map(|_| {
                if on_unit {
                    rng.random::<f64>()
                } else {
                    rng.random_range(-2.0..2.0)
                }
            })
            .collect();
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
        DiscreteMeasure::new(atoms, weights).unwrap()
    }

    proptest! {
        #[test]
        fn dv_closed_form_equals_oracle(seed in any::<u64>()) {
            let nu = random_measure(seed, 10, false);
            prop_assert_eq!(distorted_variation(&nu).oracle_agrees(), Some(true));
        }

        #[test]
        fn shift_covariance(seed in any::<u64>(), c in -3.0f64..3.0, t in -4.0f64..4.0) {
            let nu = random_measure(seed, 8, false);
            let shifted = nu.shifted(c).unwrap();
            let (x, y) = (eval_function(&shifted, t + c), eval_function(&nu, t));
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + nu.total_variation() * (t.abs() + c.abs() + 3.0)));
            prop_assert_eq!(distorted_variation(&shifted).value(), distorted_variation(&nu).value());
        }

        #[test]
        fn discretisation_of_discrete_measures(seed in any::<u64>(), m in prop::sample::select(vec![4usize, 16])) {
            let nu = Measure::Discrete(random_measure(seed, 10, true));
            let r = discretization_check(&nu, m, 1e-9).unwrap();
            prop_assert!(r.passed(), "{:?}", r);
        }
    }
}
