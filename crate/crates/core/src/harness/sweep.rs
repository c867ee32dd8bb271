//! Random sweeps of `‖|A| − |B|‖_{1,∞} / ‖A − B‖_1` with per-trial
//! certification and CSV emission.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::absdiff::certified_abs_diff_bound;
use crate::constants::C_MAIN;
use crate::error::{Error, Result};
use crate::matrix::MatrixJson;
use crate::report::DEFAULT_SLACK;

use super::sample::sample_pair;

/// Largest supported matrix size for harness trials.
pub const MAX_TRIAL_N: usize = 128;

/// Exact CSV header of sweep output.
pub const CSV_HEADER: &str =
    "trial,seed,n,structure,l1_diff,weak_abs_diff,ratio,bound,pass,elapsed_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    /// `B = A + ε·E` with `A, E` independent GUE samples.
    Generic,
    /// Common eigenbasis; `λ_B = λ_A + ε·g`.
    Commuting,
    /// `B = A ± ε·vv*` with a unit vector `v`.
    Rank1Perturb,
    /// Same spectrum, independent eigenbases.
    IdenticallyDistributed,
    /// Same spectrum `(μ, −μ)` (plus `0` for odd `n`), independent eigenbases.
    SymmetricPair,
}

impl Structure {
    pub const ALL: [Structure; 5] = [
        Structure::Generic,
        Structure::Commuting,
        Structure::Rank1Perturb,
        Structure::IdenticallyDistributed,
        Structure::SymmetricPair,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Structure::Generic => "generic",
            Structure::Commuting => "commuting",
            Structure::Rank1Perturb => "rank1_perturb",
            Structure::IdenticallyDistributed => "identically_distributed",
            Structure::SymmetricPair => "symmetric_pair",
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Structure::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown structure `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub n: usize,
    pub trials: usize,
    pub structure: Structure,
    pub perturb_scale: f64,
    pub tol_slack: f64,
}

impl TrialConfig {
    /// Default perturbation size relative to the `O(1)` operator norm of samples.
    pub const DEFAULT_PERTURB_SCALE: f64 = 0.1;

    pub fn new(n: usize, trials: usize, structure: Structure, seed: u64) -> Self {
        Self {
            seed,
            n,
            trials,
            structure,
            perturb_scale: Self::DEFAULT_PERTURB_SCALE,
            tol_slack: DEFAULT_SLACK,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_TRIAL_N).contains(&self.n) {
            return Err(Error::InvalidConfig(format!(
                "n = {} outside [1, {MAX_TRIAL_N}]",
                self.n
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.perturb_scale.is_finite() && self.perturb_scale >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "invalid perturb_scale {}",
                self.perturb_scale
            )));
        }
        if !(self.tol_slack.is_finite() && self.tol_slack >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "invalid tol_slack {}",
                self.tol_slack
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub seed: u64,
    pub n: usize,
    pub structure: Structure,
    pub l1_diff: f64,
    pub weak_abs_diff: f64,
    /// `None` when inconclusive (vanishing `‖A − B‖_1`, non-vanishing lhs).
    pub ratio: Option<f64>,
    pub bound: f64,
    pub pass: bool,
    pub elapsed_ms: u64,
}

/// A failed trial: the labels of the violated links and the replayable pair.
#[derive(Debug, Clone, Serialize)]
pub struct TrialFailure {
    pub trial_index: u64,
    pub violated: Vec<String>,
    pub a: MatrixJson,
    pub b: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub trials: usize,
    pub passed: usize,
    pub inconclusive: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub c_main: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutcome {
    pub records: Vec<TrialRecord>,
    pub summary: SweepSummary,
    pub failures: Vec<TrialFailure>,
}

impl SweepOutcome {
    pub fn all_pass(&self) -> bool {
        self.summary.passed == self.summary.trials
    }
}

/// Runs every trial of `config` through the certified chain. With
/// `record_timing = false`, `elapsed_ms` is written as 0 so that output is
/// byte-reproducible.
pub fn run_sweep(config: &TrialConfig, record_timing: bool) -> Result<SweepOutcome> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.trials);
    let mut failures = Vec::new();
    for t in 0..config.trials as u64 {
        let start = Instant::now();
        let (a, b) = sample_pair(config, t);
        let cert = certified_abs_diff_bound(&a, &b, config.tol_slack)?;
        let elapsed_ms = if record_timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        };
        if !cert.pass {
            failures.push(TrialFailure {
                trial_index: t,
                violated: cert.report.failures().map(|e| e.label.clone()).collect(),
                a: MatrixJson::from_matrix(&a)?,
                b: MatrixJson::from_matrix(&b)?,
            });
        }
        records.push(TrialRecord {
            trial_index: t,
            seed: config.seed,
            n: config.n,
            structure: config.structure,
            l1_diff: cert.l1_diff,
            weak_abs_diff: cert.lhs,
            ratio: cert.ratio,
            bound: cert.bound,
            pass: cert.pass,
            elapsed_ms,
        });
    }
    let summary = summarize(&records);
    Ok(SweepOutcome {
        records,
        summary,
        failures,
    })
}

pub fn summarize(records: &[TrialRecord]) -> SweepSummary {
    let ratios: Vec<f64> = records.iter().filter_map(|r| r.ratio).collect();
    SweepSummary {
        trials: records.len(),
        passed: records.iter().filter(|r| r.pass).count(),
        inconclusive: records.len() - ratios.len(),
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        mean_ratio: if ratios.is_empty() {
            0.0
        } else {
            ratios.iter().sum::<f64>() / ratios.len() as f64
        },
        c_main: C_MAIN,
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    trial: u64,
    seed: u64,
    n: usize,
    structure: &'a str,
    l1_diff: f64,
    weak_abs_diff: f64,
    ratio: Option<f64>,
    bound: f64,
    pass: bool,
    elapsed_ms: u64,
}

/// Writes `records` as CSV with the exact [`CSV_HEADER`]; an inconclusive
/// ratio is an empty field.
pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let csv_err = |e: csv::Error| Error::Parse(format!("csv: {e}"));
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER.split(',')).map_err(csv_err)?;
    for r in records {
        w.serialize(CsvRow {
            trial: r.trial_index,
            seed: r.seed,
            n: r.n,
            structure: r.structure.as_str(),
            l1_diff: r.l1_diff,
            weak_abs_diff: r.weak_abs_diff,
            ratio: r.ratio,
            bound: r.bound,
            pass: r.pass,
            elapsed_ms: r.elapsed_ms,
        })
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_names_round_trip() {
        for s in Structure::ALL {
            assert_eq!(s.as_str().parse::<Structure>().unwrap(), s);
        }
        assert!("diagonal".parse::<Structure>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(TrialConfig::new(0, 1, Structure::Generic, 0)
            .validate()
            .is_err());
        assert!(TrialConfig::new(129, 1, Structure::Generic, 0)
            .validate()
            .is_err());
        assert!(TrialConfig::new(4, 0, Structure::Generic, 0)
            .validate()
            .is_err());
        assert!(TrialConfig::new(128, 1, Structure::Generic, 0)
            .validate()
            .is_ok());
    }

    #[test]
    fn equal_pair_gives_zero_ratio() {
        let mut cfg = TrialConfig::new(5, 1, Structure::Generic, 3);
        cfg.perturb_scale = 0.0;
        let out = run_sweep(&cfg, false).unwrap();
        assert_eq!(out.records[0].ratio, Some(0.0));
        assert!(out.all_pass());
    }

    #[test]
    fn sweep_is_deterministic_and_bounded() {
        let cfg = TrialConfig::new(16, 100, Structure::Generic, 1);
        let first = run_sweep(&cfg, false).unwrap();
        let second = run_sweep(&cfg, false).unwrap();
        assert_eq!(first.records, second.records);
        assert_eq!(first.records.len(), 100);
        assert!(
            first.all_pass(),
            "{:?}",
            first.failures.first().map(|f| &f.violated)
        );
        assert!(first.summary.max_ratio <= C_MAIN);
    }

    #[test]
    fn csv_has_exact_header_and_one_row_per_trial() {
        let cfg = TrialConfig::new(4, 3, Structure::Commuting, 7);
        let out = run_sweep(&cfg, false).unwrap();
        let mut buf = Vec::new();
        write_csv(&out.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,7,4,commuting,"));
    }
}
