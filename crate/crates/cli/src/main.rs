//! `opweak`: command-line front end for the weak-type verification suites.
//!
//! Exit codes: 0 when every check passes, 1 when at least one inequality is
//! violated, 2 on usage or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use opweak_core::absdiff::decompose_symmetric_pair;
use opweak_core::davies::{
    davies_bound_check, discretization_check, discretize, DiscreteMeasure, Measure,
};
use opweak_core::harness::sweep::TrialFailure;
use opweak_core::harness::{
    adversarial_search, run_suite, run_sweep, sample_pair, write_csv, Objective, SearchConfig,
    Structure, Suite, SuiteConfig, TrialConfig,
};
use opweak_core::{matrix_from_json, HermitianMatrix, Report, C_MAIN, DEFAULT_SLACK};

#[derive(Parser)]
#[command(
    name = "opweak",
    version,
    about = "Numerical verification of the weak-type (1,1) bound for the matrix absolute value"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized check suites.
    Check(CheckArgs),
    /// Sweep random pairs through the certified bound and write CSV.
    Sweep(SweepArgs),
    /// Hill-climbing search for large ratios.
    Search(SearchArgs),
    /// Four-term decomposition certificate for a symmetric pair.
    Decompose(DecomposeArgs),
    /// Weak-type bound for a Davies-class function on random pairs.
    Davies(DaviesArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// all, norms, schur, trunc, absdiff, davies or comm.
    #[arg(long, default_value = "all")]
    suite: Suite,
    /// Trials per check (default: each check's own count).
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Upper bound on generated matrix sizes.
    #[arg(long)]
    max_n: Option<usize>,
    /// Relative slack granted to every inequality.
    #[arg(long, default_value_t = DEFAULT_SLACK)]
    slack: f64,
    /// Write the full outcome as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where failing instances are dumped.
    #[arg(long, default_value = "opweak-failures.json")]
    failures: PathBuf,
    /// Do not report wall-clock timings.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: usize,
    /// generic, commuting, rank1_perturb, identically_distributed or symmetric_pair.
    #[arg(long, default_value = "generic")]
    structure: Structure,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = TrialConfig::DEFAULT_PERTURB_SCALE)]
    perturb_scale: f64,
    #[arg(long, default_value_t = DEFAULT_SLACK)]
    slack: f64,
    #[arg(long)]
    out: PathBuf,
    /// Where failing instances are dumped.
    #[arg(long, default_value = "opweak-failures.json")]
    failures: PathBuf,
    /// Write 0 for elapsed_ms so reruns are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    /// Total objective evaluations.
    #[arg(long)]
    budget: usize,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    /// weak_ratio or l1_ratio.
    #[arg(long)]
    objective: Objective,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Matrix JSON for A.
    #[arg(long)]
    input: PathBuf,
    /// Matrix JSON for B.
    #[arg(long)]
    input2: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SLACK)]
    slack: f64,
}

#[derive(Args)]
struct DaviesArgs {
    /// Measure JSON: {"atoms", "weights"} or {"breaks", "densities"}.
    #[arg(long)]
    measure: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Grid size used to discretise a piecewise-constant measure.
    #[arg(long, default_value_t = 16)]
    grid: usize,
    #[arg(long, default_value_t = TrialConfig::DEFAULT_PERTURB_SCALE)]
    perturb_scale: f64,
    #[arg(long, default_value_t = DEFAULT_SLACK)]
    slack: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Whether every check passed; errors map to exit code 2.
type Verdict = anyhow::Result<bool>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let verdict = match cli.command {
        Command::Check(a) => check(a),
        Command::Sweep(a) => sweep(a),
        Command::Search(a) => search(a),
        Command::Decompose(a) => decompose(a),
        Command::Davies(a) => davies(a),
    };
    match verdict {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_hermitian(path: &Path) -> anyhow::Result<HermitianMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let m = matrix_from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    HermitianMatrix::new(m).with_context(|| format!("{} is not Hermitian", path.display()))
}

fn check(a: CheckArgs) -> Verdict {
    let cfg = SuiteConfig {
        seed: a.seed,
        trials: a.trials,
        max_n: a.max_n,
        slack: a.slack,
    };
    let start = Instant::now();
    let outcome = run_suite(a.suite, &cfg)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for c in &outcome.checks {
        let worst = c
            .worst
            .map_or_else(|| "-".to_string(), |w| format!("{w:.6e}"));
        writeln!(
            out,
            "{} {}/{}: trials={} failures={} inconclusive={} worst {}={}",
            if c.passed() { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            c.trials,
            c.failures.len(),
            c.inconclusive,
            c.metric,
            worst
        )?;
        for note in &c.notes {
            writeln!(out, "     note: {note}")?;
        }
        for f in c.failures.iter().take(5) {
            writeln!(
                out,
                "     violated: {} (trial {}; {})",
                f.violated, f.trial, f.detail
            )?;
        }
    }
    let passed = outcome.passed();
    writeln!(
        out,
        "{}: {} checks, {} failures (suite {}, seed {})",
        if passed { "PASS" } else { "FAIL" },
        outcome.checks.len(),
        outcome.failure_count(),
        outcome.suite,
        outcome.seed
    )?;
    if let Some(path) = &a.out {
        write_json(path, &outcome)?;
    }
    if !passed {
        let failures: Vec<_> = outcome
            .checks
            .iter()
            .flat_map(|c| c.failures.iter().map(move |f| (c.name.as_str(), f)))
            .collect();
        write_json(&a.failures, &failures)?;
        eprintln!("failing instances written to {}", a.failures.display());
    }
    if !a.no_timestamp {
        eprintln!("elapsed: {:.1} s", start.elapsed().as_secs_f64());
    }
    Ok(passed)
}

fn sweep(a: SweepArgs) -> Verdict {
    let cfg = TrialConfig {
        seed: a.seed,
        n: a.n,
        trials: a.trials,
        structure: a.structure,
        perturb_scale: a.perturb_scale,
        tol_slack: a.slack,
    };
    let outcome = run_sweep(&cfg, !a.no_timestamp)?;
    let file = fs::File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    write_csv(&outcome.records, std::io::BufWriter::new(file))?;
    let s = &outcome.summary;
    println!(
        "{}: {}/{} trials pass, {} inconclusive, max ratio {:.6e}, mean ratio {:.6e}, c_main {:.6}",
        if outcome.all_pass() { "PASS" } else { "FAIL" },
        s.passed,
        s.trials,
        s.inconclusive,
        s.max_ratio,
        s.mean_ratio,
        s.c_main
    );
    report_trial_failures(&outcome.failures, &a.failures)?;
    Ok(outcome.all_pass())
}

fn report_trial_failures(failures: &[TrialFailure], path: &Path) -> anyhow::Result<()> {
    if failures.is_empty() {
        return Ok(());
    }
    for f in failures.iter().take(5) {
        println!(
            "     trial {} violated: {}",
            f.trial_index,
            f.violated.join(", ")
        );
    }
    write_json(path, &failures)?;
    eprintln!("failing instances written to {}", path.display());
    Ok(())
}

fn search(a: SearchArgs) -> Verdict {
    let cfg = SearchConfig {
        n: a.n,
        budget: a.budget,
        restarts: a.restarts,
        seed: a.seed,
        objective: a.objective,
    };
    let outcome = adversarial_search(&cfg)?;
    write_json(&a.out, &outcome)?;
    let passed = outcome.passed();
    println!(
        "{}: best {} {:.6e} after {} evaluations ({} improvements), certificate {}",
        if passed { "PASS" } else { "FAIL" },
        cfg.objective,
        outcome.best_value,
        cfg.budget,
        outcome.trace.len(),
        if outcome.certificate_pass {
            "passes"
        } else {
            "fails"
        }
    );
    if cfg.objective == Objective::WeakRatio {
        println!("     bound c_main = {C_MAIN:.6}");
    }
    for v in &outcome.violated {
        println!("     violated: {v}");
    }
    Ok(passed)
}

#[derive(Serialize)]
struct DecomposeOutput {
    certificate: opweak_core::absdiff::CertificateJson,
    report: Report,
}

fn decompose(a: DecomposeArgs) -> Verdict {
    let ma = read_hermitian(&a.input)?;
    let mb = read_hermitian(&a.input2)?;
    let cert = decompose_symmetric_pair(&ma, &mb)
        .context("the pair does not satisfy the decomposition hypotheses")?;
    let report = cert.report(a.slack);
    let passed = report.passed();
    write_json(
        &a.out,
        &DecomposeOutput {
            certificate: cert.to_json()?,
            report: report.clone(),
        },
    )?;
    println!(
        "{}: residual {:.3e} (scale {:.3e}), unitary defect {:.3e}, matching defect {:.3e}",
        if passed { "PASS" } else { "FAIL" },
        cert.residual,
        cert.scale,
        cert.unitary_defect,
        cert.matching_defect
    );
    for e in report.failures() {
        println!("     violated: {}", e.label);
    }
    Ok(passed)
}

#[derive(Serialize)]
struct DaviesTrial {
    trial: u64,
    lhs: f64,
    l1_diff: f64,
    assembled_bound: f64,
    dv_ratio: Option<f64>,
    pass: bool,
    violated: Vec<String>,
}

#[derive(Serialize)]
struct DaviesOutput {
    measure: DiscreteMeasure,
    distorted_variation: f64,
    discretisation: Option<Report>,
    trials: Vec<DaviesTrial>,
}

fn davies(a: DaviesArgs) -> Verdict {
    let text = fs::read_to_string(&a.measure)
        .with_context(|| format!("reading {}", a.measure.display()))?;
    let measure =
        Measure::from_json(&text).with_context(|| format!("parsing {}", a.measure.display()))?;
    let (nu, discretisation) = match &measure {
        Measure::Discrete(d) => (d.clone(), None),
        Measure::Piecewise(_) => {
            if a.grid == 0 {
                bail!("--grid must be at least 1");
            }
            (
                discretize(&measure, a.grid)?,
                Some(discretization_check(&measure, a.grid, a.slack)?),
            )
        }
    };
    if nu.is_empty() {
        bail!("the measure has no mass");
    }
    let mut passed = discretisation.as_ref().is_none_or(Report::passed);
    let cfg = TrialConfig {
        seed: a.seed,
        n: a.n,
        trials: a.trials,
        structure: Structure::Generic,
        perturb_scale: a.perturb_scale,
        tol_slack: a.slack,
    };
    cfg.validate()?;
    let mut trials = Vec::with_capacity(a.trials);
    let mut worst_dv: f64 = 0.0;
    for t in 0..a.trials as u64 {
        let (ma, mb) = sample_pair(&cfg, t);
        let o = davies_bound_check(&nu, &ma, &mb, a.slack)?;
        passed &= o.passed();
        if let Some(r) = o.dv_ratio {
            worst_dv = worst_dv.max(r);
        }
        trials.push(DaviesTrial {
            trial: t,
            lhs: o.lhs,
            l1_diff: o.l1_diff,
            assembled_bound: o.assembled_bound,
            dv_ratio: o.dv_ratio,
            pass: o.passed(),
            violated: o.report.failures().map(|e| e.label.clone()).collect(),
        });
    }
    let dv = opweak_core::davies::distorted_variation(&nu).value();
    println!(
        "{}: {}/{} trials pass, DV = {:.6}, largest lhs/(DV |A-B|_1) = {:.6e}",
        if passed { "PASS" } else { "FAIL" },
        trials.iter().filter(|t| t.pass).count(),
        trials.len(),
        dv,
        worst_dv
    );
    if let Some(r) = &discretisation {
        for e in &r.entries {
            println!(
                "     {} {}: {:.6e} <= {:.6e}",
                if e.pass { "ok" } else { "violated" },
                e.label,
                e.lhs,
                e.rhs
            );
        }
    }
    if let Some(path) = &a.out {
        write_json(
            path,
            &DaviesOutput {
                measure: nu,
                distorted_variation: dv,
                discretisation,
                trials,
            },
        )?;
    }
    Ok(passed)
}
