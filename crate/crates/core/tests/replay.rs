//! End-to-end behaviour through the public API: sweeps are replayable from
//! their records, matrix JSON round-trips bit-exactly, and suite outcomes are
//! deterministic per seed.

use std::f64::consts::{E, PI};

use opweak_core::absdiff::{
    certified_abs_diff_bound, decompose_symmetric_pair, synth_symmetric_pair, SymmetricPairSpec,
};
use opweak_core::harness::{
    run_suite, run_sweep, sample_pair, write_csv, Structure, Suite, SuiteConfig, TrialConfig,
    CSV_HEADER,
};
use opweak_core::{
    matrix_from_json, matrix_to_json, BoundConstants, HermitianMatrix, C_MAIN, DEFAULT_SLACK,
};

#[test]
fn bound_constant_matches_closed_form() {
    assert!((C_MAIN - (34.0 + 2560.0 * E / PI)).abs() < 1e-9);
    assert_eq!(BoundConstants::default().c_main, C_MAIN);
}

#[test]
fn every_structure_sweeps_clean_and_replays_from_records() {
    for structure in Structure::ALL {
        let cfg = TrialConfig::new(7, 5, structure, 11);
        let out = run_sweep(&cfg, false).unwrap();
        assert!(
            out.all_pass(),
            "{structure}: {:?}",
            out.failures.first().map(|f| &f.violated)
        );
        assert!(out.summary.max_ratio <= C_MAIN);
        for rec in &out.records {
            let (a, b) = sample_pair(&cfg, rec.trial_index);
            let cert = certified_abs_diff_bound(&a, &b, cfg.tol_slack).unwrap();
            assert_eq!(cert.lhs, rec.weak_abs_diff);
            assert_eq!(cert.l1_diff, rec.l1_diff);
            assert_eq!(cert.ratio, rec.ratio);
        }
    }
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let cfg = TrialConfig::new(6, 8, Structure::Rank1Perturb, 3);
    let render = || {
        let mut buf = Vec::new();
        write_csv(&run_sweep(&cfg, false).unwrap().records, &mut buf).unwrap();
        buf
    };
    let first = render();
    assert_eq!(first, render());
    let text = String::from_utf8(first).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn json_round_trip_preserves_the_certificate() {
    let cfg = TrialConfig::new(9, 1, Structure::Generic, 21);
    let (a, b) = sample_pair(&cfg, 0);
    let reparse = |m: &HermitianMatrix| {
        HermitianMatrix::new(matrix_from_json(&matrix_to_json(m.as_matrix()).unwrap()).unwrap())
            .unwrap()
    };
    let (a2, b2) = (reparse(&a), reparse(&b));
    assert_eq!(a2.as_matrix(), a.as_matrix());
    let original = certified_abs_diff_bound(&a, &b, DEFAULT_SLACK).unwrap();
    let replayed = certified_abs_diff_bound(&a2, &b2, DEFAULT_SLACK).unwrap();
    assert_eq!(original.lhs, replayed.lhs);
    assert_eq!(original.bound, replayed.bound);
}

#[test]
fn decomposition_certificate_serialises_all_terms() {
    let spec = SymmetricPairSpec {
        n: 4,
        mu: vec![3.0, 2.0, 1.0, 0.5],
        seed_a: 4,
        seed_b: 5,
    };
    let (a, b) = synth_symmetric_pair(&spec).unwrap();
    let cert = decompose_symmetric_pair(&a, &b).unwrap();
    assert!(cert.report(DEFAULT_SLACK).passed());
    let json = serde_json::to_value(cert.to_json().unwrap()).unwrap();
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
    assert_eq!(json["term_pp"]["n"], 8);
}

#[test]
fn suite_outcomes_are_deterministic_per_seed() {
    let cfg = SuiteConfig {
        trials: Some(2),
        max_n: Some(5),
        ..SuiteConfig::new(9)
    };
    let render = || serde_json::to_string(&run_suite(Suite::Davies, &cfg).unwrap()).unwrap();
    let first = render();
    assert_eq!(first, render());
    let other = SuiteConfig {
        seed: 10,
        ..cfg.clone()
    };
    assert_ne!(
        first,
        serde_json::to_string(&run_suite(Suite::Davies, &other).unwrap()).unwrap()
    );
}
