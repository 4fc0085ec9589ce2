//! Acceptance suite: every release gate runs here with its tolerance
//! pinned in code, printing one pass/fail line per criterion.
//!
//! Run with `cargo test -p multient --test acceptance -- --nocapture` to
//! see the lines; any failed gate fails its test.
//!
//! The frozen qutrit class tables below were computed with an independent
//! implementation (tuple-bucketed integer Gram matrices over exact
//! fractions) and cross-checked against this crate's sweep; the reference
//! tables in `multient::audit` are intentionally *not* the oracle, since
//! they carry known anomalies the audit reports document.

use std::fs;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use multient::audit::{
    audit_against_reference, audit_qubit_sweep, QUTRIT_GME_AME_REFERENCE, QUTRIT_SCOTT2_REFERENCE,
};
use multient::catalog::{self, default_grid, NamedStateSpec};
use multient::chmap::{op_to_state, pair_marginals, BipartiteOperator, Reshape};
use multient::measures::{gme_ame, scott};
use multient::perm::{
    classify, sweep, ClassHistogram, ClassifyMode, EnphaseMode, ExactValue, SweepConfig,
    SweepMeasure, SweepRecord,
};
use multient::polygon::{
    entropy_vector, polygon_measure, solve_polygon_system, SolverConfig, ENTROPY_GATE,
};
use multient::state::{haar_unitary, LocalUnitarySet};
use multient::weyl::{
    cartan_unitary, edge_formula, gme_ame_closed_form, sample_chamber, scott2_closed_form,
    ChamberEdge, WeylPoint,
};
use multient::PureState;
use num_complex::Complex64;

const EXPECTED_QUTRIT_GME_CLASSES: [(i64, i64, u64); 31] = [
    (0, 1, 72),
    (4, 9, 1296),
    (1, 2, 864),
    (55, 108, 1296),
    (65, 108, 1296),
    (17, 27, 5184),
    (52, 81, 5184),
    (2, 3, 13608),
    (145, 216, 10368),
    (221, 324, 10368),
    (56, 81, 12960),
    (25, 36, 3456),
    (58, 81, 23328),
    (155, 216, 10368),
    (13, 18, 2592),
    (119, 162, 5184),
    (20, 27, 10368),
    (961, 1296, 25920),
    (3, 4, 288),
    (493, 648, 36288),
    (62, 81, 64800),
    (341, 432, 10368),
    (64, 81, 34344),
    (29, 36, 5184),
    (527, 648, 25920),
    (22, 27, 15552),
    (68, 81, 20736),
    (121, 144, 1728),
    (8, 9, 1296),
    (289, 324, 2592),
    (1, 1, 72),
];

const EXPECTED_QUTRIT_SCOTT_CLASSES: [(i64, i64, u64); 15] = [
    (2, 3, 72),
    (22, 27, 2592),
    (5, 6, 864),
    (23, 27, 1296),
    (47, 54, 10368),
    (95, 108, 20736),
    (8, 9, 27432),
    (97, 108, 36288),
    (49, 54, 44064),
    (11, 12, 101376),
    (25, 27, 44712),
    (101, 108, 46656),
    (17, 18, 22464),
    (26, 27, 3888),
    (1, 1, 72),
];

struct QutritSweep {
    records: Vec<SweepRecord>,
    elapsed: Duration,
}

fn qutrit_sweep() -> &'static QutritSweep {
    static SWEEP: OnceLock<QutritSweep> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let start = Instant::now();
        let records = sweep(
            3,
            &[SweepMeasure::GmeAme, SweepMeasure::Scott2],
            EnphaseMode::None,
            &SweepConfig::default(),
        )
        .expect("qutrit sweep");
        QutritSweep { records, elapsed: start.elapsed() }
    })
}

fn assert_histogram_matches(hist: &ClassHistogram, expected: &[(i64, i64, u64)]) {
    assert_eq!(hist.entries.len(), expected.len(), "distinct class count");
    for ((num, den, count), entry) in expected.iter().zip(&hist.entries) {
        let want = ExactValue::ratio(*num, *den);
        match &entry.value {
            multient::perm::ClassValue::Exact(v) => assert_eq!(v, &want),
            other => panic!("expected exact class value, got {other:?}"),
        }
        assert_eq!(entry.count, *count, "count of class {num}/{den}");
    }
}

fn report_dir() -> std::path::PathBuf {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    fs::create_dir_all(&dir).expect("report dir");
    dir
}

#[test]
fn criterion_1_qutrit_gme_ame_audit() {
    let swept = qutrit_sweep();
    assert!(
        swept.elapsed < Duration::from_secs(600),
        "sweep took {:?}, budget is 10 minutes",
        swept.elapsed
    );
    assert_eq!(swept.records.len(), 362_880);

    let hist = classify(&swept.records, SweepMeasure::GmeAme, ClassifyMode::Exact).unwrap();
    assert_eq!(hist.total, 362_880);
    assert_eq!(hist.count_of_exact(&ExactValue::from_integer(0)), 72);
    assert_eq!(hist.count_of_exact(&ExactValue::from_integer(1)), 72);
    assert_eq!(hist.count_of_exact(&ExactValue::ratio(3, 4)), 288);
    assert_eq!(hist.count_of_exact(&ExactValue::ratio(4, 9)), 1296);
    assert_histogram_matches(&hist, &EXPECTED_QUTRIT_GME_CLASSES);

    // machine-readable discrepancy report against the reference rows
    let report = audit_against_reference(&hist, QUTRIT_GME_AME_REFERENCE, "gme_ame");
    let path = report_dir().join("qutrit_gme_ame_audit.json");
    fs::write(&path, serde_json::to_string_pretty(&report).unwrap()).unwrap();
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed["computed_total"], 362_880);

    // the documented anomalies: two reference rows are printed twice
    let entry_status = |value: &str| {
        report
            .entries
            .iter()
            .find(|e| e.value == value)
            .map(|e| (e.status.clone(), e.reference_duplicated))
            .unwrap_or_else(|| panic!("no audit entry for {value}"))
    };
    assert_eq!(entry_status("0.6667"), ("count_mismatch".into(), true));
    assert_eq!(entry_status("0.7222"), ("count_mismatch".into(), true));
    assert_eq!(entry_status("0.7500"), ("match".into(), false));
    assert_eq!(entry_status("0.4444"), ("match".into(), false));
    assert_eq!(report.reference_total, 379_080); // not 9!; the report says so
    assert!(report.notes.iter().any(|n| n.contains("362880")));

    println!(
        "acceptance criterion 1 (qutrit gme_ame audit, {} classes, {:.1?}): PASS",
        hist.entries.len(),
        swept.elapsed
    );
}

#[test]
fn criterion_2_qutrit_scott_audit() {
    let swept = qutrit_sweep();
    let hist = classify(&swept.records, SweepMeasure::Scott2, ClassifyMode::Exact).unwrap();
    assert_eq!(hist.total, 362_880);
    assert_eq!(hist.count_of_exact(&ExactValue::ratio(2, 3)), 72);
    assert_eq!(hist.count_of_exact(&ExactValue::from_integer(1)), 72);
    assert_histogram_matches(&hist, &EXPECTED_QUTRIT_SCOTT_CLASSES);

    let report = audit_against_reference(&hist, QUTRIT_SCOTT2_REFERENCE, "scott2");
    let path = report_dir().join("qutrit_scott2_audit.json");
    fs::write(&path, serde_json::to_string_pretty(&report).unwrap()).unwrap();

    let entry = |value: &str| {
        report
            .entries
            .iter()
            .find(|e| e.value == value)
            .unwrap_or_else(|| panic!("no audit entry for {value}"))
    };
    // split row: 1170 + 1422 reference states match the computed 2592
    let split = entry("0.8148");
    assert_eq!(split.status, "match");
    assert!(split.reference_duplicated);
    assert_eq!(split.reference_counts, vec![1170, 1422]);
    // duplicated row and a class the reference omits entirely
    assert_eq!(entry("0.8889").status, "count_mismatch");
    assert_eq!(entry("0.9444").status, "computed_only");
    assert_eq!(entry("0.9444").computed_count, 22_464);

    println!(
        "acceptance criterion 2 (qutrit scott audit, {} classes): PASS",
        hist.entries.len()
    );
}

#[test]
fn criterion_3_qubit_permutations() {
    let start = Instant::now();
    let records = sweep(
        2,
        &[SweepMeasure::GmeAme, SweepMeasure::Scott2],
        EnphaseMode::None,
        &SweepConfig::default(),
    )
    .unwrap();
    assert_eq!(records.len(), 24);
    let gme_hist = classify(&records, SweepMeasure::GmeAme, ClassifyMode::Exact).unwrap();
    assert_eq!(gme_hist.entries.len(), 2);
    assert_eq!(gme_hist.count_of_exact(&ExactValue::from_integer(0)), 8);
    assert_eq!(gme_hist.count_of_exact(&ExactValue::ratio(2, 3)), 16);
    let scott_hist = classify(&records, SweepMeasure::Scott2, ClassifyMode::Exact).unwrap();

    // the reported maxima 0.3 / 0.7 are not the normalized values; the
    // audit records the normalized 2/3 and 8/9 alongside the
    // prefactor-stripped 9/32 and 2/3 that do match the report
    let audit = audit_qubit_sweep(&records, &gme_hist, &scott_hist);
    let path = report_dir().join("qubit_sweep_audit.json");
    fs::write(&path, serde_json::to_string_pretty(&audit).unwrap()).unwrap();
    assert_eq!(audit.entries[0].max_value, "2/3");
    assert_eq!(audit.entries[0].without_prefactor, "9/32");
    assert!((audit.entries[0].without_prefactor_float - 9.0 / 32.0).abs() < 1e-15);
    assert_eq!(audit.entries[1].max_value, "8/9");
    assert_eq!(audit.entries[1].without_prefactor, "2/3");

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "qubit sweep took {elapsed:?}");
    println!("acceptance criterion 3 (qubit permutations, {elapsed:.1?}): PASS");
}

#[test]
fn criterion_4_weyl_oracle_agreement() {
    let start = Instant::now();
    let points = sample_chamber(1000, 1);
    let mut worst_gme = 0.0f64;
    let mut worst_scott = 0.0f64;
    for p in &points {
        let state = op_to_state(&cartan_unitary(p)).unwrap();
        worst_gme = worst_gme.max((gme_ame_closed_form(p) - gme_ame(&state).unwrap()).abs());
        worst_scott =
            worst_scott.max((scott2_closed_form(p) - scott(&state, 2).unwrap()).abs());
    }
    assert!(worst_gme < 1e-10, "gme closed-vs-numeric drift {worst_gme:e}");
    assert!(worst_scott < 1e-10, "scott closed-vs-numeric drift {worst_scott:e}");

    let quarter_pi = std::f64::consts::FRAC_PI_4;
    for i in 0..100 {
        let t = quarter_pi * i as f64 / 99.0;
        let x_axis = WeylPoint::new(t, 0.0, 0.0).unwrap();
        assert!(
            (gme_ame_closed_form(&x_axis) - edge_formula(ChamberEdge::LocalCnot, t)).abs()
                < 1e-12
        );
        let z_axis = WeylPoint::new(quarter_pi, quarter_pi, t).unwrap();
        assert!(
            (gme_ame_closed_form(&z_axis) - edge_formula(ChamberEdge::SwapDcnot, t)).abs()
                < 1e-12
        );
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "weyl oracle run took {elapsed:?}");
    println!(
        "acceptance criterion 4 (weyl oracles, gme drift {worst_gme:.1e}, scott drift {worst_scott:.1e}, {elapsed:.1?}): PASS"
    );
}

#[test]
fn criterion_5_named_values() {
    let ghz3 = catalog::ghz_state(3, 2).unwrap();
    assert!((gme_ame(&ghz3).unwrap() - 1.0).abs() < 1e-12);

    let w3 = catalog::w_state(3).unwrap();
    assert!((gme_ame(&w3).unwrap() - 512.0 / 729.0).abs() < 1e-12);

    let ghz4 = catalog::ghz_state(4, 2).unwrap();
    assert!((gme_ame(&ghz4).unwrap() - 8.0 / 27.0).abs() < 1e-12);

    let l053 = catalog::l_05_3_state().unwrap();
    let v = gme_ame(&l053).unwrap();
    assert!((v - 0.15625).abs() < 1e-15, "exact value is 5/32");
    assert!((v - 0.156).abs() < 1e-3, "reported rounding 0.156");

    let l071 = catalog::l_07_1_state().unwrap();
    let v = gme_ame(&l071).unwrap();
    assert!((v - 125.0 / 288.0).abs() < 1e-12);
    assert!((v - 0.435).abs() < 2e-3, "reported rounding 0.435");

    let l0303 = catalog::l_03_03_state().unwrap();
    assert_eq!(gme_ame(&l0303).unwrap(), 0.0, "biseparable class detects exactly");

    println!("acceptance criterion 5 (named values): PASS");
}

#[test]
fn criterion_6_polygon_measure() {
    let start = Instant::now();
    let cfg = SolverConfig::default();

    // solver path against the analytic solution gamma = lambda = 1/3
    let ghz4 = catalog::ghz_state(4, 2).unwrap();
    let ev = entropy_vector(&ghz4).unwrap();
    let sol = solve_polygon_system(&ev, &cfg).unwrap();
    for g in sol.gammas {
        assert!((g - 1.0 / 3.0).abs() < 1e-7, "gamma {g} vs analytic 1/3");
    }
    assert!((sol.lambda - 1.0 / 3.0).abs() < 1e-7);
    assert!((polygon_measure(&ghz4, &cfg).unwrap() - 1.0).abs() < 1e-6);

    // non-GME gates
    let mut amps = vec![Complex64::ZERO; 16];
    amps[0b0110] = Complex64::ONE;
    let product = PureState::new(4, 2, amps).unwrap();
    assert_eq!(polygon_measure(&product, &cfg).unwrap(), 0.0);
    let identity = op_to_state(&BipartiteOperator::identity(2)).unwrap();
    assert_eq!(polygon_measure(&identity, &cfg).unwrap(), 0.0);
    let swap_state = op_to_state(&BipartiteOperator::swap(2)).unwrap();
    assert_eq!(polygon_measure(&swap_state, &cfg).unwrap(), 0.0);

    // range and residual over seeded chamber states
    let mut solved = 0;
    for p in sample_chamber(100, 6) {
        let state = op_to_state(&cartan_unitary(&p)).unwrap();
        let ev = entropy_vector(&state).unwrap();
        let value = polygon_measure(&state, &cfg).unwrap();
        assert!((0.0..=1.0 + 1e-9).contains(&value), "P = {value} out of range");
        if ev.min_entry() >= ENTROPY_GATE {
            let sol = solve_polygon_system(&ev, &cfg).unwrap();
            assert!(sol.residual < 1e-10, "residual {:e}", sol.residual);
            solved += 1;
        }
    }
    assert!(solved >= 95, "only {solved}/100 chamber states reached the solver");

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "polygon run took {elapsed:?}");
    println!("acceptance criterion 6 (polygon, {solved} solver runs, {elapsed:.1?}): PASS");
}

#[test]
fn criterion_7_property_suites() {
    // LU invariance under 100 random local-unitary perturbations
    let subjects = [
        catalog::ghz_state(4, 2).unwrap(),
        catalog::w_state(4).unwrap(),
        op_to_state(&BipartiteOperator::cnot()).unwrap(),
        catalog::l_07_1_state().unwrap(),
    ];
    let mut trials = 0;
    for (si, state) in subjects.iter().enumerate() {
        let base_gme = gme_ame(state).unwrap();
        let base_scott = scott(state, 2).unwrap();
        for round in 0..25u64 {
            let seed = (si as u64) * 1000 + round;
            let us = LocalUnitarySet::new(
                (0..4)
                    .map(|p| haar_unitary(2, multient::seed::derive_seed(seed, p)))
                    .collect(),
            )
            .unwrap();
            let rotated = state.apply_local(&us).unwrap();
            assert!((gme_ame(&rotated).unwrap() - base_gme).abs() < 1e-9);
            assert!((scott(&rotated, 2).unwrap() - base_scott).abs() < 1e-9);
            trials += 1;
        }
    }
    assert_eq!(trials, 100);

    // reshape involutions are exact on random operators
    let random_op = |seed: u64, d: usize| {
        let u = haar_unitary(d * d, seed);
        BipartiteOperator::new(d, u.clone()).unwrap()
    };
    for seed in 0..20u64 {
        let a = random_op(seed, 3);
        for kind in [Reshape::T1, Reshape::T2, Reshape::R2] {
            assert_eq!(a.reshape(kind).reshape(kind), a);
        }
        assert_eq!(
            a.reshape(Reshape::T1).reshape(Reshape::T2).mat(),
            &a.mat().transpose()
        );
    }

    // marginal shortcuts against the generic partial trace, and
    // complement purity symmetry, over 100 random operators
    for seed in 1000..1100u64 {
        let d = if seed % 2 == 0 { 2 } else { 3 };
        let a = random_op(seed, d);
        let state = op_to_state(&a).unwrap();
        let (m12, m13, m14) = pair_marginals(&a).unwrap();
        for (m, keep) in [(m12, [1usize, 2]), (m13, [1, 3]), (m14, [1, 4])] {
            let generic = state.partial_trace(&keep).unwrap();
            let dev = (m.mat() - generic.mat()).norm();
            assert!(dev < 1e-12, "marginal shortcut deviates by {dev:e}");
            let comp: Vec<usize> = (1..=4).filter(|p| !keep.contains(p)).collect();
            let pk = generic.purity();
            let pc = state.partial_trace(&comp).unwrap().purity();
            assert!((pk - pc).abs() < 1e-12, "complement purity asymmetry");
        }
    }

    println!("acceptance criterion 7 (property suites): PASS");
}

#[test]
fn criterion_8_appendix_class_sweeps() {
    // hard band checks for the two reported families
    let band = |name: &str| -> (f64, f64) {
        let grid = default_grid(name, 1000, 2).unwrap();
        let rows = catalog::class_sweep(name, &grid).unwrap();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (_, report) in &rows {
            lo = lo.min(report.gme_ame);
            hi = hi.max(report.gme_ame);
        }
        (lo, hi)
    };

    let (lo, hi) = band("l_abc2");
    assert!(lo <= 0.30 && hi >= 0.45, "l_abc2 band [{lo:.3}, {hi:.3}] misses [0.30, 0.45]");
    assert!((lo - 0.25).abs() <= 0.05, "l_abc2 lower edge {lo:.3} vs reported 0.25");
    assert!((hi - 0.55).abs() <= 0.05, "l_abc2 upper edge {hi:.3} vs reported 0.55");
    let abc2_band = (lo, hi);

    let (lo, hi) = band("l_a2b2");
    assert!(lo <= 0.30 && hi >= 0.45, "l_a2b2 band [{lo:.3}, {hi:.3}] misses [0.30, 0.45]");
    assert!((lo - 0.30).abs() <= 0.05, "l_a2b2 lower edge {lo:.3} vs reported 0.3");
    assert!((hi - 0.475).abs() <= 0.05, "l_a2b2 upper edge {hi:.3} vs reported 0.475");

    // informational curves for the single-value families: no hard
    // tolerance, the parameter behind the reported numbers is unstated
    for (name, reported) in [("l_a4", 0.4), ("l_a2_0", 0.23)] {
        let grid = default_grid(name, 101, 0).unwrap();
        let rows = catalog::class_sweep(name, &grid).unwrap();
        let values: Vec<f64> = rows.iter().map(|(_, r)| r.gme_ame).collect();
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
        let attained = lo <= reported && reported <= hi;
        println!(
            "  {name}: observed range [{lo:.3}, {hi:.3}], reported value {reported} {}",
            if attained { "inside" } else { "outside" }
        );
    }

    println!(
        "acceptance criterion 8 (class sweeps, l_abc2 band [{:.3}, {:.3}]): PASS",
        abc2_band.0, abc2_band.1
    );
}
