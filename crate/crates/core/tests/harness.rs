use polyret::algorithms::Algorithm;
use polyret::harness::{
    check_feasibility_geometry, export_theory, run_sweep, summarize, ExperimentConfig, InitKind, RhoSpec,
    THEORY_COLUMNS,
};
use polyret::measurement::EnsembleKind;

fn mean_violations(n: usize) -> f64 {
    let fracs: Vec<f64> = (0..5)
        .map(|seed| check_feasibility_geometry(n, 6.0, 100, 0.05, seed).unwrap().violation_fraction)
        .collect();
    fracs.iter().sum::<f64>() / fracs.len() as f64
}

#[test]
fn geometry_violations_shrink_with_dimension() {
    let small = mean_violations(200);
    let large = mean_violations(1000);
    assert!(large <= small, "{large} > {small}");
    assert!(large <= 0.01);
}

#[test]
fn every_algorithm_and_ensemble_produces_records() {
    let cases = [
        (Algorithm::PhaseMax, EnsembleKind::GaussianReal),
        (Algorithm::PhaseLamp, EnsembleKind::GaussianComplex),
        (Algorithm::WPhaseLamp, EnsembleKind::CodedDiffraction),
        (Algorithm::WirtingerFlow, EnsembleKind::GaussianReal),
    ];
    for (algorithm, ensemble) in cases {
        let cfg = ExperimentConfig {
            algorithm,
            ensemble,
            n: 32,
            alpha_grid: vec![6.0],
            rho_grid: vec![RhoSpec::Init(InitKind::Spectral), RhoSpec::Cosine(0.5)],
            trials: 2,
            master_seed: 11,
            ..Default::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        for r in &rows {
            assert!(r.error.is_none(), "{algorithm:?} {ensemble:?}: {:?}", r.error);
            assert!(r.nmse.is_finite() && r.nmse >= 0.0);
            assert_eq!(r.m, 6 * 32);
            assert!((0.0..=1.0 + 1e-12).contains(&r.rho_init_measured));
        }
        assert!((rows[2].rho_init_measured - 0.5).abs() <= 1e-9);
        assert_eq!(summarize(&rows, cfg.success_nmse).len(), 2);
    }
}

#[test]
fn theory_export_is_row_major_in_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theory.csv");
    let rows = export_theory(&[3.0, 5.0], &[0.2, 0.9], &path).unwrap();
    let order: Vec<(f64, f64)> = rows.iter().map(|r| (r.alpha, r.rho)).collect();
    assert_eq!(order, [(3.0, 0.2), (3.0, 0.9), (5.0, 0.2), (5.0, 0.9)]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), THEORY_COLUMNS.join(","));
    assert_eq!(text.lines().count(), 5);
    assert!(export_theory(&[2.0], &[0.5], &path).is_err());
}
