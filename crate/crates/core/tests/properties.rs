use num_complex::Complex64;
use proptest::prelude::*;

use polyret::algorithms::{phaselamp, LampOptions};
use polyret::measurement::{make_init, measure_with, nmse, Measurements};
use polyret::operator::DenseMatrix;
use polyret::oracle::vertex_oracle;
use polyret::rng;
use polyret::scalar::{self, Scalar};
use polyret::solver::{solve, PolytopeProblem, SolverOptions};

fn instance(m: usize, n: usize, seed: u64) -> (DenseMatrix<f64>, Vec<f64>, Measurements) {
    let mut g = rng::stream(seed);
    let a = DenseMatrix::from_row_major(m, n, (0..m * n).map(|_| f64::sample_normal(&mut g)).collect());
    let xi: Vec<f64> = (0..n).map(|_| f64::sample_normal(&mut g)).collect();
    let y = measure_with(&a, &xi).unwrap();
    (a, xi, y)
}

fn vec_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nmse_ignores_global_sign(x in vec_strategy(6), xi in vec_strategy(6)) {
        prop_assume!(scalar::norm(&xi) > 1e-3);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert!((nmse(&x, &xi).unwrap() - nmse(&neg, &xi).unwrap()).abs() <= 1e-12);
        prop_assert!(nmse(&xi, &xi).unwrap() <= 1e-15);
        prop_assert!(nmse(&x, &xi).unwrap() >= 0.0);
    }

    #[test]
    fn complex_nmse_ignores_global_phase(re in vec_strategy(5), im in vec_strategy(5), phi in 0.0f64..6.3) {
        let xi: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        prop_assume!(scalar::norm(&xi) > 1e-3);
        let rot: Vec<Complex64> = xi.iter().map(|v| v * Complex64::from_polar(1.0, phi)).collect();
        prop_assert!(nmse(&rot, &xi).unwrap() <= 1e-12);
    }

    #[test]
    fn initial_guess_has_requested_cosine(seed in any::<u64>(), rho in 0.0f64..=1.0) {
        let xi: Vec<f64> = (0..20).map(|_| f64::sample_normal(&mut rng::stream(seed))).collect();
        let xi: Vec<f64> = xi.iter().enumerate().map(|(i, v)| v + i as f64 * 0.1).collect();
        let x = make_init(&xi, rho, seed).unwrap().x;
        let cos = scalar::dot(&x, &xi) / (scalar::norm(&x) * scalar::norm(&xi));
        prop_assert!((cos - rho).abs() <= 1e-9);
    }

    #[test]
    fn measurements_ignore_sign(seed in any::<u64>()) {
        let (a, xi, y) = instance(12, 4, seed);
        let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
        prop_assert_eq!(measure_with(&a, &neg).unwrap(), y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solver_matches_vertex_oracle(seed in any::<u64>(), n in 1usize..=3, extra in 0usize..=5) {
        let m = (n + extra).min(8);
        let (a, _, y) = instance(m, n, seed);
        let c: Vec<f64> = (0..n).map(|_| f64::sample_normal(&mut rng::stream(seed ^ 1))).collect();
        let best = vertex_oracle(&a, y.as_slice(), &c).unwrap();
        prop_assume!(best.is_some());
        let opts = SolverOptions { max_iters: Some(100_000), ..Default::default() };
        let rep = solve(&PolytopeProblem::linear(&a, &y, c), &opts).unwrap();
        prop_assert!((rep.objective_value - best.unwrap().value).abs() <= 1e-6);
    }

    #[test]
    fn linear_solution_scales_with_the_data(seed in any::<u64>(), t in 0.1f64..10.0) {
        let (a, xi, y) = instance(24, 6, seed);
        let c: Vec<f64> = xi.iter().map(|v| v + 0.5).collect();
        let opts = SolverOptions { max_iters: Some(100_000), ..Default::default() };
        let base = solve(&PolytopeProblem::linear(&a, &y, c.clone()), &opts).unwrap();
        let yt = y.scaled(t).unwrap();
        let scaled = solve(&PolytopeProblem::linear(&a, &yt, c), &opts).unwrap();
        prop_assert!(base.converged && scaled.converged);
        let want = scalar::scaled(&base.x, t);
        prop_assert!(scalar::dist(&scaled.x, &want) <= 1e-8 * scalar::norm(&want));
    }

    #[test]
    fn merit_is_nonincreasing_without_restarts(seed in any::<u64>()) {
        let (a, xi, y) = instance(30, 8, seed);
        let opts = SolverOptions {
            max_iters: Some(500),
            restarts: false,
            polish: false,
            record_merit: true,
            ..Default::default()
        };
        let c: Vec<f64> = xi.iter().map(|v| 1.0 - v).collect();
        let rep = solve(&PolytopeProblem::linear(&a, &y, c), &opts).unwrap();
        for w in rep.merit_trace.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12 * (1.0 + w[0]));
        }
    }

    #[test]
    fn phaselamp_norms_never_decrease(seed in any::<u64>(), rho in 0.0f64..0.6) {
        let (a, xi, y) = instance(40, 10, seed);
        let x0 = make_init(&xi, rho, seed ^ 2).unwrap().x;
        let opts = LampOptions {
            solver: SolverOptions { max_iters: Some(100_000), ..Default::default() },
            ..Default::default()
        };
        let res = phaselamp(&a, &y, &x0, &opts).unwrap();
        for w in res.norm_trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-9);
        }
        // the target is feasible, so the first linear step already beats it
        let first = &res.inner_reports[0];
        prop_assert!(first.converged);
        prop_assert!(first.objective_value >= scalar::dot(&x0, &xi) - 1e-8);
    }
}
