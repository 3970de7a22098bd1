use proptest::prelude::*;

use polyret::theory::{
    alpha_c, c_d, c_d_mc, c_star, c_star_equation, c_star_sufficient, predict_nmse, r_max, rho_c, rho_hat_s,
    rho_s_independent, s_objective, solve_s_star, theta_star, theta_star_equation, AlphaContext,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn closed_form_matches_monte_carlo(s in -1.5f64..1.5, r in 0.0f64..2.0, seed in any::<u64>()) {
        let (mean, stderr) = c_d_mc(s, r, 200_000, seed).unwrap();
        prop_assert!((c_d(s, r) - mean).abs() <= 4.0 * stderr + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn c_d_is_even_and_nonnegative(s in -3.0f64..3.0, r in 0.0f64..3.0) {
        let v = c_d(s, r);
        prop_assert!(v >= 0.0);
        prop_assert!((v - c_d(-s, r)).abs() <= 1e-12 * (1.0 + v));
        prop_assert!((v - c_d(s, -r)).abs() <= 1e-12 * (1.0 + v));
    }

    #[test]
    fn transition_inverts(alpha in 2.2f64..30.0) {
        let rho = rho_c(alpha).unwrap();
        prop_assert!(rho > 0.0 && rho < 1.0);
        prop_assert!((alpha_c(rho).unwrap() - alpha).abs() <= 1e-6 * alpha);
        prop_assert!(rho_c(alpha * 1.1).unwrap() < rho);
    }

    #[test]
    fn boundary_roots_and_ordering(alpha in 2.2f64..30.0) {
        let c = c_star(alpha).unwrap();
        prop_assert!(c > 0.0);
        prop_assert!(c_star_equation(alpha, c).abs() <= 1e-10);
        let theta = theta_star(alpha).unwrap();
        prop_assert!(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2);
        prop_assert!(theta_star_equation(alpha, theta).abs() <= 1e-10);
        let rho = rho_c(alpha).unwrap();
        prop_assert!(rho <= c_star_sufficient(alpha).unwrap() + 1e-12);
        prop_assert!(rho_s_independent(alpha).unwrap() < rho);
        prop_assert!(rho_s_independent(alpha).unwrap() <= rho_hat_s(alpha).unwrap() + 1e-12);
    }

    #[test]
    fn s_star_maximizes_the_scalar_program(alpha in 2.2f64..12.0, rho in 0.0f64..1.0) {
        let ctx = AlphaContext::new(alpha).unwrap();
        let (s, _) = solve_s_star(&ctx, rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
        let best = s_objective(&ctx, rho, s);
        for k in 0..=100 {
            prop_assert!(s_objective(&ctx, rho, k as f64 / 100.0) <= best + 1e-9);
        }
    }

    #[test]
    fn prediction_is_exact_above_the_transition(alpha in 2.2f64..12.0, rho in 0.0f64..1.0) {
        let ctx = AlphaContext::new(alpha).unwrap();
        let p = predict_nmse(&ctx, rho).unwrap();
        let above = rho >= rho_c(alpha).unwrap();
        prop_assert_eq!(p.recovers, above);
        prop_assert!(p.nmse_pred >= 0.0);
        if above {
            prop_assert!(p.nmse_pred <= 1e-12);
        } else {
            prop_assert!(p.nmse_pred > 0.0);
        }
    }

    #[test]
    fn r_max_lies_on_the_boundary(alpha in 2.2f64..12.0, s in -0.99f64..0.99) {
        let r = r_max(alpha, s).unwrap();
        prop_assert!(r > 0.0);
        prop_assert!((alpha * c_d(s, r) - r * r).abs() <= 1e-8 * (1.0 + r * r));
        prop_assert!(alpha * c_d(s, 1.01 * r) > (1.01 * r) * (1.01 * r));
    }
}

#[test]
fn prediction_improves_with_the_initial_guess() {
    let ctx = AlphaContext::new(3.0).unwrap();
    let errs: Vec<f64> = (0..=20).map(|k| predict_nmse(&ctx, k as f64 / 20.0).unwrap().nmse_pred).collect();
    assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(errs[0] > errs[12]);
}
