//! Property tests for the structural invariants of both models.

use proptest::prelude::*;

use dupdiff_core::popsim::wright_fisher::{wf_transition_kernel, WfPopulation};
use dupdiff_core::subfunc::{self, SubfuncParams};
use dupdiff_core::watterson::{self, WattersonParams, WState};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn curve_membership(log_u in -6.9f64..6.9, log_mu in -12.0f64..-2.3) {
        let u = log_u.exp();
        let mu = log_mu.exp();
        let smu = mu.sqrt();
        let prod = watterson::g_eval(u, mu).unwrap() * watterson::g_eval(1.0 / u, mu).unwrap();
        prop_assert!((prod - smu).abs() < 1e-12, "g(u) g(1/u) = {prod} vs {smu}");
    }

    #[test]
    fn projection_idempotent_and_ratio_preserving(
        x in 0.01f64..0.99,
        y in 0.01f64..0.99,
    ) {
        let p = WattersonParams::new(1e-4).unwrap();
        let s = WState::new(x, y).unwrap();
        let pt = watterson::project(s, &p).unwrap();
        prop_assert!((pt.x_star * pt.y_star - p.sqrt_mu()).abs() < 1e-12);
        let ratio_in = (1.0 - y) / (1.0 - x);
        let ratio_out = (1.0 - pt.y_star) / (1.0 - pt.x_star);
        prop_assert!((ratio_in - ratio_out).abs() <= 1e-10 * ratio_in.abs().max(1.0));
        let again = watterson::project(WState::new(pt.x_star, pt.y_star).unwrap(), &p).unwrap();
        prop_assert!((again.x_star - pt.x_star).abs() < 1e-12);
    }

    #[test]
    fn lyapunov_decay_identity(x in 0.001f64..0.999, y in 0.001f64..0.999) {
        let p = WattersonParams::new(1e-4).unwrap();
        let (lhs, rhs) = watterson::lyapunov_identity(WState::new(x, y).unwrap(), &p);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-300));
    }

    #[test]
    fn gene_exchange_symmetry_of_limit_coeffs(
        zfrac in -0.98f64..0.98,
        log_b in -9.2f64..-4.6,
    ) {
        let b = log_b.exp();
        let p = SubfuncParams::new(b).unwrap();
        let curve = subfunc::EquilibriumCurve::new(&p).unwrap();
        let z = zfrac * p.alpha();
        let (bp, ap) = subfunc::limit_coeffs(z, &curve).unwrap();
        let (bm, am) = subfunc::limit_coeffs(-z, &curve).unwrap();
        prop_assert!((bp + bm).abs() <= 1e-10 * bp.abs().max(1e-12));
        prop_assert!((ap - am).abs() <= 1e-10 * ap.abs());
    }

    #[test]
    fn wf_kernel_is_stochastic(
        n in 2u32..4,
        a_frac in 0.0f64..1.0,
        b_frac in 0.0f64..1.0,
        mu in 0.0f64..0.2,
    ) {
        let a = ((2 * n) as f64 * a_frac) as u32;
        let b = ((2 * n) as f64 * b_frac) as u32;
        prop_assume!(a < 2 * n || b < 2 * n);
        let p = WattersonParams { mu, n_pop: None };
        let pop = WfPopulation::new(n, a.min(2 * n), b.min(2 * n)).unwrap();
        let k = wf_transition_kernel(&pop, &p).unwrap();
        let total: f64 = k.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(k.values().all(|&v| v >= 0.0));
    }

    #[test]
    fn curve_residuals_everywhere(t in 0.0f64..1.0, log_b in -9.2f64..-4.6) {
        let p = SubfuncParams::new(log_b.exp()).unwrap();
        let e = subfunc::point_at(t * p.alpha(), &p).unwrap();
        let (r17, r18, r19) = e.residuals(&p);
        prop_assert!(r17.abs() <= 1e-10 && r18.abs() <= 1e-10 && r19.abs() <= 1e-10);
        prop_assert!((e.gamma(&p) + 2.0 * e.x * e.y).abs() <= 1e-10);
        // on-curve mean fitness
        let w = subfunc::mean_fitness(&e.to_state());
        prop_assert!((w - p.alpha()).abs() <= 1e-10);
    }
}

#[test]
fn subfunc_swap_commutes_with_projection() {
    let p = SubfuncParams::new(1e-3).unwrap();
    let s = dupdiff_core::subfunc::SState::new(0.42, 0.06, 0.04, 0.3, 0.05, 0.03).unwrap();
    let e = subfunc::project(&s, &p).unwrap();
    let swapped = subfunc::project(&s.gene_swapped(), &p).unwrap();
    assert!((e.x3 - swapped.y3).abs() < 1e-10);
    assert!((e.y3 - swapped.x3).abs() < 1e-10);
    assert!((e.x - swapped.y).abs() < 1e-10);
    assert!((e.y - swapped.x).abs() < 1e-10);
}

#[test]
fn spectral_claim_across_rates() {
    // on every grid point all eigenvalues of the linearization except the
    // single zero have negative real part
    for b in [1e-4, 1e-3, 1e-2] {
        let p = SubfuncParams::new(b).unwrap();
        for k in 1..=60 {
            let x3 = p.alpha() * k as f64 / 61.0;
            let e = subfunc::point_at(x3, &p).unwrap();
            let eig = subfunc::jacobian6(&e, &p).complex_eigenvalues();
            let mut reals: Vec<f64> = eig.iter().map(|c| c.re).collect();
            reals.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert!(reals[0].abs() < 1e-8, "zero eigenvalue missing: {reals:?}");
            assert!(reals[1] < 0.0, "positive transverse eigenvalue at b={b}, x3={x3}");
        }
    }
}
