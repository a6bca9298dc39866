//! Scratch experiment: confirm the six-dimensional limiting coefficients
//! against direct SDE simulation.

use dupdiff_core::sim::{integrate_sde, mc_exit_time_1d, SdeModel, SdeRun};
use dupdiff_core::subfunc::{self, SubfuncParams};
use dupdiff_core::ScaleOptions;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

fn main() {
    let p = SubfuncParams::new(1e-3).unwrap();
    let curve = subfunc::EquilibriumCurve::new(&p).unwrap();

    // quadrature
    let d = subfunc::limit_diffusion(&p).unwrap();
    let c3 = d
        .natural_scale(&ScaleOptions::default())
        .unwrap()
        .exit_time(0.0)
        .unwrap();
    println!("quadrature c3 (carre du champ) = {c3:.7}");

    let (b0, a0) = subfunc::limit_coeffs(0.0, &curve).unwrap();
    println!("z=0 coefficients: b = {b0:.3e}, a = {a0:.6}");

    // 1D MC consistency
    let est = mc_exit_time_1d(&d, 0.0, 3000, 1e-4, 17, 80.0).unwrap();
    println!(
        "1D MC: {:.4} +- {:.4} (censored {})",
        est.mean, est.half_ci, est.censored
    );

    // short-time variance of x3* - y3* from the 6D SDE at z = 0
    let sym = subfunc::symmetric_point(&p).unwrap();
    for n_pop in [10_000u32, 100_000] {
        let t_win = 0.02;
        let dt = 2e-6_f64;
        let paths = 6000usize;
        let steps = (t_win / dt) as usize;
        let z0 = {
            let e = subfunc::project(&sym.to_state(), &p).unwrap();
            e.x3 - e.y3
        };
        let dzs: Vec<f64> = (0..paths as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = dupdiff_core::rng::replicate_rng(900 + n_pop as u64, k);
                let mut s = sym.to_state().as_array();
                let sdt = dt.sqrt();
                let n2 = 2.0 * n_pop as f64;
                for _ in 0..steps {
                    let f = subfunc::ode_field(&dupdiff_core::subfunc::SState::from_array(s), &p);
                    // same multinomial construction as the library stepper
                    let mut noise = [0.0_f64; 6];
                    for half in [0usize, 3] {
                        let f0 = (1.0 - s[half] - s[half + 1] - s[half + 2]).max(0.0);
                        let g: [f64; 4] = [
                            rng.sample(StandardNormal),
                            rng.sample(StandardNormal),
                            rng.sample(StandardNormal),
                            rng.sample(StandardNormal),
                        ];
                        let r = [
                            s[half].max(0.0).sqrt(),
                            s[half + 1].max(0.0).sqrt(),
                            s[half + 2].max(0.0).sqrt(),
                            f0.sqrt(),
                        ];
                        let tot = r[0] * g[0] + r[1] * g[1] + r[2] * g[2] + r[3] * g[3];
                        for i in 0..3 {
                            noise[half + i] = r[i] * g[i] - s[half + i] * tot;
                        }
                    }
                    for i in 0..6 {
                        s[i] = (s[i] + n2 * f[i] * dt + sdt * noise[i]).max(0.0);
                    }
                }
                let st = dupdiff_core::subfunc::SState::from_array(s);
                match subfunc::project(&st, &p) {
                    Ok(e) => (e.x3 - e.y3) - z0,
                    Err(_) => f64::NAN,
                }
            })
            .collect();
        let good: Vec<f64> = dzs.into_iter().filter(|v| v.is_finite()).collect();
        let n = good.len() as f64;
        let mean = good.iter().sum::<f64>() / n;
        let var = good.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        println!(
            "6D short-time at N={n_pop}: var/T = {:.5} (a_true = {:.5}, half = {:.5}), drift ~ {:.4}",
            var / t_win,
            a0,
            a0 / 2.0,
            mean / t_win
        );
    }

    // 6D exit times
    for (n_pop, dt, paths) in [(3_000u32, 5e-6, 300usize), (10_000, 2e-6, 150)] {
        let run = SdeRun {
            model: SdeModel::Subfunc(p),
            n_pop,
            dt,
            horizon: 60.0,
            seed: 1234,
            paths,
            noise_scale: 1.0,
            start: None,
        };
        let stats = integrate_sde(&run).unwrap();
        let taus: Vec<f64> = stats.iter().filter_map(|s| s.exit_time).collect();
        let n = taus.len() as f64;
        let mean = taus.iter().sum::<f64>() / n;
        let sd = (taus.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (n - 1.0)).sqrt();
        println!(
            "6D exit N={n_pop}: Etau = {mean:.4} +- {:.4} ({} absorbed / {paths})",
            1.96 * sd / n.sqrt(),
            taus.len()
        );
    }
}
