//! Scratch experiment: pin down the limiting-diffusion coefficient convention
//! by comparing quadrature, 1D Monte Carlo and direct 2D Monte Carlo.

use dupdiff_core::watterson::{limit_coeffs, WattersonParams};
use dupdiff_core::{Diffusion1D, ScaleOptions};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

fn em_exit_1d(d: &Diffusion1D, x0: f64, paths: usize, dt: f64, seed: u64, cap: f64) -> (f64, f64, usize) {
    let (l, r) = d.interval();
    let sdt = dt.sqrt();
    let taus: Vec<Option<f64>> = (0..paths)
        .into_par_iter()
        .map(|k| {
            let mut rng = dupdiff_core::rng::replicate_rng(seed, k as u64);
            let mut z = x0;
            let mut t = 0.0;
            while t < cap {
                let b = d.drift(z);
                let a = d.variance(z).max(0.0);
                let n: f64 = rng.sample(StandardNormal);
                z += b * dt + a.sqrt() * sdt * n;
                t += dt;
                if z <= l || z >= r {
                    return Some(t);
                }
            }
            None
        })
        .collect();
    let absorbed: Vec<f64> = taus.iter().filter_map(|&t| t).collect();
    let n = absorbed.len();
    let mean = absorbed.iter().sum::<f64>() / n as f64;
    let var = absorbed.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    (mean, 1.96 * (var / n as f64).sqrt(), paths - n)
}

fn em_exit_2d(mu: f64, n_pop: f64, paths: usize, dt: f64, seed: u64, cap: f64) -> (f64, f64, usize) {
    let x0 = mu.powf(0.25);
    let thr = 1.0 - 1.0 / (2.0 * n_pop);
    let sdt = dt.sqrt();
    let taus: Vec<Option<f64>> = (0..paths)
        .into_par_iter()
        .map(|k| {
            let mut rng = dupdiff_core::rng::replicate_rng(seed, k as u64);
            let (mut x, mut y) = (x0, x0);
            let mut t = 0.0;
            while t < cap {
                let dr = mu - (x * y) * (x * y);
                let n1: f64 = rng.sample(StandardNormal);
                let n2: f64 = rng.sample(StandardNormal);
                x += 2.0 * n_pop * (1.0 - x) * dr * dt + (x * (1.0 - x)).max(0.0).sqrt() * sdt * n1;
                y += 2.0 * n_pop * (1.0 - y) * dr * dt + (y * (1.0 - y)).max(0.0).sqrt() * sdt * n2;
                x = x.clamp(0.0, 1.0);
                y = y.clamp(0.0, 1.0);
                t += dt;
                if x >= thr || y >= thr {
                    return Some(t);
                }
            }
            None
        })
        .collect();
    let absorbed: Vec<f64> = taus.iter().filter_map(|&t| t).collect();
    let n = absorbed.len();
    let mean = absorbed.iter().sum::<f64>() / n as f64;
    let var = absorbed.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    (mean, 1.96 * (var / n as f64).sqrt(), paths - n)
}

/// Precise drift regression of h = x*-y* at a curve point, 2D model.
fn drift_regression(mu: f64, n_pop: f64, z0: f64, paths: usize, t_win: f64, dt: f64, seed: u64) -> (f64, f64) {
    let smu = mu.sqrt();
    let sq = (z0 * z0 + 4.0 * smu).sqrt();
    let xs0 = (z0 + sq) / 2.0;
    let ys0 = xs0 - z0;
    let g = |u: f64| ((1.0 - u) + ((1.0 - u).powi(2) + 4.0 * smu * u).sqrt()) / 2.0;
    let h = |x: f64, y: f64| g((1.0 - x) / (1.0 - y)) - g((1.0 - y) / (1.0 - x));
    let h0 = h(xs0, ys0);
    let sdt = dt.sqrt();
    let steps = (t_win / dt).round() as usize;
    let dhs: Vec<f64> = (0..paths)
        .into_par_iter()
        .map(|k| {
            let mut rng = dupdiff_core::rng::replicate_rng(seed, k as u64);
            let (mut x, mut y) = (xs0, ys0);
            for _ in 0..steps {
                let dr = mu - (x * y) * (x * y);
                let n1: f64 = rng.sample(StandardNormal);
                let n2: f64 = rng.sample(StandardNormal);
                x += 2.0 * n_pop * (1.0 - x) * dr * dt + (x * (1.0 - x)).max(0.0).sqrt() * sdt * n1;
                y += 2.0 * n_pop * (1.0 - y) * dr * dt + (y * (1.0 - y)).max(0.0).sqrt() * sdt * n2;
                x = x.clamp(0.0, 1.0);
                y = y.clamp(0.0, 1.0);
            }
            h(x, y) - h0
        })
        .collect();
    let n = dhs.len() as f64;
    let mean = dhs.iter().sum::<f64>() / n;
    let var = dhs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean / t_win, 1.96 * (var / n).sqrt() / t_win)
}

fn main() {
    let mu = 1e-4;
    let p = WattersonParams::new(mu).unwrap();
    let w = p.curve_halfwidth();

    // quadrature with the carre-du-champ variance (as implemented)
    let d_true = dupdiff_core::watterson::limit_diffusion(&p);
    let c2_true = d_true
        .natural_scale(&ScaleOptions::default())
        .unwrap()
        .exit_time(0.0)
        .unwrap();
    println!("quadrature (d/2, a_true):    c2 = {c2_true:.7}");

    // printed-variance variant
    let p2 = p;
    let d_printed = Diffusion1D::new(
        -w,
        w,
        move |z| limit_coeffs(z, &p2).map(|(b, _)| b).unwrap_or(0.0),
        move |z| {
            // reconstruct the sum-of-quadratic-variations variant
            let smu = p2.mu.sqrt();
            let az = z.abs();
            let sq = (az * az + 4.0 * smu).sqrt();
            let xs = (az + sq) / 2.0;
            let omxs = 2.0 * ((1.0 - smu) - az) / ((2.0 - az) + sq);
            let ys = xs - az;
            let omys = omxs + az;
            let u = omxs / omys;
            let v = 1.0 / u;
            let gp = |u: f64| {
                let s = (1.0 - u) * (1.0 - u) + 4.0 * smu * u;
                let sp = -2.0 * (1.0 - u) + 4.0 * smu;
                -4.0 * smu * (1.0 - smu) / (s.sqrt() * (sp + 2.0 * s.sqrt()))
            };
            gp(u) * gp(u) * (xs * omxs / (omys * omys) + omxs * omxs * ys / (omys * omys * omys))
                + gp(v) * gp(v) * (ys * omys / (omxs * omxs) + omys * omys * xs / (omxs * omxs * omxs))
        },
    );
    let c2_printed = d_printed
        .natural_scale(&ScaleOptions::default())
        .unwrap()
        .exit_time(0.0)
        .unwrap();
    println!("quadrature (d/2, a_printed): c2 = {c2_printed:.7}");

    // 1D MC for both
    let (m, ci, cens) = em_exit_1d(&d_true, 0.0, 4000, 1e-4, 7, 60.0);
    println!("1D MC true:    {m:.4} +- {ci:.4} (censored {cens})");
    let (m, ci, cens) = em_exit_1d(&d_printed, 0.0, 4000, 1e-4, 8, 60.0);
    println!("1D MC printed: {m:.4} +- {ci:.4} (censored {cens})");

    // 2D MC across N
    for (n_pop, dt, paths) in [
        (1000.0, 2e-5, 3000),
        (10_000.0, 2e-6, 1500),
        (100_000.0, 2e-7, 400),
    ] {
        let (m, ci, cens) = em_exit_2d(mu, n_pop, paths, dt, 11, 40.0);
        println!("2D MC N={n_pop:>8}: Etau = {m:.4} +- {ci:.4} (censored {cens}, dt={dt})");
    }

    // precise drift regression at a few curve points (N large)
    for z0 in [0.1, 0.3, 0.5] {
        let (bhat, ci) = drift_regression(mu, 1e5, z0, 400_000, 0.25, 1e-5, 23);
        let (b_cf, a_cf) = limit_coeffs(z0, &p).unwrap();
        println!(
            "drift at z={z0}: empirical {bhat:+.5} +- {ci:.5} | closed form {b_cf:+.5} (a_cf={a_cf:.5})"
        );
    }
}
