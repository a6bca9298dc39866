//! Closed-form data products: curve samples, limiting-diffusion coefficient
//! profiles, Green's-function profiles, exit times and the linearization
//! table.

use anyhow::{bail, Context, Result};
use serde_json::json;

use dupdiff_core::subfunc::{self, SubfuncParams};
use dupdiff_core::watterson::{self, WattersonParams};
use dupdiff_core::{Diffusion1D, ScaleOptions};

use crate::config::Config;
use crate::output::{g9, OutputDir};

pub fn limiting_diffusion(cfg: &Config) -> Result<(Diffusion1D, serde_json::Value)> {
    match cfg.model_tag()? {
        "watterson" => {
            let p = WattersonParams::new(cfg.mu_value()?)?;
            let d = watterson::limit_diffusion(&p);
            Ok((d, json!({"model": "watterson", "mu": p.mu})))
        }
        _ => {
            let p = SubfuncParams::new(cfg.b_value()?)?;
            let d = subfunc::limit_diffusion(&p)?;
            Ok((d, json!({"model": "subfunc", "b": p.b})))
        }
    }
}

pub fn cmd_curve(cfg: &Config, out: &mut OutputDir) -> Result<()> {
    let grid = cfg.grid.unwrap_or(200);
    if grid < 2 {
        bail!("--grid must be at least 2");
    }
    match cfg.model_tag()? {
        "watterson" => {
            let p = WattersonParams::new(cfg.mu_value()?)?;
            let smu = p.sqrt_mu();
            let rows: Vec<String> = (0..grid)
                .map(|k| {
                    // sample x* over [sqrt(mu), 1]
                    let x = smu + (1.0 - smu) * k as f64 / (grid - 1) as f64;
                    format!("{},{}", g9(x), g9(smu / x))
                })
                .collect();
            out.write_csv("curve.csv", "x_star,y_star", &rows)?;
        }
        _ => {
            let p = SubfuncParams::new(cfg.b_value()?)?;
            let curve = subfunc::EquilibriumCurve::new(&p)?;
            let pts = curve.sample(grid)?;
            let rows: Vec<String> = pts
                .iter()
                .map(|e| format!("{},{},{},{}", g9(e.x3), g9(e.y3), g9(e.x), g9(e.y)))
                .collect();
            out.write_csv("curve.csv", "x3,y3,x,y", &rows)?;
            let max_resid = pts
                .iter()
                .map(|e| {
                    let (r17, r18, r19) = e.residuals(&p);
                    r17.abs().max(r18.abs()).max(r19.abs())
                })
                .fold(0.0_f64, f64::max);
            out.write_json(
                "summary.json",
                &json!({"model": "subfunc", "b": p.b, "grid": grid, "max_residual": max_resid}),
            )?;
        }
    }
    Ok(())
}

pub fn cmd_coeffs(cfg: &Config, out: &mut OutputDir) -> Result<()> {
    let grid = cfg.grid.unwrap_or(400);
    let (d, meta) = limiting_diffusion(cfg)?;
    let profile = d.coeff_profile(grid);
    let rows: Vec<String> = profile
        .iter()
        .map(|&(z, b, a, ratio)| format!("{},{},{},{}", g9(z), g9(b), g9(a), g9(ratio)))
        .collect();
    out.write_csv("coeffs.csv", "z,drift,variance,minus_two_drift_over_variance", &rows)?;
    let (l, r) = d.interval();
    out.write_json(
        "summary.json",
        &json!({"meta": meta, "interval": [l, r], "grid": grid}),
    )?;
    Ok(())
}

pub fn cmd_green(cfg: &Config, out: &mut OutputDir) -> Result<()> {
    let grid = cfg.grid.unwrap_or(2000);
    let x0 = cfg.x0.unwrap_or(0.0);
    let (d, meta) = limiting_diffusion(cfg)?;
    let table = d.natural_scale(&ScaleOptions::default())?;
    let profile = table.green_profile(x0, grid);
    let rows: Vec<String> = profile
        .iter()
        .map(|&(y, v)| format!("{},{}", g9(y), g9(v)))
        .collect();
    out.write_csv("green.csv", "y,green_times_speed", &rows)?;
    let exit = table.exit_time(x0)?;
    let dy = profile[1].0 - profile[0].0;
    let resum: f64 = profile.iter().map(|&(_, v)| v * dy).sum();
    out.write_json(
        "summary.json",
        &json!({
            "meta": meta,
            "start": x0,
            "mean_exit_time": exit,
            "profile_resum": resum,
            "resum_relative_error": (resum - exit).abs() / exit,
        }),
    )?;
    Ok(())
}

pub fn cmd_exit_time(cfg: &Config, out: &mut OutputDir) -> Result<f64> {
    let x0 = cfg.x0.unwrap_or(0.0);
    let (d, meta) = limiting_diffusion(cfg)?;
    let table = d.natural_scale(&ScaleOptions::default())?;
    let c = table.exit_time(x0)?;
    let (l, r) = d.interval();
    let mut summary = json!({
        "meta": meta,
        "start": x0,
        "c": c,
        "two_c": 2.0 * c,
        "interval": [l, r],
        "time_unit": "2N generations",
    });
    if cfg.model_tag()? == "watterson" {
        // the literature states the Green integral with upper limit 1 - mu,
        // which lies beyond the curve's endpoint 1 - sqrt(mu); the integral
        // over the full interval is the value reported here
        let mu = cfg.mu_value()?;
        summary["upper_limit_used"] = json!(r);
        summary["upper_limit_stated_elsewhere"] = json!(1.0 - mu);
        summary["upper_limit_note"] = json!(
            "stated limit exceeds the diffusion interval; integrated over the full interval"
        );
    }
    out.write_csv(
        "exit_time.csv",
        "start,c,two_c",
        &[format!("{},{},{}", g9(x0), g9(c), g9(2.0 * c))],
    )?;
    out.write_json("summary.json", &summary)?;
    println!("c = {c:.9}");
    println!("2c = {:.9}", 2.0 * c);
    Ok(c)
}

pub fn cmd_linearize(cfg: &Config, out: &mut OutputDir) -> Result<()> {
    let grid = cfg.grid.unwrap_or(200);
    let p = SubfuncParams::new(cfg.b_value()?)?;
    let alpha = p.alpha();
    let mut rows = Vec::with_capacity(grid);
    let mut all_pass = true;
    let mut max_real = f64::MIN;
    for k in 1..=grid {
        let x3 = alpha * k as f64 / (grid as f64 + 1.0);
        let e = subfunc::point_at(x3, &p).context("curve point")?;
        let rep = subfunc::routh_hurwitz(&e, &p);
        all_pass &= rep.all_pass();
        let mr = rep.max_eigenvalue_real_part();
        max_real = max_real.max(mr);
        rows.push(format!(
            "{},{},{},{},{},{}",
            g9(x3),
            g9((-rep.trace).log10()),
            g9((-rep.det).log10()),
            g9((-(rep.trace * rep.b2)).log10()),
            g9(mr),
            rep.all_pass()
        ));
    }
    out.write_csv(
        "linearize.csv",
        "x3,log10_neg_trace,log10_neg_det,log10_neg_trace_b2,max_eigenvalue_real_part,rh_pass",
        &rows,
    )?;
    out.write_json(
        "summary.json",
        &json!({
            "model": "subfunc", "b": p.b, "grid": grid,
            "all_routh_hurwitz_pass": all_pass,
            "max_eigenvalue_real_part": max_real,
        }),
    )?;
    Ok(())
}
