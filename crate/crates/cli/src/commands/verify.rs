//! Property-suite runner: prints a pass/fail table and returns a process
//! exit code of zero only when every check passes.

use anyhow::{bail, Result};
use serde_json::json;

use dupdiff_core::popsim::lineage;
use dupdiff_core::sim::mc_exit_time_1d;
use dupdiff_core::subfunc::{self, SubfuncParams};
use dupdiff_core::watterson::{self, WattersonParams};
use dupdiff_core::{Diffusion1D, ScaleOptions};

use crate::config::Config;
use crate::output::OutputDir;

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        pass,
        detail,
    }
}

pub fn cmd_verify(cfg: &Config, out: &mut OutputDir) -> Result<bool> {
    let suite = cfg.suite.as_deref().unwrap_or("all");
    let checks = match suite {
        "lemmas" => suite_lemmas(cfg)?,
        "curve" => suite_curve(cfg)?,
        "rh" => suite_rh(cfg)?,
        "ito" => suite_ito(cfg)?,
        "oracles" => suite_oracles(cfg)?,
        "all" => {
            let mut all = suite_lemmas(cfg)?;
            all.extend(suite_curve(cfg)?);
            all.extend(suite_rh(cfg)?);
            all.extend(suite_ito(cfg)?);
            all.extend(suite_oracles(cfg)?);
            all
        }
        other => bail!("unknown suite {other:?}; expected lemmas|curve|rh|ito|oracles|all"),
    };
    let mut ok = true;
    println!("{:<44} {:<6} detail", "check", "result");
    for c in &checks {
        ok &= c.pass;
        println!(
            "{:<44} {:<6} {}",
            c.name,
            if c.pass { "pass" } else { "FAIL" },
            c.detail
        );
    }
    let rows: Vec<String> = checks
        .iter()
        .map(|c| format!("{},{},{}", c.name, c.pass, c.detail.replace(',', ";")))
        .collect();
    out.write_csv("verify.csv", "check,pass,detail", &rows)?;
    out.write_json(
        "summary.json",
        &json!({"suite": suite, "checks": checks.len(), "all_pass": ok}),
    )?;
    Ok(ok)
}

fn suite_lemmas(cfg: &Config) -> Result<Vec<Check>> {
    let b = cfg.b.unwrap_or(1e-3);
    let grid = cfg.grid.unwrap_or(200);
    let p = SubfuncParams::new(b)?;
    let rep = subfunc::verify_lemmas(&p, grid)?;
    let u = (2.0 + 5.0_f64.sqrt()).sqrt();
    let expected_gap = (u * u + 1.0) / (2.0 * u);
    Ok(vec![
        check(
            "lemma2: b x3/x > y and b y3/y > x",
            rep.lemma2_violations == 0,
            format!("min margin {:.3e}", rep.lemma2_min_margin),
        ),
        check(
            "lemma3: det(M) > b2 trace(M)",
            rep.lemma3_violations == 0,
            format!("min margin {:.3e}", rep.lemma3_min_margin),
        ),
        check(
            "lemmaA1 ordering report",
            rep.a1_holds_x3_le_y3 || rep.a1_holds_x3_ge_y3,
            format!(
                "holds on x3<=y3: {} (margin {:.3e}); holds on x3>=y3: {} (margin {:.3e})",
                rep.a1_holds_x3_le_y3,
                rep.a1_margin_x3_le_y3,
                rep.a1_holds_x3_ge_y3,
                rep.a1_margin_x3_ge_y3
            ),
        ),
        check(
            "symmetric-point gap ~ 1.27202 sqrt(b)",
            (rep.symmetric_gap_over_sqrt_b - expected_gap).abs() <= 10.0 * b.sqrt(),
            format!("gap/sqrt(b) = {:.5}", rep.symmetric_gap_over_sqrt_b),
        ),
    ])
}

fn suite_curve(cfg: &Config) -> Result<Vec<Check>> {
    let grid = cfg.grid.unwrap_or(200);
    let bs = match cfg.b {
        Some(b) => vec![b],
        None => vec![1e-4, 1e-3, 1e-2],
    };
    let mut checks = Vec::new();
    for b in bs {
        let p = SubfuncParams::new(b)?;
        let mut max_resid = 0.0_f64;
        for k in 0..grid {
            let x3 = p.alpha() * k as f64 / (grid as f64 - 1.0);
            let e = subfunc::point_at(x3, &p)?;
            let (r17, r18, r19) = e.residuals(&p);
            max_resid = max_resid.max(r17.abs()).max(r18.abs()).max(r19.abs());
        }
        checks.push(check(
            &format!("curve residuals b={b}"),
            max_resid <= 1e-10,
            format!("max residual {max_resid:.3e}"),
        ));
        let y30 = subfunc::curve_y3_of_x3(0.0, &p)?;
        checks.push(check(
            &format!("y3(0) = 1-3b at b={b}"),
            (y30 - p.alpha()).abs() < 1e-12,
            format!("y3(0) = {y30}"),
        ));
        let sym = subfunc::symmetric_point(&p)?;
        let asym = 1.0 - (2.0 + 5.0_f64.sqrt()).sqrt() * b.sqrt();
        checks.push(check(
            &format!("symmetric point asymptotics b={b}"),
            (sym.x3 - asym).abs() <= 10.0 * b,
            format!("x3 = {:.6} vs {:.6}", sym.x3, asym),
        ));
    }
    Ok(checks)
}

fn suite_rh(cfg: &Config) -> Result<Vec<Check>> {
    let grid = cfg.grid.unwrap_or(200);
    let bs = match cfg.b {
        Some(b) => vec![b],
        None => vec![1e-4, 1e-3, 1e-2],
    };
    let mut checks = Vec::new();
    for b in bs {
        let p = SubfuncParams::new(b)?;
        let mut all_rh = true;
        let mut max_real = f64::MIN;
        let mut spectra_match = true;
        for k in 1..=grid {
            let x3 = p.alpha() * k as f64 / (grid as f64 + 1.0);
            let e = subfunc::point_at(x3, &p)?;
            let rep = subfunc::routh_hurwitz(&e, &p);
            all_rh &= rep.all_pass();
            max_real = max_real.max(rep.max_eigenvalue_real_part());
            // RH conditions equivalent to negative real parts
            spectra_match &= rep.all_pass() == (rep.max_eigenvalue_real_part() < 0.0);
            let (m2, _) = subfunc::reduced_matrices(&e, &p);
            all_rh &= m2.trace() < 0.0 && m2.determinant() > 0.0;
        }
        checks.push(check(
            &format!("routh-hurwitz all pass b={b}"),
            all_rh,
            format!("max eigenvalue real part {max_real:.3e}"),
        ));
        checks.push(check(
            &format!("rh flags match eigenvalues b={b}"),
            spectra_match,
            "three sign conditions vs direct spectrum".into(),
        ));
    }
    Ok(checks)
}

fn suite_ito(cfg: &Config) -> Result<Vec<Check>> {
    let mu = cfg.mu.unwrap_or(1e-4);
    let b = cfg.b.unwrap_or(1e-3);
    let p = SubfuncParams::new(b)?;
    let mut worst_first = 0.0_f64;
    let mut worst_second = 0.0_f64;
    // map derivatives: watterson scalar map
    let mut u = 0.01_f64;
    while u <= 100.0 {
        let h = 1e-6 * u.max(1.0);
        let fd1 = (watterson::g_eval(u + h, mu)? - watterson::g_eval(u - h, mu)?) / (2.0 * h);
        let d1 = watterson::g_prime(u, mu)?;
        worst_first = worst_first.max(((fd1 - d1) / d1).abs());
        let h2 = 1e-3 * u.max(1.0);
        let g2 = |x: f64| watterson::g_eval(x, mu).unwrap();
        let fd2 = (-g2(u - 2.0 * h2) + 16.0 * g2(u - h2) - 30.0 * g2(u) + 16.0 * g2(u + h2)
            - g2(u + 2.0 * h2))
            / (12.0 * h2 * h2);
        let d2 = watterson::g_second(u, mu)?;
        worst_second = worst_second.max(((fd2 - d2) / d2).abs());
        u *= 1.9;
    }
    // projection-parameter derivatives for the six-dimensional model
    let mut r = 0.05_f64;
    while r <= 20.0 {
        let d = subfunc::projection_derivs(r, &p)?;
        let h = 1e-5 * r.max(1.0);
        let solve = |rr: f64| subfunc::project_ratio(rr, &p).unwrap();
        let fd1 = (solve(r + h) - solve(r - h)) / (2.0 * h);
        worst_first = worst_first.max(((fd1 - d.du_dr) / d.du_dr).abs());
        let h2 = 1e-3 * r.max(1.0);
        let fd2 = (-solve(r - 2.0 * h2) + 16.0 * solve(r - h2) - 30.0 * solve(r)
            + 16.0 * solve(r + h2)
            - solve(r + 2.0 * h2))
            / (12.0 * h2 * h2);
        worst_second = worst_second.max(((fd2 - d.d2u_dr2) / d.d2u_dr2).abs());
        // mirrored parameters at the reciprocal ratio must agree
        let dq = subfunc::projection_derivs(1.0 / r, &p)?;
        if (d.u - dq.v).abs() > 1e-10 {
            return Ok(vec![check(
                "projection reciprocal symmetry",
                false,
                format!("u(r) = {} vs v(1/r) = {}", d.u, dq.v),
            )]);
        }
        r *= 1.8;
    }
    Ok(vec![
        check(
            "first derivatives vs finite differences",
            worst_first <= 1e-6,
            format!("worst relative error {worst_first:.3e}"),
        ),
        check(
            "second derivatives vs finite differences",
            worst_second <= 1e-4,
            format!("worst relative error {worst_second:.3e}"),
        ),
    ])
}

fn suite_oracles(cfg: &Config) -> Result<Vec<Check>> {
    let paths = cfg.paths.unwrap_or(2000);
    let dt = cfg.dt.unwrap_or(1e-4);
    let seed = cfg.seed.unwrap_or(105);
    let mut checks = Vec::new();

    // closed-form case: unit-variance driftless diffusion
    let l = 0.99;
    let d = Diffusion1D::new(-l, l, |_| 0.0, |_| 1.0);
    let quad = d.natural_scale(&ScaleOptions::default())?.exit_time(0.25)?;
    let mc = mc_exit_time_1d(&d, 0.25, paths, dt, seed, 60.0)?;
    checks.push(check(
        "driftless unit-variance exit time",
        mc.contains(quad) && (quad - (l * l - 0.0625)).abs() < 1e-6,
        format!("quad {quad:.6} vs MC {:.4} +- {:.4}", mc.mean, mc.half_ci),
    ));

    let wp = WattersonParams::new(cfg.mu.unwrap_or(1e-4))?;
    let wd = watterson::limit_diffusion(&wp);
    let quad_w = wd.natural_scale(&ScaleOptions::default())?.exit_time(0.0)?;
    let mc_w = mc_exit_time_1d(&wd, 0.0, paths, dt, seed + 1, 20.0 * quad_w)?;
    checks.push(check(
        "two-locus limiting diffusion exit time",
        mc_w.contains(quad_w),
        format!("quad {quad_w:.6} vs MC {:.4} +- {:.4}", mc_w.mean, mc_w.half_ci),
    ));

    let sp = SubfuncParams::new(cfg.b.unwrap_or(1e-3))?;
    let sd = subfunc::limit_diffusion(&sp)?;
    let quad_s = sd.natural_scale(&ScaleOptions::default())?.exit_time(0.0)?;
    let mc_s = mc_exit_time_1d(&sd, 0.0, paths, dt, seed + 2, 20.0 * quad_s)?;
    checks.push(check(
        "six-dimensional limiting diffusion exit time",
        mc_s.contains(quad_s),
        format!("quad {quad_s:.6} vs MC {:.4} +- {:.4}", mc_s.mean, mc_s.half_ci),
    ));

    // analytic race values
    let p29 = lineage::single_lineage_psub(1.0, 1.0)?;
    let p512 = lineage::single_lineage_psub(1.0, 30.0)?;
    checks.push(check(
        "single-lineage closed forms",
        (p29 - 2.0 / 9.0).abs() < 1e-15 && (p512 - 1.0 / 512.0).abs() < 1e-15,
        format!("2/9 = {p29:.9}, 1/512 = {p512:.9}"),
    ));
    Ok(checks)
}
