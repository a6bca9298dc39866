//! Simulation commands: discrete-model replicates, frequency-diffusion
//! paths, the deterministic-tracking experiment, and the decay scan.

use anyhow::{bail, Context, Result};
use serde_json::json;

use dupdiff_core::popsim::{
    psub_decay_scan, wright_fisher, MoranPopulation, OutcomeKind,
};
use dupdiff_core::rng::replicate_rng;
use dupdiff_core::sim::{integrate_sde, theorem1_experiment, SdeModel, SdeRun};
use dupdiff_core::subfunc::SubfuncParams;
use dupdiff_core::watterson::{WattersonParams, WState};

use crate::config::Config;
use crate::output::{g9, OutputDir};

/// Replicates of a discrete model run to absorption.
pub fn cmd_simulate(cfg: &Config, out: &mut OutputDir) -> Result<()> {
    let reps = cfg.reps.unwrap_or(1000);
    let n_pop = cfg.pop_size.context("--pop-size is required")?;
    let seed = cfg.seed.unwrap_or(0);
    let mut rows = Vec::with_capacity(reps as usize);
    let mut counts = [0u64; 4];
    match cfg.model_tag()? {
        "watterson" => {
            let p = WattersonParams::new(cfg.mu_value()?)?;
            let cap = cfg.cap.unwrap_or(400.0) * n_pop as f64;
            use rayon::prelude::*;
            let outcomes: Vec<_> = (0..reps)
                .into_par_iter()
                .map(|k| {
                    let mut rng = replicate_rng(seed, k);
                    let pop = wright_fisher::WfPopulation::new(n_pop, 0, 0).expect("population");
                    wright_fisher::wf_run_to_absorption(&pop, &p, cap as u64, &mut rng)
                        .expect("replicate")
                })
                .collect();
            for (k, o) in outcomes.iter().enumerate() {
                rows.push(format!("{k},{seed},{},{},{}", o.kind.as_str(), g9(o.time), o.events));
                counts[kind_index(o.kind)] += 1;
            }
        }
        _ => {
            let p = SubfuncParams::new(cfg.b_value()?)?;
            let cap = cfg.cap.unwrap_or(400.0) * n_pop as f64;
            use rayon::prelude::*;
            let outcomes: Vec<_> = (0..reps)
                .into_par_iter()
                .map(|k| {
                    let mut rng = replicate_rng(seed, k);
                    let pop = MoranPopulation::full_function(n_pop).expect("population");
                    pop.run_to_absorption(&p, cap, &mut rng)
                })
                .collect();
            for (k, o) in outcomes.iter().enumerate() {
                rows.push(format!("{k},{seed},{},{},{}", o.kind.as_str(), g9(o.time), o.events));
                counts[kind_index(o.kind)] += 1;
            }
        }
    }
    out.write_csv("simulate.csv", "replicate,seed,outcome,time_generations,events", &rows)?;
    out.write_json(
        "summary.json",
        &json!({
            "replicates": reps,
            "gene1_lost": counts[0],
            "gene2_lost": counts[1],
            "subfunctionalized": counts[2],
            "censored": counts[3],
        }),
    )?;
    Ok(())
}

fn kind_index(kind: OutcomeKind) -> usize {
    match kind {
        OutcomeKind::Gene1Lost => 0,
        OutcomeKind::Gene2Lost => 1,
        OutcomeKind::Subfunctionalized => 2,
        OutcomeKind::Censored => 3,
    }
}

/// Euler-Maruyama paths of the frequency diffusions with near-curve
/// statistics.
pub fn cmd_sde(cfg: &Config, out: &mut OutputDir) -> Result<()> {
    let model = match cfg.model_tag()? {
        "watterson" => SdeModel::Watterson(WattersonParams::new(cfg.mu_value()?)?),
        _ => SdeModel::Subfunc(SubfuncParams::new(cfg.b_value()?)?),
    };
    let run = SdeRun {
        model,
        n_pop: cfg.pop_size.context("--pop-size is required")?,
        dt: cfg.dt.unwrap_or(1e-5),
        horizon: cfg.horizon.unwrap_or(1.0),
        seed: cfg.seed.unwrap_or(0),
        paths: cfg.paths.unwrap_or(100),
        noise_scale: cfg.noise_scale.unwrap_or(1.0),
        start: cfg.start.clone(),
    };
    let stats = integrate_sde(&run)?;
    let rows: Vec<String> = stats
        .iter()
        .map(|s| {
            format!(
                "{},{},{},{},{}",
                s.path,
                s.outcome.as_str(),
                s.exit_time.map(g9).unwrap_or_default(),
                g9(s.sup_distance),
                s.clamp_events
            )
        })
        .collect();
    out.write_csv("sde.csv", "path,outcome,exit_time,sup_distance,clamp_events", &rows)?;
    let exited = stats.iter().filter(|s| s.exit_time.is_some()).count();
    let sups: Vec<f64> = stats.iter().map(|s| s.sup_distance).collect();
    let mean_sup = sups.iter().sum::<f64>() / sups.len() as f64;
    out.write_json(
        "summary.json",
        &json!({
            "paths": run.paths,
            "exited": exited,
            "mean_sup_distance": mean_sup,
            "dt": run.dt,
            "horizon": run.horizon,
            "pop_size": run.n_pop,
        }),
    )?;
    Ok(())
}

/// Tracking error between the diffusion and the deterministic flow.
pub fn cmd_theorem1(cfg: &Config, out: &mut OutputDir) -> Result<()> {
    let p = WattersonParams::new(cfg.mu.unwrap_or(1e-4))?;
    let n_list = cfg
        .pop_sizes
        .clone()
        .unwrap_or_else(|| vec![1_000, 10_000, 100_000]);
    let start = match &cfg.start {
        Some(v) if v.len() == 2 => WState::new(v[0], v[1])?,
        None => WState::new(0.5, 0.5)?,
        _ => bail!("--start needs two coordinates for the watterson model"),
    };
    let rows = theorem1_experiment(
        &p,
        &n_list,
        start,
        cfg.gamma.unwrap_or(1.0),
        cfg.paths.unwrap_or(200),
        cfg.dt.unwrap_or(1e-3),
        cfg.seed.unwrap_or(0),
    )?;
    let csv: Vec<String> = rows
        .iter()
        .map(|r| format!("{},{},{}", r.n_pop, g9(r.estimate), g9(r.n_inv_sqrt)))
        .collect();
    out.write_csv("theorem1.csv", "n,estimate,n_inv_sqrt", &csv)?;
    let monotone = rows.windows(2).all(|w| w[1].estimate < w[0].estimate);
    let last = rows.last().context("empty run")?;
    out.write_json(
        "summary.json",
        &json!({
            "monotone_decreasing": monotone,
            "largest_n_estimate": last.estimate,
            "largest_n_bound": last.n_inv_sqrt,
            "bound_satisfied_at_largest_n": last.estimate <= last.n_inv_sqrt,
        }),
    )?;
    Ok(())
}

/// Loss-probability decay scan with its exponential fit.
pub fn cmd_psub_scan(cfg: &Config, out: &mut OutputDir) -> Result<()> {
    let p = SubfuncParams::new(cfg.b.unwrap_or(0.01))?;
    let n_list = cfg
        .pop_sizes
        .clone()
        .unwrap_or_else(|| vec![25, 50, 100, 200]);
    let reps = cfg.reps.unwrap_or(4000);
    let res = psub_decay_scan(
        &n_list,
        &p,
        &[reps],
        cfg.seed.unwrap_or(0),
        cfg.cap.unwrap_or(400.0),
    )?;
    let rows: Vec<String> = res
        .rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{},{},{}",
                r.n_pop,
                r.reps,
                r.subfunctionalized,
                r.gene_lost,
                r.censored,
                g9(r.estimate),
                g9(r.half_ci),
                r.upper_bound_only,
                g9(r.mean_absorption_generations)
            )
        })
        .collect();
    out.write_csv(
        "psub_scan.csv",
        "n,reps,subfunctionalized,gene_lost,censored,estimate,half_ci,upper_bound_only,mean_absorption_generations",
        &rows,
    )?;
    out.write_json(
        "summary.json",
        &json!({
            "b": p.b,
            "slope": res.slope,
            "intercept": res.intercept,
            "r_squared": res.r_squared,
        }),
    )?;
    Ok(())
}
