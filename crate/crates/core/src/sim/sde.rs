//! Euler-Maruyama integration of the two frequency diffusions.
//!
//! Both generators have deterministic drift `2N F` and per-locus sampling
//! noise; time is measured in units of `2N` generations.  For the
//! six-dimensional model the per-locus noise covariance is multinomial,
//! `cov(i,j) = x_i (delta_ij - x_j)`; increments with exactly that
//! covariance are generated from four standard normals per locus via
//! `dW_i = sqrt(x_i) g_i - x_i * sum_k sqrt(x_k) g_k` (the sum including the
//! null class), which stays valid on the boundary where a Cholesky factor
//! degenerates.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::replicate_rng;
use crate::subfunc::{project, SState, SubfuncParams};
use crate::watterson::{WattersonParams, WState};

#[derive(Debug, Clone, Copy)]
pub enum SdeModel {
    Watterson(WattersonParams),
    Subfunc(SubfuncParams),
}

/// Configuration of one Euler-Maruyama run.
#[derive(Debug, Clone)]
pub struct SdeRun {
    pub model: SdeModel,
    pub n_pop: u32,
    pub dt: f64,
    pub horizon: f64,
    pub seed: u64,
    pub paths: usize,
    /// scales the noise term; 0 reduces the scheme to deterministic Euler
    pub noise_scale: f64,
    /// start state; `None` = the symmetric curve point
    pub start: Option<Vec<f64>>,
}

impl SdeRun {
    pub fn validate(&self) -> Result<()> {
        if self.dt <= 0.0 || self.horizon <= 0.0 || self.paths == 0 {
            return Err(Error::InvalidParameter {
                name: "sde_run",
                reason: "dt, horizon and paths must be positive".into(),
            });
        }
        if self.n_pop < 2 {
            return Err(Error::InvalidParameter {
                name: "n_pop",
                reason: "need at least two individuals".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdeOutcome {
    ReachedHorizon,
    Gene1Lost,
    Gene2Lost,
    Subfunctionalized,
    Unstable,
}

impl SdeOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            SdeOutcome::ReachedHorizon => "horizon",
            SdeOutcome::Gene1Lost => "gene1-lost",
            SdeOutcome::Gene2Lost => "gene2-lost",
            SdeOutcome::Subfunctionalized => "subfunctionalized",
            SdeOutcome::Unstable => "unstable",
        }
    }
}

/// Per-path summary: the sup of the distance-from-curve functional up to
/// `min(exit, horizon)` plus the exit data.
#[derive(Debug, Clone)]
pub struct SdePathStat {
    pub path: u64,
    pub outcome: SdeOutcome,
    pub exit_time: Option<f64>,
    pub sup_distance: f64,
    pub clamp_events: u64,
}

/// Run all paths; path `k` uses the counter-derived stream `(seed, k)`, so
/// results are independent of scheduling.
pub fn integrate_sde(run: &SdeRun) -> Result<Vec<SdePathStat>> {
    run.validate()?;
    let stats: Vec<SdePathStat> = (0..run.paths as u64)
        .into_par_iter()
        .map(|k| one_path(run, k))
        .collect();
    Ok(stats)
}

fn one_path(run: &SdeRun, path: u64) -> SdePathStat {
    let mut rng = replicate_rng(run.seed, path);
    match run.model {
        SdeModel::Watterson(p) => watterson_path(run, &p, path, &mut rng),
        SdeModel::Subfunc(p) => subfunc_path(run, &p, path, &mut rng),
    }
}

fn watterson_path(
    run: &SdeRun,
    p: &WattersonParams,
    path: u64,
    rng: &mut ChaCha12Rng,
) -> SdePathStat {
    let n2 = 2.0 * run.n_pop as f64;
    let thr = 1.0 - 1.0 / n2;
    let (mut x, mut y) = match &run.start {
        Some(v) => (v[0], v[1]),
        None => {
            let q = p.mu.powf(0.25);
            (q, q)
        }
    };
    let sdt = run.dt.sqrt();
    let steps = (run.horizon / run.dt).round() as u64;
    let mut sup = (p.mu - (x * y) * (x * y)).abs();
    let mut clamps = 0u64;
    for k in 1..=steps {
        let dr = p.mu - (x * y) * (x * y);
        let g1: f64 = rng.sample(StandardNormal);
        let g2: f64 = rng.sample(StandardNormal);
        x += n2 * (1.0 - x) * dr * run.dt
            + run.noise_scale * (x * (1.0 - x)).max(0.0).sqrt() * sdt * g1;
        y += n2 * (1.0 - y) * dr * run.dt
            + run.noise_scale * (y * (1.0 - y)).max(0.0).sqrt() * sdt * g2;
        if !(x.is_finite() && y.is_finite()) {
            return SdePathStat {
                path,
                outcome: SdeOutcome::Unstable,
                exit_time: Some(k as f64 * run.dt),
                sup_distance: sup,
                clamp_events: clamps,
            };
        }
        if x < -1e-12 || x > 1.0 + 1e-12 || y < -1e-12 || y > 1.0 + 1e-12 {
            clamps += 1;
        }
        x = x.clamp(0.0, 1.0);
        y = y.clamp(0.0, 1.0);
        let d = (p.mu - (x * y) * (x * y)).abs();
        if d > sup {
            sup = d;
        }
        if x >= thr || y >= thr {
            return SdePathStat {
                path,
                outcome: if x >= thr {
                    SdeOutcome::Gene1Lost
                } else {
                    SdeOutcome::Gene2Lost
                },
                exit_time: Some(k as f64 * run.dt),
                sup_distance: sup,
                clamp_events: clamps,
            };
        }
    }
    SdePathStat {
        path,
        outcome: SdeOutcome::ReachedHorizon,
        exit_time: None,
        sup_distance: sup,
        clamp_events: clamps,
    }
}

/// Multinomial-covariance noise for one locus: increments for the three
/// tracked classes given the implied null class.
#[inline]
fn locus_noise(f: [f64; 3], rng: &mut ChaCha12Rng) -> [f64; 3] {
    let f0 = (1.0 - f[0] - f[1] - f[2]).max(0.0);
    let g: [f64; 4] = [
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    ];
    let r = [f[0].max(0.0).sqrt(), f[1].max(0.0).sqrt(), f[2].max(0.0).sqrt(), f0.sqrt()];
    let s = r[0] * g[0] + r[1] * g[1] + r[2] * g[2] + r[3] * g[3];
    [
        r[0] * g[0] - f[0] * s,
        r[1] * g[1] - f[1] * s,
        r[2] * g[2] - f[2] * s,
    ]
}

fn subfunc_path(
    run: &SdeRun,
    p: &SubfuncParams,
    path: u64,
    rng: &mut ChaCha12Rng,
) -> SdePathStat {
    let n2 = 2.0 * run.n_pop as f64;
    let loss_thr = 1.0 / n2;
    let fix_thr = 1.0 - 1.0 / n2;
    let mut s = match &run.start {
        Some(v) => [v[0], v[1], v[2], v[3], v[4], v[5]],
        None => {
            let e = crate::subfunc::symmetric_point(p).expect("symmetric point");
            e.to_state().as_array()
        }
    };
    let sdt = run.dt.sqrt();
    let steps = (run.horizon / run.dt).round() as u64;
    let mut sup = distance_from_curve(&s, p);
    let mut clamps = 0u64;
    for k in 1..=steps {
        let state = SState::from_array(s);
        let f = crate::subfunc::ode_field(&state, p);
        let n1 = locus_noise([s[0], s[1], s[2]], rng);
        let n2v = locus_noise([s[3], s[4], s[5]], rng);
        for i in 0..3 {
            s[i] += n2 * f[i] * run.dt + run.noise_scale * sdt * n1[i];
            s[i + 3] += n2 * f[i + 3] * run.dt + run.noise_scale * sdt * n2v[i];
        }
        if s.iter().any(|v| !v.is_finite()) {
            return SdePathStat {
                path,
                outcome: SdeOutcome::Unstable,
                exit_time: Some(k as f64 * run.dt),
                sup_distance: sup,
                clamp_events: clamps,
            };
        }
        // clamp to the product of simplices
        let mut over: f64 = 0.0;
        for v in s.iter_mut() {
            over = over.max(-*v);
            *v = v.max(0.0);
        }
        for half in [0, 3] {
            let tot = s[half] + s[half + 1] + s[half + 2];
            if tot > 1.0 {
                over = over.max(tot - 1.0);
                for v in &mut s[half..half + 3] {
                    *v /= tot;
                }
            }
        }
        if over > 1e-12 {
            clamps += 1;
        }
        let d = distance_from_curve(&s, p);
        if d > sup {
            sup = d;
        }
        let t = k as f64 * run.dt;
        let gene1_mass = s[0] + s[1] + s[2];
        let gene2_mass = s[3] + s[4] + s[5];
        if gene1_mass <= loss_thr || gene2_mass <= loss_thr {
            return SdePathStat {
                path,
                outcome: if gene1_mass <= loss_thr {
                    SdeOutcome::Gene1Lost
                } else {
                    SdeOutcome::Gene2Lost
                },
                exit_time: Some(t),
                sup_distance: sup,
                clamp_events: clamps,
            };
        }
        if (s[1] >= fix_thr && s[5] >= fix_thr) || (s[2] >= fix_thr && s[4] >= fix_thr) {
            return SdePathStat {
                path,
                outcome: SdeOutcome::Subfunctionalized,
                exit_time: Some(t),
                sup_distance: sup,
                clamp_events: clamps,
            };
        }
    }
    SdePathStat {
        path,
        outcome: SdeOutcome::ReachedHorizon,
        exit_time: None,
        sup_distance: sup,
        clamp_events: clamps,
    }
}

/// Euclidean distance between the state and its projection onto the curve.
fn distance_from_curve(s: &[f64; 6], p: &SubfuncParams) -> f64 {
    let state = SState::from_array(*s);
    match project(&state, p) {
        Ok(e) => {
            let t = e.to_state().as_array();
            s.iter()
                .zip(t.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        }
        Err(_) => f64::INFINITY,
    }
}

/// One row of the deterministic-tracking experiment.
#[derive(Debug, Clone)]
pub struct Theorem1Row {
    pub n_pop: u32,
    /// Monte Carlo estimate of `E sup_{t <= gamma log N / N} |Z_t - Z0_t|^2`
    pub estimate: f64,
    /// the bound it is compared against
    pub n_inv_sqrt: f64,
    pub paths: usize,
}

/// Tracking error between the frequency diffusion and the deterministic
/// flow, for each population size.
///
/// Integration runs in the slow clock (unit drift), where the horizon
/// `gamma log N / N` of the fast clock becomes `2 gamma log N`.
pub fn theorem1_experiment(
    p: &WattersonParams,
    n_list: &[u32],
    start: WState,
    gamma: f64,
    paths: usize,
    dt: f64,
    seed: u64,
) -> Result<Vec<Theorem1Row>> {
    if !(gamma > 0.0 && dt > 0.0 && paths > 0) {
        return Err(Error::InvalidParameter {
            name: "theorem1",
            reason: "gamma, dt, paths must be positive".into(),
        });
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for (i, &n_pop) in n_list.iter().enumerate() {
        let horizon = 2.0 * gamma * (n_pop as f64).ln();
        let steps = (horizon / dt).ceil() as usize;
        // deterministic reference on the same grid
        let reference = crate::sim::ode::watterson_trajectory(start, p, steps as f64 * dt, dt, 1)?;
        let sups: Vec<f64> = (0..paths as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = replicate_rng(seed.wrapping_add(i as u64), k);
                let (mut x, mut y) = (start.x, start.y);
                let sdt = dt.sqrt();
                let amp = 1.0 / (2.0 * n_pop as f64).sqrt();
                let mut sup = 0.0_f64;
                for step in 1..=steps {
                    let dr = p.mu - (x * y) * (x * y);
                    let g1: f64 = rng.sample(StandardNormal);
                    let g2: f64 = rng.sample(StandardNormal);
                    x += (1.0 - x) * dr * dt + amp * (x * (1.0 - x)).max(0.0).sqrt() * sdt * g1;
                    y += (1.0 - y) * dr * dt + amp * (y * (1.0 - y)).max(0.0).sqrt() * sdt * g2;
                    x = x.clamp(0.0, 1.0);
                    y = y.clamp(0.0, 1.0);
                    let r = reference.states[step];
                    let d2 = (x - r[0]) * (x - r[0]) + (y - r[1]) * (y - r[1]);
                    if d2 > sup {
                        sup = d2;
                    }
                }
                sup
            })
            .collect();
        let estimate = sups.iter().sum::<f64>() / paths as f64;
        rows.push(Theorem1Row {
            n_pop,
            estimate,
            n_inv_sqrt: 1.0 / (n_pop as f64).sqrt(),
            paths,
        });
    }
    Ok(rows)
}
