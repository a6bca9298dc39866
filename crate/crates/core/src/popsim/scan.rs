//! Subfunctionalization-probability decay scan across population sizes.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::popsim::moran::MoranPopulation;
use crate::popsim::OutcomeKind;
use crate::rng::replicate_rng;
use crate::subfunc::SubfuncParams;

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub n_pop: u32,
    pub reps: u64,
    pub subfunctionalized: u64,
    pub gene_lost: u64,
    pub censored: u64,
    pub estimate: f64,
    pub half_ci: f64,
    /// all-zero counts give only an upper bound and are excluded from the fit
    pub upper_bound_only: bool,
    pub mean_absorption_generations: f64,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    /// weighted least-squares fit of `ln P(S)` against `N`
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Estimate `P(subfunctionalization)` for each population size, starting
/// from fully functional populations, and fit the exponential decay.
///
/// `reps_list` holds one replicate count per population size (a single
/// entry applies to all sizes); larger sizes need more replicates to keep
/// the relative confidence interval bounded as the probability decays.
pub fn psub_decay_scan(
    n_list: &[u32],
    p: &SubfuncParams,
    reps_list: &[u64],
    seed: u64,
    cap_generations_per_n: f64,
) -> Result<ScanResult> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter {
            name: "n_list",
            reason: "population sizes must be ascending".into(),
        });
    }
    if reps_list.is_empty()
        || reps_list.contains(&0)
        || (reps_list.len() != 1 && reps_list.len() != n_list.len())
    {
        return Err(Error::InvalidParameter {
            name: "reps",
            reason: "need one replicate count, or one per population size".into(),
        });
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for (i, &n_pop) in n_list.iter().enumerate() {
        let reps = if reps_list.len() == 1 { reps_list[0] } else { reps_list[i] };
        let cap = cap_generations_per_n * n_pop as f64;
        let outcomes: Vec<(OutcomeKind, f64)> = (0..reps)
            .into_par_iter()
            .map(|k| {
                let mut rng = replicate_rng(seed.wrapping_add(i as u64), k);
                let pop = MoranPopulation::full_function(n_pop).expect("population");
                let out = pop.run_to_absorption(p, cap, &mut rng);
                (out.kind, out.time)
            })
            .collect();
        let subf = outcomes
            .iter()
            .filter(|(k, _)| *k == OutcomeKind::Subfunctionalized)
            .count() as u64;
        let censored = outcomes
            .iter()
            .filter(|(k, _)| *k == OutcomeKind::Censored)
            .count() as u64;
        let gene_lost = reps - subf - censored;
        let estimate = subf as f64 / reps as f64;
        let half_ci = 1.96 * (estimate * (1.0 - estimate) / reps as f64).sqrt();
        let mean_time = outcomes.iter().map(|&(_, t)| t).sum::<f64>() / reps as f64;
        rows.push(ScanRow {
            n_pop,
            reps,
            subfunctionalized: subf,
            gene_lost,
            censored,
            estimate,
            half_ci,
            upper_bound_only: subf == 0,
            mean_absorption_generations: mean_time,
        });
    }

    // weighted least squares of ln(p) on N; weight = inverse variance of
    // ln(p-hat), i.e. reps * p / (1 - p)
    let pts: Vec<(f64, f64, f64)> = rows
        .iter()
        .filter(|r| !r.upper_bound_only)
        .map(|r| {
            let w = r.reps as f64 * r.estimate / (1.0 - r.estimate).max(1e-12);
            (r.n_pop as f64, r.estimate.ln(), w)
        })
        .collect();
    let (slope, intercept, r2) = weighted_line_fit(&pts);
    Ok(ScanResult {
        rows,
        slope,
        intercept,
        r_squared: r2,
    })
}

/// Weighted least squares `y ~ a + b x`; returns `(b, a, R^2)` with the
/// weighted coefficient of determination.
pub fn weighted_line_fit(pts: &[(f64, f64, f64)]) -> (f64, f64, f64) {
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    if pts.len() < 2 || sw <= 0.0 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.0 - mx)).sum::<f64>();
    let sxy = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum::<f64>();
    let syy = pts.iter().map(|p| p.2 * (p.1 - my) * (p.1 - my)).sum::<f64>();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| {
            let e = p.1 - (intercept + slope * p.0);
            p.2 * e * e
        })
        .sum();
    (slope, intercept, 1.0 - ss_res / syy)
}
