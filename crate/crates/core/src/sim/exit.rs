//! Monte Carlo absorption times for one-dimensional diffusions; the
//! independent oracle for the quadrature route.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::diffusion::Diffusion1D;
use crate::error::{Error, Result};
use crate::rng::replicate_rng;

#[derive(Debug, Clone)]
pub struct ExitTimeEstimate {
    pub mean: f64,
    /// half-width of the 95% confidence interval
    pub half_ci: f64,
    pub paths: usize,
    /// paths that exceeded the time cap (excluded from the mean)
    pub censored: usize,
}

impl ExitTimeEstimate {
    pub fn contains(&self, value: f64) -> bool {
        (self.mean - value).abs() <= self.half_ci
    }
}

/// Euler-Maruyama absorption-time sample mean with 95% confidence interval.
///
/// The cap should exceed the expected absorption time by an order of
/// magnitude; capped paths are reported as censored.
pub fn mc_exit_time_1d(
    d: &Diffusion1D,
    x0: f64,
    paths: usize,
    dt: f64,
    seed: u64,
    cap: f64,
) -> Result<ExitTimeEstimate> {
    let (l, r) = d.interval();
    if !(x0 > l && x0 < r) {
        return Err(Error::OutOfDomain(format!("start {x0} outside ({l}, {r})")));
    }
    if paths == 0 || dt <= 0.0 || cap <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "mc_exit",
            reason: "paths, dt, cap must be positive".into(),
        });
    }
    let taus: Vec<Option<f64>> = (0..paths as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = replicate_rng(seed, k);
            let sdt = dt.sqrt();
            let mut z = x0;
            let mut t = 0.0;
            while t < cap {
                let b = d.drift(z);
                let a = d.variance(z).max(0.0);
                let g: f64 = rng.sample(StandardNormal);
                z += b * dt + a.sqrt() * sdt * g;
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
    if n < 2 {
        return Err(Error::Instability {
            t: cap,
            reason: "fewer than two paths absorbed before the cap".into(),
        });
    }
    let mean = absorbed.iter().sum::<f64>() / n as f64;
    let var = absorbed.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (n as f64 - 1.0);
    Ok(ExitTimeEstimate {
        mean,
        half_ci: 1.96 * (var / n as f64).sqrt(),
        paths,
        censored: paths - n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brownian_exit_time() {
        // a = 1, b = 0 on (-1, 1) from 0: mean exit time 1
        let d = Diffusion1D::new(-1.0, 1.0, |_| 0.0, |_| 1.0);
        let est = mc_exit_time_1d(&d, 0.0, 3000, 1e-4, 11, 40.0).unwrap();
        assert_eq!(est.censored, 0);
        assert!(
            est.contains(1.0),
            "CI [{} +- {}] misses 1.0",
            est.mean,
            est.half_ci
        );
    }

    #[test]
    fn starts_must_be_interior() {
        let d = Diffusion1D::new(-1.0, 1.0, |_| 0.0, |_| 1.0);
        assert!(mc_exit_time_1d(&d, 1.0, 10, 1e-3, 0, 1.0).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let d = Diffusion1D::new(-1.0, 1.0, |_| 0.0, |_| 1.0);
        let a = mc_exit_time_1d(&d, 0.3, 200, 1e-3, 5, 40.0).unwrap();
        let b = mc_exit_time_1d(&d, 0.3, 200, 1e-3, 5, 40.0).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    }
}
