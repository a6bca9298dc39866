//! Single-lineage mutation race for a duplicate pair with two regulatory
//! elements and one coding region per copy.
//!
//! Subfunctionalization requires the first hit to be regulatory; the
//! follow-up race then runs among the surviving targets, with mutations that
//! would destroy a function purged by selection (the lineage persists).

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::rng::replicate_rng;

/// Closed-form probability that the pair resolves by subfunctionalization:
/// `(4 mu_r / (4 mu_r + 2 mu_c)) * (mu_r / (2 mu_r + mu_c))`.
pub fn single_lineage_psub(mu_r: f64, mu_c: f64) -> Result<f64> {
    if mu_r < 0.0 || mu_c < 0.0 || (mu_r == 0.0 && mu_c == 0.0) {
        return Err(Error::InvalidParameter {
            name: "rates",
            reason: format!("need nonnegative rates, not both zero (got {mu_r}, {mu_c})"),
        });
    }
    let second = mu_r / (2.0 * mu_r + mu_c);
    Ok(2.0 * second * second)
}

#[derive(Debug, Clone, Copy)]
pub struct RaceEstimate {
    pub estimate: f64,
    /// half-width of the 95% confidence interval
    pub half_ci: f64,
    pub reps: u64,
    pub successes: u64,
}

impl RaceEstimate {
    pub fn within_sigmas(&self, target: f64, sigmas: f64) -> bool {
        let sigma = self.half_ci / 1.96;
        (self.estimate - target).abs() <= sigmas * sigma.max(f64::MIN_POSITIVE)
    }
}

fn pick(weights: &[f64], rng: &mut ChaCha12Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u: f64 = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        u -= w;
        if u <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

/// Monte Carlo of the two-stage race.
pub fn single_lineage_race_mc(
    mu_r: f64,
    mu_c: f64,
    reps: u64,
    seed: u64,
) -> Result<RaceEstimate> {
    single_lineage_psub(mu_r, mu_c)?;
    if reps == 0 {
        return Err(Error::InvalidParameter {
            name: "reps",
            reason: "need at least one replicate".into(),
        });
    }
    let mut successes = 0u64;
    let mut rng = replicate_rng(seed, 0);
    for _ in 0..reps {
        // first event among 4 regulatory and 2 coding targets
        let first = pick(&[4.0 * mu_r, 2.0 * mu_c], &mut rng);
        if first == 1 {
            continue; // a coding hit inactivates one copy outright
        }
        // follow-up: one regulatory target yields subfunctionalization, the
        // same copy's other regulatory element or its coding region yields
        // inactivation, and hits that would erase a function are lethal and
        // purged, leaving the race running
        loop {
            match pick(&[mu_r, mu_r + mu_c, mu_r + mu_c], &mut rng) {
                0 => {
                    successes += 1;
                    break;
                }
                1 => break,    // inactivation
                _ => continue, // lethal, purged by selection
            }
        }
    }
    let p = successes as f64 / reps as f64;
    let half_ci = 1.96 * (p * (1.0 - p) / reps as f64).sqrt();
    Ok(RaceEstimate {
        estimate: p,
        half_ci,
        reps,
        successes,
    })
}
