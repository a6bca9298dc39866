//! The Wright-Fisher double-recessive-null model.
//!
//! A generation draws `N` diploid individuals by rejection: two gene-1 and
//! two gene-2 copies are picked with replacement, each functional copy may
//! mutate to null, and the draw is rejected only when all four copies are
//! null.  Gametes from accepted individuals form the next generation's pools
//! (random union of gametes; no within-individual linkage is retained).

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::popsim::{AbsorptionOutcome, OutcomeKind};
use crate::watterson::WattersonParams;

/// Null-allele copy counts among the `2N` copies at each locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WfPopulation {
    pub a_count: u32,
    pub b_count: u32,
    pub n: u32,
    pub generation: u64,
}

impl WfPopulation {
    pub fn new(n: u32, a_count: u32, b_count: u32) -> Result<Self> {
        if n < 2 || a_count > 2 * n || b_count > 2 * n {
            return Err(Error::InvalidParameter {
                name: "wf_population",
                reason: format!("counts ({a_count}, {b_count}) incompatible with N = {n}"),
            });
        }
        Ok(Self {
            a_count,
            b_count,
            n,
            generation: 0,
        })
    }

    /// Null-allele frequency at locus 1.
    pub fn x(&self) -> f64 {
        self.a_count as f64 / (2.0 * self.n as f64)
    }

    pub fn y(&self) -> f64 {
        self.b_count as f64 / (2.0 * self.n as f64)
    }
}

/// Result of advancing one generation.
#[derive(Debug, Clone, Copy)]
pub enum WfStep {
    Stepped(WfPopulation),
    /// both loci fixed null: no viable individual can be drawn
    Deadlocked,
}

/// Sample one generation.
pub fn wf_generation(
    pop: &WfPopulation,
    p: &WattersonParams,
    rng: &mut ChaCha12Rng,
) -> Result<WfStep> {
    if !(p.mu >= 0.0 && p.mu < 1.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            reason: format!("got {p:?}"),
        });
    }
    let two_n = 2 * pop.n;
    if pop.a_count == two_n && pop.b_count == two_n {
        return Ok(WfStep::Deadlocked);
    }
    let x = pop.x();
    let y = pop.y();
    let mut new_a = 0u32;
    let mut new_b = 0u32;
    let draw_locus = |freq: f64, rng: &mut ChaCha12Rng| -> u32 {
        let mut nulls = 0;
        for _ in 0..2 {
            let is_null = rng.gen::<f64>() < freq || rng.gen::<f64>() < p.mu;
            if is_null {
                nulls += 1;
            }
        }
        nulls
    };
    let mut accepted = 0;
    while accepted < pop.n {
        let s = draw_locus(x, rng);
        let t = draw_locus(y, rng);
        if s == 2 && t == 2 {
            continue; // inviable, redraw
        }
        new_a += s;
        new_b += t;
        accepted += 1;
    }
    Ok(WfStep::Stepped(WfPopulation {
        a_count: new_a,
        b_count: new_b,
        n: pop.n,
        generation: pop.generation + 1,
    }))
}

/// Per-individual post-rejection distribution over (gene-1 nulls, gene-2
/// nulls) in closed binomial form.
fn individual_kernel(pop: &WfPopulation, mu: f64) -> [[f64; 3]; 3] {
    // a picked copy ends up null with probability x + (1-x) mu
    let xeff = pop.x() + (1.0 - pop.x()) * mu;
    let yeff = pop.y() + (1.0 - pop.y()) * mu;
    let bin = |q: f64| [(1.0 - q) * (1.0 - q), 2.0 * q * (1.0 - q), q * q];
    let bx = bin(xeff);
    let by = bin(yeff);
    let mut k = [[0.0; 3]; 3];
    let viable_mass = 1.0 - bx[2] * by[2];
    for (s, kb) in k.iter_mut().enumerate() {
        for (t, v) in kb.iter_mut().enumerate() {
            if s == 2 && t == 2 {
                continue;
            }
            *v = bx[s] * by[t] / viable_mass;
        }
    }
    k
}

/// One-generation transition kernel over copy-count states, exact up to
/// floating point.  Intended for small populations; the state space is
/// `(2N+1)^2`.
pub fn wf_transition_kernel(
    pop: &WfPopulation,
    p: &WattersonParams,
) -> Result<HashMap<(u32, u32), f64>> {
    let two_n = 2 * pop.n;
    if pop.a_count == two_n && pop.b_count == two_n {
        return Err(Error::OutOfDomain(
            "no viable individual can be formed from an all-null population".into(),
        ));
    }
    let q = individual_kernel(pop, p.mu);
    // convolve N independent individuals
    let mut dist: HashMap<(u32, u32), f64> = HashMap::new();
    dist.insert((0, 0), 1.0);
    for _ in 0..pop.n {
        let mut next: HashMap<(u32, u32), f64> = HashMap::new();
        for (&(a, b), &pr) in &dist {
            for (s, qs) in q.iter().enumerate() {
                for (t, &qv) in qs.iter().enumerate() {
                    if qv == 0.0 {
                        continue;
                    }
                    *next.entry((a + s as u32, b + t as u32)).or_insert(0.0) += pr * qv;
                }
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// Run generations until one locus fixes its null allele.
pub fn wf_run_to_absorption(
    start: &WfPopulation,
    p: &WattersonParams,
    cap_generations: u64,
    rng: &mut ChaCha12Rng,
) -> Result<AbsorptionOutcome> {
    let two_n = 2 * start.n;
    let mut pop = *start;
    let mut events = 0u64;
    loop {
        if pop.a_count == two_n {
            return Ok(AbsorptionOutcome {
                kind: OutcomeKind::Gene1Lost,
                time: pop.generation as f64,
                events,
            });
        }
        if pop.b_count == two_n {
            return Ok(AbsorptionOutcome {
                kind: OutcomeKind::Gene2Lost,
                time: pop.generation as f64,
                events,
            });
        }
        if pop.generation >= cap_generations {
            return Ok(AbsorptionOutcome {
                kind: OutcomeKind::Censored,
                time: pop.generation as f64,
                events,
            });
        }
        match wf_generation(&pop, p, rng)? {
            WfStep::Stepped(next) => pop = next,
            WfStep::Deadlocked => {
                return Ok(AbsorptionOutcome {
                    kind: OutcomeKind::Gene1Lost,
                    time: pop.generation as f64,
                    events,
                })
            }
        }
        events += 1;
    }
}
