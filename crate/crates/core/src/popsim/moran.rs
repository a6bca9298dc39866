//! The Moran subfunctionalization model.
//!
//! Individuals carry a pair of gene-copy states, each a bitmask over the two
//! functions (3 = both, 2 = function 1, 1 = function 2, 0 = null), and every
//! individual is viable: the bitwise OR of its pair is 3.  Two event
//! channels run on the generation clock:
//!
//! * reproduction attempts at total rate `N`: a random-union-of-gametes
//!   offspring is drawn from the population frequencies; an inviable
//!   zygote dies unborn and the attempt changes nothing, otherwise a
//!   uniform individual dies and the offspring takes its place (so a
//!   fraction `w` of attempts succeed, realizing the mean fitness, and the
//!   per-generation frequency drift matches the deterministic field);
//! * mutation per copy at its target rate (state 3 loses one of three
//!   targets at rate `b` each; single-function states lose their remaining
//!   function at rate `2b`).  A mutation that would make its carrier
//!   inviable is lethal: the carrier dies and is immediately replaced by a
//!   viable random-union offspring drawn from the pre-event population.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::popsim::{AbsorptionOutcome, OutcomeKind};
use crate::subfunc::{SState, SubfuncParams};

/// The nine viable (gene-1, gene-2) state pairs.
pub const PAIR_STATES: [(u8, u8); 9] = [
    (3, 3),
    (3, 2),
    (3, 1),
    (3, 0),
    (2, 3),
    (2, 1),
    (1, 3),
    (1, 2),
    (0, 3),
];

#[inline]
fn viable(g1: u8, g2: u8) -> bool {
    (g1 | g2) == 3
}

fn pair_index(g1: u8, g2: u8) -> Option<usize> {
    PAIR_STATES.iter().position(|&(a, b)| a == g1 && b == g2)
}

/// Mutation rate of a single copy in units of `b`.
#[inline]
fn copy_rate_units(state: u8) -> f64 {
    match state {
        3 => 3.0,
        2 | 1 => 2.0,
        _ => 0.0,
    }
}

/// Possible results of mutating `state` through one chosen target.
fn mutation_targets(state: u8) -> &'static [u8] {
    match state {
        3 => &[2, 1, 0],
        2 | 1 => &[0],
        _ => &[],
    }
}

/// Population as counts over the nine viable pair states.
#[derive(Debug, Clone, PartialEq)]
pub struct MoranPopulation {
    counts: [u32; 9],
    n: u32,
    /// continuous time in generations (rate-`N` reproduction clock)
    pub time: f64,
    pub events: u64,
}

impl MoranPopulation {
    pub fn new(counts: [u32; 9]) -> Result<Self> {
        let n: u32 = counts.iter().sum();
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "moran_population",
                reason: "need at least two individuals".into(),
            });
        }
        Ok(Self {
            counts,
            n,
            time: 0.0,
            events: 0,
        })
    }

    /// Every individual carries the fully functional pair.
    pub fn full_function(n: u32) -> Result<Self> {
        let mut counts = [0u32; 9];
        counts[0] = n;
        Self::new(counts)
    }

    pub fn size(&self) -> u32 {
        self.n
    }

    pub fn counts(&self) -> &[u32; 9] {
        &self.counts
    }

    /// Marginal counts of gene-1 copy states, indexed by state 0..=3.
    pub fn gene1_marginal(&self) -> [u32; 4] {
        let mut m = [0u32; 4];
        for (i, &(g1, _)) in PAIR_STATES.iter().enumerate() {
            m[g1 as usize] += self.counts[i];
        }
        m
    }

    pub fn gene2_marginal(&self) -> [u32; 4] {
        let mut m = [0u32; 4];
        for (i, &(_, g2)) in PAIR_STATES.iter().enumerate() {
            m[g2 as usize] += self.counts[i];
        }
        m
    }

    /// Frequencies as the six-dimensional model state.
    pub fn frequencies(&self) -> SState {
        let m1 = self.gene1_marginal();
        let m2 = self.gene2_marginal();
        let n = self.n as f64;
        SState {
            x3: m1[3] as f64 / n,
            x2: m1[2] as f64 / n,
            x1: m1[1] as f64 / n,
            y3: m2[3] as f64 / n,
            y2: m2[2] as f64 / n,
            y1: m2[1] as f64 / n,
        }
    }

    /// Terminal classification, if the population is absorbed.
    pub fn classify(&self) -> Option<OutcomeKind> {
        let idx = |g1, g2| pair_index(g1, g2).unwrap();
        if self.counts[idx(0, 3)] == self.n {
            return Some(OutcomeKind::Gene1Lost);
        }
        if self.counts[idx(3, 0)] == self.n {
            return Some(OutcomeKind::Gene2Lost);
        }
        if self.counts[idx(2, 1)] == self.n || self.counts[idx(1, 2)] == self.n {
            return Some(OutcomeKind::Subfunctionalized);
        }
        None
    }

    /// Every individual satisfies the viability mask by construction; this
    /// re-checks the representation for tests.
    pub fn all_viable(&self) -> bool {
        PAIR_STATES
            .iter()
            .enumerate()
            .all(|(i, &(g1, g2))| self.counts[i] == 0 || viable(g1, g2))
    }

    fn total_mutation_units(&self) -> f64 {
        self.counts
            .iter()
            .zip(PAIR_STATES.iter())
            .map(|(&c, &(g1, g2))| c as f64 * (copy_rate_units(g1) + copy_rate_units(g2)))
            .sum()
    }

    fn sample_individual(&self, rng: &mut ChaCha12Rng) -> usize {
        let mut u = rng.gen::<f64>() * self.n as f64;
        for (i, &c) in self.counts.iter().enumerate() {
            u -= c as f64;
            if u <= 0.0 && c > 0 {
                return i;
            }
        }
        self.counts.iter().rposition(|&c| c > 0).unwrap()
    }

    fn draw_gamete(&self, m: &[u32; 4], rng: &mut ChaCha12Rng) -> u8 {
        let mut u = rng.gen::<f64>() * self.n as f64;
        for s in 0..4 {
            u -= m[s] as f64;
            if u <= 0.0 && m[s] > 0 {
                return s as u8;
            }
        }
        (0..4).rev().find(|&s| m[s] > 0).unwrap() as u8
    }

    /// One random union of gametes from the current marginals; may be
    /// inviable.
    fn random_union(&self, rng: &mut ChaCha12Rng) -> (u8, u8) {
        let m1 = self.gene1_marginal();
        let m2 = self.gene2_marginal();
        (self.draw_gamete(&m1, rng), self.draw_gamete(&m2, rng))
    }

    /// Random union conditioned on viability (used to refill after a lethal
    /// mutation, where the population must stay at size `N`).
    fn conditioned_offspring(&self, rng: &mut ChaCha12Rng) -> usize {
        loop {
            let (g1, g2) = self.random_union(rng);
            if viable(g1, g2) {
                return pair_index(g1, g2).unwrap();
            }
        }
    }

    /// Advance one event (reproduction or mutation); the exponential clock
    /// advances in generations.
    pub fn step(&mut self, p: &SubfuncParams, rng: &mut ChaCha12Rng) {
        let rep_rate = self.n as f64;
        let mut_rate = p.b * self.total_mutation_units();
        let total = rep_rate + mut_rate;
        // exponential holding time on the generation clock
        let u: f64 = rng.gen::<f64>();
        self.time += -(1.0 - u).ln() / total;
        self.events += 1;

        if rng.gen::<f64>() * total < rep_rate {
            // reproduction attempt: an inviable zygote dies unborn and the
            // attempt changes nothing
            let (g1, g2) = self.random_union(rng);
            if viable(g1, g2) {
                let offspring = pair_index(g1, g2).unwrap();
                let victim = self.sample_individual(rng);
                self.counts[victim] -= 1;
                self.counts[offspring] += 1;
            }
            return;
        }

        // mutation: choose carrier pair weighted by per-pair rate units
        let total_units = self.total_mutation_units();
        let mut u = rng.gen::<f64>() * total_units;
        let mut carrier = usize::MAX;
        for (i, &c) in self.counts.iter().enumerate() {
            let (g1, g2) = PAIR_STATES[i];
            let w = c as f64 * (copy_rate_units(g1) + copy_rate_units(g2));
            u -= w;
            if u <= 0.0 && w > 0.0 {
                carrier = i;
                break;
            }
        }
        if carrier == usize::MAX {
            carrier = self
                .counts
                .iter()
                .enumerate()
                .rev()
                .find(|&(i, &c)| {
                    let (g1, g2) = PAIR_STATES[i];
                    c > 0 && copy_rate_units(g1) + copy_rate_units(g2) > 0.0
                })
                .map(|(i, _)| i)
                .unwrap();
        }
        let (g1, g2) = PAIR_STATES[carrier];
        // which copy mutates, weighted by its rate
        let r1 = copy_rate_units(g1);
        let r2 = copy_rate_units(g2);
        let first_copy = rng.gen::<f64>() * (r1 + r2) < r1;
        let (state, other) = if first_copy { (g1, g2) } else { (g2, g1) };
        let targets = mutation_targets(state);
        let new_state = targets[rng.gen_range(0..targets.len())];
        let (n1, n2) = if first_copy {
            (new_state, other)
        } else {
            (other, new_state)
        };
        if viable(n1, n2) {
            self.counts[carrier] -= 1;
            self.counts[pair_index(n1, n2).unwrap()] += 1;
        } else {
            // lethal: the carrier dies and is replaced from the pre-event pool
            let offspring = self.conditioned_offspring(rng);
            self.counts[carrier] -= 1;
            self.counts[offspring] += 1;
        }
    }

    /// Run events until the population absorbs or `cap` generations elapse.
    pub fn run_to_absorption(
        mut self,
        p: &SubfuncParams,
        cap_generations: f64,
        rng: &mut ChaCha12Rng,
    ) -> AbsorptionOutcome {
        loop {
            if let Some(kind) = self.classify() {
                return AbsorptionOutcome {
                    kind,
                    time: self.time,
                    events: self.events,
                };
            }
            if self.time >= cap_generations {
                return AbsorptionOutcome {
                    kind: OutcomeKind::Censored,
                    time: self.time,
                    events: self.events,
                };
            }
            self.step(p, rng);
        }
    }
}

/// Exact one-event (embedded jump chain) transition kernel over count
/// states; usable for small populations.
pub fn moran_transition_kernel(
    pop: &MoranPopulation,
    p: &SubfuncParams,
) -> Vec<([u32; 9], f64)> {
    let n = pop.n as f64;
    let rep_rate = n;
    let mut_units = pop.total_mutation_units();
    let total = rep_rate + p.b * mut_units;

    let m1 = pop.gene1_marginal();
    let m2 = pop.gene2_marginal();
    // raw random-union distribution over the nine viable pairs; its total
    // mass is the mean fitness, and the inviable remainder aborts the
    // attempt
    let mut offspring_raw = [0.0_f64; 9];
    let mut viable_mass = 0.0;
    for (k, &(g1, g2)) in PAIR_STATES.iter().enumerate() {
        let pr = (m1[g1 as usize] as f64 / n) * (m2[g2 as usize] as f64 / n);
        offspring_raw[k] = pr;
        viable_mass += pr;
    }
    let offspring: Vec<f64> = offspring_raw.iter().map(|v| v / viable_mass).collect();

    let mut out: std::collections::HashMap<[u32; 9], f64> = std::collections::HashMap::new();
    let mut add = |counts: [u32; 9], pr: f64| {
        if pr > 0.0 {
            *out.entry(counts).or_insert(0.0) += pr;
        }
    };

    // reproduction channel: failed attempts leave the state unchanged
    let p_rep = rep_rate / total;
    add(pop.counts, p_rep * (1.0 - viable_mass));
    for victim in 0..9 {
        let pv = pop.counts[victim] as f64 / n;
        if pv == 0.0 {
            continue;
        }
        for (child, &pc) in offspring_raw.iter().enumerate() {
            if pc == 0.0 {
                continue;
            }
            let mut c = pop.counts;
            c[victim] -= 1;
            c[child] += 1;
            add(c, p_rep * pv * pc);
        }
    }

    // mutation channels
    for (carrier, &(g1, g2)) in PAIR_STATES.iter().enumerate() {
        let count = pop.counts[carrier];
        if count == 0 {
            continue;
        }
        for (first_copy, state, other) in [(true, g1, g2), (false, g2, g1)] {
            let units = copy_rate_units(state);
            if units == 0.0 {
                continue;
            }
            let targets = mutation_targets(state);
            // the copy's total rate (units * b) splits evenly over targets
            let p_target = count as f64 * p.b * units / (targets.len() as f64 * total);
            for &t in targets {
                let (n1, n2) = if first_copy { (t, other) } else { (other, t) };
                if viable(n1, n2) {
                    let mut c = pop.counts;
                    c[carrier] -= 1;
                    c[pair_index(n1, n2).unwrap()] += 1;
                    add(c, p_target);
                } else {
                    for (child, &pc) in offspring.iter().enumerate() {
                        if pc == 0.0 {
                            continue;
                        }
                        let mut c = pop.counts;
                        c[carrier] -= 1;
                        c[child] += 1;
                        add(c, p_target * pc);
                    }
                }
            }
        }
    }

    out.into_iter().collect()
}

/// Comparison of empirical per-generation frequency increments against the
/// deterministic field, coordinate by coordinate.
#[derive(Debug, Clone)]
pub struct MomentTestReport {
    pub window: f64,
    pub replicates: usize,
    /// per coordinate: (empirical mean increment, standard error, reference)
    pub coords: [(f64, f64, f64); 6],
}

impl MomentTestReport {
    pub fn max_sigmas(&self) -> f64 {
        self.coords
            .iter()
            .map(|&(m, se, f)| ((m - f) / se).abs())
            .fold(0.0, f64::max)
    }
}

/// Moment test: empirical mean frequency increments over a fraction of a
/// generation versus the deterministic flow from the same start.
pub fn moran_moment_test(
    start: &MoranPopulation,
    p: &SubfuncParams,
    window: f64,
    replicates: usize,
    seed: u64,
) -> Result<MomentTestReport> {
    use rayon::prelude::*;
    let s0 = start.frequencies();
    // deterministic reference over the window from the realized start
    let reference = crate::sim::ode::subfunc_trajectory(&s0, p, window, window / 64.0, 64)?;
    let target = reference.terminal();
    let base = s0.as_array();

    let sums: Vec<[f64; 6]> = (0..replicates as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = crate::rng::replicate_rng(seed, k);
            let mut pop = start.clone();
            while pop.time < window {
                if pop.classify().is_some() {
                    break;
                }
                pop.step(p, &mut rng);
            }
            let f = pop.frequencies().as_array();
            let mut d = [0.0; 6];
            for i in 0..6 {
                d[i] = f[i] - base[i];
            }
            d
        })
        .collect();

    let n = replicates as f64;
    let mut coords = [(0.0, 0.0, 0.0); 6];
    for i in 0..6 {
        let mean = sums.iter().map(|d| d[i]).sum::<f64>() / n;
        let var = sums.iter().map(|d| (d[i] - mean) * (d[i] - mean)).sum::<f64>() / (n - 1.0);
        coords[i] = (mean, (var / n).sqrt(), target[i] - base[i]);
    }
    Ok(MomentTestReport {
        window,
        replicates,
        coords,
    })
}

/// Deterministic construction of a population with approximately the given
/// pair distribution (largest-remainder apportionment of the
/// viability-conditioned product).
pub fn population_from_frequencies(
    n: u32,
    s: &SState,
    _p: &SubfuncParams,
) -> Result<MoranPopulation> {
    let m1 = [s.x0(), s.x1, s.x2, s.x3];
    let m2 = [s.y0(), s.y1, s.y2, s.y3];
    let mut weights = [0.0_f64; 9];
    let mut mass = 0.0;
    for (k, &(g1, g2)) in PAIR_STATES.iter().enumerate() {
        weights[k] = m1[g1 as usize] * m2[g2 as usize];
        mass += weights[k];
    }
    if mass <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "frequencies",
            reason: "no viable pair has positive probability".into(),
        });
    }
    let mut counts = [0u32; 9];
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(9);
    let mut assigned = 0u32;
    for k in 0..9 {
        let ideal = n as f64 * weights[k] / mass;
        let floor = ideal.floor() as u32;
        counts[k] = floor;
        assigned += floor;
        remainders.push((k, ideal - floor as f64));
    }
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    for (k, _) in remainders {
        if assigned == n {
            break;
        }
        counts[k] += 1;
        assigned += 1;
    }
    MoranPopulation::new(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replicate_rng;
    use crate::subfunc::ode_field;

    #[test]
    fn full_function_with_zero_rate_is_static() {
        let p = SubfuncParams { b: 0.0 };
        let mut pop = MoranPopulation::full_function(30).unwrap();
        let mut rng = replicate_rng(1, 0);
        for _ in 0..200 {
            pop.step(&p, &mut rng);
            assert_eq!(pop.counts()[0], 30);
        }
    }

    #[test]
    fn subfunctionalized_state_is_absorbing_in_distribution() {
        let p = SubfuncParams::new(1e-2).unwrap();
        let mut counts = [0u32; 9];
        counts[pair_index(2, 1).unwrap()] = 25;
        let mut pop = MoranPopulation::new(counts).unwrap();
        assert_eq!(pop.classify(), Some(OutcomeKind::Subfunctionalized));
        let mut rng = replicate_rng(2, 0);
        for _ in 0..500 {
            pop.step(&p, &mut rng);
            assert!(pop.all_viable());
            // mutations are lethal and replacements re-draw (2,1): frozen
            assert_eq!(pop.counts()[pair_index(2, 1).unwrap()], 25);
        }
    }

    #[test]
    fn gene1_lost_detected_immediately() {
        let mut counts = [0u32; 9];
        counts[pair_index(0, 3).unwrap()] = 10;
        let pop = MoranPopulation::new(counts).unwrap();
        assert_eq!(pop.classify(), Some(OutcomeKind::Gene1Lost));
    }

    #[test]
    fn viability_invariant_along_paths() {
        let p = SubfuncParams::new(5e-3).unwrap();
        let mut pop = MoranPopulation::full_function(40).unwrap();
        let mut rng = replicate_rng(3, 0);
        for _ in 0..5000 {
            pop.step(&p, &mut rng);
            assert_eq!(pop.counts().iter().sum::<u32>(), 40);
        }
        assert!(pop.all_viable());
    }

    #[test]
    fn no_back_mutation() {
        // every mutation target is a strictly smaller bitmask; nothing
        // regains a lost function
        for state in 0u8..=3 {
            for &t in mutation_targets(state) {
                assert!(t & !state == 0 && t != state, "{state} -> {t}");
            }
        }
        // and the rate bookkeeping matches the target structure
        assert_eq!(copy_rate_units(3), 3.0);
        assert_eq!(copy_rate_units(2), 2.0);
        assert_eq!(copy_rate_units(1), 2.0);
        assert_eq!(copy_rate_units(0), 0.0);
    }

    #[test]
    fn kernel_is_a_distribution() {
        let p = SubfuncParams::new(1e-2).unwrap();
        let mut counts = [0u32; 9];
        counts[0] = 1;
        counts[5] = 1;
        let pop = MoranPopulation::new(counts).unwrap();
        let kernel = moran_transition_kernel(&pop, &p);
        let total: f64 = kernel.iter().map(|&(_, pr)| pr).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    /// Independent enumeration of the one-event kernel at N = 2 by walking
    /// every (channel, victim slot, gamete slot pair, mutation target)
    /// combination of the microscopic rules.
    fn enumerated_kernel_n2(pop: &MoranPopulation, p: &SubfuncParams) -> Vec<([u32; 9], f64)> {
        // expand to individuals
        let mut individuals: Vec<(u8, u8)> = Vec::new();
        for (i, &c) in pop.counts().iter().enumerate() {
            for _ in 0..c {
                individuals.push(PAIR_STATES[i]);
            }
        }
        let n = individuals.len();
        assert_eq!(n, 2);
        let rep_rate = n as f64;
        let mut_units: f64 = individuals
            .iter()
            .map(|&(g1, g2)| copy_rate_units(g1) + copy_rate_units(g2))
            .sum();
        let total = rep_rate + p.b * mut_units;

        // enumerate random unions by gamete slots: raw (attempt) and
        // conditioned (lethal refill) distributions
        let mut raw_children: Vec<(usize, f64)> = Vec::new();
        let mut viable_mass = 0.0;
        {
            let mut acc = vec![0.0_f64; 9];
            for &(g1, _) in &individuals {
                for &(_, h2) in &individuals {
                    let pr = 1.0 / (n * n) as f64;
                    if viable(g1, h2) {
                        acc[pair_index(g1, h2).unwrap()] += pr;
                        viable_mass += pr;
                    }
                }
            }
            for (i, v) in acc.into_iter().enumerate() {
                if v > 0.0 {
                    raw_children.push((i, v));
                }
            }
        }
        let children: Vec<(usize, f64)> = raw_children
            .iter()
            .map(|&(i, v)| (i, v / viable_mass))
            .collect();

        let mut out: std::collections::HashMap<[u32; 9], f64> = std::collections::HashMap::new();
        {
            // failed attempts leave the counts unchanged
            *out.entry(pop.counts).or_insert(0.0) += (rep_rate / total) * (1.0 - viable_mass);
        }
        let mut add = |mut counts: [u32; 9], from: usize, to: usize, pr: f64| {
            counts[from] -= 1;
            counts[to] += 1;
            *out.entry(counts).or_insert(0.0) += pr;
        };

        // successful attempts: victim uniform over the two slots
        for &(g1, g2) in &individuals {
            let victim = pair_index(g1, g2).unwrap();
            for &(child, pc) in &raw_children {
                add(pop.counts, victim, child, (rep_rate / total) * (1.0 / n as f64) * pc);
            }
        }
        // mutations per individual per copy per target
        for &(g1, g2) in &individuals {
            let carrier = pair_index(g1, g2).unwrap();
            for (state, other, first) in [(g1, g2, true), (g2, g1, false)] {
                let targets = mutation_targets(state);
                for &t in targets {
                    let pr = p.b * copy_rate_units(state) / (targets.len() as f64 * total);
                    let (n1, n2) = if first { (t, other) } else { (other, t) };
                    if viable(n1, n2) {
                        add(pop.counts, carrier, pair_index(n1, n2).unwrap(), pr);
                    } else {
                        for &(child, pc) in &children {
                            add(pop.counts, carrier, child, pr * pc);
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn kernel_matches_enumeration_at_n2() {
        let p = SubfuncParams::new(0.02).unwrap();
        let starts: Vec<[usize; 2]> = vec![[0, 0], [0, 5], [1, 7], [4, 5], [3, 8], [2, 6]];
        for pair in starts {
            let mut counts = [0u32; 9];
            for idx in pair {
                counts[idx] += 1;
            }
            let pop = MoranPopulation::new(counts).unwrap();
            let got = moran_transition_kernel(&pop, &p);
            let oracle = enumerated_kernel_n2(&pop, &p);
            let lookup: std::collections::HashMap<[u32; 9], f64> =
                got.into_iter().collect();
            let mut total = 0.0;
            for (state, pr) in oracle {
                let g = lookup.get(&state).copied().unwrap_or(0.0);
                assert!(
                    (g - pr).abs() <= 1e-12,
                    "state {state:?} from {pair:?}: {g} vs {pr}"
                );
                total += pr;
            }
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn moment_test_matches_deterministic_field_loosely() {
        // quick smoke version of the acceptance moment test at small size
        let p = SubfuncParams::new(1e-2).unwrap();
        let s = SState::new(0.5, 0.12, 0.08, 0.55, 0.1, 0.09).unwrap();
        let pop = population_from_frequencies(300, &s, &p).unwrap();
        let rep = moran_moment_test(&pop, &p, 0.25, 300, 77).unwrap();
        assert!(
            rep.max_sigmas() < 4.0,
            "max deviation {} sigmas; coords {:?}",
            rep.max_sigmas(),
            rep.coords
        );
    }

    #[test]
    fn run_to_absorption_trivial_starts() {
        let p = SubfuncParams::new(1e-2).unwrap();
        let mut counts = [0u32; 9];
        counts[pair_index(0, 3).unwrap()] = 8;
        let pop = MoranPopulation::new(counts).unwrap();
        let mut rng = replicate_rng(5, 0);
        let out = pop.run_to_absorption(&p, 1e6, &mut rng);
        assert_eq!(out.kind, OutcomeKind::Gene1Lost);
        assert_eq!(out.time, 0.0);

        let mut counts = [0u32; 9];
        counts[pair_index(2, 1).unwrap()] = 8;
        let pop = MoranPopulation::new(counts).unwrap();
        let out = pop.run_to_absorption(&p, 1e6, &mut rng);
        assert_eq!(out.kind, OutcomeKind::Subfunctionalized);
        assert_eq!(out.time, 0.0);
    }

    #[test]
    fn field_matches_eq6_structure() {
        // the deterministic field used as the moment-test reference is the
        // one the population approximates; sanity-check one coordinate sign
        let p = SubfuncParams::new(1e-2).unwrap();
        let pop = MoranPopulation::full_function(100).unwrap();
        let f = ode_field(&pop.frequencies(), &p);
        assert!(f[0] < 0.0, "x3 declines from fixation under mutation");
    }
}
