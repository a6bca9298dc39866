//! Exact discrete population models: the Wright-Fisher double-recessive-null
//! model, the Moran subfunctionalization model, the single-lineage mutation
//! race, and the loss-probability decay scan.

pub mod lineage;
pub mod moran;
pub mod scan;
pub mod wright_fisher;

pub use lineage::{single_lineage_psub, single_lineage_race_mc, RaceEstimate};
pub use moran::{
    moran_moment_test, moran_transition_kernel, population_from_frequencies, MomentTestReport,
    MoranPopulation, PAIR_STATES,
};
pub use scan::{psub_decay_scan, ScanResult, ScanRow};
pub use wright_fisher::{wf_transition_kernel, WfPopulation, WfStep};

/// Terminal classification of a discrete-model replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeKind {
    Gene1Lost,
    Gene2Lost,
    Subfunctionalized,
    Censored,
}

impl OutcomeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutcomeKind::Gene1Lost => "gene1-lost",
            OutcomeKind::Gene2Lost => "gene2-lost",
            OutcomeKind::Subfunctionalized => "subfunctionalized",
            OutcomeKind::Censored => "censored",
        }
    }
}

/// Absorption record of one replicate; time in generations.
#[derive(Debug, Clone, Copy)]
pub struct AbsorptionOutcome {
    pub kind: OutcomeKind,
    pub time: f64,
    pub events: u64,
}
