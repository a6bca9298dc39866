//! Trajectory-level numerics: deterministic integration, Euler-Maruyama
//! integration of the two frequency diffusions, and the Monte Carlo
//! experiments built on them.

pub mod exit;
pub mod ode;
pub mod sde;

pub use exit::{mc_exit_time_1d, ExitTimeEstimate};
pub use ode::{subfunc_trajectory, watterson_trajectory, OdeRun};
pub use sde::{
    integrate_sde, theorem1_experiment, SdeModel, SdeOutcome, SdePathStat, SdeRun,
    Theorem1Row,
};
