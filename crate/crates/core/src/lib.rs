//! Analytics and simulation for two gene-duplication diffusion models: a
//! two-locus double-recessive-null model and a six-dimensional
//! subfunctionalization model.  Both deterministic systems have a curve of
//! stable equilibria; the crate provides the curve machinery, the projection
//! maps onto it, the limiting one-dimensional diffusions along it with their
//! expected absorption times, stability analysis, and discrete-population
//! simulators.

pub mod diffusion;
pub mod error;
pub mod quad;
pub mod interp;
pub mod popsim;
pub mod rng;
pub mod sim;
pub mod subfunc;
pub mod watterson;

pub use diffusion::{Diffusion1D, ScaleOptions, ScaleSpeedTable};
pub use error::{Error, Result};
