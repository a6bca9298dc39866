use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("input outside the operation's domain: {0}")]
    OutOfDomain(String),

    #[error("negative discriminant solving the equilibrium quadratic at x3={x3}, b={b}")]
    NegativeDiscriminant { x3: f64, b: f64 },

    #[error("projection denominator vanished at r={r}")]
    SingularProjection { r: f64 },

    #[error("quadrature failed near y={location}: {reason}")]
    QuadratureFailure { location: f64, reason: String },

    #[error("simulation became unstable at t={t}: {reason}")]
    Instability { t: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
