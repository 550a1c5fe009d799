use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{name} = {value} is out of range: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The mode sits on a level crossing; its Bogoliubov angle is undefined.
    #[error("gapless point at k = {k} (B = {field}, alpha = {alpha})")]
    Gapless { k: f64, field: f64, alpha: f64 },

    #[error("integration failed at t = {t}: step size {step:e} underflowed")]
    StepUnderflow { t: f64, step: f64 },

    #[error("integration failed: exceeded {0} steps")]
    TooManySteps(usize),

    #[error("norm drifted by {drift:e} during evolution (limit {limit:e})")]
    NormDrift { drift: f64, limit: f64 },

    #[error("power-law fit failed: {0}")]
    Fit(String),

    /// Dense 2^N construction is capped at desk scale.
    #[error("N = {0} is unsupported by the dense oracle (odd N in 3..=13)")]
    Resource(usize),

    #[error("quasi-degenerate ground state at phi = {phi}: gap {gap:e} < {tol:e}")]
    Degenerate { phi: f64, gap: f64, tol: f64 },

    #[error("overlap {overlap:e} between loop points {index} and {next} vanishes; refine the loop")]
    VanishingOverlap {
        index: usize,
        next: usize,
        overlap: f64,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }
}
