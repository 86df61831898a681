use thiserror::Error;

/// Errors raised by the device, trajectory, circuit and sweep models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the domain of the formula that consumes it.
    #[error("domain error: {name} = {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A formula would divide by zero (e.g. zero domain-wall width or confinement).
    #[error("singular model: {0}")]
    Singularity(&'static str),

    /// The track is too narrow for the skyrmion and its edge margins.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Inconsistent configuration: bad layout, wrong gate arity, empty sweep axis...
    #[error("configuration error: {0}")]
    Config(String),

    /// The skyrmion position does not advance monotonically over a segment.
    #[error("skyrmion stalled: {0}")]
    Stalled(String),

    /// An operation was handed data it is not defined for.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// No feasible design point survived the sweep filters.
    #[error("no feasible design point")]
    NoFeasiblePoint,

    /// Config text could not be parsed.
    #[error("line {line}: {key}: {message}")]
    Parse {
        line: usize,
        key: String,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}
