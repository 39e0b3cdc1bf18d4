use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("singular stencil: {0}")]
    SingularStencil(String),

    #[error("singular index: {0}")]
    SingularIndex(String),

    #[error("degenerate coefficient: {0}")]
    DegenerateCoefficient(String),

    #[error("propagation singularity: {0}")]
    PropagationSingularity(String),

    #[error("quadrilateral is not tangential (Pitot residual {pitot_residual:e})")]
    NotTangential { pitot_residual: f64 },

    #[error("solver did not converge after {iterations} iterations (max residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("malformed data: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors that mark a stencil as not evaluable (outside the window or the
    /// domain, or dividing by a vanishing factor). Sweeps count these as
    /// skipped instead of failing.
    pub fn is_skippable(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::SingularStencil(_)
                | Error::SingularIndex(_)
                | Error::DegenerateCoefficient(_)
                | Error::PropagationSingularity(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        domain(format!("{name} is not finite ({v})"))
    }
}
