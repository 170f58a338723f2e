use thiserror::Error;

use crate::bloch::BlochError;
use crate::ode::OdeError;
use crate::physkit::ParamError;
use crate::quadrature::QuadError;
use crate::scan::{ConfigError, FitError, ReadError};
use crate::vaporflux::FluxError;

/// Any error raised by the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Bloch(#[from] BlochError),
    #[error(transparent)]
    Flux(#[from] FluxError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<OdeError> for Error {
    fn from(e: OdeError) -> Self {
        Error::Bloch(e.into())
    }
}

impl Error {
    /// True when a numerical method failed to reach its tolerance.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(
            self,
            Error::Quadrature(_)
                | Error::Bloch(BlochError::Integration(_))
                | Error::Flux(FluxError::Quadrature(_))
                | Error::Fit(FitError::NotConverged { .. })
        )
    }

    /// Process exit status: 2 for non-convergence, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        if self.is_convergence_failure() {
            2
        } else {
            1
        }
    }
}
