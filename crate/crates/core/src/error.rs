use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("mode {mode} out of range for order-{order} tensor")]
    ModeOutOfRange { mode: usize, order: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("SVD did not converge")]
    SvdNoConvergence,

    #[error("matrix is singular or too ill-conditioned (condition number {condition:.3e})")]
    Singular { condition: f64 },

    #[error("measurement consistency check failed: relative mismatch {mismatch:.3e}")]
    Inconsistent { mismatch: f64 },

    #[error("error bound undefined: {0}")]
    BoundUndefined(String),

    #[error("PSNR undefined: peak value {peak} is not positive")]
    PsnrUndefined { peak: f64 },

    #[error("malformed TEN1 data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SvdNoConvergence
                | Error::Singular { .. }
                | Error::Inconsistent { .. }
                | Error::BoundUndefined(_)
                | Error::PsnrUndefined { .. }
        )
    }
}
