use thiserror::Error;

/// Crate-wide error type.
///
/// The CLI maps `Validation`/`Unsupported`/`Json` to exit code 2 and the
/// runtime failures (`Numerical`, `ChartEscape`, `NoConvergence`,
/// `OutsideStrip`, `Domain`) to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("validation: {0}")]
    Validation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical: {0}")]
    Numerical(String),

    /// A point's forward/backward orbit left the local chart.
    #[error("orbit left the chart at step {step}")]
    ChartEscape { step: usize },

    /// Domain error of a closed-form map (e.g. B(xy) <= 0 inside the chart).
    #[error("domain: {0}")]
    Domain(String),

    #[error("Newton did not converge (residual {residual:.3e} after {iters} iterations)")]
    NoConvergence { residual: f64, iters: usize },

    /// Newton converged, but to a point outside the requested strip.
    #[error("root converged outside the target strip at ({x:.6e}, {y:.6e})")]
    OutsideStrip { x: f64, y: f64 },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit code the CLI should report for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Unsupported(_) | Error::Json(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
