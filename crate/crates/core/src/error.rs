use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },
    #[error("sample count {got} does not match grid ({expected})")]
    LengthMismatch { expected: usize, got: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("operation requires the {required} backend")]
    BackendMismatch { required: &'static str },
    #[error("resolution n={n} exceeds the cost guard (n <= {max})")]
    CostGuard { n: usize, max: usize },
    #[error("blow-up detected at t={t}: {reason}")]
    BlowUp { t: f64, reason: String },
    #[error("time {0} is not a sampled instant of the trajectory")]
    UnsampledTime(f64),
    #[error("{0}")]
    Insufficient(String),
    #[error("rescaling loses {fraction:.3e} of the L2 mass (limit 1e-2)")]
    SupportLoss { fraction: f64 },
}

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
