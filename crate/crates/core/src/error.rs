use thiserror::Error;

/// Minimum number of observations accepted by any statistical operation.
pub const MIN_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series has {len} observations, at least {min} are required")]
    InsufficientLength { len: usize, min: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("labels have length {labels}, values have length {values}")]
    LabelMismatch { labels: usize, values: usize },

    #[error("every lagged regressor is zero; the LAD objective is constant in gamma")]
    AllLagsZero,

    #[error("lag_start must be 1 or 2, got {0}")]
    InvalidLagStart(usize),

    #[error("regressor cross-product matrix is numerically singular")]
    SingularDesign,

    #[error("all absolute residuals are zero")]
    DegenerateResiduals,

    #[error("estimated volatility is zero at index {index}")]
    ZeroVolatility { index: usize },

    #[error("invalid bandwidth {0}; must lie in (0, 1]")]
    InvalidBandwidth(f64),

    #[error("bandwidth grid is empty")]
    EmptyGrid,

    #[error("density bandwidth is zero (standard deviation and IQR both vanish)")]
    ZeroBandwidth,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid block length {block} for a pool of {pool} residuals")]
    InvalidBlockLength { block: usize, pool: usize },

    #[error("mapped residual index {index} lies outside the pool 1..={max}")]
    IndexOutOfPool { index: i64, max: usize },

    #[error("invalid subsample length m = {m} (pilot block {pilot}, n = {n})")]
    InvalidSubsampleLength { m: usize, pilot: usize, n: usize },

    #[error("|1 - sum of lag coefficients| is below 1e-6")]
    NearUnitDenominator,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid data-generating process: {0}")]
    InvalidDgp(String),

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl Error {
    /// Short machine-readable tag, used by the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InsufficientLength { .. } => "InsufficientLength",
            Error::NonFinite { .. } => "NonFinite",
            Error::LabelMismatch { .. } => "LabelMismatch",
            Error::AllLagsZero => "AllLagsZero",
            Error::InvalidLagStart(_) => "InvalidLagStart",
            Error::SingularDesign => "SingularDesign",
            Error::DegenerateResiduals => "DegenerateResiduals",
            Error::ZeroVolatility { .. } => "ZeroVolatility",
            Error::InvalidBandwidth(_) => "InvalidBandwidth",
            Error::EmptyGrid => "EmptyGrid",
            Error::ZeroBandwidth => "ZeroBandwidth",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::InvalidBlockLength { .. } => "InvalidBlockLength",
            Error::IndexOutOfPool { .. } => "IndexOutOfPool",
            Error::InvalidSubsampleLength { .. } => "InvalidSubsampleLength",
            Error::NearUnitDenominator => "NearUnitDenominator",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::InvalidDgp(_) => "InvalidDgp",
            Error::Csv(_) => "Csv",
        }
    }

    /// True for errors caused by malformed input rather than statistical preconditions.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Csv(_) | Error::NonFinite { .. } | Error::LabelMismatch { .. }
        )
    }
}

pub(crate) fn require_len(len: usize) -> Result<()> {
    if len < MIN_LEN {
        Err(Error::InsufficientLength { len, min: MIN_LEN })
    } else {
        Ok(())
    }
}

pub(crate) fn require_same_len(left: usize, right: usize) -> Result<()> {
    if left != right {
        Err(Error::LengthMismatch { left, right })
    } else {
        Ok(())
    }
}
