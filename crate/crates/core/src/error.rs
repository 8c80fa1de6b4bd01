use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to parse {what}: {message}")]
    Parse { what: &'static str, message: String },

    #[error("building {index}: degenerate box, min must be strictly below max on every axis")]
    DegenerateBox { index: usize },

    #[error("building {index}: base height {z} is below ground")]
    NegativeBase { index: usize, z: f64 },

    #[error("non-finite coordinate in {what}")]
    NonFinite { what: &'static str },

    #[error("{role} position lies inside building {index}")]
    InsideBuilding { role: &'static str, index: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("distance {d} m is below the 1 m reference distance")]
    BelowReferenceDistance { d: f64 },

    #[error("curves do not share a radius grid")]
    GridMismatch,

    #[error("no valid curve sample at radius {radius} m")]
    NoValidSample { radius: f64 },

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by malformed or inconsistent input, as opposed
    /// to numerical failures on well-formed input.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::InsufficientData(_) | Error::NoValidSample { .. })
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
