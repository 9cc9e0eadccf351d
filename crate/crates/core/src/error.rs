use thiserror::Error;

pub type Result<T> = std::result::Result<T, LevyError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LevyError {
    #[error("Re(z) = {re} lies outside the open strip ({lo}, {hi}); offending bound {bound}")]
    StripViolation { re: f64, lo: f64, hi: f64, bound: f64 },

    #[error("model has no jump component")]
    NoJumps,

    #[error("parameter {name} = {value} violates {bound}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        bound: String,
    },

    #[error("frequency tail bound {tail:e} at u_max exceeds {limit:e}; raise u_max")]
    TruncationWarning { tail: f64, limit: f64 },

    #[error("operation requires a {expected} model, got {got}")]
    WrongFamily { expected: &'static str, got: &'static str },

    #[error("put at strike {strike} priced {price:e}, below the ratio floor")]
    DegeneratePut { strike: f64, price: f64 },

    #[error("spline needs at least {need} points, got {got}")]
    InsufficientPoints { need: usize, got: usize },

    #[error("evaluation at {x} outside knot range [{lo}, {hi}]")]
    ExtrapolationRequest { x: f64, lo: f64, hi: f64 },

    #[error("no report rows survived range filtering")]
    EmptyTable,

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("{0}")]
    InvalidInput(String),
}

impl LevyError {
    /// Short, stable identifier for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            LevyError::StripViolation { .. } => "StripViolation",
            LevyError::NoJumps => "NoJumps",
            LevyError::ParameterOutOfRange { .. } => "ParameterOutOfRange",
            LevyError::TruncationWarning { .. } => "TruncationWarning",
            LevyError::WrongFamily { .. } => "WrongFamily",
            LevyError::DegeneratePut { .. } => "DegeneratePut",
            LevyError::InsufficientPoints { .. } => "InsufficientPoints",
            LevyError::ExtrapolationRequest { .. } => "ExtrapolationRequest",
            LevyError::EmptyTable => "EmptyTable",
            LevyError::Format { .. } => "Format",
            LevyError::InvalidInput(_) => "InvalidInput",
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            LevyError::StripViolation { .. }
                | LevyError::TruncationWarning { .. }
                | LevyError::DegeneratePut { .. }
                | LevyError::ExtrapolationRequest { .. }
        )
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> LevyError {
    LevyError::InvalidInput(msg.into())
}
