use salem_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes, one per error class.
pub mod exit {
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NOT_PRIMITIVE: i32 = 3;
    pub const ELEMENT: i32 = 4;
    pub const NUMERIC: i32 = 5;
    pub const WINDOW: i32 = 6;
    pub const CASE: i32 = 7;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
    /// A core error forced into a given class, e.g. an η precondition.
    #[error("{1}")]
    Classified(i32, String),
}

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }

    pub fn element(msg: impl Into<String>) -> Self {
        CliError::Classified(exit::ELEMENT, msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Io { .. } => exit::IO,
            CliError::Classified(code, _) => *code,
            CliError::Core(e) => core_code(e),
        }
    }
}

pub fn core_code(e: &CoreError) -> i32 {
    match e {
        CoreError::NotPrimitive => exit::NOT_PRIMITIVE,
        CoreError::ParseElement(..) | CoreError::DegreeMismatch { .. } => exit::ELEMENT,
        CoreError::QuadratureNotConverged(_) | CoreError::SandwichViolation(..) => exit::NUMERIC,
        CoreError::WindowOutOfRange { .. } | CoreError::LengthCap { .. } => exit::WINDOW,
        CoreError::InvalidCase(_) => exit::CASE,
        _ => exit::CONFIG,
    }
}

pub type CliResult<T> = Result<T, CliError>;
