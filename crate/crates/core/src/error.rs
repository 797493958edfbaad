//! Crate-wide error type and the process exit codes the CLI maps it to.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Expression text failed to parse; `pos` is a byte offset into the input.
    #[error("expression syntax error at byte {pos}: {msg}")]
    Expr { pos: usize, msg: String },

    /// A number literal (rational or decimal string) failed to parse.
    #[error("invalid number {text:?}: {msg}")]
    Number { text: String, msg: String },

    /// A single map violates its construction invariants.
    #[error("invalid map {which}: {}", violations.join("; "))]
    InvalidMap {
        which: String,
        violations: Vec<String>,
    },

    /// A four-map system violates the endpoint-matching conditions.
    #[error("invalid system {label:?}: {}", violations.join("; "))]
    InvalidSystem {
        label: String,
        violations: Vec<String>,
    },

    /// An argument is outside its mathematical domain (x, h, tol, vertex, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A depth argument exceeds the module's hard cap.
    #[error("depth {requested} exceeds the supported maximum {max}")]
    DepthExceeded { requested: usize, max: usize },

    /// Classification was requested for a pair shape no implemented
    /// criterion covers.
    #[error("no classification criterion applies: {0}")]
    NoTheorem(String),

    /// A classification routine was called on a pair that fails its
    /// precondition (e.g. the source system is not the halving system).
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Config file could not be read or does not describe a valid pair.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 validation/domain failure,
    /// 2 config or i/o error, 3 no classification criterion applies.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoTheorem(_) => 3,
            Error::Config(_) | Error::Io(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
