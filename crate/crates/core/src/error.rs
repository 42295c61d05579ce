use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("division by an interval containing zero: [{lo}, {hi}]")]
    DivisionByZero { lo: f64, hi: f64 },

    #[error("{function} is undefined on [{lo}, {hi}]")]
    Domain {
        function: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("invalid range [{a}, {b})")]
    InvalidRange { a: u64, b: u64 },

    #[error("range of {span} integers exceeds the list budget of {budget}; segment the request")]
    RangeTooLarge { span: u64, budget: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("corrupt census data: {0}")]
    CorruptData(String),

    #[error("splice mismatch: {0}")]
    Splice(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("no admissible k1 at cutoff {cutoff}: {reason}")]
    NoAdmissibleK1 { cutoff: u64, reason: String },

    #[error("F(x0) is not positive at log x0 = {log_x0}; choose a larger x0")]
    NonPositiveF { log_x0: f64 },

    #[error("quadrature reached width {achieved:e} but the target is {target:e}")]
    QuadratureBudget { achieved: f64, target: f64 },

    #[error("non-rigorous input refused: {0}")]
    NonRigorous(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}
