use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },

    #[error("coefficient field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{0} is not an odd prime below 2^63")]
    InvalidModulus(u64),

    #[error("matrix is singular (rank {rank} of {size})")]
    SingularMatrix { rank: usize, size: usize },

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("series with zero constant term is not invertible")]
    NonUnit,

    #[error("invalid straight-line program: {0}")]
    InvalidProgram(String),

    #[error("gradient needs a single-output program, got {0} outputs")]
    MultiOutput(usize),

    #[error("base point is not a root of the system at e = 0 (component {index} evaluates to {value})")]
    NotARoot { index: usize, value: String },

    #[error("Jacobian is singular at the base point (rank {rank} of {size})")]
    SingularJacobian { rank: usize, size: usize },

    #[error("no regular point found after {attempts} draws (last point tried: {last_point})")]
    RegularPointNotFound { attempts: usize, last_point: String },

    #[error("collocation matrix stayed singular after {attempts} samples")]
    InterpolationSingular { attempts: usize },

    #[error("rewrite does not reproduce the target; f_new(u) - f = {residual}")]
    VerificationFailed { residual: String },

    #[error("unknown generator family `{0}`")]
    UnknownFamily(String),
}
