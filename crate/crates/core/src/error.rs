use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode basis must contain at least one label")]
    EmptyBasis,
    #[error("mode label must be non-empty")]
    EmptyLabel,
    #[error("duplicate mode label `{0}`")]
    DuplicateLabel(String),
    #[error("subsystem bases overlap on label `{0}`")]
    BasisConflict(String),
    #[error("operands are defined on different mode bases")]
    BasisMismatch,
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("unknown mode label `{0}`")]
    UnknownLabel(String),
    #[error("operation requires a composite two-subsystem basis")]
    NotComposite,
    #[error("operation requires a two-mode basis, found {0} modes")]
    NotTwoMode(usize),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("density matrix trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("density matrix has negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),
    #[error("cannot compose an empty operator list")]
    EmptyComposition,
    #[error("fixed-phase fit is degenerate (residual {0:e})")]
    DegenerateFit(f64),
    #[error("tally holds no trials")]
    EmptyTally,
    #[error("tally is missing outcome `{0}`")]
    MissingOutcome(String),
    #[error("number of trials must be at least 1")]
    NoTrials,
    #[error("CHSH settings must be distinct per station: {0}")]
    DegenerateSettings(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
