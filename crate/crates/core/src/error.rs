use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyEdgeSet,

    #[error("edge ({0}, {1}) has an endpoint outside the vertex range")]
    VertexOutOfRange(usize, usize),

    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex {0} is isolated (degree 0)")]
    IsolatedVertex(usize),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Jacobi eigensolver did not converge in {0} sweeps")]
    NoConvergence(usize),

    #[error("penalty bisection failed: {0}")]
    BracketFailure(String),

    #[error("agent {agent}: missing value from neighbor {neighbor}")]
    MissingNeighbor { agent: usize, neighbor: usize },

    #[error("agent {agent}: unexpected value from non-neighbor {sender}")]
    UnexpectedSender { agent: usize, sender: usize },

    #[error("incomplete measurement set: no entry for ordered pair ({0}, {1})")]
    MissingMeasurement(usize, usize),

    #[error("invalid scheme configuration: {0}")]
    InvalidConfig(String),

    #[error("effective rate undefined: {0}")]
    RateUndefined(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Numerical failures are the ones that signal a defect in the spectral
    /// machinery rather than bad user input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_) | Error::BracketFailure(_) | Error::NotSymmetric(_)
        )
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Csv(_))
    }
}
