use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least two objects, got {0}")]
    TooFewObjects(usize),

    #[error("triangle has {got} entries but {nobj} objects need {expected}")]
    TriangleLength {
        nobj: usize,
        expected: usize,
        got: usize,
    },

    #[error("negative entry {value} at ({i},{j})")]
    NegativeEntry { i: usize, j: usize, value: f64 },

    #[error("non-finite entry at ({i},{j})")]
    NonFiniteEntry { i: usize, j: usize },

    #[error("weights describe {weights} objects but dissimilarities describe {delta}")]
    ObjectCountMismatch { delta: usize, weights: usize },

    #[error("no observations left after dropping missing data")]
    NoObservations,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid MDS data: {0}")]
    InvalidData(String),

    #[error("weights are reducible: {} disconnected components", .0.len())]
    Reducible(Vec<Vec<usize>>),

    #[error("V + ee'/n is numerically singular at pivot {pivot}; weights are probably reducible")]
    SingularV { pivot: usize },

    #[error("Jacobi eigensolver did not converge in {0} sweeps")]
    NoConvergence(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("all disparities are zero")]
    DegenerateDisparities,

    #[error("all dissimilarities are zero")]
    ZeroDissimilarities,

    #[error("stress became non-finite at iteration {0}")]
    Diverged(usize),

    #[error("unknown color name {0:?}")]
    UnknownColor(String),

    #[error("plot: {0}")]
    Plot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for problems with the input data rather than the computation.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::TooFewObjects(_)
                | Error::TriangleLength { .. }
                | Error::NegativeEntry { .. }
                | Error::NonFiniteEntry { .. }
                | Error::ObjectCountMismatch { .. }
                | Error::NoObservations
                | Error::Parse { .. }
                | Error::InvalidData(_)
                | Error::Reducible(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}
