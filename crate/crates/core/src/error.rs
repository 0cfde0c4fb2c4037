use thiserror::Error;

/// Errors produced by the depth, estimation and experiment routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input sample")]
    EmptyInput,

    #[error("degenerate scale: MAD is zero")]
    DegenerateScale,

    #[error("all depth weights are zero")]
    ZeroWeightSum,

    #[error("no observation has a nonzero projection on this direction")]
    NoValidResiduals,

    #[error("every direction in the set was degenerate")]
    AllDirectionsDegenerate,

    #[error("could not find a nonsingular {p}-subset after {attempts} draws")]
    NoNonsingularSubset { p: usize, attempts: usize },

    #[error("design matrix is rank deficient")]
    RankDeficient,

    #[error("unsupported dimension p = {p} (expected {expected})")]
    UnsupportedDimension { p: usize, expected: usize },

    #[error("contamination fraction {0} outside [0, 1/2)")]
    EpsilonOutOfRange(f64),

    #[error("root finding did not converge: {0}")]
    RootFindFailure(String),

    #[error("no analytic ratio density for this distribution pair")]
    UnsupportedDistPair,

    #[error("dimension p = {p} too large for n = {n} (need p < floor(n/2) + 2)")]
    DimensionTooLarge { n: usize, p: usize },

    #[error("scenario '{0}' needs a data file (pass --data <csv> or --synthetic)")]
    MissingDataset(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    /// True for failures caused by numerically degenerate data rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateScale
                | Error::ZeroWeightSum
                | Error::NoValidResiduals
                | Error::AllDirectionsDegenerate
                | Error::NoNonsingularSubset { .. }
                | Error::RankDeficient
                | Error::RootFindFailure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
