//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("point is not on the obstacle boundary")]
    NotOnBoundary,
    #[error("contact pair is not present on the slice boundary")]
    ContactNotInSlice,
    #[error("initial configuration penetrates the environment")]
    InvalidStart,
    #[error("degenerate belief: {0}")]
    DegenerateBelief(String),
    #[error("slice produced an empty contact graph")]
    EmptyGraph,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("no contact schedule reaches the goal")]
    NoSchedule,
    #[error("hyperparameter fit failed: {0}")]
    FitFailure(String),
    #[error("sampling produced no valid candidate motion")]
    SamplingFailure,
    #[error("motion feature is undefined at the rotation singularity")]
    FeatureSingularity,
    #[error("no plan found within the attempt budget")]
    NoPlan,
    #[error("particle {index}: {source}")]
    Particle {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps an error with the index of the belief particle it came from.
    pub fn for_particle(self, index: usize) -> Error {
        Error::Particle {
            index,
            source: Box::new(self),
        }
    }
}
