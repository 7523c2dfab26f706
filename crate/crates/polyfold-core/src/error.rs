//! One error type for the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input polyhedron is unbounded (nontrivial recession cone)")]
    UnboundedInput,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("glued ridge copies are not congruent: {0}")]
    GluingMismatch(String),
    #[error("not a pseudomanifold: {0}")]
    NotPseudomanifold(String),
    #[error("nonpositive curvature: total angle {angle} at vertex {vertex} is >= 2*pi")]
    NonPositiveCurvature { vertex: String, angle: f64 },
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("facets {0} and {1} do not share a ridge")]
    NotAdjacent(usize, usize),
    #[error("invalid facet sequence: {0}")]
    InvalidSequence(String),
    #[error("point is not a member of the generator set")]
    NotAMember,
    #[error("ridge {ridge} is not a ridge of facet {facet}")]
    NotARidgeOfFacet { ridge: usize, facet: usize },
    #[error("intersection is empty")]
    EmptyIntersection,
    #[error("not a partial jet frame: {0}")]
    NotAJetFrame(String),
    #[error("vector is not an outer support vector (max violation {0:.3e})")]
    NotOuterSupport(f64),
    #[error("too many tied jet frames (cap {0})")]
    TooManyTies(usize),
    #[error("source point lies on a face of dimension <= d-2")]
    SourceOnWarpedFace,
    #[error("empty set")]
    EmptySet,
    #[error("potential event is not minimal")]
    NotMinimal,
    #[error("iteration cap of {0} events exceeded")]
    IterationCapExceeded(usize),
    #[error("event with sequence {0:?} has no parent in the log")]
    OrphanEvent(Vec<usize>),
    #[error("point lies outside facet {facet} (worst slack {slack:.3e})")]
    PointOutsideFacet { facet: usize, slack: f64 },
    #[error("no valid path found within the sequence length bound")]
    NoPathFound,
    #[error("duplicate source points")]
    DuplicateSources,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Split errors into input-validation failures and numeric/runtime
    /// failures. The command-line tool maps these to exit codes 2 and 3.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::UnboundedInput
                | Error::DegenerateInput(_)
                | Error::GluingMismatch(_)
                | Error::NotPseudomanifold(_)
                | Error::NonPositiveCurvature { .. }
                | Error::EmptyPolyhedron
                | Error::NotAdjacent(..)
                | Error::InvalidSequence(_)
                | Error::NotAMember
                | Error::NotARidgeOfFacet { .. }
                | Error::SourceOnWarpedFace
                | Error::PointOutsideFacet { .. }
                | Error::DuplicateSources
                | Error::Parse(_)
                | Error::Io(_)
        )
    }
}
