use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid diagonal: {0}")]
    InvalidDiagonal(String),
    #[error("({0}, {1}) is not a diagonal of the triangulation")]
    NotADiagonal(usize, usize),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("polygon parameters differ: {0} vs {1}")]
    MismatchedPolygon(usize, usize),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("the mutable part of the quiver has a directed cycle")]
    NotAcyclic,
    #[error("resource guard exceeded: {0}")]
    ResourceLimit(String),
    #[error("hexagonal move does not apply: {0}")]
    InvalidMove(String),
    #[error("{0} lies in the deep locus; no triangulation admits it")]
    NoCover(String),
    #[error("no closed form available for {0}")]
    NoClosedForm(String),
}
