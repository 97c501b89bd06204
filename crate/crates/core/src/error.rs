use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input point set")]
    EmptyInput,
    #[error("non-finite value in input: {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("numerical rank ambiguous: singular value ratio {ratio:e} is within a factor 10 of rank_tol {rank_tol:e}")]
    NumericalRankAmbiguity { ratio: f64, rank_tol: f64 },
    #[error("linear system is infeasible")]
    Infeasible,
    #[error("feasible set is unbounded")]
    Unbounded,
    #[error("origin is not contained in the polytope")]
    OriginNotContained,
    #[error("origin is not in the relative interior of the polytope")]
    OriginNotRelativeInterior,
    #[error("Steiner point quadrature with {nodes} nodes left the relative interior")]
    QuadratureBudgetExceeded { nodes: usize },
    #[error("minimum-norm-point solver stalled after {iterations} iterations")]
    SolverStall { iterations: usize },
    #[error("polytopes do not share an affine hull")]
    AffineHullMismatch,
    #[error("polynomial degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    #[error("density is not strictly positive: h = {value} at a sampled point")]
    PositivityViolation { value: f64 },
    #[error("rejection sampling acceptance rate {rate:e} fell below 1e-6")]
    RejectionBudgetExceeded { rate: f64 },
    #[error("W1 grid too coarse: only {cells} cells received mass")]
    ResolutionTooCoarse { cells: usize },
    #[error("parameter {0:?} lies outside the map domain")]
    DomainViolation(Vec<f64>),
    #[error("lower-level problem is infeasible at parameter {0:?}")]
    ParameterInfeasible(Vec<f64>),
    #[error("zero denominator in orthogonal-proportion ratio")]
    ZeroDenominator,
    #[error("image dimension changes along the grid ({from} -> {to})")]
    DimensionDrift { from: usize, to: usize },
    #[error("image at parameter {x:?} has dimension {dim}, expected full dimension {ambient}")]
    DimensionViolation { x: Vec<f64>, dim: usize, ambient: usize },
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}
