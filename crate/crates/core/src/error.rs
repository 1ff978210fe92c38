use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("facet {facet}: normal is zero")]
    ZeroNormal { facet: usize },

    #[error("facet {facet}: normal not primitive (gcd {gcd})")]
    NotPrimitive { facet: usize, gcd: i64 },

    #[error("polytope is unbounded")]
    UnboundedPolytope,

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("polytope is not full-dimensional")]
    DegeneratePolytope,

    #[error("facet {facet} is redundant")]
    RedundantFacet { facet: usize },

    #[error("facet {facet} does not support a codimension-one face")]
    DegenerateFacet { facet: usize },

    #[error("facets of a one-dimensional polytope are points")]
    PointFacet,

    #[error("facet index {facet} out of range ({count} facets)")]
    FacetOutOfRange { facet: usize, count: usize },

    #[error("matrix is not unimodular")]
    NotUnimodular,

    #[error("moment Gram matrix is singular")]
    SingularGram,

    #[error("polynomial degree {degree} exceeds supported maximum {max}")]
    UnsupportedDegree { degree: u32, max: u32 },

    #[error("polytope is not Delzant at vertex {vertex}")]
    NotDelzant { vertex: usize },

    #[error("point is not a vertex of the polytope")]
    NotAVertex,

    #[error("vertex is not smooth: {active} active facets, determinant {det}")]
    SingularVertex { active: usize, det: Box<Rational> },

    #[error("chop parameter must be positive, got {0}")]
    NonPositiveParameter(Box<Rational>),

    #[error("chop parameter {parameter} is not below the bound {bound}")]
    ChopTooDeep { parameter: Box<Rational>, bound: Box<Rational> },

    #[error("chops at designated vertices {first} and {second} interact")]
    InteractingChops { first: usize, second: usize },

    #[error("chart does not belong to this polytope's facet")]
    ChartMismatch,

    #[error("moment configuration: {0}")]
    InvalidConfiguration(String),

    #[error("evaluation matrix is required for the kernel condition")]
    MissingEvaluationData,

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("invalid spectral data: {0}")]
    InvalidSpectrum(String),

    #[error("invalid window: lower bound {lo} is not below upper bound {hi}")]
    InvalidWindow { lo: f64, hi: f64 },

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("integer overflow in lattice arithmetic")]
    Overflow,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
