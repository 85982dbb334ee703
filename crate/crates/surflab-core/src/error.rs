//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]. Variants are grouped by the
//! layer that raises them; the same variant is reused wherever the same
//! precondition is violated so callers can match on meaning rather than
//! provenance.

use core::fmt;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// All error conditions raised by this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
#[non_exhaustive]
pub enum Error {
    // --- space construction -------------------------------------------------
    /// The edge list does not connect all vertices.
    DisconnectedGraph,
    /// An edge has a non-positive or non-finite length.
    NonPositiveEdge,
    /// An edge is a self-loop, references an unknown vertex, or duplicates
    /// another edge.
    InvalidEdge,
    /// The rotation system is not a permutation of each vertex's neighbors,
    /// its face trace is not sphere-like (Euler characteristic 2), or the
    /// declared outer face does not match any traced face.
    InvalidEmbedding,
    /// The designated origin is not a vertex of the space.
    MissingOrigin,
    /// The space has no vertices.
    EmptySpace,

    // --- queries ------------------------------------------------------------
    /// A vertex argument is out of range.
    UnknownVertex,
    /// A radius argument is negative or non-finite.
    NegativeRadius,
    /// The operation needs a rotation system but the space has none.
    NoEmbedding,
    /// The operation needs a geodesic (path-induced) metric but the space
    /// carries a non-geodesic override metric.
    NonGeodesicSpace,
    /// A curve argument is not a valid walk in the space (missing edges or
    /// fewer than the required number of waypoints).
    InvalidCurve,

    // --- maps ---------------------------------------------------------------
    /// A vertex map that must be injective is not.
    NotInjective,
    /// A map or operation was given an empty domain.
    EmptyDomain,

    // --- generators ---------------------------------------------------------
    /// A generator parameter is out of range (size, spacing, exponent, ...).
    BadParameters,
    /// A conformal factor escapes its declared bound.
    UnboundedFactor,
    /// The operation is not defined for this space family.
    UnsupportedFamily,
    /// A region specification is invalid (empty, or without the required
    /// margin to the outer boundary).
    BadRegion,

    // --- nets & measures ----------------------------------------------------
    /// A net scale is non-positive or non-finite.
    BadEpsilon,
    /// Covering radii must satisfy `0 < r < R`.
    BadRadii,
    /// The scan region is too small for the requested statistics.
    RegionTooSmall,
    /// A radius list is empty or spans too few octaves for a fit.
    InsufficientRadii,
    /// A scale list is empty, unsorted, or spans too few octaves.
    InsufficientScales,
    /// The normalizing ball contains no net point.
    EmptyNormalizer,
    /// A measure has support outside the relevant map domain.
    SupportOutsideDomain,
    /// A measure (or its restriction) is identically zero.
    ZeroMeasure,

    // --- estimators ---------------------------------------------------------
    /// A sample list is empty or too small for the requested fit.
    InsufficientSamples,
    /// A requested scale does not fit inside the space or region.
    ScalesTooLarge,
    /// The net scale exceeds what the region can resolve.
    EpsilonTooLarge,

    // --- surrounding --------------------------------------------------------
    /// No loop can surround the ball: the space is acyclic, the ball touches
    /// the outer face, or the search region admits no separating cycle.
    NoSurroundingLoop,
    /// The face-neighborhood of the set touches the outer face, so no
    /// exterior boundary exists.
    BallTouchesOuterFace,
    /// A loop argument intersects the target set it should avoid.
    LoopMeetsTarget,
    /// A layered cover walked outside the usable part of the space.
    LayerEscapedRegion,

    // --- hyperbolicity & Poincaré -------------------------------------------
    /// Triangle corners (or four-point quadruples) are not pairwise distinct.
    DegenerateCorners,
    /// The triangle is not fat enough for the requested surrounding radius.
    NotFatEnough,
    /// The complement of the triangle has no bounded component.
    NoBoundedComponent,
    /// The separating curve does not split the space into exactly two sides.
    SigmaDoesNotSeparate,
    /// The test ball carries zero measure.
    ZeroMeasureOnBall,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Error::DisconnectedGraph => "graph is not connected",
            Error::NonPositiveEdge => "edge length must be positive and finite",
            Error::InvalidEdge => "edge list contains a self-loop, duplicate, or unknown vertex",
            Error::InvalidEmbedding => "rotation system is not a valid sphere embedding",
            Error::MissingOrigin => "origin is not a vertex of the space",
            Error::EmptySpace => "space has no vertices",
            Error::UnknownVertex => "vertex index out of range",
            Error::NegativeRadius => "radius must be non-negative and finite",
            Error::NoEmbedding => "operation requires a rotation system",
            Error::NonGeodesicSpace => "operation requires a geodesic metric",
            Error::InvalidCurve => "waypoints do not form a valid walk",
            Error::NotInjective => "vertex map is not injective",
            Error::EmptyDomain => "domain is empty",
            Error::BadParameters => "generator parameter out of range",
            Error::UnboundedFactor => "conformal factor escapes its declared bound",
            Error::UnsupportedFamily => "operation not defined for this space family",
            Error::BadRegion => "region is empty or lacks margin to the boundary",
            Error::BadEpsilon => "net scale must be positive and finite",
            Error::BadRadii => "covering radii must satisfy 0 < r < R",
            Error::RegionTooSmall => "region too small for the requested statistics",
            Error::InsufficientRadii => "radius list too small for the requested fit",
            Error::InsufficientScales => "scale list is empty or malformed",
            Error::EmptyNormalizer => "normalizing ball contains no net point",
            Error::SupportOutsideDomain => "measure has support outside the map domain",
            Error::ZeroMeasure => "measure is identically zero",
            Error::InsufficientSamples => "not enough samples for the requested fit",
            Error::ScalesTooLarge => "requested scale does not fit in the region",
            Error::EpsilonTooLarge => "net scale exceeds the region resolution",
            Error::NoSurroundingLoop => "no loop surrounds the ball",
            Error::BallTouchesOuterFace => "face-neighborhood touches the outer face",
            Error::LoopMeetsTarget => "loop intersects the target set",
            Error::LayerEscapedRegion => "layered cover left the usable region",
            Error::DegenerateCorners => "corners are not pairwise distinct",
            Error::NotFatEnough => "triangle thinness does not exceed the requested radius",
            Error::NoBoundedComponent => "triangle complement has no bounded component",
            Error::SigmaDoesNotSeparate => "curve does not split the space into two sides",
            Error::ZeroMeasureOnBall => "test ball carries zero measure",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for Error {}
