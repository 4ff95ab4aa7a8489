//! Ball systems built from closed-form parameters.
//!
//! Every builder returns a [`ShadowInstance`](crate::geom::ShadowInstance)
//! that has already been checked by the verifier appropriate to its
//! dimension, except where noted.

mod ellipsoid;
mod equalize;
mod planar;
mod simplex;

use thiserror::Error;

use crate::coverage::CoverageError;
use crate::geom::GeomError;

pub use ellipsoid::{
    b2_coverage_arc, ellipsoid_three_balls, interior_point_three_balls, phi_angle, EllipsoidParams, EllipsoidSystem,
    InteriorPointParams, MARGIN_GUARD,
};
pub use equalize::equalize_radii;
pub use planar::disk_pair_2d;
pub use simplex::{
    embed_perturbed_simplex, perturbed_simplex_system, regular_simplex_system, SimplexEmbedding, SimplexParams,
    SimplexSystem,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("RatioTooSmall: b'/a = {ratio} does not exceed 2*sqrt(2)")]
    RatioTooSmall { ratio: f64 },
    #[error("RadiusNonPositive: theta = {theta} gives a non-positive tangent radius")]
    RadiusNonPositive { theta: f64 },
    #[error("NoFeasibleTheta: {0}")]
    NoFeasibleTheta(String),
    #[error("ThresholdViolated: h = {h} must exceed 7r/9 = {threshold}")]
    ThresholdViolated { h: f64, threshold: f64 },
    #[error("EmbeddingFailed: {0}")]
    EmbeddingFailed(String),
    #[error("ShadowLost: {0}")]
    ShadowLost(String),
    #[error("DisjointnessLost: balls {i} and {j} intersect after the homothety")]
    DisjointnessLost { i: usize, j: usize },
    #[error("MixedClosedness: balls must be all open or all closed")]
    MixedClosedness,
    #[error("ConstructionUnverified: {0}")]
    ConstructionUnverified(String),
    #[error("Geometry: {0}")]
    Geometry(#[from] GeomError),
    #[error("Coverage: {0}")]
    Coverage(#[from] CoverageError),
}

impl ConstructionError {
    /// Variant name, as printed by the command line tool.
    pub fn name(&self) -> &'static str {
        match self {
            ConstructionError::InvalidParameter(_) => "InvalidParameter",
            ConstructionError::RatioTooSmall { .. } => "RatioTooSmall",
            ConstructionError::RadiusNonPositive { .. } => "RadiusNonPositive",
            ConstructionError::NoFeasibleTheta(_) => "NoFeasibleTheta",
            ConstructionError::ThresholdViolated { .. } => "ThresholdViolated",
            ConstructionError::EmbeddingFailed(_) => "EmbeddingFailed",
            ConstructionError::ShadowLost(_) => "ShadowLost",
            ConstructionError::DisjointnessLost { .. } => "DisjointnessLost",
            ConstructionError::MixedClosedness => "MixedClosedness",
            ConstructionError::ConstructionUnverified(_) => "ConstructionUnverified",
            ConstructionError::Geometry(_) => "Geometry",
            ConstructionError::Coverage(_) => "Coverage",
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64, ConstructionError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ConstructionError::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}
