//! Systems of pairwise disjoint balls that cast a shadow at a point: every
//! line through the point meets one of the balls.
//!
//! - [`geom`]: balls, caps and line margins in any dimension.
//! - [`coverage`]: exact shadow decisions in dimensions 2 and 3, sampling and
//!   adversarial search everywhere.
//! - [`constructions`]: closed-form ball systems.
//! - [`io`], [`svg`], [`sweep`]: documents, figures and parameter sweeps.

pub mod constructions;
pub mod coverage;
pub mod geom;
pub mod io;
pub mod svg;
pub mod sweep;

pub use coverage::{CoverageError, CoverageReport, Method, Verdict};
pub use geom::{
    cap_of_ball, homothety_ball, line_margin, pairwise_disjoint, system_margin, validate_instance, Ball, Cap,
    GeomError, MarginBreakdown, ShadowInstance, SphereConstraint, ValidityReport, Vector,
};
