//! Shadow verification: does every line through the view point meet a ball?
//!
//! Dimensions 2 and 3 have exact decision procedures built on arc unions.
//! In any dimension, Monte Carlo sampling refutes and profiles margins, and a
//! multi-start descent hunts for the least covered direction.

pub mod adversarial;
pub mod arcs;
pub mod exact2d;
pub mod exact3d;
pub mod sampling;

use std::fmt;

use thiserror::Error;

use crate::geom::{projective_angle, GeomError, ShadowInstance, Vector, EMPTY_MARGIN};

pub use adversarial::{adversarial_min_margin, adversarial_min_margin_with, AdversarialConfig};
pub use exact2d::verify_exact_2d;
pub use exact3d::verify_exact_3d;
pub use sampling::verify_monte_carlo;

/// Angular guard band of the exact methods. Open caps are shrunk and closed
/// caps grown by this amount, so numerically tangent configurations get the
/// verdict of exact tangency.
pub const ANGLE_BAND: f64 = 1e-10;

/// Margins within this band of zero count as zero for the adversarial
/// verdict.
pub const BOUNDARY_BAND: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverageError {
    #[error("DimensionMismatch: {method} needs dimension {expected}, instance has {found}")]
    DimensionMismatch {
        method: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("InvalidSampleCount: need at least one sample")]
    InvalidSampleCount,
    #[error("InvalidStartCount: need at least one start")]
    InvalidStartCount,
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Shadow,
    NoShadow,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Shadow => "shadow",
            Verdict::NoShadow => "no_shadow",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact2D,
    Exact3D,
    MonteCarlo,
    Adversarial,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact2D => "exact_2d",
            Method::Exact3D => "exact_3d",
            Method::MonteCarlo => "monte_carlo",
            Method::Adversarial => "adversarial",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub verdict: Verdict,
    pub method: Method,
    /// Smallest best-ball margin found, in radians.
    pub worst_margin: f64,
    /// Uncovered direction for `NoShadow`, otherwise the least covered one
    /// found (when the method produces one).
    pub witness: Option<Vector>,
    pub samples_used: u64,
    pub uncovered_count: Option<u64>,
    pub uncovered_fraction_estimate: Option<f64>,
    pub seed: Option<u64>,
    /// The exact verdict flips when the guard band is applied in reverse.
    pub tolerance_critical: bool,
}

impl CoverageReport {
    pub(crate) fn new(verdict: Verdict, method: Method, worst_margin: f64) -> Self {
        CoverageReport {
            verdict,
            method,
            worst_margin,
            witness: None,
            samples_used: 0,
            uncovered_count: None,
            uncovered_fraction_estimate: None,
            seed: None,
            tolerance_critical: false,
        }
    }
}

/// Caps of an instance in a flat layout, for evaluating many directions.
#[derive(Debug, Clone)]
pub struct CapSet {
    dim: usize,
    axes: Vec<f64>,
    half_angles: Vec<f64>,
    closed: Vec<bool>,
}

impl CapSet {
    pub fn from_instance(inst: &ShadowInstance) -> Result<Self, CoverageError> {
        let caps = inst.caps()?;
        let dim = inst.dim();
        let mut axes = Vec::with_capacity(caps.len() * dim);
        for c in &caps {
            axes.extend_from_slice(c.axis.coords());
        }
        Ok(CapSet {
            dim,
            axes,
            half_angles: caps.iter().map(|c| c.half_angle).collect(),
            closed: caps.iter().map(|c| !c.open).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.half_angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half_angles.is_empty()
    }

    pub fn axis(&self, i: usize) -> &[f64] {
        &self.axes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn half_angle(&self, i: usize) -> f64 {
        self.half_angles[i]
    }

    pub fn is_closed(&self, i: usize) -> bool {
        self.closed[i]
    }

    pub fn margin(&self, i: usize, d: &[f64]) -> f64 {
        self.half_angles[i] - projective_angle(self.axis(i), d)
    }

    /// Best margin and the lowest index attaining it.
    pub fn best(&self, d: &[f64]) -> (Option<usize>, f64) {
        let mut best = (None, EMPTY_MARGIN);
        for i in 0..self.len() {
            let m = self.margin(i, d);
            if best.0.is_none() || m > best.1 {
                best = (Some(i), m);
            }
        }
        best
    }

    /// Open/closed-aware coverage of one direction, together with the best
    /// margin.
    pub fn evaluate(&self, d: &[f64]) -> (f64, bool) {
        let mut best = EMPTY_MARGIN;
        let mut covered = false;
        for i in 0..self.len() {
            let m = self.margin(i, d);
            best = best.max(m);
            covered |= m > 0.0 || (m == 0.0 && self.closed[i]);
        }
        (best, covered)
    }
}

/// Exact in dimensions 2 and 3; elsewhere Monte Carlo followed by the
/// adversarial search, merged into one report.
pub fn verify_auto(
    inst: &ShadowInstance,
    n_samples: u64,
    n_starts: usize,
    seed: u64,
) -> Result<CoverageReport, CoverageError> {
    match inst.dim() {
        2 => verify_exact_2d(inst),
        3 => verify_exact_3d(inst),
        _ => {
            let mc = verify_monte_carlo(inst, n_samples, seed)?;
            if mc.verdict == Verdict::NoShadow {
                return Ok(mc);
            }
            let mut adv = adversarial_min_margin(inst, n_starts, seed)?;
            if mc.worst_margin < adv.worst_margin {
                adv.worst_margin = mc.worst_margin;
                adv.witness = mc.witness;
            }
            adv.samples_used += mc.samples_used;
            adv.uncovered_count = mc.uncovered_count;
            adv.uncovered_fraction_estimate = mc.uncovered_fraction_estimate;
            Ok(adv)
        }
    }
}
