//! Three open balls on a prolate spheroid of revolution.
//!
//! Coordinates: view point `x` at the origin, major axis along `e1`, and
//! `B1` centered at `(0, a, 0)` with radius `a`, so `x` sits on its boundary
//! and the open cap of `B1` is the hemisphere `d·e2 ≠ 0`. The only lines it
//! misses lie in the plane `Σ = {y = 0}`; `B3` at the far end of the major axis
//! and `B2` on the minor-axis circle must cover those.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, SQRT_2};

use super::{positive, ConstructionError};
use crate::coverage::{verify_exact_3d, Verdict};
use crate::geom::{validate_instance, Ball, ShadowInstance, SphereConstraint, Vector};

/// Target overlap of the two seams in `Σ`, in radians, for automatic `θ`.
/// Reduced to a quarter of the available slack `φ − π/2` when the ratio is
/// too close to `2√2` to afford it.
pub const MARGIN_GUARD: f64 = 1e-3;

const THETA_STEP: f64 = 1e-4;
const RATIO_BAND: f64 = 1e-12;

/// Projective angle in `Σ` covered by the ball at the end of the major axis
/// that touches `B1`.
pub fn phi_angle(a: f64, b: f64) -> f64 {
    2.0 * ((a.hypot(b) - a) / b).asin()
}

/// Projective arc length in `Σ` covered by `B2` at angle `theta` on the
/// minor-axis circle. Independent of `a`; zero until `θ ≈ 1.333`.
pub fn b2_coverage_arc(a: f64, theta: f64) -> Result<f64, ConstructionError> {
    if !(theta > FRAC_PI_3 && theta < PI) || 2.0 * a * (theta / 2.0).sin() - a <= 0.0 {
        return Err(ConstructionError::RadiusNonPositive { theta });
    }
    let s = (theta / 2.0).sin();
    let arg = 1.0 / (s * (1.0 + s)).sqrt();
    Ok(if arg >= 1.0 { 0.0 } else { PI - 2.0 * arg.asin() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidParams {
    pub a: f64,
    pub b_prime: f64,
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteriorPointParams {
    pub r: f64,
    pub h: f64,
}

/// Three-ball system in order `B1, B2, B3`, with the quantities that
/// certify it.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidSystem {
    pub instance: ShadowInstance,
    pub theta: f64,
    /// Arc covered by `B3` in `Σ`.
    pub phi: f64,
    /// Arc covered by `B2` in `Σ`.
    pub b2_arc: f64,
    /// Overlap of the two arcs at each of the two seams.
    pub seam_overlap: f64,
}

fn balls(a: f64, b_prime: f64, theta: f64) -> Result<Vec<Ball>, ConstructionError> {
    let r2 = 2.0 * a * (theta / 2.0).sin() - a;
    let r3 = a.hypot(b_prime) - a;
    Ok(vec![
        Ball::open([0.0, a, 0.0], a)?,
        Ball::open([0.0, a * theta.cos(), a * theta.sin()], r2)?,
        Ball::open([-b_prime, 0.0, 0.0], r3)?,
    ])
}

fn b2_b3_disjoint(a: f64, b_prime: f64, theta: f64) -> bool {
    let r2 = 2.0 * a * (theta / 2.0).sin() - a;
    let r3 = a.hypot(b_prime) - a;
    let dist = (b_prime * b_prime + a * a).sqrt();
    dist >= r2 + r3
}

fn check(inst: &ShadowInstance) -> Result<(), ConstructionError> {
    let validity = validate_instance(inst);
    if !validity.is_valid() {
        return Err(ConstructionError::ConstructionUnverified(
            validity.findings().join("; "),
        ));
    }
    let report = verify_exact_3d(inst)?;
    if report.verdict != Verdict::Shadow {
        return Err(ConstructionError::ConstructionUnverified(format!(
            "exact verdict {} with worst margin {:e}{}",
            report.verdict,
            report.worst_margin,
            if report.tolerance_critical {
                " (inside the angular guard band)"
            } else {
                ""
            }
        )));
    }
    Ok(())
}

pub fn ellipsoid_three_balls(p: &EllipsoidParams) -> Result<EllipsoidSystem, ConstructionError> {
    let a = positive("a", p.a)?;
    let b_prime = positive("b_prime", p.b_prime)?;
    let ratio = b_prime / a;
    if ratio <= 2.0 * SQRT_2 * (1.0 + RATIO_BAND) {
        return Err(ConstructionError::RatioTooSmall { ratio });
    }
    let phi = phi_angle(a, b_prime);

    let theta = match p.theta {
        Some(theta) => {
            let arc = b2_coverage_arc(a, theta)
                .map_err(|e| ConstructionError::NoFeasibleTheta(format!("theta = {theta}: {e}")))?;
            if phi + arc <= PI {
                return Err(ConstructionError::NoFeasibleTheta(format!(
                    "theta = {theta} leaves a gap of {:e} rad in the tangent plane",
                    PI - phi - arc
                )));
            }
            if !b2_b3_disjoint(a, b_prime, theta) {
                return Err(ConstructionError::NoFeasibleTheta(format!(
                    "theta = {theta}: B2 meets B3"
                )));
            }
            theta
        }
        None => {
            let guard = MARGIN_GUARD.min(0.25 * (phi - FRAC_PI_2));
            let target = PI - phi + 2.0 * guard;
            (1..)
                .map(|k| FRAC_PI_3 + k as f64 * THETA_STEP)
                .take_while(|t| *t < PI)
                .find(|&t| b2_coverage_arc(a, t).is_ok_and(|arc| arc > target) && b2_b3_disjoint(a, b_prime, t))
                .ok_or_else(|| {
                    ConstructionError::NoFeasibleTheta(format!(
                        "no grid angle reaches arc {target} in the tangent plane"
                    ))
                })?
        }
    };

    let b2_arc = b2_coverage_arc(a, theta)?;
    let instance = ShadowInstance::new(Vector::zeros(3), balls(a, b_prime, theta)?)?;
    check(&instance)?;
    Ok(EllipsoidSystem {
        instance,
        theta,
        phi,
        b2_arc,
        seam_overlap: 0.5 * (phi + b2_arc - PI),
    })
}

/// Three open balls centered on the sphere of radius `r` about the origin
/// shadowing the point `(h, 0, 0)`. The spheroid has semi-axes
/// `a = √(r² − h²)` and `b = h + r`, so `b/a > 2√2` exactly when `h > 7r/9`.
pub fn interior_point_three_balls(p: &InteriorPointParams) -> Result<EllipsoidSystem, ConstructionError> {
    let r = positive("r", p.r)?;
    let h = p.h;
    if !h.is_finite() {
        return Err(ConstructionError::InvalidParameter(format!(
            "h must be finite, got {h}"
        )));
    }
    let threshold = 7.0 * r / 9.0;
    if h <= threshold * (1.0 + RATIO_BAND) {
        return Err(ConstructionError::ThresholdViolated { h, threshold });
    }
    if h >= r {
        return Err(ConstructionError::InvalidParameter(format!(
            "h = {h} must be below r = {r}"
        )));
    }
    let a = ((r - h) * (r + h)).sqrt();
    let sys = ellipsoid_three_balls(&EllipsoidParams {
        a,
        b_prime: h + r,
        theta: None,
    })
    .map_err(|e| match e {
        ConstructionError::RatioTooSmall { .. } => ConstructionError::ThresholdViolated { h, threshold },
        other => other,
    })?;

    let shift = Vector::from([h, 0.0, 0.0]);
    let instance = sys
        .instance
        .transformed(1.0, |v| v + &shift)?
        .with_sphere(SphereConstraint {
            center: Vector::zeros(3),
            radius: r,
            restrict_radii: false,
        })?;
    check(&instance)?;
    Ok(EllipsoidSystem { instance, ..sys })
}
