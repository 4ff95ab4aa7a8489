use super::{positive, ConstructionError};
use crate::geom::{Ball, ShadowInstance, Vector};

/// Two open disks at distance `r` from the origin with perpendicular axes and
/// radii `r/2` and `0.88·r`. Their projective arcs `[−π/6, π/6]` and
/// `π/2 ± asin 0.88` overlap at both seams.
pub fn disk_pair_2d(r: f64) -> Result<ShadowInstance, ConstructionError> {
    let r = positive("r", r)?;
    Ok(ShadowInstance::new(
        Vector::zeros(2),
        vec![Ball::open([r, 0.0], 0.5 * r)?, Ball::open([0.0, r], 0.88 * r)?],
    )?)
}
