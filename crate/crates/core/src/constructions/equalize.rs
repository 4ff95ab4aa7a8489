//! Radius equalization by homothety about the view point.

use super::ConstructionError;
use crate::geom::{homothety_ball, pairwise_disjoint, ShadowInstance};

/// Scales ball `i` about the view point by `k_i = r_max / r_i`. Caps, and so
/// every margin, are unchanged. The images stay disjoint when the input
/// centers lie on a common sphere about the view point; otherwise the first
/// colliding pair is reported. The sphere constraint is dropped since the new
/// centers leave it.
pub fn equalize_radii(inst: &ShadowInstance) -> Result<ShadowInstance, ConstructionError> {
    let balls = inst.balls();
    if balls.windows(2).any(|w| w[0].is_closed() != w[1].is_closed()) {
        return Err(ConstructionError::MixedClosedness);
    }
    let r_max = balls.iter().map(|b| b.radius()).fold(0.0, f64::max);
    let scaled = balls
        .iter()
        .map(|b| {
            if b.radius() == r_max {
                Ok(b.clone())
            } else {
                homothety_ball(inst.point(), b, r_max / b.radius())
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let out = inst.with_balls(scaled)?.without_sphere();
    if let Some(o) = pairwise_disjoint(&out).first() {
        return Err(ConstructionError::DisjointnessLost { i: o.i, j: o.j });
    }
    Ok(out)
}
