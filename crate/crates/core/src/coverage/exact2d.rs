//! Exact planar coverage. Lines through the view point form the projective
//! circle `[0, π)`; each disk covers an arc of it centered at the polar angle
//! of its center.

use std::f64::consts::PI;

use super::arcs::{Arc, ArcSet};
use super::{CapSet, CoverageError, CoverageReport, Method, Verdict, ANGLE_BAND};
use crate::geom::{ShadowInstance, Vector, EMPTY_MARGIN};

struct Tent {
    center: f64,
    half: f64,
    closed: bool,
}

fn tents(caps: &CapSet) -> Vec<Tent> {
    (0..caps.len())
        .map(|i| {
            let u = caps.axis(i);
            Tent {
                center: u[1].atan2(u[0]).rem_euclid(PI),
                half: caps.half_angle(i),
                closed: caps.is_closed(i),
            }
        })
        .collect()
}

/// `band_sign = 1` shrinks open and grows closed arcs; `-1` does the reverse.
fn arc_set(tents: &[Tent], band_sign: f64) -> ArcSet {
    let mut set = ArcSet::new(PI);
    for t in tents {
        let delta = if t.closed { ANGLE_BAND } else { -ANGLE_BAND };
        let half = t.half + band_sign * delta;
        if half > 0.0 {
            set.push(Arc::new(t.center - half, 2.0 * half, t.closed, PI));
        }
    }
    set
}

fn direction(psi: f64) -> [f64; 2] {
    [psi.cos(), psi.sin()]
}

/// Minimum of the upper envelope of the tent functions. Its minimizers sit
/// where the falling side of one tent meets the rising side of another (or
/// of itself, half a turn later).
fn envelope_minimum(tents: &[Tent], caps: &CapSet) -> (f64, f64) {
    let mut best = (f64::INFINITY, 0.0);
    for a in tents {
        for b in tents {
            for lift in [0.0, PI] {
                let psi = (0.5 * (a.center + a.half + b.center + lift - b.half)).rem_euclid(PI);
                let (m, _) = caps.evaluate(&direction(psi));
                if m < best.0 {
                    best = (m, psi);
                }
            }
        }
    }
    best
}

pub fn verify_exact_2d(inst: &ShadowInstance) -> Result<CoverageReport, CoverageError> {
    if inst.dim() != 2 {
        return Err(CoverageError::DimensionMismatch {
            method: "exact_2d",
            expected: 2,
            found: inst.dim(),
        });
    }
    let caps = CapSet::from_instance(inst)?;
    let tents = tents(&caps);
    let primary = arc_set(&tents, 1.0);
    let reverse = arc_set(&tents, -1.0);
    let covered = primary.covers();

    let (worst, psi) = if tents.is_empty() {
        (EMPTY_MARGIN, 0.0)
    } else {
        envelope_minimum(&tents, &caps)
    };
    let witness = match primary.largest_gap() {
        Some(gap) => gap.midpoint(PI),
        None => psi,
    };
    let worst = match primary.largest_gap() {
        Some(_) => worst.min(caps.evaluate(&direction(witness)).0),
        None => worst,
    };

    let verdict = if covered { Verdict::Shadow } else { Verdict::NoShadow };
    let mut report = CoverageReport::new(verdict, Method::Exact2D, worst);
    report.witness = Some(Vector::from(direction(witness).to_vec()));
    report.tolerance_critical = covered != reverse.covers();
    Ok(report)
}
