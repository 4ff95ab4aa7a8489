//! Exact coverage of the direction sphere `S^2` by caps and their antipodes.
//!
//! A finite union `U` of open caps equals `S^2` iff it is nonempty and every
//! boundary circle lies in `U`: otherwise `∂U` is nonempty and a point of it
//! sits on some boundary circle outside `U`. Each circle test is a 1D arc
//! union. Closed caps are handled by the guard band (grown and then treated
//! as open), which turns exact tangency into coverage.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::arcs::{solve_trig, ArcSet};
use super::{CapSet, CoverageError, CoverageReport, Method, Verdict, ANGLE_BAND};
use crate::geom::{ShadowInstance, Vector, EMPTY_MARGIN};

type V3 = [f64; 3];

fn dot3(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &V3, b: &V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn unit(a: V3) -> V3 {
    let n = dot3(&a, &a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

fn neg(a: &V3) -> V3 {
    [-a[0], -a[1], -a[2]]
}

/// Orthonormal pair spanning the plane orthogonal to the unit vector `u`.
fn plane_basis(u: &V3) -> (V3, V3) {
    let k = (0..3).min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs())).unwrap_or(0);
    let mut helper = [0.0; 3];
    helper[k] = 1.0;
    let e = unit(cross(u, &helper));
    let f = cross(u, &e);
    (e, f)
}

#[derive(Debug, Clone, Copy)]
struct OpenCap {
    axis: V3,
    half: f64,
}

/// Boundary circle of a cap, parametrized by `t` in `[0, 2π)`.
struct Circle {
    axis: V3,
    cos_a: f64,
    sin_a: f64,
    e: V3,
    f: V3,
}

impl Circle {
    fn of(cap: &OpenCap) -> Self {
        let (e, f) = plane_basis(&cap.axis);
        Circle {
            axis: cap.axis,
            cos_a: cap.half.cos(),
            sin_a: cap.half.sin(),
            e,
            f,
        }
    }

    fn point(&self, t: f64) -> V3 {
        let (s, c) = t.sin_cos();
        let mut p = [0.0; 3];
        for (k, p) in p.iter_mut().enumerate() {
            *p = self.cos_a * self.axis[k] + self.sin_a * (c * self.e[k] + s * self.f[k]);
        }
        unit(p)
    }

    /// Adds the open arc of this circle lying strictly inside `cap`.
    fn add_cap(&self, cap: &OpenCap, set: &mut ArcSet) {
        let a = self.sin_a * dot3(&cap.axis, &self.e);
        let b = self.sin_a * dot3(&cap.axis, &self.f);
        let c = cap.half.cos() - self.cos_a * dot3(&cap.axis, &self.axis);
        solve_trig(a, b, c).push_into(set, false);
    }
}

fn first_gap(circle: &Circle, set: &ArcSet) -> Option<V3> {
    set.largest_gap().map(|g| circle.point(g.midpoint(TAU)))
}

/// Some direction outside the union of the open caps, or `None` if they
/// cover the sphere.
fn uncovered_point(caps: &[OpenCap]) -> Option<V3> {
    if caps.is_empty() {
        return Some([0.0, 0.0, 1.0]);
    }
    if caps.iter().any(|c| c.half >= PI) {
        return None;
    }
    for (i, ci) in caps.iter().enumerate() {
        let circle = Circle::of(ci);
        let mut set = ArcSet::new(TAU);
        for (j, cj) in caps.iter().enumerate() {
            if i != j {
                circle.add_cap(cj, &mut set);
            }
        }
        if let Some(p) = first_gap(&circle, &set) {
            return Some(p);
        }
    }
    None
}

/// Same decision for the symmetric union `caps ∪ -caps`, testing only the
/// circles of `caps`: the antipodal circles are their mirror images.
#[cfg_attr(not(test), allow(dead_code))]
fn uncovered_point_mod_sign(caps: &[OpenCap]) -> Option<V3> {
    if caps.is_empty() {
        return Some([0.0, 0.0, 1.0]);
    }
    if caps.iter().any(|c| c.half >= PI) {
        return None;
    }
    for (i, ci) in caps.iter().enumerate() {
        let circle = Circle::of(ci);
        let mut set = ArcSet::new(TAU);
        for (j, cj) in caps.iter().enumerate() {
            let mirrored = OpenCap {
                axis: neg(&cj.axis),
                half: cj.half,
            };
            circle.add_cap(&mirrored, &mut set);
            if i != j {
                circle.add_cap(cj, &mut set);
            }
        }
        if let Some(p) = first_gap(&circle, &set) {
            return Some(p);
        }
    }
    None
}

fn with_antipodes(caps: &[OpenCap]) -> Vec<OpenCap> {
    caps.iter()
        .flat_map(|c| {
            [
                *c,
                OpenCap {
                    axis: neg(&c.axis),
                    half: c.half,
                },
            ]
        })
        .collect()
}

fn base_caps(caps: &CapSet) -> Vec<(OpenCap, bool)> {
    (0..caps.len())
        .map(|i| {
            let a = caps.axis(i);
            (
                OpenCap {
                    axis: [a[0], a[1], a[2]],
                    half: caps.half_angle(i),
                },
                caps.is_closed(i),
            )
        })
        .collect()
}

/// Caps after the guard band; `band_sign = 1` shrinks open and grows closed.
fn banded(caps: &[(OpenCap, bool)], band_sign: f64) -> Vec<OpenCap> {
    caps.iter()
        .filter_map(|(c, closed)| {
            let delta = if *closed { ANGLE_BAND } else { -ANGLE_BAND };
            let half = c.half + band_sign * delta;
            (half > 0.0).then_some(OpenCap { axis: c.axis, half })
        })
        .collect()
}

fn shrunk(caps: &[(OpenCap, bool)], by: f64) -> Vec<OpenCap> {
    caps.iter()
        .filter_map(|(c, _)| {
            let half = c.half - by;
            (half > 0.0).then_some(OpenCap { axis: c.axis, half })
        })
        .collect()
}

/// `min_d max_i margin_i(d)` by bisection: the open caps shrunk by `m`
/// cover the sphere iff every direction has a margin above `m`.
fn worst_margin(caps: &[(OpenCap, bool)]) -> (f64, V3) {
    if caps.is_empty() {
        return (EMPTY_MARGIN, [0.0, 0.0, 1.0]);
    }
    let mut lo = -FRAC_PI_2;
    let mut hi = caps.iter().map(|(c, _)| c.half).fold(f64::MIN, f64::max);
    let mut witness = caps[0].0.axis;
    let (e, _) = plane_basis(&witness);
    witness = e;
    for _ in 0..200 {
        if hi - lo <= 1e-15 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match uncovered_point(&with_antipodes(&shrunk(caps, mid))) {
            None => lo = mid,
            Some(p) => {
                hi = mid;
                witness = p;
            }
        }
    }
    (0.5 * (lo + hi), witness)
}

pub fn verify_exact_3d(inst: &ShadowInstance) -> Result<CoverageReport, CoverageError> {
    if inst.dim() != 3 {
        return Err(CoverageError::DimensionMismatch {
            method: "exact_3d",
            expected: 3,
            found: inst.dim(),
        });
    }
    let caps = base_caps(&CapSet::from_instance(inst)?);
    let primary = uncovered_point(&with_antipodes(&banded(&caps, 1.0)));
    let reverse = uncovered_point(&with_antipodes(&banded(&caps, -1.0)));
    let (worst, witness) = worst_margin(&caps);

    let verdict = if primary.is_none() {
        Verdict::Shadow
    } else {
        Verdict::NoShadow
    };
    let mut report = CoverageReport::new(verdict, Method::Exact3D, worst);
    report.witness = Some(Vector::from(witness.to_vec()));
    report.tolerance_critical = primary.is_none() != reverse.is_none();
    Ok(report)
}
