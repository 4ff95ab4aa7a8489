//! Static SVG cross-sections through the view point.

use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use thiserror::Error;

use crate::coverage::arcs::{solve_trig, ArcSet, Gap};
use crate::geom::{GeomError, ShadowInstance, Vector};

const SIZE: f64 = 600.0;
const ORTHO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SvgError {
    #[error("DegeneratePlane: plane vectors must be orthonormal")]
    DegeneratePlane,
    #[error("DimensionMismatch: plane has dimension {plane}, instance {instance}")]
    DimensionMismatch { plane: usize, instance: usize },
    #[error("{0}")]
    Geometry(#[from] GeomError),
}

/// The plane through the view point spanned by orthonormal `u` and `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    u: Vector,
    v: Vector,
}

impl Plane {
    pub fn new(u: Vector, v: Vector) -> Result<Self, SvgError> {
        let ok = u.dim() == v.dim()
            && u.dim() >= 2
            && (u.norm() - 1.0).abs() <= ORTHO_TOL
            && (v.norm() - 1.0).abs() <= ORTHO_TOL
            && u.dot(&v).abs() <= ORTHO_TOL;
        if ok {
            Ok(Plane { u, v })
        } else {
            Err(SvgError::DegeneratePlane)
        }
    }

    /// The plane of the first two coordinate axes.
    pub fn coordinate(dim: usize) -> Self {
        Plane {
            u: Vector::basis(dim, 0),
            v: Vector::basis(dim, 1),
        }
    }

    fn check(&self, inst: &ShadowInstance) -> Result<(), SvgError> {
        if self.u.dim() != inst.dim() {
            return Err(SvgError::DimensionMismatch {
                plane: self.u.dim(),
                instance: inst.dim(),
            });
        }
        Ok(())
    }

    /// In-plane coordinates and squared normal distance of `p − x`.
    fn project(&self, x: &Vector, p: &Vector) -> (f64, f64, f64) {
        let w = p - x;
        let (a, b) = (w.dot(&self.u), w.dot(&self.v));
        (a, b, (w.norm_squared() - a * a - b * b).max(0.0))
    }
}

/// Uncovered in-plane directions as gaps in the angle `t` of
/// `cos t · u + sin t · v`, over the full turn; each line shows up twice.
pub fn uncovered_sectors(inst: &ShadowInstance, plane: &Plane) -> Result<Vec<Gap>, SvgError> {
    plane.check(inst)?;
    let mut set = ArcSet::new(TAU);
    for cap in inst.caps()? {
        let (a, b) = (cap.axis.dot(&plane.u), cap.axis.dot(&plane.v));
        let c = cap.half_angle.cos();
        solve_trig(a, b, c).push_into(&mut set, !cap.open);
        solve_trig(-a, -b, c).push_into(&mut set, !cap.open);
    }
    Ok(set.gaps())
}

struct Frame {
    scale: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        0.5 * SIZE + x * self.scale
    }

    fn py(&self, y: f64) -> f64 {
        0.5 * SIZE - y * self.scale
    }
}

fn circle(out: &mut String, f: &Frame, class: &str, x: f64, y: f64, r: f64, style: &str) {
    let _ = writeln!(
        out,
        r#"  <circle class="{class}" cx="{:.3}" cy="{:.3}" r="{:.3}" {style}/>"#,
        f.px(x),
        f.py(y),
        r * f.scale
    );
}

/// Cross-section of the instance in `plane`: ball sections (dashed outline
/// at the projected center when a ball misses the plane), the constraint
/// sphere, the view point and shaded sectors of uncovered lines.
pub fn emit_svg(inst: &ShadowInstance, plane: &Plane) -> Result<String, SvgError> {
    let sectors = uncovered_sectors(inst, plane)?;
    let x = inst.point();

    let balls: Vec<(f64, f64, f64, bool)> = inst
        .balls()
        .iter()
        .map(|b| {
            let (cx, cy, n2) = plane.project(x, b.center());
            let r2 = b.radius() * b.radius();
            if n2 < r2 {
                (cx, cy, (r2 - n2).sqrt(), false)
            } else {
                (cx, cy, b.radius(), true)
            }
        })
        .collect();
    let sphere = inst.sphere().and_then(|s| {
        let (cx, cy, n2) = plane.project(x, &s.center);
        let r2 = s.radius * s.radius;
        (n2 < r2).then(|| (cx, cy, (r2 - n2).sqrt()))
    });

    let reach = balls
        .iter()
        .map(|(cx, cy, r, _)| cx.hypot(*cy) + r)
        .chain(sphere.iter().map(|(cx, cy, r)| cx.hypot(*cy) + r))
        .fold(0.0, f64::max);
    let reach = if reach > 0.0 { reach } else { 1.0 };
    let f = Frame {
        scale: 0.5 * SIZE / (1.1 * reach),
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"  <rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);

    let (ox, oy) = (f.px(0.0), f.py(0.0));
    for g in &sectors {
        let (s, e) = (g.start, g.start + g.length);
        let (x1, y1) = (f.px(reach * s.cos()), f.py(reach * s.sin()));
        if g.length == 0.0 {
            let _ = writeln!(
                out,
                r##"  <line class="uncovered" x1="{ox:.3}" y1="{oy:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke="#d62728" stroke-width="1.5"/>"##
            );
            continue;
        }
        let (x2, y2) = (f.px(reach * e.cos()), f.py(reach * e.sin()));
        let large = u8::from(g.length > PI);
        let r = reach * f.scale;
        let _ = writeln!(
            out,
            r##"  <path class="uncovered" d="M {ox:.3} {oy:.3} L {x1:.3} {y1:.3} A {r:.3} {r:.3} 0 {large} 0 {x2:.3} {y2:.3} Z" fill="#d62728" fill-opacity="0.25" stroke="none"/>"##
        );
    }
    if let Some((cx, cy, r)) = sphere {
        circle(
            &mut out,
            &f,
            "sphere",
            cx,
            cy,
            r,
            r##"fill="none" stroke="#666666" stroke-width="1""##,
        );
    }
    for (cx, cy, r, dashed) in &balls {
        let style = if *dashed {
            r##"fill="none" stroke="#3182bd" stroke-width="1" stroke-dasharray="6 4""##
        } else {
            r##"fill="#9ecae1" fill-opacity="0.5" stroke="#3182bd" stroke-width="1""##
        };
        circle(&mut out, &f, "ball", *cx, *cy, *r, style);
    }
    let _ = writeln!(
        out,
        r#"  <circle class="point" cx="{ox:.3}" cy="{oy:.3}" r="3" fill="black"/>"#
    );
    out.push_str("</svg>\n");
    Ok(out)
}
