//! Dimension-generic primitives: points, balls, caps and the margin of a
//! line through the view point against a ball.
//!
//! A line through `x` with unit direction `d` meets a ball iff the projective
//! angle between `d` and the ball's cap axis is below the cap half-angle.
//! Everything downstream (coverage, constructions) is phrased in terms of that
//! angular margin.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use thiserror::Error;

/// Relative tolerance for "center lies on the constraint sphere".
pub const TOL_ON_SPHERE: f64 = 1e-9;

/// Relative band inside which distance comparisons count as exact contact.
pub const CONTACT_BAND: f64 = 1e-12;

/// Tolerance on `|d| = 1` for direction arguments.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is below 2")]
    DimensionTooSmall(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("the view point lies inside ball {index}")]
    PointInsideBall { index: usize },
    #[error("homothety coefficient must be positive, got {0}")]
    NonPositiveCoefficient(f64),
    #[error("direction is not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("degenerate axis: ball center coincides with the view point")]
    DegenerateAxis,
}

/// A point or direction in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    /// The `i`-th standard basis vector of `R^n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Vector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| Vector(self.0.iter().map(|c| c / n).collect()))
    }

    pub fn scaled(&self, k: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * k).collect())
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(v: [f64; N]) -> Self {
        Vector(v.to_vec())
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, k: f64) -> Vector {
        self.scaled(k)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Angle between the line spanned by `axis` and the unit direction `d`, in
/// `[0, π/2]`. Both arguments must be unit length.
///
/// Computed as `atan2(|d - (a·d) a|, |a·d|)`, which stays accurate near
/// both ends of the range and is exactly symmetric under `d -> -d`.
pub(crate) fn projective_angle(axis: &[f64], d: &[f64]) -> f64 {
    let c = dot(axis, d);
    let perp = axis
        .iter()
        .zip(d)
        .map(|(a, x)| {
            let t = x - c * a;
            t * t
        })
        .sum::<f64>()
        .sqrt();
    perp.atan2(c.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Vector,
    radius: f64,
    closed: bool,
}

impl Ball {
    pub fn new(center: Vector, radius: f64, closed: bool) -> Result<Self, GeomError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeomError::InvalidRadius(radius));
        }
        if !center.is_finite() {
            return Err(GeomError::NonFinite);
        }
        Ok(Ball { center, radius, closed })
    }

    pub fn open(center: impl Into<Vector>, radius: f64) -> Result<Self, GeomError> {
        Ball::new(center.into(), radius, false)
    }

    pub fn closed(center: impl Into<Vector>, radius: f64) -> Result<Self, GeomError> {
        Ball::new(center.into(), radius, true)
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }
}

/// The sphere `S^{n-1}(center, radius)` on which ball centers are required
/// to lie.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereConstraint {
    pub center: Vector,
    pub radius: f64,
    /// Additionally require every ball radius to be below the sphere radius.
    pub restrict_radii: bool,
}

/// A view point together with the balls that should shadow it.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowInstance {
    point: Vector,
    balls: Vec<Ball>,
    sphere: Option<SphereConstraint>,
}

impl ShadowInstance {
    pub fn new(point: Vector, balls: Vec<Ball>) -> Result<Self, GeomError> {
        let n = point.dim();
        if n < 2 {
            return Err(GeomError::DimensionTooSmall(n));
        }
        if !point.is_finite() {
            return Err(GeomError::NonFinite);
        }
        for b in &balls {
            if b.dim() != n {
                return Err(GeomError::DimensionMismatch {
                    expected: n,
                    found: b.dim(),
                });
            }
        }
        Ok(ShadowInstance {
            point,
            balls,
            sphere: None,
        })
    }

    pub fn with_sphere(mut self, sphere: SphereConstraint) -> Result<Self, GeomError> {
        if sphere.center.dim() != self.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim(),
                found: sphere.center.dim(),
            });
        }
        if !sphere.center.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if !(sphere.radius > 0.0 && sphere.radius.is_finite()) {
            return Err(GeomError::InvalidRadius(sphere.radius));
        }
        self.sphere = Some(sphere);
        Ok(self)
    }

    pub fn without_sphere(mut self) -> Self {
        self.sphere = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.point.dim()
    }

    pub fn point(&self) -> &Vector {
        &self.point
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn sphere(&self) -> Option<&SphereConstraint> {
        self.sphere.as_ref()
    }

    /// Same instance with ball `index` removed.
    pub fn without_ball(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.balls.remove(index);
        out
    }

    /// Same instance with different balls; the sphere constraint is kept.
    pub fn with_balls(&self, balls: Vec<Ball>) -> Result<Self, GeomError> {
        let mut out = ShadowInstance::new(self.point.clone(), balls)?;
        out.sphere = self.sphere.clone();
        Ok(out)
    }

    /// Applies a similarity `f` (isometry composed with uniform scaling by
    /// `scale`) to every point of the instance.
    pub fn transformed(&self, scale: f64, f: impl Fn(&Vector) -> Vector) -> Result<Self, GeomError> {
        let balls = self
            .balls
            .iter()
            .map(|b| Ball::new(f(&b.center), b.radius * scale, b.closed))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = ShadowInstance::new(f(&self.point), balls)?;
        if let Some(s) = &self.sphere {
            out = out.with_sphere(SphereConstraint {
                center: f(&s.center),
                radius: s.radius * scale,
                restrict_radii: s.restrict_radii,
            })?;
        }
        Ok(out)
    }

    /// Caps of all balls as seen from the view point.
    pub fn caps(&self) -> Result<Vec<Cap>, GeomError> {
        self.balls
            .iter()
            .enumerate()
            .map(|(i, b)| {
                cap_of_ball(&self.point, b).map_err(|e| match e {
                    GeomError::PointInsideBall { .. } => GeomError::PointInsideBall { index: i },
                    other => other,
                })
            })
            .collect()
    }
}

/// The set of directions, seen from the view point, whose lines meet a ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Cap {
    pub axis: Vector,
    pub half_angle: f64,
    pub open: bool,
}

impl Cap {
    /// Angular margin of the line with unit direction `d`.
    pub fn margin(&self, d: &Vector) -> f64 {
        self.half_angle - projective_angle(self.axis.coords(), d.coords())
    }
}

/// Projects `b` onto the direction sphere around `x`.
///
/// An open ball may pass through `x` (its cap is then an open hemisphere);
/// a closed ball through `x` contains it and is rejected.
pub fn cap_of_ball(x: &Vector, b: &Ball) -> Result<Cap, GeomError> {
    if x.dim() != b.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: x.dim(),
            found: b.dim(),
        });
    }
    let offset = &b.center - x;
    let dist = offset.norm();
    let r = b.radius;
    let inside = if b.closed {
        dist <= r * (1.0 + CONTACT_BAND)
    } else {
        dist < r * (1.0 - CONTACT_BAND)
    };
    if inside {
        return Err(GeomError::PointInsideBall { index: 0 });
    }
    let axis = offset.normalized().ok_or(GeomError::DegenerateAxis)?;
    let half_angle = (r / dist).min(1.0).asin();
    Ok(Cap {
        axis,
        half_angle,
        open: !b.closed,
    })
}

fn check_unit(d: &Vector) -> Result<(), GeomError> {
    let n = d.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(GeomError::NotUnit(n));
    }
    Ok(())
}

/// Half-angle of the ball's cap minus the projective angle between `d` and
/// the cap axis, in radians. Positive means the line hits the open ball,
/// zero means tangency.
pub fn line_margin(x: &Vector, d: &Vector, b: &Ball) -> Result<f64, GeomError> {
    check_unit(d)?;
    if d.dim() != x.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: x.dim(),
            found: d.dim(),
        });
    }
    Ok(cap_of_ball(x, b)?.margin(d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginBreakdown {
    pub per_ball: Vec<(usize, f64)>,
    /// `None` only for an instance without balls.
    pub best_index: Option<usize>,
    /// Largest per-ball margin; `-π/2` (below any attainable margin) when
    /// there are no balls.
    pub best_margin: f64,
}

impl MarginBreakdown {
    /// Whether the line is met by some ball, honoring open/closed semantics:
    /// a zero margin counts only for a closed ball.
    pub fn is_covered(&self, balls: &[Ball]) -> bool {
        self.per_ball
            .iter()
            .any(|&(i, m)| m > 0.0 || (m == 0.0 && balls[i].is_closed()))
    }
}

pub(crate) const EMPTY_MARGIN: f64 = -std::f64::consts::FRAC_PI_2;

pub fn system_margin(inst: &ShadowInstance, d: &Vector) -> Result<MarginBreakdown, GeomError> {
    check_unit(d)?;
    if d.dim() != inst.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: inst.dim(),
            found: d.dim(),
        });
    }
    let caps = inst.caps()?;
    let per_ball: Vec<(usize, f64)> = caps.iter().map(|c| c.margin(d)).enumerate().collect();
    let mut best_index = None;
    let mut best_margin = EMPTY_MARGIN;
    for &(i, m) in &per_ball {
        if best_index.is_none() || m > best_margin {
            best_index = Some(i);
            best_margin = m;
        }
    }
    Ok(MarginBreakdown {
        per_ball,
        best_index,
        best_margin,
    })
}

/// Image of `b` under the homothety with center `x` and coefficient `k`.
/// The cap seen from `x` is unchanged.
pub fn homothety_ball(x: &Vector, b: &Ball, k: f64) -> Result<Ball, GeomError> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(GeomError::NonPositiveCoefficient(k));
    }
    let center = x + &(&(&b.center - x) * k);
    Ball::new(center, b.radius * k, b.closed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairRelation {
    Separate,
    Tangent,
    Overlapping,
}

fn pair_relation(a: &Ball, b: &Ball) -> (PairRelation, f64) {
    let dist = a.center.distance(&b.center);
    let sum = a.radius + b.radius;
    let depth = sum - dist;
    let rel = if depth.abs() <= CONTACT_BAND * sum {
        PairRelation::Tangent
    } else if depth > 0.0 {
        PairRelation::Overlapping
    } else {
        PairRelation::Separate
    };
    (rel, depth)
}

/// A pair of balls that share a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Overlap {
    pub i: usize,
    pub j: usize,
    /// `r_i + r_j - |c_i - c_j|`; zero (within the contact band) for two
    /// closed balls touching at one point.
    pub depth: f64,
}

/// Pairs violating disjointness. Tangent balls are disjoint unless both are
/// closed.
pub fn pairwise_disjoint(inst: &ShadowInstance) -> Vec<Overlap> {
    let balls = inst.balls();
    let mut out = Vec::new();
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            let (rel, depth) = pair_relation(&balls[i], &balls[j]);
            let violated = match rel {
                PairRelation::Overlapping => true,
                PairRelation::Tangent => balls[i].closed && balls[j].closed,
                PairRelation::Separate => false,
            };
            if violated {
                out.push(Overlap { i, j, depth });
            }
        }
    }
    out
}

/// Legal contacts that sit exactly on a decision boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum Contact {
    /// The view point lies on the boundary of open ball `i`.
    PointOnBoundary(usize),
    /// Balls `i` and `j` touch and at least one of them is open.
    TangentPair(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidityReport {
    pub contains_point: Vec<usize>,
    pub overlaps: Vec<Overlap>,
    /// Ball index and its relative distance error from the constraint sphere.
    pub off_sphere: Vec<(usize, f64)>,
    pub oversized: Vec<usize>,
    pub contacts: Vec<Contact>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.contains_point.is_empty()
            && self.overlaps.is_empty()
            && self.off_sphere.is_empty()
            && self.oversized.is_empty()
    }

    /// One human-readable line per finding, contacts included.
    pub fn findings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in &self.contains_point {
            out.push(format!("ContainsPoint({i})"));
        }
        for o in &self.overlaps {
            out.push(format!("Overlap({}, {}) depth {:e}", o.i, o.j, o.depth));
        }
        for (i, e) in &self.off_sphere {
            out.push(format!("OffSphere({i}) relative error {e:e}"));
        }
        for i in &self.oversized {
            out.push(format!("RadiusNotBelowSphereRadius({i})"));
        }
        for c in &self.contacts {
            match c {
                Contact::PointOnBoundary(i) => out.push(format!("note: point on boundary of open ball {i}")),
                Contact::TangentPair(i, j) => out.push(format!("note: balls {i} and {j} are tangent")),
            }
        }
        out
    }
}

pub fn validate_instance(inst: &ShadowInstance) -> ValidityReport {
    let mut report = ValidityReport::default();
    let x = inst.point();
    for (i, b) in inst.balls().iter().enumerate() {
        let dist = b.center.distance(x);
        let gap = dist - b.radius;
        if gap.abs() <= CONTACT_BAND * b.radius {
            if b.closed {
                report.contains_point.push(i);
            } else {
                report.contacts.push(Contact::PointOnBoundary(i));
            }
        } else if gap < 0.0 {
            report.contains_point.push(i);
        }
    }
    let balls = inst.balls();
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            let (rel, depth) = pair_relation(&balls[i], &balls[j]);
            match rel {
                PairRelation::Overlapping => report.overlaps.push(Overlap { i, j, depth }),
                PairRelation::Tangent if balls[i].closed && balls[j].closed => {
                    report.overlaps.push(Overlap { i, j, depth })
                }
                PairRelation::Tangent => report.contacts.push(Contact::TangentPair(i, j)),
                PairRelation::Separate => {}
            }
        }
    }
    if let Some(s) = inst.sphere() {
        for (i, b) in balls.iter().enumerate() {
            let err = (b.center.distance(&s.center) - s.radius).abs() / s.radius;
            if err > TOL_ON_SPHERE {
                report.off_sphere.push((i, err));
            }
            if s.restrict_radii && b.radius >= s.radius {
                report.oversized.push(i);
            }
        }
    }
    report
}
