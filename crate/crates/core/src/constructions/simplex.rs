//! Simplex systems: balls at the vertices of a (perturbed) regular simplex,
//! seen from the circumcenter.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::ConstructionError;
use crate::coverage::{
    adversarial_min_margin, verify_exact_2d, verify_exact_3d, verify_monte_carlo, CoverageReport, Verdict,
    BOUNDARY_BAND,
};
use crate::geom::{validate_instance, Ball, ShadowInstance, SphereConstraint, Vector};

const EIGEN_FLOOR: f64 = -1e-9;
const DISTANCE_TOL: f64 = 1e-9;
const MC_SAMPLES: u64 = 1_000_000;
const ADVERSARIAL_STARTS: usize = 32;
const VERIFY_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexParams {
    pub dim: usize,
    pub epsilon: f64,
    /// Fraction of the verified margin given up when shrinking the radii.
    pub shrink: f64,
}

impl SimplexParams {
    pub fn new(dim: usize, epsilon: f64) -> Self {
        SimplexParams {
            dim,
            epsilon,
            shrink: 0.5,
        }
    }
}

/// Mutually tangent open balls with perturbed radii, translated so the
/// circumcenter of their centers is the origin and the view point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexEmbedding {
    pub instance: ShadowInstance,
    /// Radius of the sphere through the centers.
    pub circumradius: f64,
    /// Half the edge of the regular simplex inscribed in the unit sphere.
    pub half_edge: f64,
    /// Largest `| |c_i − c_j| − D_ij |` over all pairs.
    pub distance_error: f64,
}

/// Verified simplex system after the radius shrink.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSystem {
    pub instance: ShadowInstance,
    pub circumradius: f64,
    /// Worst margin of the tangent system before shrinking.
    pub tangent_margin: f64,
    /// Report of the final verification.
    pub report: CoverageReport,
}

fn check_dim(n: usize) -> Result<(), ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::InvalidParameter(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Vertices of the regular simplex inscribed in the unit sphere: the
/// centered basis vectors of `R^{n+1}` written in an orthonormal basis of
/// their hyperplane.
fn regular_vertices(n: usize) -> Vec<Vector> {
    let m = n + 1;
    let centered: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| f64::from(u8::from(i == j)) - 1.0 / m as f64).collect())
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    for v in centered.iter().take(n) {
        let mut w = v.clone();
        for b in &basis {
            let p: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        basis.push(w.into_iter().map(|x| x / norm).collect());
    }
    let scale = (m as f64 / n as f64).sqrt();
    centered
        .iter()
        .map(|v| {
            let coords = basis
                .iter()
                .map(|b| scale * v.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
                .collect::<Vec<_>>();
            Vector::from(coords)
        })
        .collect()
}

/// Balls of radius half the edge at the vertices of a regular simplex
/// inscribed in the unit sphere, viewed from its center.
pub fn regular_simplex_system(n: usize, closed: bool) -> Result<ShadowInstance, ConstructionError> {
    check_dim(n)?;
    let verts = regular_vertices(n);
    let radius = 0.5 * verts[0].distance(&verts[1]);
    let balls = verts
        .into_iter()
        .map(|c| Ball::new(c, radius, closed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(
        ShadowInstance::new(Vector::zeros(n), balls)?.with_sphere(SphereConstraint {
            center: Vector::zeros(n),
            radius: 1.0,
            restrict_radii: true,
        })?,
    )
}

/// Points with prescribed pairwise distances, point 0 at the origin.
fn embed(dist: &DMatrix<f64>) -> Result<Vec<Vector>, ConstructionError> {
    let m = dist.nrows();
    let n = m - 1;
    let gram = DMatrix::from_fn(n, n, |i, j| {
        let (a, b, c) = (dist[(0, i + 1)], dist[(0, j + 1)], dist[(i + 1, j + 1)]);
        0.5 * (a * a + b * b - c * c)
    });
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    if let Some(low) = eig.eigenvalues.iter().copied().find(|v| *v < EIGEN_FLOOR * top) {
        return Err(ConstructionError::EmbeddingFailed(format!(
            "Gram matrix has eigenvalue {low:e}; the distances do not embed"
        )));
    }
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    let mut points = vec![Vector::zeros(n)];
    for i in 0..n {
        points.push(Vector::from(
            (0..n).map(|k| eig.eigenvectors[(i, k)] * roots[k]).collect::<Vec<_>>(),
        ));
    }
    Ok(points)
}

/// Center of the sphere through `points` (which must be affinely
/// independent, with `points[0]` at the origin).
fn circumcenter(points: &[Vector]) -> Result<Vector, ConstructionError> {
    let n = points.len() - 1;
    let a = DMatrix::from_fn(n, n, |i, j| 2.0 * points[i + 1][j]);
    let rhs = DVector::from_fn(n, |i, _| points[i + 1].norm_squared());
    a.lu()
        .solve(&rhs)
        .map(|z| Vector::from(z.iter().copied().collect::<Vec<_>>()))
        .ok_or_else(|| ConstructionError::EmbeddingFailed("centers are affinely dependent".into()))
}

/// Radii `a + ε, a − ε/2, …, a − ε/2^n`, mutually tangent centers, view
/// point at the circumcenter. Unverified.
pub fn embed_perturbed_simplex(n: usize, epsilon: f64) -> Result<SimplexEmbedding, ConstructionError> {
    check_dim(n)?;
    let half_edge = ((n as f64 + 1.0) / (2.0 * n as f64)).sqrt();
    if !(epsilon >= 0.0 && epsilon < half_edge) {
        return Err(ConstructionError::InvalidParameter(format!(
            "epsilon must lie in [0, {half_edge}), got {epsilon}"
        )));
    }
    let radii: Vec<f64> = (0..=n)
        .map(|i| {
            if i == 0 {
                half_edge + epsilon
            } else {
                half_edge - epsilon / 2f64.powi(i as i32)
            }
        })
        .collect();
    let dist = DMatrix::from_fn(n + 1, n + 1, |i, j| if i == j { 0.0 } else { radii[i] + radii[j] });
    let points = embed(&dist)?;

    let mut distance_error: f64 = 0.0;
    for i in 0..=n {
        for j in i + 1..=n {
            distance_error = distance_error.max((points[i].distance(&points[j]) - dist[(i, j)]).abs());
        }
    }
    if distance_error >= DISTANCE_TOL {
        return Err(ConstructionError::EmbeddingFailed(format!(
            "embedded distances off by {distance_error:e}"
        )));
    }

    let z = circumcenter(&points)?;
    let circumradius = z.norm();
    let balls = points
        .iter()
        .zip(&radii)
        .map(|(p, r)| Ball::open(p - &z, *r))
        .collect::<Result<Vec<_>, _>>()?;
    let instance = ShadowInstance::new(Vector::zeros(n), balls)?.with_sphere(SphereConstraint {
        center: Vector::zeros(n),
        radius: circumradius,
        restrict_radii: true,
    })?;
    Ok(SimplexEmbedding {
        instance,
        circumradius,
        half_edge,
        distance_error,
    })
}

/// Verdict and worst margin by the strongest method for the dimension.
/// Above dimension 3 the shadow is accepted when sampling finds no
/// uncovered direction and the adversarial search stays positive.
fn verify(inst: &ShadowInstance) -> Result<(bool, CoverageReport), ConstructionError> {
    Ok(match inst.dim() {
        2 => {
            let r = verify_exact_2d(inst)?;
            (r.verdict == Verdict::Shadow && r.worst_margin > 0.0, r)
        }
        3 => {
            let r = verify_exact_3d(inst)?;
            (r.verdict == Verdict::Shadow && r.worst_margin > 0.0, r)
        }
        _ => {
            let mc = verify_monte_carlo(inst, MC_SAMPLES, VERIFY_SEED)?;
            if mc.uncovered_count != Some(0) {
                return Ok((false, mc));
            }
            let mut adv = adversarial_min_margin(inst, ADVERSARIAL_STARTS, VERIFY_SEED)?;
            adv.worst_margin = adv.worst_margin.min(mc.worst_margin);
            adv.samples_used += mc.samples_used;
            adv.uncovered_count = mc.uncovered_count;
            adv.uncovered_fraction_estimate = mc.uncovered_fraction_estimate;
            (adv.worst_margin > BOUNDARY_BAND, adv)
        }
    })
}

fn lost(stage: &str, report: &CoverageReport) -> ConstructionError {
    let mut msg = format!(
        "{stage}: {} reports {} with worst margin {:e}",
        report.method.as_str(),
        report.verdict,
        report.worst_margin
    );
    if let Some(u) = report.uncovered_count {
        msg.push_str(&format!(", {u} of {} samples uncovered", report.samples_used));
    }
    ConstructionError::ShadowLost(msg)
}

/// Perturbed simplex whose open balls are then shrunk by the factor
/// `1 − shrink·m*/max tan α_i`, where `m*` is the verified worst margin of
/// the tangent system. Shrinking a ball by a factor `1 − δ` lowers its
/// half-angle by at most `δ·tan α`, so the shrunk margin stays at least
/// `(1 − shrink)·m*`.
pub fn perturbed_simplex_system(p: &SimplexParams) -> Result<SimplexSystem, ConstructionError> {
    if !(p.shrink >= 0.0 && p.shrink.is_finite()) {
        return Err(ConstructionError::InvalidParameter(format!(
            "shrink must be non-negative, got {}",
            p.shrink
        )));
    }
    let emb = embed_perturbed_simplex(p.dim, p.epsilon)?;
    let (ok, report) = verify(&emb.instance)?;
    if !ok {
        return Err(lost("tangent system", &report));
    }
    let tangent_margin = report.worst_margin;

    let max_tan = emb
        .instance
        .caps()?
        .iter()
        .map(|c| c.half_angle.tan())
        .fold(0.0f64, f64::max);
    let factor = 1.0 - p.shrink * tangent_margin / max_tan;
    if factor <= 0.0 {
        return Err(ConstructionError::ShadowLost(format!(
            "shrink factor {factor} is not positive"
        )));
    }
    let balls = emb
        .instance
        .balls()
        .iter()
        .map(|b| Ball::open(b.center().clone(), b.radius() * factor))
        .collect::<Result<Vec<_>, _>>()?;
    let instance = emb.instance.with_balls(balls)?;
    let validity = validate_instance(&instance);
    if !validity.is_valid() {
        return Err(ConstructionError::ConstructionUnverified(
            validity.findings().join("; "),
        ));
    }
    let (ok, report) = verify(&instance)?;
    if !ok {
        return Err(lost("after shrink", &report));
    }
    Ok(SimplexSystem {
        instance,
        circumradius: emb.circumradius,
        tangent_margin,
        report,
    })
}
