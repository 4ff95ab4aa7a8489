//! Multi-start descent on `d ↦ max_i margin_i(d)` over the unit sphere.
//!
//! The objective is a maximum of smooth pieces with conical ridges, so each
//! step moves against the minimum-norm element of the convex hull of the
//! gradients of all pieces within the trial step of the maximum. Steps are
//! geodesic and found by backtracking.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::sampling::lowest_samples;
use super::{CapSet, CoverageError, CoverageReport, Method, Verdict, BOUNDARY_BAND};
use crate::geom::{dot, ShadowInstance, Vector, EMPTY_MARGIN};

#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialConfig {
    /// Sampled directions from which the lowest `n_starts` seed the search.
    pub probe_samples: u64,
    pub initial_step: f64,
    pub max_iterations: usize,
    pub min_step: f64,
    /// Cap on simultaneously active pieces in the subgradient hull.
    pub max_active: usize,
}

impl Default for AdversarialConfig {
    fn default() -> Self {
        AdversarialConfig {
            probe_samples: 4096,
            initial_step: 0.1,
            max_iterations: 200,
            min_step: 1e-12,
            max_active: 6,
        }
    }
}

fn normalize(v: &mut [f64]) -> bool {
    let n = dot(v, v).sqrt();
    if n > 1e-300 {
        v.iter_mut().for_each(|x| *x /= n);
        true
    } else {
        false
    }
}

/// Minimum-norm point of the convex hull of `gs`, by enumerating supports.
fn min_norm_hull(gs: &[Vec<f64>]) -> Vec<f64> {
    let m = gs.len();
    let dim = gs[0].len();
    let gram = DMatrix::from_fn(m, m, |i, j| dot(&gs[i], &gs[j]));
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << m) {
        let support: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        let k = support.len();
        let weights = if k == 1 {
            vec![1.0]
        } else {
            let mut a = DMatrix::zeros(k + 1, k + 1);
            for (r, &i) in support.iter().enumerate() {
                for (c, &j) in support.iter().enumerate() {
                    a[(r, c)] = gram[(i, j)];
                }
                a[(r, k)] = 1.0;
                a[(k, r)] = 1.0;
            }
            let mut rhs = DVector::zeros(k + 1);
            rhs[k] = 1.0;
            match a.lu().solve(&rhs) {
                Some(sol) if sol.iter().take(k).all(|w| *w >= -1e-12) => sol.iter().take(k).copied().collect(),
                _ => continue,
            }
        };
        let mut v = vec![0.0; dim];
        for (w, &i) in weights.iter().zip(&support) {
            for (x, g) in v.iter_mut().zip(&gs[i]) {
                *x += w * g;
            }
        }
        let n2 = dot(&v, &v);
        if best.as_ref().is_none_or(|(b, _)| n2 < *b) {
            best = Some((n2, v));
        }
    }
    best.map(|(_, v)| v).unwrap_or_else(|| vec![0.0; dim])
}

/// Unit tangent descent direction at `d`, or `None` when `d` is stationary
/// at resolution `tol`.
fn descent_direction(caps: &CapSet, d: &[f64], f: f64, tol: f64, max_active: usize) -> Option<Vec<f64>> {
    let mut active: Vec<(f64, usize)> = (0..caps.len())
        .map(|i| (caps.margin(i, d), i))
        .filter(|(m, _)| *m >= f - tol)
        .collect();
    active.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    active.truncate(max_active);

    let near_equator = tol.sin();
    let mut grads: Vec<Vec<f64>> = Vec::new();
    for &(_, i) in &active {
        let u = caps.axis(i);
        let c = dot(u, d);
        // gradient of the margin: unit tangent pointing at the nearer axis
        let mut g: Vec<f64> = u.iter().zip(d).map(|(a, x)| a - c * x).collect();
        if !normalize(&mut g) {
            continue;
        }
        if c.abs() <= near_equator {
            grads.push(g.iter().map(|x| -x).collect());
            grads.push(g);
        } else if c > 0.0 {
            grads.push(g);
        } else {
            grads.push(g.iter().map(|x| -x).collect());
        }
    }
    if grads.is_empty() {
        return None;
    }
    grads.truncate(max_active);
    let mut v = min_norm_hull(&grads);
    if dot(&v, &v).sqrt() < 1e-14 {
        return None;
    }
    v.iter_mut().for_each(|x| *x = -*x);
    normalize(&mut v);
    Some(v)
}

fn geodesic(d: &[f64], dir: &[f64], step: f64) -> Vec<f64> {
    let (s, c) = step.sin_cos();
    let mut out: Vec<f64> = d.iter().zip(dir).map(|(x, v)| c * x + s * v).collect();
    normalize(&mut out);
    out
}

fn descend(caps: &CapSet, start: Vec<f64>, cfg: &AdversarialConfig) -> (f64, Vec<f64>) {
    let mut d = start;
    let mut f = caps.best(&d).1;
    for _ in 0..cfg.max_iterations {
        let mut step = cfg.initial_step;
        let mut moved = false;
        while step >= cfg.min_step {
            if let Some(dir) = descent_direction(caps, &d, f, step, cfg.max_active) {
                let cand = geodesic(&d, &dir, step);
                let fc = caps.best(&cand).1;
                if fc < f {
                    d = cand;
                    f = fc;
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (f, d)
}

/// Points on the geodesic between two cap axes (or an axis and the
/// antipode of another) where the two margins are equal.
fn seam_starts(caps: &CapSet) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..caps.len() {
        for j in i + 1..caps.len() {
            for sign in [1.0, -1.0] {
                let u = caps.axis(i);
                let w: Vec<f64> = caps.axis(j).iter().map(|x| sign * x).collect();
                let c = dot(u, &w).clamp(-1.0, 1.0);
                let mut q: Vec<f64> = w.iter().zip(u).map(|(a, b)| a - c * b).collect();
                if !normalize(&mut q) {
                    continue;
                }
                let theta = c.acos();
                let t = 0.5 * (caps.half_angle(i) - caps.half_angle(j) + theta);
                if t > 0.0 && t < theta {
                    out.push(geodesic(u, &q, t));
                }
            }
        }
    }
    out
}

pub fn adversarial_min_margin(
    inst: &ShadowInstance,
    n_starts: usize,
    seed: u64,
) -> Result<CoverageReport, CoverageError> {
    adversarial_min_margin_with(inst, n_starts, seed, &AdversarialConfig::default())
}

pub fn adversarial_min_margin_with(
    inst: &ShadowInstance,
    n_starts: usize,
    seed: u64,
    cfg: &AdversarialConfig,
) -> Result<CoverageReport, CoverageError> {
    if n_starts == 0 {
        return Err(CoverageError::InvalidStartCount);
    }
    let caps = CapSet::from_instance(inst)?;
    let probes = cfg.probe_samples.max(16 * n_starts as u64);
    let mut starts: Vec<Vec<f64>> = lowest_samples(&caps, probes, seed, n_starts)
        .into_iter()
        .map(|(_, d)| d)
        .collect();
    starts.extend(seam_starts(&caps));

    let (worst, _, witness) = starts
        .into_par_iter()
        .enumerate()
        .map(|(k, s)| {
            let (f, d) = descend(&caps, s, cfg);
            (f, k, d)
        })
        .reduce_with(|a, b| if (a.0, a.1) <= (b.0, b.1) { a } else { b })
        .unwrap_or((EMPTY_MARGIN, 0, vec![0.0; caps.dim()]));

    let all_open_at_witness = (0..caps.len())
        .filter(|&i| caps.margin(i, &witness) >= worst - BOUNDARY_BAND)
        .all(|i| !caps.is_closed(i));
    let verdict = if worst < -BOUNDARY_BAND || (worst <= BOUNDARY_BAND && all_open_at_witness) {
        Verdict::NoShadow
    } else {
        Verdict::Undetermined
    };
    let mut report = CoverageReport::new(verdict, Method::Adversarial, worst);
    report.witness = Some(Vector::from(witness));
    report.samples_used = probes;
    report.seed = Some(seed);
    Ok(report)
}
