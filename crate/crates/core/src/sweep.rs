//! One-parameter sweeps over the three-ball constructions.

use std::io;

use serde::Serialize;
use thiserror::Error;

use crate::constructions::{
    ellipsoid_three_balls, interior_point_three_balls, EllipsoidParams, EllipsoidSystem, InteriorPointParams,
};
use crate::coverage::verify_exact_3d;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("InvalidSteps: a sweep needs at least one step")]
    InvalidSteps,
    #[error("InvalidRange: bounds must be finite, got {from} and {to}")]
    InvalidRange { from: f64, to: f64 },
}

/// Which construction to run and its fixed parameter; the swept one is `h`
/// for the interior point and `b'` for the spheroid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepTarget {
    InteriorPoint { r: f64 },
    Ellipsoid { a: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub ok: bool,
    /// Construction error name when `ok` is false.
    pub error: Option<String>,
    pub worst_margin: Option<f64>,
    pub seam_overlap: Option<f64>,
    pub theta: Option<f64>,
}

/// `steps` evenly spaced values from `from` to `to`, both included.
pub fn linspace(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, SweepError> {
    if steps == 0 {
        return Err(SweepError::InvalidSteps);
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(SweepError::InvalidRange { from, to });
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k + 1 == steps {
                to
            } else {
                from + (to - from) * k as f64 / last
            }
        })
        .collect())
}

fn row(param: f64, built: Result<EllipsoidSystem, crate::constructions::ConstructionError>) -> SweepRow {
    match built.map_err(|e| e.name().to_string()).and_then(|sys| {
        verify_exact_3d(&sys.instance)
            .map(|r| (sys, r.worst_margin))
            .map_err(|_| "Coverage".to_string())
    }) {
        Ok((sys, margin)) => SweepRow {
            param,
            ok: true,
            error: None,
            worst_margin: Some(margin),
            seam_overlap: Some(sys.seam_overlap),
            theta: Some(sys.theta),
        },
        Err(name) => SweepRow {
            param,
            ok: false,
            error: Some(name),
            worst_margin: None,
            seam_overlap: None,
            theta: None,
        },
    }
}

pub fn run_sweep(target: SweepTarget, from: f64, to: f64, steps: usize) -> Result<Vec<SweepRow>, SweepError> {
    Ok(linspace(from, to, steps)?
        .into_iter()
        .map(|p| match target {
            SweepTarget::InteriorPoint { r } => row(p, interior_point_three_balls(&InteriorPointParams { r, h: p })),
            SweepTarget::Ellipsoid { a } => row(
                p,
                ellipsoid_three_balls(&EllipsoidParams {
                    a,
                    b_prime: p,
                    theta: None,
                }),
            ),
        })
        .collect())
}

/// Writes rows as CSV with a header line.
pub fn write_csv<W: io::Write>(rows: &[SweepRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
