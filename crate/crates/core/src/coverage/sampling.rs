//! Seeded uniform direction sampling on `S^{n-1}`.
//!
//! Sample `i` is drawn from the ChaCha stream selected by `i / CHUNK`, so the
//! sequence depends only on the seed, never on how chunks are scheduled
//! across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{CapSet, CoverageError, CoverageReport, Method, Verdict};
use crate::geom::{ShadowInstance, Vector, EMPTY_MARGIN};

const CHUNK: u64 = 8192;

/// Fills `out` with a uniformly random unit vector (normalized isotropic
/// Gaussian).
pub fn random_direction<R: rand::Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut n2 = 0.0;
        for v in out.iter_mut() {
            *v = StandardNormal.sample(rng);
            n2 += *v * *v;
        }
        if n2 > 1e-300 {
            let n = n2.sqrt();
            out.iter_mut().for_each(|v| *v /= n);
            return;
        }
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Calls `f(index, direction)` for samples `start..end` of chunk `chunk`.
fn for_each_in_chunk(seed: u64, dim: usize, chunk: u64, count: u64, mut f: impl FnMut(u64, &[f64])) {
    let mut rng = chunk_rng(seed, chunk);
    let mut d = vec![0.0; dim];
    for k in 0..count {
        random_direction(&mut rng, &mut d);
        f(chunk * CHUNK + k, &d);
    }
}

/// The `n_samples` directions of stream `seed`, in order. Intended for
/// tests and small probes.
pub fn directions(dim: usize, n_samples: u64, seed: u64) -> Vec<Vector> {
    let mut out = Vec::with_capacity(n_samples as usize);
    let chunks = n_samples.div_ceil(CHUNK);
    for c in 0..chunks {
        let count = CHUNK.min(n_samples - c * CHUNK);
        for_each_in_chunk(seed, dim, c, count, |_, d| out.push(Vector::from(d.to_vec())));
    }
    out
}

#[derive(Debug, Clone)]
struct Tally {
    uncovered: u64,
    first_uncovered: Option<(u64, Vec<f64>)>,
    min: Option<(f64, u64, Vec<f64>)>,
}

impl Tally {
    fn empty() -> Self {
        Tally {
            uncovered: 0,
            first_uncovered: None,
            min: None,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.uncovered += other.uncovered;
        self.first_uncovered = match (self.first_uncovered, other.first_uncovered) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self.min = match (self.min, other.min) {
            (Some(a), Some(b)) => Some(if (a.0, a.1) <= (b.0, b.1) { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Lowest-margin sample directions, sorted by (margin, index).
pub(crate) fn lowest_samples(caps: &CapSet, n_samples: u64, seed: u64, keep: usize) -> Vec<(f64, Vec<f64>)> {
    let chunks = n_samples.div_ceil(CHUNK);
    let mut all: Vec<(f64, u64, Vec<f64>)> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let count = CHUNK.min(n_samples - c * CHUNK);
            let mut local: Vec<(f64, u64, Vec<f64>)> = Vec::new();
            for_each_in_chunk(seed, caps.dim(), c, count, |i, d| {
                let (m, _) = caps.evaluate(d);
                local.push((m, i, d.to_vec()));
            });
            local.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            local.truncate(keep);
            local
        })
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    all.truncate(keep);
    all.into_iter().map(|(m, _, d)| (m, d)).collect()
}

/// Samples `n_samples` directions. Finds no-shadow witnesses and profiles the
/// margin; it never certifies a shadow, so the best it can report is
/// `Undetermined`.
pub fn verify_monte_carlo(inst: &ShadowInstance, n_samples: u64, seed: u64) -> Result<CoverageReport, CoverageError> {
    if n_samples == 0 {
        return Err(CoverageError::InvalidSampleCount);
    }
    let caps = CapSet::from_instance(inst)?;
    let chunks = n_samples.div_ceil(CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK.min(n_samples - c * CHUNK);
            let mut t = Tally::empty();
            for_each_in_chunk(seed, caps.dim(), c, count, |i, d| {
                let (m, covered) = caps.evaluate(d);
                if !covered {
                    t.uncovered += 1;
                    if t.first_uncovered.is_none() {
                        t.first_uncovered = Some((i, d.to_vec()));
                    }
                }
                if t.min.as_ref().is_none_or(|(best, _, _)| m < *best) {
                    t.min = Some((m, i, d.to_vec()));
                }
            });
            t
        })
        .reduce(Tally::empty, Tally::merge);

    let worst = tally.min.as_ref().map_or(EMPTY_MARGIN, |m| m.0);
    let (verdict, witness) = match (&tally.first_uncovered, &tally.min) {
        (Some((_, d)), _) => (Verdict::NoShadow, Some(d.clone())),
        (None, Some((_, _, d))) => (Verdict::Undetermined, Some(d.clone())),
        (None, None) => (Verdict::Undetermined, None),
    };
    let mut report = CoverageReport::new(verdict, Method::MonteCarlo, worst);
    report.witness = witness.map(Vector::from);
    report.samples_used = n_samples;
    report.uncovered_count = Some(tally.uncovered);
    report.uncovered_fraction_estimate = Some(tally.uncovered as f64 / n_samples as f64);
    report.seed = Some(seed);
    Ok(report)
}
