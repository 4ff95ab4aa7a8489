use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use shadow_core::constructions::{
    disk_pair_2d, ellipsoid_three_balls, equalize_radii, interior_point_three_balls, perturbed_simplex_system,
    regular_simplex_system, EllipsoidParams, InteriorPointParams, SimplexParams,
};
use shadow_core::coverage::{
    adversarial_min_margin, verify_auto, verify_exact_2d, verify_exact_3d, verify_monte_carlo, CoverageError,
};
use shadow_core::io::{load_document, load_instance, save_instance_with, ReportDocument};
use shadow_core::svg::{emit_svg, Plane};
use shadow_core::sweep::{run_sweep, write_csv, SweepTarget};
use shadow_core::{validate_instance, ShadowInstance, Vector, Verdict};

/// Build and verify systems of disjoint balls that shadow a point.
#[derive(Parser)]
#[command(name = "shadow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Perturbed simplex system in dimension N, shrunk into disjointness.
    Simplex {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.5)]
        shrink: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mutually tangent balls at the vertices of a regular simplex.
    Regular {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        closed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Three balls shadowing a point on a spheroid with semi-axes a, a, b'.
    Ellipsoid3 {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        bprime: f64,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Three balls centered on a sphere of radius R shadowing a point at distance H from its center.
    Interior3 {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rescales every ball about the point to the largest radius.
    Equalize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two disjoint disks shadowing the origin of the plane.
    Diskpair {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decides whether every line through the point meets a ball.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst margin of a three-ball construction over a parameter range, as CSV.
    Sweep {
        #[arg(long, value_enum)]
        construction: ConstructionArg,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long, value_enum)]
        param: ParamArg,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
    },
    /// SVG cross-section through the point in the plane spanned by U and V.
    Plot {
        #[arg(long)]
        input: PathBuf,
        /// Comma separated, defaults to the first coordinate axis.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        u: Option<Vec<f64>>,
        /// Comma separated, defaults to the second coordinate axis.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        v: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Mc,
    Adversarial,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    Interior3,
    Ellipsoid3,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParamArg {
    H,
    Bprime,
}

/// A failure reported as exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("IoError: {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure(format!("IoError: {e}"))),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("IoError: {}: {e}", path.display())))
}

fn meta(construction: &str, params: &[(&str, String)]) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("construction".to_string(), construction.to_string());
    for (k, v) in params {
        m.insert((*k).to_string(), v.clone());
    }
    m
}

fn write_instance(out: Option<PathBuf>, inst: &ShadowInstance, metadata: BTreeMap<String, String>) -> Outcome {
    emit(out.as_deref(), &save_instance_with(inst, metadata))?;
    Ok(ExitCode::SUCCESS)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Simplex {
            dim,
            epsilon,
            shrink,
            out,
        } => {
            let sys = perturbed_simplex_system(&SimplexParams { dim, epsilon, shrink })?;
            let m = meta(
                "simplex",
                &[
                    ("dim", dim.to_string()),
                    ("epsilon", epsilon.to_string()),
                    ("shrink", shrink.to_string()),
                    ("tangent_margin", sys.tangent_margin.to_string()),
                ],
            );
            write_instance(out, &sys.instance, m)
        }
        Command::Regular { dim, closed, out } => {
            let inst = regular_simplex_system(dim, closed)?;
            let m = meta("regular", &[("dim", dim.to_string()), ("closed", closed.to_string())]);
            write_instance(out, &inst, m)
        }
        Command::Ellipsoid3 { a, bprime, theta, out } => {
            let sys = ellipsoid_three_balls(&EllipsoidParams {
                a,
                b_prime: bprime,
                theta,
            })?;
            let m = meta(
                "ellipsoid3",
                &[
                    ("a", a.to_string()),
                    ("bprime", bprime.to_string()),
                    ("theta", sys.theta.to_string()),
                    ("seam_overlap", sys.seam_overlap.to_string()),
                ],
            );
            write_instance(out, &sys.instance, m)
        }
        Command::Interior3 { r, h, out } => {
            let sys = interior_point_three_balls(&InteriorPointParams { r, h })?;
            let m = meta(
                "interior3",
                &[
                    ("r", r.to_string()),
                    ("h", h.to_string()),
                    ("theta", sys.theta.to_string()),
                    ("seam_overlap", sys.seam_overlap.to_string()),
                ],
            );
            write_instance(out, &sys.instance, m)
        }
        Command::Equalize { input, out } => {
            let (inst, mut m) = load_document(&read(&input)?)?;
            let eq = equalize_radii(&inst)?;
            m.insert("equalized".to_string(), "true".to_string());
            write_instance(out, &eq, m)
        }
        Command::Diskpair { r, out } => {
            let inst = disk_pair_2d(r)?;
            write_instance(out, &inst, meta("diskpair", &[("r", r.to_string())]))
        }
        Command::Verify {
            input,
            method,
            samples,
            starts,
            seed,
            out,
        } => verify(&input, method, samples, starts, seed, out.as_deref()),
        Command::Sweep {
            construction,
            r,
            a,
            param,
            from,
            to,
            steps,
        } => {
            let target = match (construction, param) {
                (ConstructionArg::Interior3, ParamArg::H) => SweepTarget::InteriorPoint {
                    r: r.ok_or_else(|| Failure("InvalidParameter: interior3 sweep needs --r".into()))?,
                },
                (ConstructionArg::Ellipsoid3, ParamArg::Bprime) => SweepTarget::Ellipsoid {
                    a: a.ok_or_else(|| Failure("InvalidParameter: ellipsoid3 sweep needs --a".into()))?,
                },
                (ConstructionArg::Interior3, _) => {
                    return Err(Failure("InvalidParameter: interior3 sweeps --param h".into()))
                }
                (ConstructionArg::Ellipsoid3, _) => {
                    return Err(Failure("InvalidParameter: ellipsoid3 sweeps --param bprime".into()))
                }
            };
            let rows = run_sweep(target, from, to, steps)?;
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            emit(None, &String::from_utf8(buf)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot { input, u, v, out } => {
            let inst = load_instance(&read(&input)?)?;
            let n = inst.dim();
            let u = u.map(Vector::from).unwrap_or_else(|| Vector::basis(n, 0));
            let v = v.map(Vector::from).unwrap_or_else(|| Vector::basis(n, 1));
            emit(out.as_deref(), &emit_svg(&inst, &Plane::new(u, v)?)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn verify(input: &Path, method: MethodArg, samples: u64, starts: usize, seed: u64, out: Option<&Path>) -> Outcome {
    let inst = load_instance(&read(input)?)?;
    let validity = validate_instance(&inst);
    if !validity.is_valid() {
        return Err(Failure(format!("InvalidInstance: {}", validity.findings().join("; "))));
    }
    let started = Instant::now();
    let report = match method {
        MethodArg::Exact => match inst.dim() {
            2 => verify_exact_2d(&inst),
            3 => verify_exact_3d(&inst),
            n => Err(CoverageError::DimensionMismatch {
                method: "exact",
                expected: if n < 2 { 2 } else { 3 },
                found: n,
            }),
        },
        MethodArg::Mc => verify_monte_carlo(&inst, samples, seed),
        MethodArg::Adversarial => adversarial_min_margin(&inst, starts, seed),
        MethodArg::Auto => verify_auto(&inst, samples, starts, seed),
    }?;
    eprintln!(
        "{} via {} in {:.3} s",
        report.verdict,
        report.method.as_str(),
        started.elapsed().as_secs_f64()
    );
    emit(out, &ReportDocument::new(&report, &validity).to_json())?;
    Ok(match report.verdict {
        Verdict::Shadow => ExitCode::SUCCESS,
        Verdict::NoShadow => ExitCode::from(1),
        Verdict::Undetermined => ExitCode::from(3),
    })
}
