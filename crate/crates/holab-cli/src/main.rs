//! `holab`: classification, curvature, transport, holonomy estimation and
//! verification suites over catalog or user-supplied immersions.

mod render;
mod spec_file;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;

use holab::catalog;
use holab::crtype::classify;
use holab::holonomy::{
    holonomy_algebra, parallel_transport, HolonomyConfig, ParamCurve, TransportOptions,
};
use holab::submanifold::{frame_at, normal_curvature};
use holab::verify::{
    run_all, run_check_strict, CheckOutcome, VerifyConfig, CHECK_NAMES,
};

use render::{fmt_f, matrix_value, Format, Report, Row, Value};

#[derive(Parser)]
#[command(
    name = "holab",
    about = "numerical differential geometry of submanifolds of complex space forms",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Target {
    /// Catalog entry name.
    #[arg(long, conflicts_with = "spec")]
    example: Option<String>,
    /// Immersion spec file (JSON).
    #[arg(long)]
    spec: Option<String>,
}

#[derive(Args)]
struct Output {
    /// Output format.
    #[arg(long, default_value = "text")]
    format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    out: Option<String>,
    /// Append wall-clock timings (excluded by default so identical
    /// invocations are byte-identical).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in example immersions.
    Catalog {
        #[command(flatten)]
        output: Output,
    },
    /// Pointwise CR classification.
    Classify {
        #[command(flatten)]
        target: Target,
        /// Parameter point u1,u2,... (repeatable).
        #[arg(long, required = true)]
        point: Vec<String>,
        /// Angle tolerance in radians.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Normal curvature operators at a point.
    Curvature {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        point: String,
        #[command(flatten)]
        output: Output,
    },
    /// Parallel transport of a normal vector along a polyline curve.
    Transport {
        #[command(flatten)]
        target: Target,
        /// Waypoints "u1,u2;v1,v2;..." traversed at uniform speed.
        #[arg(long)]
        curve: String,
        /// Ambient coordinates of the start vector (projected onto the
        /// normal space before transport).
        #[arg(long)]
        vector: String,
        #[arg(long, default_value_t = 256)]
        steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Estimate the restricted normal-holonomy algebra at a point.
    Holonomy {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        point: String,
        /// Spoke radii, comma separated.
        #[arg(long, value_delimiter = ',')]
        radius_schedule: Option<Vec<f64>>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 192)]
        steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run named checks (or "all") against a catalog example.
    Verify {
        #[command(flatten)]
        target: Target,
        /// Check name or "all".
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 192)]
        steps: usize,
        /// Loops per loop-driven check.
        #[arg(long, default_value_t = 8)]
        loops: usize,
        /// Sample points per pointwise check.
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// `HOLAB_THREADS` caps the suite parallelism (0 or unset = automatic).
fn init_thread_pool() {
    if let Ok(v) = std::env::var("HOLAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn parse_point(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| format!("invalid coordinate `{x}` in point `{s}`: {e}"))
        })
        .collect()
}

fn parse_curve(s: &str) -> Result<ParamCurve, String> {
    let points: Result<Vec<Vec<f64>>, String> = s.split(';').map(parse_point).collect();
    let points = points?;
    if points.len() < 2 {
        return Err("a curve needs at least two waypoints".into());
    }
    Ok(ParamCurve::polyline(points))
}

struct Loaded {
    immersion: holab::Immersion,
    label: String,
    entry: Option<catalog::CatalogEntry>,
}

fn load_target(t: &Target) -> Result<Loaded, String> {
    match (&t.example, &t.spec) {
        (Some(name), None) => {
            let entry = catalog::get(name).map_err(|e| e.to_string())?;
            Ok(Loaded { immersion: entry.immersion(), label: name.clone(), entry: Some(entry) })
        }
        (None, Some(path)) => {
            let loaded = spec_file::load(path)?;
            Ok(Loaded { immersion: loaded.immersion, label: loaded.label, entry: loaded.entry })
        }
        _ => Err("provide exactly one of --example NAME or --spec FILE".into()),
    }
}

fn emit(report: Report, output: &Output, started: std::time::Instant) -> Result<(), String> {
    let mut report = report;
    if output.timings {
        report.push_f("elapsed-seconds", started.elapsed().as_secs_f64());
    }
    let text = report.render(output.format);
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write `{path}`: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let started = std::time::Instant::now();
    match cli.command {
        Command::Catalog { output } => {
            let mut report = Report::new("catalog");
            let rows: Vec<Row> = catalog::list()
                .iter()
                .map(|e| Row {
                    label: format!(
                        "{} (c = {}, n = {}, k = {}): {}",
                        e.name,
                        e.space.c(),
                        e.space.n,
                        e.param_dim,
                        e.summary
                    ),
                    residual: String::new(),
                })
                .collect();
            report.push("entries", Value::Table(rows));
            emit(report, &output, started)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { target, point, tol, output } => {
            let loaded = load_target(&target)?;
            let tol = tol.unwrap_or(holab::tol::CR_ANGLE_ANALYTIC);
            let mut report = Report::new("classify");
            report.push("input", Value::Str(loaded.label.clone()));
            report.push_f("tol", tol);
            let mut rows = Vec::new();
            for p in &point {
                let u = parse_point(p)?;
                let cls = classify(&loaded.immersion, &u, tol).map_err(|e| e.to_string())?;
                rows.push(Row {
                    label: format!(
                        "({p}) label {} dim-D {} dim-Dperp {} coisotropic {}",
                        cls.label,
                        cls.dim_d,
                        cls.dim_dperp,
                        cls.is_coisotropic()
                    ),
                    residual: fmt_f(cls.coisotropic_angle),
                });
                let angles: Vec<String> = cls.angles.iter().map(|a| fmt_f(*a)).collect();
                rows.push(Row {
                    label: format!("({p}) principal angles {}", angles.join(" ")),
                    residual: fmt_f(cls.anti_invariance_angle),
                });
            }
            report.push("points", Value::Table(rows));
            report.push("pass", Value::Bool(true));
            emit(report, &output, started)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Curvature { target, point, output } => {
            let loaded = load_target(&target)?;
            let u = parse_point(&point)?;
            let nc = normal_curvature(&loaded.immersion, &u).map_err(|e| e.to_string())?;
            let mut report = Report::new("curvature");
            report.push("input", Value::Str(loaded.label.clone()));
            report.push("point", Value::Str(point));
            report.push(
                "normal-rank",
                Value::Int(nc.frame.nu_dim() as i64),
            );
            report.push_f("total-norm", nc.total_norm());
            for (idx, &(i, j)) in nc.pairs.iter().enumerate() {
                report.push(&format!("r-perp-{i}{j}"), matrix_value(&nc.mats[idx]));
            }
            emit(report, &output, started)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Transport { target, curve, vector, steps, output } => {
            let loaded = load_target(&target)?;
            let curve = parse_curve(&curve)?;
            let coords = parse_point(&vector)?;
            let dim = loaded.immersion.space().coord_dim();
            if coords.len() != dim {
                return Err(format!(
                    "vector has {} coordinates, the ambient space needs {dim}",
                    coords.len()
                ));
            }
            // project the requested vector onto the normal space at the start
            let frame =
                frame_at(&loaded.immersion, &curve.start()).map_err(|e| e.to_string())?;
            let xi0 = frame.proj_normal(&DVector::from_vec(coords));
            if xi0.norm() < 1e-10 {
                return Err("vector has no normal component at the curve start".into());
            }
            let out = parallel_transport(
                &loaded.immersion,
                &curve,
                &xi0,
                TransportOptions { steps },
            )
            .map_err(|e| e.to_string())?;
            let mut report = Report::new("transport");
            report.push("input", Value::Str(loaded.label.clone()));
            report.push("steps", Value::Int(steps as i64));
            report.push(
                "start-vector",
                Value::List(xi0.iter().map(|x| fmt_f(*x)).collect()),
            );
            report.push(
                "transported-vector",
                Value::List(out.iter().map(|x| fmt_f(*x)).collect()),
            );
            emit(report, &output, started)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Holonomy { target, point, radius_schedule, seed, steps, output } => {
            let loaded = load_target(&target)?;
            let u = parse_point(&point)?;
            let mut cfg = HolonomyConfig { seed, steps, ..Default::default() };
            if let Some(r) = radius_schedule {
                if r.is_empty() {
                    return Err("radius schedule must not be empty".into());
                }
                cfg.radius_schedule = r;
            }
            let est = holonomy_algebra(&loaded.immersion, &u, &cfg).map_err(|e| e.to_string())?;
            let mut report = Report::new("holonomy");
            report.push("input", Value::Str(loaded.label.clone()));
            report.push("point", Value::Str(point));
            report.push("seed", Value::Int(seed as i64));
            report.push("view", Value::Str(format!("{:?}", est.view)));
            report.push("algebra-dim", Value::Int(est.algebra_dim() as i64));
            report.push("flat", Value::Bool(est.flat));
            report.push_f("orthogonality-defect", est.orthogonality_defect);
            report.push_f("closure-defect", est.closure_defect);
            report.push(
                "kept-singular-values",
                Value::List(est.singular_values.iter().map(|s| fmt_f(*s)).collect()),
            );
            let blocks: Vec<String> = est
                .invariant_blocks
                .iter()
                .map(|b| format!("dim {} trivial {}", b.basis.ncols(), b.trivial))
                .collect();
            report.push("invariant-blocks", Value::List(blocks));
            for (i, a) in est.algebra.iter().enumerate() {
                report.push(&format!("generator-{i}"), matrix_value(a));
            }
            emit(report, &output, started)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { target, check, tol, seed, steps, loops, samples, output } => {
            let loaded = load_target(&target)?;
            let Some(entry) = loaded.entry else {
                return Err(
                    "verify requires a catalog-backed target (grid specs carry no ground-truth \
                     chain or candidate data)"
                        .into(),
                );
            };
            let cfg = VerifyConfig { tolerance: tol, steps, seed, samples, loops };
            let mut report = Report::new("verify");
            report.push("input", Value::Str(loaded.label.clone()));
            report.push("check", Value::Str(check.clone()));
            report.push("seed", Value::Int(seed as i64));
            let mut all_pass = true;
            let outcomes: Vec<(String, Result<CheckOutcome, holab::Error>)> = if check == "all" {
                run_all(&entry, &cfg)
            } else {
                if !CHECK_NAMES.contains(&check.as_str()) {
                    return Err(format!(
                        "unknown check `{check}`; available: {}",
                        CHECK_NAMES.join(", ")
                    ));
                }
                vec![(check.clone(), run_check_strict(&entry, &check, &cfg))]
            };
            for (name, outcome) in outcomes {
                match outcome {
                    Ok(CheckOutcome::Report(r)) => {
                        all_pass &= r.pass;
                        let rows: Vec<Row> = r
                            .details
                            .iter()
                            .map(|d| Row {
                                label: d.label.clone(),
                                residual: fmt_f(d.residual),
                            })
                            .collect();
                        report.push(
                            &format!("{name}.summary"),
                            Value::Str(format!(
                                "pass {} max-residual {} tolerance {} points {}",
                                r.pass,
                                fmt_f(r.max_residual),
                                fmt_f(r.tolerance),
                                r.points_sampled
                            )),
                        );
                        report.push(&format!("{name}.details"), Value::Table(rows));
                    }
                    Ok(CheckOutcome::Skipped { reason, .. }) => {
                        report.push(&format!("{name}.skipped"), Value::Str(reason));
                    }
                    Err(e) => {
                        all_pass = false;
                        report.push(&format!("{name}.failed"), Value::Str(e.to_string()));
                    }
                }
            }
            report.push("pass", Value::Bool(all_pass));
            emit(report, &output, started)?;
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
