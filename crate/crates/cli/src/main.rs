//! mgeo: curve length, arc-length reparametrization, geodesics, and metric
//! checks from the command line.
//!
//! Exit codes: 0 when the requested computation converged, certified, or
//! found no violations; 2 when it ran but the outcome is negative
//! (non-convergence, failed certificate, axiom violations); 1 for input or
//! usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use metric_geom::axioms::{self, AxiomReport};
use metric_geom::error::Error;
use metric_geom::io::{self, sig15, PointSpec};
use metric_geom::length::{estimate_length_traced, DEFAULT_MAX_SEGMENTS, DEFAULT_TOL};
use metric_geom::lipschitz;
use metric_geom::norm::PNorm;
use metric_geom::reparam::reparametrize_by_arclength;
use metric_geom::sample;
use metric_geom::{Curve, GeodesicProblem, Metric, ShorteningConfig, Vector};

const EXIT_NEGATIVE: u8 = 2;

/// Slack factor allowed by the reparametrization self-check.
const UNIT_SPEED_SLACK: f64 = 1e-6;
const UNIT_SPEED_PAIRS: usize = 4096;

#[derive(Parser)]
#[command(
    name = "mgeo",
    version,
    about = "Lengths, geodesics, and axiom checks in metric spaces"
)]
struct Cli {
    /// Relative tolerance: convergence of length estimates, and the margin
    /// allowed by axiom checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Segment budget for dyadic length refinement.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SEGMENTS)]
    max_segments: usize,

    /// Seed for every randomized sample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the length of a curve under a metric; emits the refinement
    /// trace as CSV.
    Length(LengthArgs),
    /// Reparametrize a curve by arc length; emits curve JSON.
    Reparam(ReparamArgs),
    /// Shorten a polyline between two points; emits curve JSON and a
    /// certificate line.
    Geodesic(GeodesicArgs),
    /// Axiom and bound checks.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Lipschitz constants of built-in maps.
    #[command(subcommand)]
    Lipschitz(LipschitzCommand),
}

#[derive(Args)]
struct LengthArgs {
    /// Metric name: euclidean, pnorm:<p>, discrete, chordal-sphere, sphere.
    #[arg(long)]
    metric: String,
    /// Built-in curve like circle[0,6.28] or segment[e1;e2], or a path to a
    /// curve JSON file.
    #[arg(long)]
    curve: String,
}

#[derive(Args)]
struct ReparamArgs {
    #[arg(long)]
    metric: String,
    #[arg(long)]
    curve: String,
    /// Arc-length table size for parametric curves; polylines use their
    /// own knots.
    #[arg(long, default_value_t = 129)]
    samples: usize,
}

#[derive(Args)]
struct GeodesicArgs {
    #[arg(long)]
    metric: String,
    /// Start point spec, e.g. e1 or (1,0,0).
    #[arg(long)]
    from: String,
    /// End point spec.
    #[arg(long)]
    to: String,
    /// Ambient dimension; inferred from the points when omitted.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 65)]
    vertices: usize,
    #[arg(long, default_value_t = 10_000)]
    max_sweeps: usize,
    /// Stop once the relative length decrease of a sweep falls below this.
    #[arg(long, default_value_t = 1e-12)]
    stop_tol: f64,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Metric axioms, for a named metric over sampled points or for an
    /// explicit distance matrix.
    Metric(CheckMetricArgs),
    /// Norm axioms for pnorm:<p>.
    Norm(CheckNormArgs),
    /// Chord/geodesic comparison bounds on sampled unit vectors.
    SphereBounds(SphereBoundsArgs),
}

#[derive(Args)]
struct CheckMetricArgs {
    /// Metric name to check over sampled points.
    #[arg(long, conflicts_with = "matrix")]
    name: Option<String>,
    /// Path to a headerless square CSV of claimed distances.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Sample size for named metrics.
    #[arg(long, default_value_t = 40)]
    points: usize,
}

#[derive(Args)]
struct CheckNormArgs {
    /// pnorm:<p> with p >= 1 or p = inf.
    #[arg(long)]
    name: String,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 40)]
    vectors: usize,
    #[arg(long, default_value_t = 9)]
    scalars: usize,
}

#[derive(Args)]
struct SphereBoundsArgs {
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
}

#[derive(Args)]
struct LipschitzArgs {
    #[arg(long)]
    metric: String,
    /// Map spec: scale:<c>, dist-to:<point>, or project:<q;u1;...>.
    #[arg(long)]
    map: String,
    /// Ambient dimension; inferred from the map spec when omitted.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
}

#[derive(Subcommand)]
enum LipschitzCommand {
    /// Largest image/source distance ratio over sampled pairs.
    Estimate(LipschitzArgs),
    /// Check a claimed constant over sampled pairs.
    Verify {
        #[command(flatten)]
        common: LipschitzArgs,
        #[arg(long)]
        constant: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Length(args) => run_length(&cli, args),
        Command::Reparam(args) => run_reparam(&cli, args),
        Command::Geodesic(args) => run_geodesic(&cli, args),
        Command::Check(check) => run_check(&cli, check),
        Command::Lipschitz(lip) => run_lipschitz(&cli, lip),
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing output to {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// A curve argument is a built-in spec when it carries an argument list in
/// brackets, otherwise a path to curve JSON.
fn load_curve(arg: &str) -> anyhow::Result<Curve> {
    if arg.contains('[') {
        Ok(io::parse_builtin_curve(arg)?)
    } else {
        let text = fs::read_to_string(arg).with_context(|| format!("reading curve file {arg}"))?;
        Ok(io::curve_from_json(&text)?)
    }
}

// ===========================================================================
// length
// ===========================================================================

fn run_length(cli: &Cli, args: &LengthArgs) -> anyhow::Result<ExitCode> {
    let curve = load_curve(&args.curve)?;
    let metric = io::parse_metric(&args.metric, curve.dim())?;
    let (estimate, trace) = estimate_length_traced(&curve, &metric, cli.tol, cli.max_segments)?;
    let mut out = String::from("segments,lambda,converged\n");
    if trace.is_empty() {
        out.push_str("0,0,true\n");
    }
    for (i, row) in trace.iter().enumerate() {
        let converged = i + 1 == trace.len() && estimate.converged;
        out.push_str(&format!(
            "{},{},{}\n",
            row.segments,
            sig15(row.lambda),
            converged
        ));
    }
    emit(cli, &out)?;
    Ok(if estimate.converged {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "length did not converge within {} segments",
            estimate.segments
        );
        ExitCode::from(EXIT_NEGATIVE)
    })
}

// ===========================================================================
// reparam
// ===========================================================================

fn run_reparam(cli: &Cli, args: &ReparamArgs) -> anyhow::Result<ExitCode> {
    let curve = load_curve(&args.curve)?;
    let metric = io::parse_metric(&args.metric, curve.dim())?;
    let q = match reparametrize_by_arclength(&curve, &metric, args.samples, cli.tol) {
        Ok(q) => q,
        Err(Error::NonConvergentLength(segments)) => {
            eprintln!("length did not converge within {segments} segments");
            return Ok(ExitCode::from(EXIT_NEGATIVE));
        }
        Err(e) => return Err(e.into()),
    };

    // Self-check: the table must traverse no faster than unit speed.
    let domain = q.domain();
    let mut rng = sample::rng_from_seed(cli.seed);
    let mut violations = 0usize;
    if domain.width() > 0.0 {
        for _ in 0..UNIT_SPEED_PAIRS {
            let s = sample::uniform(domain.a(), domain.b(), &mut rng);
            let t = sample::uniform(domain.a(), domain.b(), &mut rng);
            let d = metric.distance(
                &q.eval_for_metric(s, &metric)?,
                &q.eval_for_metric(t, &metric)?,
            )?;
            if d > (s - t).abs() * (1.0 + UNIT_SPEED_SLACK) {
                violations += 1;
            }
        }
    }

    let json = match q.polyline_data() {
        Some(_) => io::curve_to_json(&q)?,
        None => {
            // Curve of zero length: a single anchor point.
            let p = q.eval(domain.a());
            let coords: Vec<String> = p.iter().map(|c| sig15(*c)).collect();
            format!(
                "{{\"dim\":{},\"params\":[0],\"points\":[[{}]]}}",
                q.dim(),
                coords.join(",")
            )
        }
    };
    emit(cli, &format!("{json}\n"))?;
    if violations > 0 {
        eprintln!("unit-speed self-check failed for {violations} sampled pairs");
        return Ok(ExitCode::from(EXIT_NEGATIVE));
    }
    Ok(ExitCode::SUCCESS)
}

// ===========================================================================
// geodesic
// ===========================================================================

fn run_geodesic(cli: &Cli, args: &GeodesicArgs) -> anyhow::Result<ExitCode> {
    let from_spec = PointSpec::parse(&args.from)?;
    let to_spec = PointSpec::parse(&args.to)?;
    let metric_floor = if matches!(args.metric.trim(), "sphere" | "chordal-sphere") {
        2
    } else {
        1
    };
    let inferred = from_spec.min_dim().max(to_spec.min_dim()).max(metric_floor);
    let dim = args.dim.unwrap_or(inferred);
    let metric = io::parse_metric(&args.metric, dim)?;
    let from = from_spec.resolve(dim)?;
    let to = to_spec.resolve(dim)?;
    if metric.distance(&from, &to)? == 0.0 {
        anyhow::bail!("the endpoints coincide; nothing to shorten");
    }
    let problem = GeodesicProblem::new(metric, from, to)?;
    let config = ShorteningConfig {
        vertices: args.vertices,
        max_sweeps: args.max_sweeps,
        stop_tol: args.stop_tol,
        seed: cli.seed,
    };
    let outcome = metric_geom::geodesic::shorten_polyline(&problem, &config)?;
    let cert = &outcome.certificate;
    let text = format!(
        "{}\n{},{},{}\n",
        io::curve_to_json(&outcome.curve)?,
        sig15(cert.final_length),
        sig15(cert.endpoint_distance),
        cert.certified
    );
    emit(cli, &text)?;
    Ok(if cert.certified {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "not certified: length {} exceeds endpoint distance {}",
            sig15(cert.final_length),
            sig15(cert.endpoint_distance)
        );
        ExitCode::from(EXIT_NEGATIVE)
    })
}

// ===========================================================================
// check
// ===========================================================================

fn render_report(report: &AxiomReport) -> String {
    let mut out = String::from("check,instances,violations,worst_margin\n");
    for c in &report.checks {
        let worst = c.worst_margin.map_or_else(|| "-".to_string(), sig15);
        out.push_str(&format!(
            "{},{},{},{}\n",
            c.axiom, c.instances, c.violation_count, worst
        ));
    }
    for c in &report.checks {
        for v in &c.violations {
            let witness: Vec<String> = v.witness.iter().map(|i| i.to_string()).collect();
            out.push_str(&format!(
                "violation,{},{},{},{},{}\n",
                c.axiom,
                witness.join(";"),
                sig15(v.lhs),
                sig15(v.rhs),
                sig15(v.margin)
            ));
        }
        if let Some(r) = c.worst_ratio {
            out.push_str(&format!("ratio,{},{}\n", c.axiom, sig15(r)));
        }
    }
    out
}

fn finish_report(cli: &Cli, report: &AxiomReport) -> anyhow::Result<ExitCode> {
    emit(cli, &render_report(report))?;
    Ok(if report.clean() {
        ExitCode::SUCCESS
    } else {
        eprintln!("{} axiom violations found", report.total_violations());
        ExitCode::from(EXIT_NEGATIVE)
    })
}

fn run_check(cli: &Cli, check: &CheckCommand) -> anyhow::Result<ExitCode> {
    match check {
        CheckCommand::Metric(args) => {
            let report = match (&args.name, &args.matrix) {
                (Some(name), None) => {
                    let metric = io::parse_metric(name, args.dim)?;
                    let mut rng = sample::rng_from_seed(cli.seed);
                    let points = sample::points_in(&metric, args.points, &mut rng);
                    axioms::check_builtin_metric(&metric, &points, cli.tol, cli.seed)?
                }
                (None, Some(path)) => {
                    let text = fs::read_to_string(path)
                        .with_context(|| format!("reading matrix {}", path.display()))?;
                    let matrix = io::matrix_from_csv(&text)?;
                    axioms::check_metric_matrix(&matrix, cli.tol)?
                }
                _ => anyhow::bail!("pass exactly one of --name or --matrix"),
            };
            finish_report(cli, &report)
        }
        CheckCommand::Norm(args) => {
            let p: PNorm = args
                .name
                .trim()
                .strip_prefix("pnorm:")
                .ok_or_else(|| Error::Parse(format!("expected pnorm:<p>, got {:?}", args.name)))?
                .parse()?;
            let mut rng = sample::rng_from_seed(cli.seed);
            let vectors = sample::points_in(&Metric::euclidean(args.dim), args.vectors, &mut rng);
            let scalars = sample::scalars(args.scalars, &mut rng);
            let report = axioms::check_norm_axioms(p, &vectors, &scalars, cli.tol, cli.seed)?;
            finish_report(cli, &report)
        }
        CheckCommand::SphereBounds(args) => {
            let metric = Metric::sphere(args.dim)?;
            let mut rng = sample::rng_from_seed(cli.seed);
            let pairs = sample::pairs_in(&metric, args.pairs, &mut rng);
            let report = axioms::check_comparison_bounds(&pairs, cli.tol)?;
            finish_report(cli, &report)
        }
    }
}

// ===========================================================================
// lipschitz
// ===========================================================================

fn map_spec_min_dim(spec: &str) -> Option<usize> {
    if let Some(p) = spec.trim().strip_prefix("dist-to:") {
        return PointSpec::parse(p).ok().map(|s| s.min_dim());
    }
    if let Some(plane) = spec.trim().strip_prefix("project:") {
        return plane
            .split(';')
            .map(|p| PointSpec::parse(p).ok().map(|s| s.min_dim()))
            .collect::<Option<Vec<_>>>()
            .and_then(|dims| dims.into_iter().max());
    }
    None
}

fn run_lipschitz(cli: &Cli, lip: &LipschitzCommand) -> anyhow::Result<ExitCode> {
    let (common, constant) = match lip {
        LipschitzCommand::Estimate(common) => (common, None),
        LipschitzCommand::Verify { common, constant } => (common, Some(*constant)),
    };
    let metric_floor = if matches!(common.metric.trim(), "sphere" | "chordal-sphere") {
        2
    } else {
        1
    };
    let dim = common
        .dim
        .unwrap_or_else(|| map_spec_min_dim(&common.map).unwrap_or(3).max(metric_floor));
    let metric = io::parse_metric(&common.metric, dim)?;
    let map = io::parse_map_spec(&common.map, metric)?;
    let mut rng = sample::rng_from_seed(cli.seed);
    let pairs: Vec<(Vector, Vector)> = sample::pairs_in(&metric, common.pairs, &mut rng);

    match constant {
        None => {
            let estimate = lipschitz::estimate_lipschitz_constant(&map, &pairs)?;
            emit(
                cli,
                &format!("pairs,{}\nestimate,{}\n", pairs.len(), sig15(estimate)),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Some(c) => {
            let report = lipschitz::verify_lipschitz(&map, c, &pairs)?;
            let mut out = format!(
                "pairs,{}\nconstant,{}\nviolations,{}\n",
                report.checked,
                sig15(report.constant),
                report.violations.len()
            );
            for v in &report.violations {
                out.push_str(&format!(
                    "violation,{},{},{},{}\n",
                    v.index,
                    sig15(v.source_distance),
                    sig15(v.image_distance),
                    sig15(v.excess)
                ));
            }
            emit(cli, &out)?;
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                eprintln!(
                    "claimed constant {} violated by {} of {} pairs",
                    sig15(report.constant),
                    report.violations.len(),
                    report.checked
                );
                ExitCode::from(EXIT_NEGATIVE)
            })
        }
    }
}
