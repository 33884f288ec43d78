mod scenario;
mod sweep;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use affrep::curve::ConstraintCurve;
use affrep::existence::{existence_profile, ExistenceProfile};
use affrep::export::{
    representation_doc, representation_from_doc, to_pretty_json, RepresentationDoc,
};
use affrep::rep::{self, verify_relations, Representation};
use affrep::{AlgebraParams, Error, Point, Tolerances};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::scenario::Resolved;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn construction(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnsupportedRegime(_) => 3,
            Error::InvalidInput(_) => 2,
            _ => 4,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "affrep",
    version,
    about = "Representations of algebras attached to planar affine maps"
)]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Distance below which orbit points are identified.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_orbit: f64,
    /// Per-dimension bound on relation residuals.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_relation: f64,
    /// Largest dimension searched for loops and strings.
    #[arg(long, global = true)]
    nmax: Option<usize>,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            orbit: self.tol_orbit,
            relation: self.tol_relation,
            ..Tolerances::default()
        }
    }
}

const DEFAULT_NMAX: usize = 24;

#[derive(Subcommand)]
enum Command {
    /// Surface class and existence profile of a scenario.
    Classify { scenario: PathBuf },
    /// Existence profile only.
    Existence { scenario: PathBuf },
    /// Build a representation.
    Build(BuildArgs),
    /// Check the defining relations of a representation file.
    Verify { representation: PathBuf },
    /// Sample the constraint curve as CSV.
    Curve {
        scenario: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a grid of surfaces, one JSON line per point.
    Sweep(sweep::SweepArgs),
}

#[derive(Args)]
struct BuildArgs {
    scenario: PathBuf,
    /// loop, string, scalar, one-sided, one-sided-reversed or two-sided.
    #[arg(long)]
    kind: Option<String>,
    /// Dimension; window size for truncated kinds.
    #[arg(long)]
    n: Option<usize>,
    /// Start point `r,s`.
    #[arg(long, value_parser = parse_point)]
    x0: Option<Point>,
    /// Start from the point of the curve closest to `r,s`.
    #[arg(long, value_parser = parse_point)]
    near: Option<Point>,
    /// Phase of the corner entry of a loop.
    #[arg(long)]
    beta: Option<f64>,
    /// Directory receiving curve.csv and orbit.csv.
    #[arg(long)]
    emit_curve: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected r,s, got {s:?}"));
    }
    let r = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let t = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok([r, t])
}

#[derive(Serialize)]
struct ClassReport {
    code: String,
    geometry: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma_quadrant: Option<&'static str>,
    topology: affrep::classify::Topology,
    profile: ExistenceProfile,
    witnesses: Vec<String>,
}

fn profile_of(res: &Resolved, tol: &TolArgs) -> Result<ExistenceProfile, CliError> {
    let cls = res.class()?;
    let nmax = tol.nmax.or(res.options.nmax).unwrap_or(DEFAULT_NMAX);
    Ok(existence_profile(
        &res.params,
        Some(&cls),
        res.ordering(),
        nmax,
        &tol.tolerances(),
    )?)
}

fn cmd_classify(path: &Path, tol: &TolArgs) -> Result<String, CliError> {
    let res = scenario::load(path)?;
    let cls = res.class()?;
    let mut profile = profile_of(&res, tol)?;
    let witnesses = std::mem::take(&mut profile.witnesses);
    let report = ClassReport {
        code: cls.code.to_string(),
        geometry: cls.geometry,
        gamma_quadrant: cls.gamma_quadrant,
        topology: cls.topology,
        profile,
        witnesses,
    };
    Ok(to_pretty_json(&report)?)
}

fn cmd_existence(path: &Path, tol: &TolArgs) -> Result<String, CliError> {
    let res = scenario::load(path)?;
    Ok(to_pretty_json(&profile_of(&res, tol)?)?)
}

fn curve_of(params: &AlgebraParams) -> Result<ConstraintCurve, CliError> {
    Ok(ConstraintCurve::from_params(params)?)
}

fn build(res: &Resolved, args: &BuildArgs, tol: &TolArgs) -> Result<Representation, CliError> {
    let tols = tol.tolerances();
    let opts = &res.options;
    let params = &res.params;
    let kind = args
        .kind
        .clone()
        .or_else(|| opts.kind.clone())
        .unwrap_or_else(|| "loop".into());
    let n = args.n.or(opts.n);
    let x0 = args.x0.or(opts.x0);
    let near = args.near.or(opts.near);
    let beta = args.beta.or(opts.beta).unwrap_or(0.0);
    let need_n = || n.ok_or_else(|| CliError::parse(format!("--n is required for kind {kind}")));
    let rep = match kind.as_str() {
        "loop" => {
            if params.is_det_one() && params.delta() <= 0.0 {
                return Err(CliError::construction(
                    "no loop: L̂ has no periodic points other than fix-points when det A = 1 and Δ ≤ 0",
                ));
            }
            let start = match (x0, near) {
                (Some(p), _) => p,
                (None, Some(target)) => curve_of(params)?.nearest_point(target)?,
                (None, None) => profile_of(res, tol)?.loop_witness.ok_or_else(|| {
                    CliError::construction(
                        "no loop: no periodic orbit of L̂ inside the open quadrant",
                    )
                })?,
            };
            let n = match n {
                Some(n) => n,
                None => *profile_of(res, tol)?.loop_dims.first().ok_or_else(|| {
                    CliError::construction("no loop: θ/π is not rational with a small denominator")
                })?,
            };
            rep::build_loop(params, start, n, beta, &tols)?
        }
        "string" => rep::build_string(params, need_n()?, &tols)?,
        "scalar" => {
            let d = match x0 {
                Some(p) => p[0],
                None => profile_of(res, tol)?.fixed_point_scalar.unwrap_or(0.0),
            };
            rep::build_scalar(params, d, beta, &tols)?
        }
        "one-sided" | "one-sided-reversed" => {
            let start = match x0 {
                Some(p) if kind == "one-sided" => p[0],
                Some(p) => p[1],
                None => curve_of(params)?.axes_crossings().r_plus.ok_or_else(|| {
                    CliError::construction(
                        "no one-sided start: the curve does not meet the axes (a² + 4ĉ₁ < 0)",
                    )
                })?,
            };
            let big_n = n.unwrap_or(4);
            if kind == "one-sided" {
                rep::build_one_sided(params, start, big_n, &tols)?
            } else {
                rep::build_one_sided_reversed(params, start, big_n, &tols)?
            }
        }
        "two-sided" => {
            let start = match (x0, near) {
                (Some(p), _) => p,
                (None, Some(target)) => curve_of(params)?.nearest_point(target)?,
                (None, None) => match (params.mu(), params.chat()) {
                    (Some(mu), Some(chat)) if chat > 0.0 => [mu + chat.sqrt(); 2],
                    _ => {
                        return Err(CliError::parse(
                            "--x0 or --near is required: the curve has no tip",
                        ))
                    }
                },
            };
            rep::build_two_sided(params, start, n.unwrap_or(3), &tols)?
        }
        other => return Err(CliError::parse(format!("unknown kind {other:?}"))),
    };
    Ok(rep)
}

fn write_csv_files(dir: &Path, rep: &Representation) -> Result<(), CliError> {
    let io = |e: std::io::Error| {
        CliError::construction(format!("cannot write to {}: {e}", dir.display()))
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    if let Some(chat1) = rep.params.chat1 {
        if rep.params.is_det_one() {
            let curve = ConstraintCurve::new(rep.params, chat1)?;
            if let Ok(samples) = curve.sample(400) {
                let file = std::fs::File::create(dir.join("curve.csv")).map_err(io)?;
                ConstraintCurve::write_csv(&samples, file)?;
            }
        }
    }
    let mut text = String::from("index,r,s\n");
    for (i, p) in rep.orbit.points.iter().enumerate() {
        text.push_str(&format!("{i},{},{}\n", p[0], p[1]));
    }
    std::fs::write(dir.join("orbit.csv"), text).map_err(io)
}

fn cmd_build(args: &BuildArgs, tol: &TolArgs) -> Result<String, CliError> {
    let res = scenario::load(&args.scenario)?;
    let rep = build(&res, args, tol)?;
    if let Some(dir) = &args.emit_curve {
        write_csv_files(dir, &rep)?;
    }
    Ok(to_pretty_json(&representation_doc(
        &rep,
        Some(verify_relations(&rep)),
    ))?)
}

/// Returns the report and whether it passed.
fn cmd_verify(path: &Path, tol: &TolArgs) -> Result<(String, bool), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let doc: RepresentationDoc = serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("malformed representation: {e}")))?;
    let rep = representation_from_doc(&doc).map_err(|e| CliError::parse(e.to_string()))?;
    let report = verify_relations(&rep);
    Ok((to_pretty_json(&report)?, report.passes(tol.tol_relation)))
}

fn cmd_curve(path: &Path, samples: usize, out: Option<&Path>) -> Result<String, CliError> {
    let res = scenario::load(path)?;
    let curve = curve_of(&res.params)?;
    let points = curve.sample(samples)?;
    let mut buf = Vec::new();
    ConstraintCurve::write_csv(&points, &mut buf)?;
    let text = String::from_utf8(buf).expect("csv output is utf-8");
    match out {
        Some(file) => {
            std::fs::write(file, &text).map_err(|e| {
                CliError::construction(format!("cannot write {}: {e}", file.display()))
            })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn run(cli: &Cli) -> Result<(String, u8), CliError> {
    let tol = &cli.tol;
    match &cli.command {
        Command::Classify { scenario } => Ok((cmd_classify(scenario, tol)?, 0)),
        Command::Existence { scenario } => Ok((cmd_existence(scenario, tol)?, 0)),
        Command::Build(args) => Ok((cmd_build(args, tol)?, 0)),
        Command::Verify { representation } => {
            let (text, ok) = cmd_verify(representation, tol)?;
            Ok((text, if ok { 0 } else { 1 }))
        }
        Command::Curve {
            scenario,
            samples,
            out,
        } => Ok((cmd_curve(scenario, *samples, out.as_deref())?, 0)),
        Command::Sweep(args) => Ok((
            sweep::run(args, tol.nmax.unwrap_or(12), &tol.tolerances())?,
            0,
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, code)) => {
            if !text.is_empty() {
                // a closed pipe downstream is not an error of ours
                let mut out = std::io::stdout().lock();
                let _ = out.write_all(text.as_bytes());
                if !text.ends_with('\n') {
                    let _ = out.write_all(b"\n");
                }
            }
            if code == 1 {
                eprintln!("relation residuals exceed the tolerance");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
