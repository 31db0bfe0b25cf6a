//! Command-line front end: `solve`, `phase`, `classify`, `verify`, `mesh`,
//! `sweep`.
//!
//! Exit codes: 0 on success, 2 when a classification is INCONCLUSIVE, 1 on
//! any error (including invalid flags and failed verification suites).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::arclength::{integrate_with, InitialData, IntegrateOptions, Mode, Trajectory, DEFAULT_S_MAX_FACTOR};
use crate::classify::{classify_axis, BehaviorReport, DriverOptions, Verdict};
use crate::io::{self, SCHEMA_VERSION};
use crate::phase::{portrait, Window};
use crate::verifiers::{
    helicoidal_nonexistence_scan, isoparametric_suite, offset_axis_suite, shrinker_scan, ScanGrid, SuiteReport,
};
use crate::{mesh, singular, svg, Alpha, Error, Result};

/// Env var naming the directory for outputs whose path is not given.
pub const OUT_DIR_ENV: &str = "STATIONARY_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "stationary", version, about = "Rotational surfaces stationary for the energy of |p|^alpha")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Directory for default output files.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,

    /// Worker threads for parallel subcommands (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a generating curve and write `s,x,z,psi` CSV plus an events sidecar.
    Solve(SolveArgs),
    /// Phase portrait of the autonomous (psi, theta) system.
    Phase(PhaseArgs),
    /// Classify the axis solution for one alpha.
    Classify(ClassifyArgs),
    /// Run the closed-form and nonexistence verifiers.
    Verify(VerifyArgs),
    /// Revolve the axis solution into an OBJ mesh.
    Mesh(MeshArgs),
    /// Classify a range of alpha values in parallel, one JSON line each.
    Sweep(SweepArgs),
}

/// Parses alpha, rejecting 0 with the minimal-surface message.
pub fn parse_alpha(s: &str) -> std::result::Result<Alpha, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{s:?} is not a number: {e}"))?;
    Alpha::new(v).map_err(|e| e.to_string())
}

/// Parses a float, accepting a trailing `pi` factor (`-1.5pi`, `pi`).
fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let (num, scale) = match t.strip_suffix("pi") {
        Some(rest) => (rest, std::f64::consts::PI),
        None => (t, 1.0),
    };
    let num = match num {
        "" | "+" => "1",
        "-" => "-1",
        n => n.trim_end_matches('*'),
    };
    num.parse::<f64>().map(|v| v * scale).map_err(|e| format!("{s:?} is not a number: {e}"))
}

/// `PSIMIN:PSIMAX:THETAMIN:THETAMAX`.
pub fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        return Err(format!("window {s:?} needs four ':'-separated bounds"));
    }
    let v: Vec<f64> = parts.iter().map(|p| parse_angle(p)).collect::<std::result::Result<_, _>>()?;
    let w = Window { psi_min: v[0], psi_max: v[1], theta_min: v[2], theta_max: v[3] };
    w.validate().map_err(|e| e.to_string())?;
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Axis,
    Plane,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_parser = parse_alpha, allow_negative_numbers = true)]
    pub alpha: Alpha,
    #[arg(long, value_enum, default_value = "axis")]
    pub mode: ModeArg,
    /// Scale: the axis height z0 (axis mode) or the starting radius x0 (plane mode).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub z0: f64,
    /// Arc-length budget (default 50 times the scale).
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
    /// Trajectory CSV; the events sidecar goes next to it. Stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the singular-IVP profile `r,u,du` (axis mode).
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    #[arg(long, value_parser = parse_alpha, allow_negative_numbers = true)]
    pub alpha: Alpha,
    /// `PSIMIN:PSIMAX:THETAMIN:THETAMAX`; bounds may carry a `pi` suffix.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<Window>,
    /// Portrait SVG.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print equilibria with classes and eigenvalues as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, value_parser = parse_alpha, allow_negative_numbers = true)]
    pub alpha: Alpha,
    #[arg(long, default_value_t = 1.0)]
    pub z0: f64,
    /// Print the full report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Generating-curve plot.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Isoparametric,
    OffsetAxis,
    Helicoidal,
    Shrinker,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// JSON report path; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    #[arg(long, value_parser = parse_alpha, allow_negative_numbers = true)]
    pub alpha: Alpha,
    #[arg(long, default_value_t = 1.0)]
    pub z0: f64,
    #[arg(long, default_value_t = 64)]
    pub segments: usize,
    /// Most generator samples turned into rings.
    #[arg(long, default_value_t = 400)]
    pub rings: usize,
    /// Arc-length budget (default 50 times z0).
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Planar generator plot.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_to: f64,
    #[arg(long)]
    pub step: f64,
    #[arg(long, default_value_t = 1.0)]
    pub z0: f64,
    /// JSONL path; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a successful run means for the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Status::Ok => ExitCode::SUCCESS,
            Status::Inconclusive => ExitCode::from(2),
        }
    }
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    inner: &'a T,
}

fn versioned<T: Serialize>(inner: &T) -> Versioned<'_, T> {
    Versioned { schema: SCHEMA_VERSION, inner }
}

struct Ctx {
    out_dir: Option<PathBuf>,
}

impl Ctx {
    /// The given path, or `default` under the output directory, or `None`
    /// for stdout.
    fn target(&self, given: &Option<PathBuf>, default: &str) -> Option<PathBuf> {
        given.clone().or_else(|| self.out_dir.as_ref().map(|d| d.join(default)))
    }
}

fn emit(target: Option<&Path>, text: &str) -> Result<()> {
    match target {
        Some(p) => io::write_string(p, text),
        None => say(text),
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn say(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn curve_points(traj: &Trajectory) -> Vec<[f64; 2]> {
    traj.samples.iter().map(|c| [c.x, c.z]).collect()
}

pub fn run(cli: Cli) -> Result<Status> {
    if let Some(n) = cli.threads {
        // fails only if a pool already exists, which is fine to keep
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let ctx = Ctx { out_dir: cli.out_dir };
    match cli.command {
        Command::Solve(a) => solve(&ctx, a),
        Command::Phase(a) => phase(&ctx, a),
        Command::Classify(a) => classify(&ctx, a),
        Command::Verify(a) => verify(&ctx, a),
        Command::Mesh(a) => mesh_cmd(&ctx, a),
        Command::Sweep(a) => sweep(&ctx, a),
    }
}

fn solve(ctx: &Ctx, a: SolveArgs) -> Result<Status> {
    let init = match a.mode {
        ModeArg::Axis => InitialData::axis(a.z0)?,
        ModeArg::Plane => InitialData::plane(a.z0)?,
    };
    let s_max = a.s_max.unwrap_or(DEFAULT_S_MAX_FACTOR * a.z0);
    let opts = IntegrateOptions { rtol: a.rtol, atol: a.atol, ..Default::default() };
    let traj = integrate_with(init, a.alpha, s_max, &opts)?;

    let mut csv = Vec::new();
    io::write_trajectory_csv(&traj, &mut csv)?;
    let target = ctx.target(&a.out, &format!("solve_alpha{}.csv", a.alpha));
    let csv = String::from_utf8(csv).expect("csv is ascii");
    emit(target.as_deref(), &csv)?;
    if let Some(p) = &target {
        let events = serde_json::to_string_pretty(&io::events_json(&traj))? + "\n";
        io::write_string(&io::sidecar_path(p), &events)?;
    }
    if let Some(p) = &a.profile {
        if init.mode != Mode::Axis {
            return Err(Error::WrongMode("the singular profile exists only for axis data"));
        }
        let (profile, _) = singular::solve_axis(a.alpha, a.z0)?;
        io::write_profile_csv(&profile, io::create(p)?)?;
    }
    eprintln!(
        "alpha = {}: {} samples, s_end = {}, terminal {:?}, max residual {:e}",
        a.alpha,
        traj.samples.len(),
        traj.last().s,
        traj.terminal_event().map(|e| e.kind),
        traj.max_residual()?
    );
    Ok(Status::Ok)
}

fn phase(ctx: &Ctx, a: PhaseArgs) -> Result<Status> {
    let window = a.window.unwrap_or_default();
    let p = portrait(a.alpha, window)?;
    if let Some(path) = ctx.target(&a.out, &format!("phase_alpha{}.svg", a.alpha)) {
        io::write_string(&path, &svg::portrait_svg(&p))?;
    }
    if a.json {
        let v = serde_json::json!({
            "schema": SCHEMA_VERSION,
            "alpha": p.alpha,
            "window": p.window,
            "equilibria": p.equilibria,
        });
        say(&format!("{}\n", serde_json::to_string_pretty(&v)?))?;
    } else {
        for e in &p.equilibria {
            say(&format!(
                "({:+.6}, {:+.6}) {:?} {:?} eigenvalues {}{:+}i, {}{:+}i\n",
                e.location.psi,
                e.location.theta,
                e.family,
                e.klass,
                e.eigenvalues[0].re,
                e.eigenvalues[0].im,
                e.eigenvalues[1].re,
                e.eigenvalues[1].im
            ))?;
        }
    }
    Ok(Status::Ok)
}

fn status_of(r: &BehaviorReport) -> Status {
    if r.verdict == Verdict::Inconclusive {
        Status::Inconclusive
    } else {
        Status::Ok
    }
}

fn classify(_ctx: &Ctx, a: ClassifyArgs) -> Result<Status> {
    let (traj, report) = classify_axis(a.alpha, a.z0, &DriverOptions::default())?;
    if a.json {
        say(&format!("{}\n", serde_json::to_string_pretty(&versioned(&report))?))?;
    } else {
        let v = serde_json::to_value(report.verdict)?;
        say(&format!("alpha = {}: {}\n", a.alpha, v.as_str().unwrap_or("?")))?;
        if let Some(r) = &report.reason {
            say(&format!("  {r}\n"))?;
        }
    }
    if let Some(p) = &a.svg {
        io::write_string(p, &svg::curves_svg(&[curve_points(&traj)], &format!("alpha = {}", a.alpha)))?;
    }
    Ok(status_of(&report))
}

fn verify(ctx: &Ctx, a: VerifyArgs) -> Result<Status> {
    let grid = ScanGrid::default();
    let run = |s: Suite| -> Result<SuiteReport> {
        match s {
            Suite::Isoparametric => isoparametric_suite(),
            Suite::OffsetAxis => offset_axis_suite(),
            Suite::Helicoidal => helicoidal_nonexistence_scan(&grid),
            Suite::Shrinker => shrinker_scan(&grid),
            Suite::All => unreachable!(),
        }
    };
    let reports = match a.suite {
        Suite::All => [Suite::Isoparametric, Suite::OffsetAxis, Suite::Helicoidal, Suite::Shrinker]
            .into_iter()
            .map(run)
            .collect::<Result<Vec<_>>>()?,
        s => vec![run(s)?],
    };
    let text = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])?
    } else {
        serde_json::to_string_pretty(&serde_json::json!({ "schema": SCHEMA_VERSION, "suites": reports }))?
    };
    emit(ctx.target(&a.out, "verify.json").as_deref(), &(text + "\n"))?;
    let bad: usize = reports.iter().map(|r| r.mismatches().count()).sum();
    if bad > 0 {
        return Err(Error::Invalid(format!("{bad} verifier cells disagree with their expected verdict")));
    }
    Ok(Status::Ok)
}

fn mesh_cmd(ctx: &Ctx, a: MeshArgs) -> Result<Status> {
    let s_max = a.s_max.unwrap_or(DEFAULT_S_MAX_FACTOR * a.z0);
    let traj = integrate_with(InitialData::axis(a.z0)?, a.alpha, s_max, &IntegrateOptions::default())?;
    let m = mesh::revolve_thinned(&traj, a.segments, a.rings)?;
    let stats = mesh::mesh_residual_stats(&m, a.alpha)?;
    if let Some(p) = ctx.target(&a.out, &format!("mesh_alpha{}.obj", a.alpha)) {
        let mut w = io::create(&p)?;
        m.write_obj(&mut w)?;
        w.flush()?;
    }
    if let Some(p) = &a.svg {
        io::write_string(p, &svg::curves_svg(&[curve_points(&traj)], &format!("alpha = {}", a.alpha)))?;
    }
    let v = serde_json::json!({
        "schema": SCHEMA_VERSION,
        "alpha": a.alpha,
        "vertices": m.vertices.len(),
        "triangles": m.triangles.len(),
        "euler_characteristic": m.euler_characteristic(),
        "residual": stats,
    });
    say(&format!("{}\n", serde_json::to_string(&v)?))?;
    Ok(Status::Ok)
}

/// α values `from, from + step, …` up to `to`, skipping 0. Values are
/// rounded to 12 decimals so that steps like 0.1 land on round numbers.
pub fn sweep_alphas(from: f64, to: f64, step: f64) -> Result<Vec<Alpha>> {
    if !(step.is_finite() && step > 0.0 && from.is_finite() && to.is_finite()) || to < from {
        return Err(Error::Invalid("sweep needs finite from <= to and step > 0".into()));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12)
        .filter(|&v| v != 0.0)
        .map(|v| Alpha::new(v).expect("nonzero and finite"))
        .collect())
}

fn sweep(ctx: &Ctx, a: SweepArgs) -> Result<Status> {
    let alphas = sweep_alphas(a.alpha_from, a.alpha_to, a.step)?;
    let opts = DriverOptions::default();
    let reports: Vec<BehaviorReport> =
        alphas.par_iter().map(|&alpha| classify_axis(alpha, a.z0, &opts).map(|(_, r)| r)).collect::<Result<_>>()?;
    let mut text = String::new();
    for r in &reports {
        text += &serde_json::to_string(&versioned(r))?;
        text.push('\n');
    }
    emit(ctx.target(&a.out, "sweep.jsonl").as_deref(), &text)?;
    Ok(if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) { Status::Inconclusive } else { Status::Ok })
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(s) => s.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
