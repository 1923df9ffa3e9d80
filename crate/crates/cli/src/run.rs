//! Executes one [`ExperimentConfig`] and maps failures to exit codes.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use strobe_core::bloch::{self, strobe_check, strobe_tolerance};
use strobe_core::periodicity::{closure_index, distinct_point_count, symmetry_shift};
use strobe_core::{Error, Rk4, Trajectory};

use crate::acceptance::{run_suite, CurveModel};
use crate::config::{ExperimentConfig, Format, Mode};
use crate::emit::{clean, config_json, csv_string, json_string, trajectory_json};
use crate::presets::FigurePreset;
use crate::svg::{render, Figure, Projection};

/// Distinct-point counting is quadratic; skip it past this many strobes.
const MAX_COUNTED_STROBES: u64 = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, config or parameters.
    Usage(String),
    /// The computation itself broke down.
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericalInstability(_) | Error::IntegrationFailure { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Whether the checks a run performed came out clean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A comparison or acceptance check failed (exit 1).
    ChecksFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ChecksFailed => 1,
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Sends `contents` to `--out` if given, else to `stdout`.
fn deliver(cfg: &ExperimentConfig, contents: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => write_file(path, contents),
        None => stdout
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn json_only(cfg: &ExperimentConfig) -> Result<(), CliError> {
    if cfg.format != Format::Json {
        return Err(CliError::Usage(
            format!("mode {:?} only writes JSON", cfg.mode).to_lowercase(),
        ));
    }
    Ok(())
}

fn projection(cfg: &ExperimentConfig) -> Result<Projection, CliError> {
    let q = cfg.sphere.q().get();
    match cfg.view {
        Some(v) => Projection::new(v, q, 0.35)
            .ok_or_else(|| CliError::Usage("--view must be non-zero and not parallel to q".into())),
        None => Ok(Projection::default_for(q)),
    }
}

fn trajectory_svg(cfg: &ExperimentConfig, traj: &Trajectory) -> Result<String, CliError> {
    let mut fig = Figure::new(traj.config.q().get(), traj.config.bounds());
    fig.add_orbit(traj.points().collect());
    Ok(render(&fig, &projection(cfg)?))
}

fn emit_trajectory(
    cfg: &ExperimentConfig,
    traj: &Trajectory,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let text = match cfg.format {
        Format::Csv => csv_string(traj),
        Format::Json => json_string(&trajectory_json(traj)),
        Format::Svg => trajectory_svg(cfg, traj)?,
    };
    deliver(cfg, &text, stdout)
}

fn closure_report(cfg: &ExperimentConfig) -> Result<Value, CliError> {
    let sphere = &cfg.sphere;
    let lambda = sphere.lambda();
    let closure = closure_index(sphere)?;
    let symmetry = lambda
        .exact()
        .and_then(symmetry_shift)
        .map(|s| json!({"order": s.order, "delta_theta": s.delta_theta, "rotation": s.rotation}));
    let distinct = closure
        .filter(|c| c.k <= MAX_COUNTED_STROBES)
        .map(|c| distinct_point_count(sphere, c.k, cfg.tol.unwrap_or(1e-9)));
    Ok(json!({
        "config": config_json(sphere),
        "closure": closure,
        "symmetry": symmetry,
        "distinct_points": distinct,
        "note": match closure {
            None => "lambda is irrational; the orbit never closes",
            Some(c) if c.k > MAX_COUNTED_STROBES => "period too long to count distinct points",
            Some(_) => "",
        },
    }))
}

fn figure(cfg: &ExperimentConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let id = cfg
        .preset
        .ok_or_else(|| CliError::Usage("figure needs a preset: fig1, fig2, fig3 or fig3-ergodic".into()))?;
    let preset = FigurePreset::get(id);
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let curve = Trajectory::strobes(&preset.curve, 0..=preset.curve_k_max);
    let mut fig = Figure::new(preset.curve.q().get(), preset.curve.bounds());
    fig.curves.push(curve.points().collect());
    fig.marker = Some(preset.curve.r0().get());

    let mut written = vec![(dir.join(format!("{id}.csv")), csv_string(&curve))];
    if let Some((dots_cfg, k)) = preset.dots {
        let dots = Trajectory::strobes(&dots_cfg, 0..k);
        fig.dots.push(dots.points().collect());
        written.push((dir.join(format!("{id}-dots.csv")), csv_string(&dots)));
    }
    written.push((dir.join(format!("{id}.svg")), render(&fig, &projection(cfg)?)));
    for (path, text) in &written {
        write_file(path, text)?;
        writeln!(stdout, "{}", path.display()).map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn acceptance(cfg: &ExperimentConfig, stdout: &mut dyn Write) -> Result<Status, CliError> {
    let report = run_suite(CurveModel::Reference);
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let path = dir.join("acceptance.json");
    let value = serde_json::to_value(&report).map_err(|e| CliError::Io(e.to_string()))?;
    write_file(&path, &json_string(&value))?;
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    for c in &report.criteria {
        writeln!(stdout, "{}", c.line()).map_err(io)?;
    }
    writeln!(stdout, "report: {}", path.display()).map_err(io)?;
    Ok(if report.pass {
        Status::Ok
    } else {
        Status::ChecksFailed
    })
}

pub fn run(cfg: &ExperimentConfig, stdout: &mut dyn Write) -> Result<Status, CliError> {
    let sphere = &cfg.sphere;
    match cfg.mode {
        Mode::Iterate => emit_trajectory(cfg, &Trajectory::direct(sphere, cfg.k_max())?, stdout)?,
        Mode::Exact => emit_trajectory(cfg, &Trajectory::strobes(sphere, 0..=cfg.k_max()), stdout)?,
        Mode::Integrate => {
            let grid: Vec<f64> = (0..=cfg.k_max()).map(|k| sphere.strobe_theta(k)).collect();
            let traj = bloch::integrate(
                sphere,
                &grid,
                &Rk4 {
                    h: cfg.h,
                    renormalize: true,
                },
            )?;
            emit_trajectory(cfg, &traj, stdout)?;
        }
        Mode::Compare => {
            json_only(cfg)?;
            let mut report = strobe_check(
                sphere,
                cfg.k_max(),
                &Rk4 {
                    h: cfg.h,
                    renormalize: true,
                },
            )?;
            report.tolerance = cfg.tol.unwrap_or_else(|| strobe_tolerance(cfg.h));
            report.pass = report.max_deviation <= report.tolerance;
            let value = json!({"config": config_json(sphere), "report": report});
            deliver(cfg, &json_string(&value), stdout)?;
            if !report.pass {
                return Ok(Status::ChecksFailed);
            }
        }
        Mode::Bounds => {
            json_only(cfg)?;
            let b = sphere.bounds();
            let value = json!({"a": clean(b.a), "b": clean(b.b), "c": clean(b.c), "A1": clean(b.a1), "A2": clean(b.a2)});
            deliver(cfg, &json_string(&value), stdout)?;
        }
        Mode::Closure => {
            json_only(cfg)?;
            deliver(cfg, &json_string(&closure_report(cfg)?), stdout)?;
        }
        Mode::Figure => figure(cfg, stdout)?,
        Mode::Acceptance => return acceptance(cfg, stdout),
    }
    Ok(Status::Ok)
}
