//! Command-line flags, JSON config files and their resolution into one
//! [`ExperimentConfig`].
//!
//! A config file is a single JSON object whose keys are the long flag names
//! (`"alpha"`, `"theta-max"`, ...). Flags given on the command line win.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use strobe_core::{Angle, Lambda, Rational, SphereConfig, Vec3};

use crate::presets::{FigurePreset, PresetId};
use crate::run::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Iterate the group map and print the axes of the even iterates
    Iterate,
    /// Closed-form strobes r(Kα)
    Exact,
    /// RK4 solution of the Bloch equation sampled at θ = Kα
    Integrate,
    /// Strobes against the integrated flow
    Compare,
    /// Parallels bounding the motion
    Bounds,
    /// Closure index, symmetry order and distinct-point count
    Closure,
    /// Write CSV and SVG for a figure preset
    Figure,
    /// Run the acceptance suite
    Acceptance,
}

impl Mode {
    /// Whether the mode uses α, β or λ at all.
    pub fn reads_angles(self) -> bool {
        !matches!(self, Mode::Bounds | Mode::Figure | Mode::Acceptance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Strobed unit-sphere dynamics of a driven spin.
#[derive(Debug, Clone, Parser)]
#[command(name = "strobe", version)]
pub struct Cli {
    pub mode: Mode,
    /// Preset name, same as --preset
    #[arg(value_name = "PRESET")]
    pub preset_arg: Option<String>,
    /// fig1 | fig2 | fig3 | fig3-ergodic
    #[arg(long)]
    pub preset: Option<String>,
    /// Strobe angle α (radians, or `1/90pi`; degrees with --degrees)
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// λ = β/(2α); decimals and fractions are taken as exact
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Read --alpha and --beta in degrees
    #[arg(long)]
    pub degrees: bool,
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub q: Option<String>,
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub r0: Option<String>,
    /// Rotation angle of R_0 (radians)
    #[arg(long, allow_hyphen_values = true)]
    pub chi0: Option<String>,
    #[arg(long)]
    pub omega: Option<String>,
    /// Last strobe index K
    #[arg(long)]
    pub steps: Option<String>,
    /// Last θ (radians); overrides --steps
    #[arg(long)]
    pub theta_max: Option<String>,
    /// RK4 step in θ
    #[arg(long)]
    pub h: Option<String>,
    /// Tolerance override for compare
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file, or directory for figure and acceptance
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG viewing direction
    #[arg(long, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub view: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Unresolved settings, all kept as text so decimals stay exact.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub mode: Option<String>,
    pub preset: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub lambda: Option<String>,
    pub degrees: Option<bool>,
    pub p: Option<String>,
    pub q: Option<String>,
    pub r0: Option<String>,
    pub chi0: Option<String>,
    pub omega: Option<String>,
    pub steps: Option<String>,
    pub theta_max: Option<String>,
    pub h: Option<String>,
    pub tol: Option<String>,
    pub format: Option<String>,
    pub out: Option<String>,
    pub view: Option<String>,
}

fn text_of(key: &str, v: &Value) -> Result<String, CliError> {
    match v {
        // serde_json prints the shortest form that reads back to the same
        // double, so "0.0205" survives as written
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        Value::Array(items) => items
            .iter()
            .map(|x| match x {
                Value::Number(n) => Ok(n.to_string()),
                Value::String(s) => Ok(s.clone()),
                _ => Err(CliError::Usage(format!("'{key}' entries must be numbers"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|parts| parts.join(",")),
        _ => Err(CliError::Usage(format!(
            "'{key}' must be a number, string or array"
        ))),
    }
}

impl Settings {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let map: BTreeMap<String, Value> = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("config file is not a JSON object: {e}")))?;
        let mut s = Settings::default();
        for (key, v) in &map {
            if v.is_null() {
                continue;
            }
            let slot = match key.as_str() {
                "degrees" => {
                    s.degrees = Some(
                        v.as_bool()
                            .ok_or_else(|| CliError::Usage("'degrees' must be a boolean".into()))?,
                    );
                    continue;
                }
                "mode" => &mut s.mode,
                "preset" => &mut s.preset,
                "alpha" => &mut s.alpha,
                "beta" => &mut s.beta,
                "lambda" => &mut s.lambda,
                "p" => &mut s.p,
                "q" => &mut s.q,
                "r0" => &mut s.r0,
                "chi0" => &mut s.chi0,
                "omega" => &mut s.omega,
                "steps" => &mut s.steps,
                "theta-max" | "theta_max" => &mut s.theta_max,
                "h" => &mut s.h,
                "tol" => &mut s.tol,
                "format" => &mut s.format,
                "out" => &mut s.out,
                "view" => &mut s.view,
                other => return Err(CliError::Usage(format!("unknown config key '{other}'"))),
            };
            *slot = Some(text_of(key, v)?);
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        if let (Some(a), Some(b)) = (&cli.preset_arg, &cli.preset) {
            if a != b {
                return Err(CliError::Usage(format!("preset given twice: '{a}' and '{b}'")));
            }
        }
        let value_name = |v: Option<Format>| {
            v.and_then(|f| f.to_possible_value())
                .map(|p| p.get_name().to_string())
        };
        Ok(Settings {
            mode: cli.mode.to_possible_value().map(|p| p.get_name().to_string()),
            preset: cli.preset_arg.clone().or_else(|| cli.preset.clone()),
            alpha: cli.alpha.clone(),
            beta: cli.beta.clone(),
            lambda: cli.lambda.clone(),
            degrees: cli.degrees.then_some(true),
            p: cli.p.clone(),
            q: cli.q.clone(),
            r0: cli.r0.clone(),
            chi0: cli.chi0.clone(),
            omega: cli.omega.clone(),
            steps: cli.steps.clone(),
            theta_max: cli.theta_max.clone(),
            h: cli.h.clone(),
            tol: cli.tol.clone(),
            format: value_name(cli.format),
            out: cli.out.as_ref().map(|p| p.display().to_string()),
            view: cli.view.clone(),
        })
    }

    /// `self` with every field of `over` that is set taking precedence.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            mode: over.mode.or(self.mode),
            preset: over.preset.or(self.preset),
            alpha: over.alpha.or(self.alpha),
            beta: over.beta.or(self.beta),
            lambda: over.lambda.or(self.lambda),
            degrees: over.degrees.or(self.degrees),
            p: over.p.or(self.p),
            q: over.q.or(self.q),
            r0: over.r0.or(self.r0),
            chi0: over.chi0.or(self.chi0),
            omega: over.omega.or(self.omega),
            steps: over.steps.or(self.steps),
            theta_max: over.theta_max.or(self.theta_max),
            h: over.h.or(self.h),
            tol: over.tol.or(self.tol),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
            view: over.view.or(self.view),
        }
    }

    fn has_sphere_overrides(&self) -> bool {
        [
            &self.alpha,
            &self.beta,
            &self.lambda,
            &self.p,
            &self.q,
            &self.r0,
            &self.chi0,
            &self.omega,
        ]
        .iter()
        .any(|f| f.is_some())
    }
}

/// Everything one run needs, validated.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub preset: Option<PresetId>,
    pub sphere: SphereConfig,
    pub steps: Option<u64>,
    pub theta_max: Option<f64>,
    pub h: f64,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub view: Option<Vec3>,
}

pub const DEFAULT_STEPS: u64 = 1000;

pub fn parse_vec3(name: &str, text: &str) -> Result<Vec3, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let nums: Result<Vec<f64>, _> = parts.iter().map(|s| s.parse::<f64>()).collect();
    match nums {
        Ok(v) if v.len() == 3 && v.iter().all(|x| x.is_finite()) => Ok(Vec3::new(v[0], v[1], v[2])),
        _ => Err(CliError::Usage(format!(
            "--{name} expects three comma-separated numbers, got '{text}'"
        ))),
    }
}

fn parse_f64(name: &str, text: &str) -> Result<f64, CliError> {
    match text.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::Usage(format!(
            "--{name} expects a number, got '{text}'"
        ))),
    }
}

fn parse_unit(name: &str, text: &str) -> Result<Vec3, CliError> {
    let v = parse_vec3(name, text)?;
    // accept a few digits of slack in hand-typed unit vectors
    if ((v.norm() - 1.0).abs()) > 1e-6 {
        return Err(CliError::Usage(format!(
            "--{name} must be a unit vector, |{text}| = {}",
            v.norm()
        )));
    }
    Ok(v.normalized().expect("non-zero"))
}

impl ExperimentConfig {
    pub fn resolve(s: &Settings) -> Result<Self, CliError> {
        let mode = match &s.mode {
            Some(m) => {
                Mode::from_str(m, false).map_err(|_| CliError::Usage(format!("unknown mode '{m}'")))?
            }
            None => return Err(CliError::Usage("no mode given".into())),
        };
        let preset = s
            .preset
            .as_deref()
            .map(|p| p.parse::<PresetId>().map_err(CliError::Usage))
            .transpose()?;
        let degrees = s.degrees.unwrap_or(false);

        let mut builder = match preset {
            Some(id) => FigurePreset::get(id).curve.into(),
            None => SphereConfig::builder(),
        };
        if s.alpha.is_some() || s.beta.is_some() || s.lambda.is_some() {
            // explicit angles replace the preset's triple as a whole
            builder = builder
                .alpha(s.alpha.as_deref().map(|t| Angle::parse(t, degrees)).transpose()?)
                .beta(s.beta.as_deref().map(|t| Angle::parse(t, degrees)).transpose()?)
                .lambda(s.lambda.as_deref().map(Lambda::parse).transpose()?);
        }
        if let Some(t) = &s.p {
            builder = builder.p(parse_unit("p", t)?);
        }
        if let Some(t) = &s.q {
            builder = builder.q(parse_unit("q", t)?);
        }
        if let Some(t) = &s.r0 {
            builder = builder.r0(parse_unit("r0", t)?);
        }
        if let Some(t) = &s.chi0 {
            builder = builder.chi0(parse_f64("chi0", t)?);
        }
        if let Some(t) = &s.omega {
            builder = builder.omega(parse_f64("omega", t)?);
        }
        let angles_given = preset.is_some() || s.alpha.is_some() || s.beta.is_some() || s.lambda.is_some();
        if !mode.reads_angles() && !angles_given {
            // never read; only keeps the builder's pairing rule satisfied
            builder = builder.lambda(Lambda::rational(Rational::from_integer(1)));
        }
        if mode == Mode::Figure && preset.is_some() && s.has_sphere_overrides() {
            return Err(CliError::Usage(
                "figure presets are frozen; drop the parameter flags".into(),
            ));
        }
        let sphere = builder.build()?;

        let steps = s
            .steps
            .as_deref()
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::Usage(format!("--steps expects a count, got '{t}'")))
            })
            .transpose()?;
        let theta_max = s
            .theta_max
            .as_deref()
            .map(|t| Angle::parse(t, false).map(|a| a.radians()))
            .transpose()?;
        if theta_max.is_some_and(|t| t < 0.0) {
            return Err(CliError::Usage("--theta-max must be non-negative".into()));
        }
        let h =
            s.h.as_deref()
                .map(|t| parse_f64("h", t))
                .transpose()?
                .unwrap_or(1e-4);
        if h <= 0.0 {
            return Err(CliError::Usage(format!("--h must be positive, got {h}")));
        }
        let tol = s.tol.as_deref().map(|t| parse_f64("tol", t)).transpose()?;
        let format = match &s.format {
            Some(f) => {
                Format::from_str(f, false).map_err(|_| CliError::Usage(format!("unknown format '{f}'")))?
            }
            None => match mode {
                Mode::Iterate | Mode::Exact | Mode::Integrate => Format::Csv,
                _ => Format::Json,
            },
        };
        let view = s.view.as_deref().map(|t| parse_vec3("view", t)).transpose()?;
        Ok(ExperimentConfig {
            mode,
            preset,
            sphere,
            steps,
            theta_max,
            h,
            tol,
            format,
            out: s.out.as_ref().map(PathBuf::from),
            view,
        })
    }

    /// Reads the config file named on the command line, if any, and lays the
    /// flags over it.
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let flags = Settings::from_cli(cli)?;
        let merged = match &cli.config {
            Some(path) => Settings::from_file(path)?.overlay(flags),
            None => flags,
        };
        Self::resolve(&merged)
    }

    /// Last strobe index: from `theta_max` if set, else `steps`, else the
    /// preset's curve length, else [`DEFAULT_STEPS`].
    pub fn k_max(&self) -> u64 {
        if let Some(t) = self.theta_max {
            let k = t / self.sphere.alpha().radians().abs();
            return (k + 1e-9).floor() as u64;
        }
        self.steps
            .or(self.preset.map(|id| FigurePreset::get(id).curve_k_max))
            .unwrap_or(DEFAULT_STEPS)
    }
}
