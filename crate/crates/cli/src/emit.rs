//! CSV and JSON serialization of trajectories and configurations.

use std::fmt::Write as _;

use serde_json::{json, Value};
use strobe_core::{Angle, LambdaKind, SphereConfig, Trajectory, Vec3};

pub const CSV_HEADER: &str = "index,theta,rx,ry,rz,r_dot_q";

/// Shortest decimal that reads back to the same double; `-0` prints as `0`
/// and magnitudes below `1e-5` switch to exponent form.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.abs() < 1e-5 || x.abs() >= 1e16 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn csv_string(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * (traj.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in &traj.samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            s.index,
            fmt_num(s.theta),
            fmt_num(s.r.x),
            fmt_num(s.r.y),
            fmt_num(s.r.z),
            fmt_num(s.r_dot_q)
        );
    }
    out
}

/// `x + 0.0` maps `-0.0` to `0.0` so JSON never shows a signed zero.
pub fn clean(x: f64) -> f64 {
    x + 0.0
}

pub fn vec_json(v: Vec3) -> Value {
    json!([clean(v.x), clean(v.y), clean(v.z)])
}

fn angle_json(a: Angle) -> Value {
    json!({
        "radians": clean(a.radians()),
        "degrees": clean(a.degrees()),
        "exact_degrees": a.exact_degrees().map(|r| r.to_string()),
    })
}

pub fn config_json(cfg: &SphereConfig) -> Value {
    let lambda = cfg.lambda();
    json!({
        "alpha": angle_json(cfg.alpha()),
        "beta": angle_json(cfg.beta()),
        "lambda": {
            "value": clean(lambda.value()),
            "exact": lambda.exact().map(|r| r.to_string()),
            "irrational": matches!(lambda.kind(), LambdaKind::Irrational),
        },
        "p": vec_json(cfg.p().get()),
        "q": vec_json(cfg.q().get()),
        "r0": vec_json(cfg.r0().get()),
        "chi0": cfg.chi0(),
        "omega": cfg.omega(),
    })
}

pub fn trajectory_json(traj: &Trajectory) -> Value {
    let samples: Vec<Value> = traj
        .samples
        .iter()
        .map(|s| {
            json!({
                "index": s.index,
                "theta": clean(s.theta),
                "r": vec_json(s.r),
                "r_dot_q": clean(s.r_dot_q),
            })
        })
        .collect();
    json!({
        "method": traj.method,
        "config": config_json(&traj.config),
        "samples": samples,
    })
}

/// Pretty JSON with a trailing newline.
pub fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
