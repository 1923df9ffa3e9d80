use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use strobe_cli::svg::Projection;
use strobe_core::{Angle, Rational, Vec3};

fn strobe(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strobe"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bounds_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = strobe(
        &["bounds", "--p", "1,0,0", "--q", "0,0,1", "--r0", "0.6,0,0.8"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["A1"], -0.8);
    assert_eq!(v["A2"], 0.8);
    assert_eq!(v["a"], 0.8);
    assert_eq!(v["b"], 0.0);
    assert_eq!(v["c"], 0.0);
}

#[test]
fn csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "integrate",
        "--preset",
        "fig1",
        "--steps",
        "200",
        "--out",
        "a.csv",
    ];
    assert!(strobe(&args, dir.path()).status.success());
    let mut again = args;
    again[6] = "b.csv";
    assert!(strobe(&again, dir.path()).status.success());
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 202);
}

#[test]
fn single_row_and_empty_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = strobe(&["exact", "--lambda", "3", "--steps", "0"], dir.path());
    assert_eq!(stdout(&o), "index,theta,rx,ry,rz,r_dot_q\n0,0,0.6,0,0.8,0.8\n");
    let o = strobe(&["iterate", "--lambda", "3", "--steps", "0"], dir.path());
    assert_eq!(stdout(&o), "index,theta,rx,ry,rz,r_dot_q\n0,0,0.6,0,0.8,0.8\n");
}

#[test]
fn fig2_dots_have_one_row_per_strobe() {
    let dir = tempfile::tempdir().unwrap();
    let o = strobe(&["figure", "fig2", "--out", "figs"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let dots = fs::read_to_string(dir.path().join("figs/fig2-dots.csv")).unwrap();
    assert_eq!(dots.lines().count(), 91);
    let svg = fs::read_to_string(dir.path().join("figs/fig2.svg")).unwrap();
    assert_eq!(svg.matches("class=\"dot ").count(), 90);
    assert!(svg.contains("class=\"curve front\"") && svg.contains("class=\"curve back\""));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // unparseable flag value
    assert_eq!(
        strobe(&["exact", "--lambda", "x"], dir.path()).status.code(),
        Some(2)
    );
    // clap-level usage error
    assert_eq!(strobe(&["nonsense"], dir.path()).status.code(), Some(2));
    // closure of float angles
    assert_eq!(
        strobe(&["closure", "--alpha", "0.1", "--beta", "0.3"], dir.path())
            .status
            .code(),
        Some(2)
    );
    // a tolerance nobody can meet
    let o = strobe(
        &[
            "compare", "--preset", "fig1", "--steps", "50", "--h", "0.01", "--tol", "1e-30",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    // output path under a regular file
    fs::write(dir.path().join("blocker"), "").unwrap();
    let o = strobe(&["exact", "--lambda", "2", "--out", "blocker/x.csv"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn compare_meets_default_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let o = strobe(
        &["compare", "--preset", "fig1", "--h", "1e-4", "--steps", "1000"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["report"]["max_deviation"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.json"),
        r#"{"alpha": 2, "beta": 8, "degrees": true, "steps": 5}"#,
    )
    .unwrap();
    let o = strobe(&["exact", "--config", "run.json", "--steps", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
    let o = strobe(&["closure", "--config", "run.json"], dir.path());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["closure"]["K"], 90);
    assert_eq!(v["distinct_points"], 90);
    assert_eq!(v["config"]["beta"]["exact_degrees"], "8");
}

#[test]
fn degrees_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = strobe(
        &["closure", "--alpha", "0.01", "--beta", "0.0205", "--degrees"],
        dir.path(),
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["closure"]["K"], 720_000);
    let exact = v["config"]["beta"]["exact_degrees"].as_str().unwrap();
    assert_eq!(exact, "41/2000");
    let radians = v["config"]["beta"]["radians"].as_f64().unwrap();
    let back = Angle::from_exact_degrees(exact.parse::<Rational>().unwrap());
    assert_eq!(back.radians(), radians);
    assert_eq!(back.exact_degrees(), Some(Rational::new(41, 2000)));
}

#[test]
fn svg_partitions_points_by_visibility() {
    let dir = tempfile::tempdir().unwrap();
    let o = strobe(
        &[
            "exact",
            "--alpha",
            "2",
            "--beta",
            "8",
            "--degrees",
            "--steps",
            "89",
            "--format",
            "svg",
        ],
        dir.path(),
    );
    let svg = stdout(&o);
    let front = svg.matches("class=\"dot front\"").count();
    let back = svg.matches("class=\"dot back\"").count();
    assert_eq!(front + back, 90);

    let proj = Projection::default_for(Vec3::Z);
    let csv = stdout(&strobe(
        &[
            "exact",
            "--alpha",
            "2",
            "--beta",
            "8",
            "--degrees",
            "--steps",
            "89",
        ],
        dir.path(),
    ));
    let expected_front = csv
        .lines()
        .skip(1)
        .filter(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            proj.is_front(Vec3::new(f[2], f[3], f[4]))
        })
        .count();
    assert_eq!(front, expected_front);
    assert!(front > 0 && back > 0);
}

#[test]
fn zero_theta_max_keeps_the_start() {
    let dir = tempfile::tempdir().unwrap();
    let o = strobe(
        &["exact", "--lambda", "2", "--theta-max", "0", "--format", "svg"],
        dir.path(),
    );
    let svg = stdout(&o);
    // θmax = 0 still keeps the K = 0 sample, drawn as one dot
    assert_eq!(svg.matches("class=\"dot ").count(), 1);
    assert!(svg.contains("class=\"axis\""));
}

#[test]
fn acceptance_mode_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = strobe(&["acceptance", "--out", "rep"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("[PASS]")).count(), 10);
    let v: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("rep/acceptance.json")).unwrap()).unwrap();
    let first = &v["criteria"][0];
    for key in [
        "criterion_id",
        "description",
        "measured",
        "expected",
        "tolerance",
        "pass",
    ] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}
