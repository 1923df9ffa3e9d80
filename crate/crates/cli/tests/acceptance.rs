use strobe_cli::acceptance::{run_suite, CurveModel};

#[test]
fn acceptance_suite() {
    let report = run_suite(CurveModel::Reference);
    for c in &report.criteria {
        println!("{}", c.line());
    }
    assert_eq!(report.criteria.len(), 10);
    assert!(report.pass, "failed criteria: {:?}", report.failed());

    let c7 = &report.criteria[6];
    assert_eq!(c7.measured["distinct_points"], 90);
    assert_eq!(c7.expected["claimed"], 45);
}

#[test]
fn mirrored_rotation_is_caught() {
    let report = run_suite(CurveModel::MirroredRotation);
    for c in &report.criteria {
        println!("{}", c.line());
    }
    let failed = report.failed();
    assert!(!report.pass);
    // strobes against the flow, and the symmetry relation
    assert!(failed.contains(&3), "{failed:?}");
    assert!(failed.contains(&6), "{failed:?}");
}
