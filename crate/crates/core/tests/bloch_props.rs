mod common;

use std::f64::consts::PI;

use common::*;
use rand::Rng;
use strobe_core::bloch::{integrate, strobe_check, strobe_check_with};
use strobe_core::{Angle, DriveField, Lambda, Rational, Rk4, SphereConfig, UnitVec3};

fn random_config(rng: &mut impl Rng) -> SphereConfig {
    SphereConfig::builder()
        .alpha(Angle::from_radians(rng.gen_range(0.01..0.3)))
        .beta(Angle::from_radians(rng.gen_range(-1.0..1.0)))
        .p(unit_vector(rng))
        .q(unit_vector(rng))
        .r0(unit_vector(rng))
        .omega(rng.gen_range(0.5..3.0))
        .build()
        .unwrap()
}

fn lambda3() -> SphereConfig {
    SphereConfig::builder()
        .lambda(Lambda::rational(Rational::from_integer(3)))
        .build()
        .unwrap()
}

#[test]
fn flow_follows_the_curve() {
    let mut rng = rng(40);
    let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 2.0 * PI / 40.0).collect();
    for _ in 0..20 {
        let cfg = random_config(&mut rng);
        let tr = integrate(&cfg, &grid, &Rk4::default()).unwrap();
        for s in &tr.samples {
            let dev = s.r.max_abs_diff(cfg.r_curve(s.theta));
            assert!(dev < 1e-8, "theta {}: {dev}", s.theta);
        }
    }
}

#[test]
fn curve_derivative_matches_field() {
    let mut rng = rng(41);
    let eps = 1e-5;
    for _ in 0..50 {
        // |λ| <= 10 keeps the ε² truncation of the central difference small
        let cfg = SphereConfig::builder()
            .alpha(Angle::from_radians(rng.gen_range(0.05..0.3)))
            .beta(Angle::from_radians(rng.gen_range(-1.0..1.0)))
            .p(unit_vector(&mut rng))
            .q(unit_vector(&mut rng))
            .r0(unit_vector(&mut rng))
            .build()
            .unwrap();
        let f = DriveField::from_config(&cfg);
        for _ in 0..20 {
            let th = rng.gen_range(-10.0..10.0);
            let fd = (cfg.r_curve(th + eps) - cfg.r_curve(th - eps)) / (2.0 * eps);
            assert!(fd.max_abs_diff(f.vector_field(th, cfg.r_curve(th))) < 1e-6);
        }
    }
}

#[test]
fn time_and_angle_forms_agree() {
    let mut rng = rng(42);
    for _ in 0..10 {
        let cfg = random_config(&mut rng);
        let f = DriveField::from_config(&cfg);
        let w = cfg.omega();
        let thetas: Vec<f64> = (0..=10).map(|i| i as f64 * 0.3).collect();
        let times: Vec<f64> = thetas.iter().map(|th| th / w).collect();
        let h = 1e-4;
        let a = f
            .integrate(
                cfg.r0().get(),
                &thetas,
                &Rk4 {
                    h,
                    renormalize: false,
                },
            )
            .unwrap();
        let b = f
            .integrate_time(
                cfg.r0().get(),
                &times,
                &Rk4 {
                    h: h / w,
                    renormalize: false,
                },
            )
            .unwrap();
        // step counts may differ by rounding; both must track the curve
        for ((x, y), th) in a.points.iter().zip(&b.points).zip(&thetas) {
            assert!(x.max_abs_diff(*y) < 1e-9);
            assert!(y.max_abs_diff(cfg.r_curve(*th)) < 1e-9);
        }
    }
}

#[test]
fn rk4_is_fourth_order() {
    let cfg = lambda3();
    let f = DriveField::from_config(&cfg);
    let exact = cfg.r_curve(PI);
    let err = |h: f64| {
        let path = f
            .integrate(
                cfg.r0().get(),
                &[0.0, PI],
                &Rk4 {
                    h,
                    renormalize: false,
                },
            )
            .unwrap();
        path.points[1].distance(exact)
    };
    let h = PI / 200.0;
    let order = (err(h) / err(h / 2.0)).log2();
    assert!((3.8..=4.2).contains(&order), "observed order {order}");
}

#[test]
fn norm_conservation() {
    let mut rng = rng(43);
    let span = 2.0 * PI;
    for _ in 0..10 {
        let cfg = random_config(&mut rng);
        let f = DriveField::from_config(&cfg);
        let on = f
            .integrate(cfg.r0().get(), &[0.0, span], &Rk4::default())
            .unwrap();
        assert!(on.max_norm_drift <= 1e-12);

        let h = 1e-3;
        let off = f
            .integrate(
                cfg.r0().get(),
                &[0.0, span],
                &Rk4 {
                    h,
                    renormalize: false,
                },
            )
            .unwrap();
        let l = 2.0 * (1.0 + cfg.lambda().value().abs());
        let bound = l.powi(5) / 120.0 * h.powi(4) * span;
        assert!(off.max_norm_drift <= bound, "{} > {bound}", off.max_norm_drift);
    }
}

#[test]
fn field_is_transverse_to_drive() {
    let mut rng = rng(44);
    for _ in 0..10 {
        let cfg = random_config(&mut rng);
        let path = DriveField::from_config(&cfg)
            .integrate(
                cfg.r0().get(),
                &[0.0, 1.0],
                &Rk4 {
                    h: 1e-3,
                    renormalize: true,
                },
            )
            .unwrap();
        assert!(path.max_transversality.unwrap() < 1e-13);
    }
}

#[test]
fn strobe_check_passes_for_the_map_and_fails_for_a_mirror() {
    let cfg = lambda3();
    let report = strobe_check(&cfg, 2000, &Rk4::default()).unwrap();
    assert!(report.pass, "{report:?}");
    assert_eq!(report.tolerance, 1e-8);

    // rotating the wrong way about q is a plausible sign slip
    let mirrored = |k: u64| {
        let th = k as f64 * cfg.alpha().radians();
        let t = cfg.p().rotate(cfg.r0().get(), 2.0 * cfg.lambda().value() * th);
        cfg.q().rotate(t, -2.0 * th)
    };
    let bad = strobe_check_with(&cfg, 2000, &Rk4::default(), mirrored).unwrap();
    assert!(!bad.pass);
}

#[test]
fn integrator_rejects_bad_input() {
    let f = DriveField::new(UnitVec3::X, UnitVec3::Z, 1.0, 1.0).unwrap();
    let r0 = UnitVec3::Z.get();
    assert!(f
        .integrate(
            r0,
            &[0.0, 1.0],
            &Rk4 {
                h: 0.0,
                renormalize: true
            }
        )
        .is_err());
    assert!(f.integrate(r0, &[1.0, 0.0], &Rk4::default()).is_err());
    assert!(f.integrate(r0, &[0.0, f64::NAN], &Rk4::default()).is_err());
    assert!(f.integrate(r0, &[], &Rk4::default()).unwrap().points.is_empty());
}
