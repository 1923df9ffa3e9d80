//! The acceptance suite: ten numeric checks with wall-clock budgets.
//!
//! Every check that consumes the sphere curve goes through a
//! [`CurveModel`], so a deliberately broken model can be substituted to
//! confirm the suite notices.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use strobe_core::bloch::{strobe_check_with, strobe_tolerance};
use strobe_core::group_map::{closed_r_even, closed_s, orbit, s_advance, s_of};
use strobe_core::periodicity::{band_coverage, closure_index, distinct_point_count, symmetry_shift};
use strobe_core::sphere::bounds;
use strobe_core::{
    Angle, DriveField, GroupElement, Lambda, MapState, QSequence, Rational, Result, Rk4, SRecord,
    SphereConfig, Trajectory, Vec3,
};

use crate::presets::{ergodic_lambda, FigurePreset, PresetId};

/// Source of `r(θ)` for the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveModel {
    /// `Rot_q(2θ) Rot_p(2λθ) r0`.
    Reference,
    /// Fault injection: the turn about `q` taken with the wrong sign.
    MirroredRotation,
}

impl CurveModel {
    pub fn curve(self, cfg: &SphereConfig, theta: f64) -> Vec3 {
        match self {
            CurveModel::Reference => cfg.r_curve(theta),
            CurveModel::MirroredRotation => cfg.q().rotate(cfg.t_curve(theta), -2.0 * theta),
        }
    }

    pub fn strobe(self, cfg: &SphereConfig, k: u64) -> Vec3 {
        match self {
            CurveModel::Reference => cfg.r_strobe(k),
            CurveModel::MirroredRotation => self.curve(cfg, cfg.strobe_theta(k)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub criterion_id: u32,
    pub description: String,
    pub measured: Value,
    pub expected: Value,
    pub tolerance: Value,
    pub pass: bool,
    pub runtime_ms: f64,
    pub budget_ms: f64,
    pub notes: String,
}

impl CriterionResult {
    /// One human-readable line.
    pub fn line(&self) -> String {
        format!(
            "[{}] C{:02} {}: measured {} (expected {}, tol {}) in {:.1} ms / {} ms{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.criterion_id,
            self.description,
            self.measured,
            self.expected,
            self.tolerance,
            self.runtime_ms,
            self.budget_ms,
            if self.notes.is_empty() {
                String::new()
            } else {
                format!(" ({})", self.notes)
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub model: CurveModel,
    pub pass: bool,
    pub criteria: Vec<CriterionResult>,
    /// Conventions and corrections the checks rely on.
    pub conventions: Vec<&'static str>,
}

impl Report {
    pub fn failed(&self) -> Vec<u32> {
        self.criteria
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.criterion_id)
            .collect()
    }
}

pub const CONVENTIONS: &[&str] = &[
    "Rot_s(γ)x = cos γ x + sin γ x×s + (1 − cos γ)(s·x)s, i.e. conjugation by exp(iγ/2 σ·s); γ > 0 about z turns x toward −y",
    "group product (w1, v1)(w2, v2) = (w1w2 − v1·v2, w1v2 + w2v1 − v1×v2), matching w + i v·σ",
    "closed-form curve r(θ) = Rot_q(2θ) Rot_p(2λθ) r0 with λ = β/(2α), θ = Kα (full angles 2θ and 2λθ)",
    "odd iterates: Q⁻¹R_{2K+1}Q = Q^{2K}P^K (Q⁻¹R_1Q) P^{−K}Q^{−2K}",
    "closed S_N = Q_{N−1}…Q_1 S_1 Q_{−1}⁻¹…Q_{N−3}⁻¹; at constant Q this is Q^{N−1} S_1 Q^{−(N−1)}",
    "even iterates R_{2K} = S_{2K} S_{2K−2} … S_2 R_0 (S_{2K} … S_2)⁻¹ use only even-index S",
    "time-domain drive u(t) = ω u(ωt) with p(θ) = Rot_q(2θ) p",
    "α = 2°, β = 8° has 90 distinct strobes per period; the two-fold symmetry pairs K with K + 45, so each half-turn sector holds 45",
];

struct Outcome {
    measured: Value,
    expected: Value,
    tolerance: Value,
    pass: bool,
    notes: String,
}

fn timed(
    id: u32,
    description: &str,
    budget_ms: f64,
    check: impl FnOnce() -> Result<Outcome>,
) -> CriterionResult {
    let start = Instant::now();
    let outcome = check();
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let (measured, expected, tolerance, pass, mut notes) = match outcome {
        Ok(o) => (o.measured, o.expected, o.tolerance, o.pass, o.notes),
        Err(e) => (
            Value::Null,
            Value::Null,
            Value::Null,
            false,
            format!("error: {e}"),
        ),
    };
    let in_budget = runtime_ms < budget_ms;
    if !in_budget {
        notes = format!("over budget; {notes}");
    }
    CriterionResult {
        criterion_id: id,
        description: description.into(),
        measured,
        expected,
        tolerance,
        pass: pass && in_budget,
        runtime_ms,
        budget_ms,
        notes,
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

fn element(rng: &mut impl Rng) -> GroupElement {
    strobe_core::su2::exp_axis_angle(unit(rng), rng.gen_range(-2.0 * PI..2.0 * PI)).expect("unit axis")
}

fn random_sphere(rng: &mut impl Rng) -> Result<SphereConfig> {
    SphereConfig::builder()
        .alpha(Angle::from_radians(rng.gen_range(0.001..0.5)))
        .beta(Angle::from_radians(rng.gen_range(-1.0..1.0)))
        .p(unit(rng))
        .q(unit(rng))
        .r0(unit(rng))
        .build()
}

fn random_sequence(rng: &mut impl Rng, i: usize, len: usize) -> QSequence {
    match i % 3 {
        0 => QSequence::constant(element(rng)),
        1 => QSequence::alternating(element(rng), element(rng)),
        _ => QSequence::explicit((0..len).map(|_| element(rng)).collect()).expect("non-empty"),
    }
}

fn preset_curve(id: PresetId) -> SphereConfig {
    FigurePreset::get(id).curve
}

fn section_preset() -> (Vec3, Vec3, Vec3) {
    (Vec3::X, Vec3::Z, Vec3::new(0.6, 0.0, 0.8))
}

fn c1() -> Result<Outcome> {
    let (p, q, r0) = section_preset();
    let b = bounds(p, q, r0);
    let err = (b.a1 + 0.8).abs().max((b.a2 - 0.8).abs());
    Ok(Outcome {
        measured: json!({"A1": b.a1, "A2": b.a2}),
        expected: json!({"A1": -0.8, "A2": 0.8}),
        tolerance: json!(1e-12),
        pass: err <= 1e-12,
        notes: String::new(),
    })
}

fn c2(model: CurveModel) -> Result<Outcome> {
    let mut rng = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let base = random_sphere(&mut rng)?;
        for chi0 in [0.1, FRAC_PI_2, 3.0] {
            let cfg = base.with_chi0(chi0)?;
            let direct = Trajectory::direct(&cfg, 1000)?;
            for s in &direct.samples {
                worst = worst.max(s.r.max_abs_diff(model.strobe(&cfg, s.index)));
            }
        }
    }
    Ok(Outcome {
        measured: json!(worst),
        expected: json!(0.0),
        tolerance: json!(1e-9),
        pass: worst <= 1e-9,
        notes: "100 configs × χ0 ∈ {0.1, π/2, 3}, K ≤ 1000".into(),
    })
}

fn c3(model: CurveModel) -> Result<Outcome> {
    let opts = Rk4::default();
    let mut worst = 0.0f64;
    let mut measured = serde_json::Map::new();
    for id in [PresetId::Fig1, PresetId::Fig2] {
        let cfg = preset_curve(id);
        let k_max = (2.0 * PI / cfg.alpha().radians()).round() as u64;
        let report = strobe_check_with(&cfg, k_max, &opts, |k| model.strobe(&cfg, k))?;
        measured.insert(id.name().into(), json!(report.max_deviation));
        worst = worst.max(report.max_deviation);
    }
    let tol = strobe_tolerance(opts.h);
    Ok(Outcome {
        measured: Value::Object(measured),
        expected: json!(0.0),
        tolerance: json!(tol),
        pass: worst <= tol,
        notes: "RK4 h = 1e-4 over θ ∈ [0, 2π], sup-norm at θ = Kα".into(),
    })
}

fn c4() -> Result<Outcome> {
    let mut rng = rng(4);
    let (mut s_err, mut r_err, mut trip_err) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..120 {
        let qs = random_sequence(&mut rng, i, 120);
        let (r0, r1) = (element(&mut rng), element(&mut rng));

        let s1 = s_of(&r1, &r0, &qs, 1)?;
        let mut s = s1;
        let mut evens = Vec::new();
        for n in 2..=50 {
            s = s_advance(&s, &qs)?;
            let closed = closed_s(n, &s1.s, &qs)?;
            s_err = s_err.max(closed.max_abs_diff(&s.s));
            if n % 2 == 0 {
                evens.push(SRecord { index: n, s: closed });
            }
        }
        let direct = orbit(r0, r1, &qs, 50)?;
        for k in 1..=25u64 {
            let closed = closed_r_even(k, &r0, &evens)?;
            r_err = r_err.max(closed.max_abs_diff(&direct[2 * k as usize]));
        }

        let start = MapState::new(r0, r1);
        let mut st = start;
        for _ in 0..100 {
            st = st.step(&qs)?;
        }
        for _ in 0..100 {
            st = st.step_back(&qs)?;
        }
        trip_err = trip_err.max(st.max_abs_diff(&start));
    }
    Ok(Outcome {
        measured: json!({"closed_s": s_err, "closed_r_even": r_err, "round_trip": trip_err}),
        expected: json!(0.0),
        tolerance: json!({"closed_s": 1e-12, "closed_r_even": 1e-10, "round_trip": 1e-9}),
        pass: s_err <= 1e-12 && r_err <= 1e-10 && trip_err <= 1e-9,
        notes: "120 sequences: constant, alternating and explicit".into(),
    })
}

fn c5(model: CurveModel) -> Result<Outcome> {
    let deg = |n, d| Angle::from_exact_degrees(Rational::new(n, d));
    let cases = [
        ((deg(2, 1), deg(8, 1)), (90u64, 2i64, 1i64)),
        ((deg(1, 100), deg(41, 2000)), (720_000, 41, 40)),
    ];
    let mut measured = Vec::new();
    let mut pass = true;
    for ((alpha, beta), (k, m, n)) in cases {
        let cfg = SphereConfig::builder().alpha(alpha).beta(beta).build()?;
        let c = closure_index(&cfg)?
            .ok_or_else(|| strobe_core::Error::InvalidParameter("rational λ must close".into()))?;
        let back = model.strobe(&cfg, c.k).max_abs_diff(cfg.r0().get());
        pass &= (c.k, c.m, c.n) == (k, m, n) && back <= 1e-9;
        measured.push(json!({"K": c.k, "m": c.m, "n": c.n, "return_deviation": back}));
    }
    Ok(Outcome {
        measured: json!(measured),
        expected: json!([{"K": 90, "m": 2, "n": 1}, {"K": 720000, "m": 41, "n": 40}]),
        tolerance: json!(1e-9),
        pass,
        notes: "α = 2°, β = 8° and α = 0.01°, β = 0.0205°".into(),
    })
}

fn c6(model: CurveModel) -> Result<Outcome> {
    let mut rng = rng(6);
    let mut measured = serde_json::Map::new();
    let mut worst = 0.0f64;
    for lambda in [
        Rational::from_integer(3),
        Rational::from_integer(2),
        Rational::new(41, 40),
    ] {
        let cfg = SphereConfig::builder().lambda(Lambda::rational(lambda)).build()?;
        let shift = symmetry_shift(lambda).expect("non-zero λ");
        let mut err = 0.0f64;
        for _ in 0..1000 {
            let th = rng.gen_range(0.0..2.0 * PI);
            let lhs = model.curve(&cfg, th + shift.delta_theta);
            let rhs = cfg.q().rotate(model.curve(&cfg, th), shift.rotation);
            err = err.max(lhs.max_abs_diff(rhs));
        }
        measured.insert(format!("λ={lambda} (order {})", shift.order), json!(err));
        worst = worst.max(err);
    }
    Ok(Outcome {
        measured: Value::Object(measured),
        expected: json!(0.0),
        tolerance: json!(1e-12),
        pass: worst <= 1e-12,
        notes: "r(θ + πn/m) = Rot_q(2πn/m) r(θ), 1000 random θ each".into(),
    })
}

fn c7(model: CurveModel) -> Result<Outcome> {
    let (cfg, k_star) = FigurePreset::get(PresetId::Fig2).dots.expect("fig2 has dots");
    let first = distinct_point_count(&cfg, k_star, 1e-9);
    let second = distinct_point_count(&cfg, k_star, 1e-9);
    // K ↦ K + 45 is the half turn about q
    let half = k_star / 2;
    let q = cfg.q();
    let paired = (0..half).all(|k| {
        model
            .strobe(&cfg, k + half)
            .max_abs_diff(q.rotate(model.strobe(&cfg, k), PI))
            <= 1e-9
    });
    let per_sector = distinct_point_count(&cfg, half, 1e-9);
    let explained = first as u64 == 2 * per_sector as u64 && per_sector == 45 && paired;
    let pass = first == second && (first == 45 || explained);
    Ok(Outcome {
        measured: json!({"distinct_points": first, "per_half_turn_sector": per_sector, "repeat_run": second}),
        expected: json!({"claimed": 45}),
        tolerance: json!(1e-9),
        pass,
        notes: if first == 45 {
            "agrees with the claimed 45".into()
        } else {
            format!(
                "{first} distinct over one period; K and K + {half} are related by the half turn about q, \
                 leaving {per_sector} per sector"
            )
        },
    })
}

fn c8() -> Result<Outcome> {
    let mut norm_on = 0.0f64;
    let mut drift_ratio = 0.0f64;
    let mut transverse = 0.0f64;
    for id in [PresetId::Fig1, PresetId::Fig2] {
        let cfg = preset_curve(id);
        let field = DriveField::from_config(&cfg);
        let k_max = (2.0 * PI / cfg.alpha().radians()).round() as u64;
        let grid: Vec<f64> = (0..=k_max).map(|k| cfg.strobe_theta(k)).collect();
        let on = field.integrate(cfg.r0().get(), &grid, &Rk4::default())?;
        for r in &on.points {
            norm_on = norm_on.max((r.norm() - 1.0).abs());
        }
        norm_on = norm_on.max(on.max_norm_drift);
        transverse = transverse.max(on.max_transversality.unwrap_or(f64::INFINITY));

        let h = 1e-3;
        let span = 2.0 * PI;
        let off = field.integrate(
            cfg.r0().get(),
            &[0.0, span],
            &Rk4 {
                h,
                renormalize: false,
            },
        )?;
        let l = 2.0 * (1.0 + cfg.lambda().value().abs());
        let bound = l.powi(5) / 120.0 * h.powi(4) * span;
        drift_ratio = drift_ratio.max(off.max_norm_drift / bound);
    }
    Ok(Outcome {
        measured: json!({"renormalized_norm_error": norm_on, "unrenormalized_drift_over_bound": drift_ratio, "transversality": transverse}),
        expected: json!({"renormalized_norm_error": 0.0, "unrenormalized_drift_over_bound": "≤ 1", "transversality": 0.0}),
        tolerance: json!({"renormalized_norm_error": 1e-12, "transversality": 1e-13}),
        pass: norm_on <= 1e-12 && drift_ratio <= 1.0 && transverse <= 1e-13,
        notes: "drift bound (L⁵/120) h⁴ θ with L = 2 max|u|, h = 1e-3; transversality |u·f|/(|u|²|r|)".into(),
    })
}

fn c9(model: CurveModel) -> Result<Outcome> {
    let mut rng = rng(9);
    let mut configs: Vec<SphereConfig> = [PresetId::Fig1, PresetId::Fig2, PresetId::Fig3]
        .iter()
        .map(|&id| preset_curve(id))
        .collect();
    for _ in 0..20 {
        configs.push(random_sphere(&mut rng)?);
    }
    let (mut decouple, mut outside) = (0.0f64, 0.0f64);
    for cfg in &configs {
        let b = cfg.bounds();
        let q = cfg.q().get();
        for _ in 0..2000 {
            let th = rng.gen_range(0.0..100.0);
            let rq = model.curve(cfg, th).dot(q);
            decouple = decouple.max((rq - cfg.t_curve(th).dot(q)).abs());
            outside = outside.max(b.a1 - rq).max(rq - b.a2);
        }
    }

    let ergodic = SphereConfig::builder()
        .alpha(Angle::from_exact_degrees(Rational::new(1, 100)))
        .lambda(Lambda::irrational(ergodic_lambda()))
        .build()?;
    let b = ergodic.bounds();
    let points = (0..1_000_000u64).map(|k| model.strobe(&ergodic, k));
    let cov = band_coverage(points, ergodic.q().get(), ergodic.p().get(), &b, 6, 6)?;
    let gap = (cov.min_axial - b.a1).abs().max((b.a2 - cov.max_axial).abs());
    let pass = decouple <= 1e-12 && outside <= 1e-9 && gap <= 1e-4 && cov.visited == cov.cells();
    Ok(Outcome {
        measured: json!({
            "decoupling": decouple,
            "band_excess": outside.max(0.0),
            "parallel_gap": gap,
            "cells_visited": cov.visited,
        }),
        expected: json!({"decoupling": 0.0, "band_excess": 0.0, "parallel_gap": 0.0, "cells_visited": cov.cells()}),
        tolerance: json!({"decoupling": 1e-12, "band_excess": 1e-9, "parallel_gap": 1e-4}),
        pass,
        notes: format!("ergodic λ = √2 − 0.389 over {} strobes, 6 × 6 grid", cov.samples),
    })
}

fn c10(model: CurveModel) -> Result<Outcome> {
    let cfg = preset_curve(PresetId::Fig1);
    let field = DriveField::from_config(&cfg);
    let exact = model.curve(&cfg, PI);
    let err = |h: f64| -> Result<f64> {
        let path = field.integrate(
            cfg.r0().get(),
            &[0.0, PI],
            &Rk4 {
                h,
                renormalize: false,
            },
        )?;
        Ok(path.points[1].distance(exact))
    };
    let h = PI / 200.0;
    let (e1, e2) = (err(h)?, err(h / 2.0)?);
    let order = (e1 / e2).log2();
    Ok(Outcome {
        measured: json!(order),
        expected: json!(4.0),
        tolerance: json!([3.8, 4.2]),
        pass: (3.8..=4.2).contains(&order),
        notes: format!("λ = 3 over θ ∈ [0, π]: error {e1:.3e} at h = π/200, {e2:.3e} at π/400"),
    })
}

/// Runs every criterion in order.
pub fn run_suite(model: CurveModel) -> Report {
    let criteria = vec![
        timed(1, "bounds for p = x, q = z, r0 = (0.6, 0, 0.8)", 1.0, c1),
        timed(2, "group map iteration vs closed form", 5_000.0, || c2(model)),
        timed(3, "strobes sample the RK4 flow", 10_000.0, || c3(model)),
        timed(4, "general-map closed forms and invertibility", 5_000.0, c4),
        timed(5, "closure indices", 2_000.0, || c5(model)),
        timed(6, "rotational symmetry orders 3, 2, 41", 2_000.0, || c6(model)),
        timed(7, "distinct dots at α = 2°, β = 8°", 1_000.0, || c7(model)),
        timed(8, "norm and transversality invariants", 2_000.0, c8),
        timed(
            9,
            "decoupling, confinement and ergodic coverage",
            10_000.0,
            || c9(model),
        ),
        timed(10, "RK4 convergence order", 5_000.0, || c10(model)),
    ];
    Report {
        model,
        pass: criteria.iter().all(|c| c.pass),
        criteria,
        conventions: CONVENTIONS.to_vec(),
    }
}
