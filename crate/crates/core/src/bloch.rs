//! The flow sampled by the group map: `dr/dθ = 2 r × u(θ)` with
//! `u(θ) = q + λ p(θ)` and `p(θ) = Rot_q(2θ) p`, plus a fixed-step RK4
//! integrator to check it against the closed form.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::{Method, SphereConfig, Trajectory};
use crate::vec3::{UnitVec3, Vec3};

/// Driving field of the Bloch equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveField {
    pub p: UnitVec3,
    pub q: UnitVec3,
    pub lambda: f64,
    pub omega: f64,
}

impl DriveField {
    pub fn new(p: UnitVec3, q: UnitVec3, lambda: f64, omega: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive, got {omega}"
            )));
        }
        Ok(Self { p, q, lambda, omega })
    }

    pub fn from_config(cfg: &SphereConfig) -> Self {
        Self {
            p: cfg.p(),
            q: cfg.q(),
            lambda: cfg.lambda().value(),
            omega: cfg.omega(),
        }
    }

    /// `p(θ) = cos 2θ p + sin 2θ p×q + (1 - cos 2θ)(q·p) q`.
    pub fn p_of_theta(&self, theta: f64) -> Vec3 {
        self.q.rotate(self.p.get(), 2.0 * theta)
    }

    pub fn u_of_theta(&self, theta: f64) -> Vec3 {
        self.q.get() + self.lambda * self.p_of_theta(theta)
    }

    /// Time-domain drive `ω u(ωt)`.
    pub fn u_of_t(&self, t: f64) -> Vec3 {
        self.omega * self.u_of_theta(self.omega * t)
    }

    /// `2 r × u(θ)`.
    pub fn vector_field(&self, theta: f64, r: Vec3) -> Vec3 {
        2.0 * r.cross(self.u_of_theta(theta))
    }

    /// `2 r × u(t)` for the time-domain equation.
    pub fn vector_field_t(&self, t: f64, r: Vec3) -> Vec3 {
        2.0 * r.cross(self.u_of_t(t))
    }

    /// Integrates in θ, outputting at every point of `grid`.
    pub fn integrate(&self, r0: Vec3, grid: &[f64], opts: &Rk4) -> Result<OdePath> {
        let worst = Cell::new(0.0f64);
        let mut path = rk4_path(
            |theta, r| {
                let u = self.u_of_theta(theta);
                let f = 2.0 * r.cross(u);
                let scale = (u.norm_squared() * r.norm()).max(f64::MIN_POSITIVE);
                worst.set(worst.get().max(u.dot(f).abs() / scale));
                f
            },
            r0,
            grid,
            opts,
        )?;
        path.max_transversality = Some(worst.get());
        Ok(path)
    }

    /// Integrates `dr/dt = 2 r × ω u(ωt)` in time, `opts.h` being a time step.
    pub fn integrate_time(&self, r0: Vec3, t_grid: &[f64], opts: &Rk4) -> Result<OdePath> {
        rk4_path(|t, r| self.vector_field_t(t, r), r0, t_grid, opts)
    }
}

/// Classical fixed-step RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rk4 {
    pub h: f64,
    /// Rescale `r` to unit length after each step.
    pub renormalize: bool,
}

impl Default for Rk4 {
    fn default() -> Self {
        Self {
            h: 1e-4,
            renormalize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdePath {
    pub grid: Vec<f64>,
    pub points: Vec<Vec3>,
    pub steps: usize,
    /// `max | |r| - 1 |` over every step taken.
    pub max_norm_drift: f64,
    /// `max |u·f| / (|u|² |r|)` over every field evaluation, when tracked.
    pub max_transversality: Option<f64>,
}

/// RK4 from `grid[0]` through every later grid point.
///
/// Each interval `[g_i, g_{i+1}]` is covered by `ceil(Δ/h)` equal steps so
/// the output lands exactly on the grid. The grid must be non-decreasing.
pub fn rk4_path<F>(f: F, r0: Vec3, grid: &[f64], opts: &Rk4) -> Result<OdePath>
where
    F: Fn(f64, Vec3) -> Vec3,
{
    if !(opts.h > 0.0 && opts.h.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "step must be positive, got {}",
            opts.h
        )));
    }
    if grid.iter().any(|t| !t.is_finite()) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(
            "grid must be finite and non-decreasing".into(),
        ));
    }
    let mut points = Vec::with_capacity(grid.len());
    let mut steps = 0usize;
    let mut drift = 0.0f64;
    let Some(&start) = grid.first() else {
        return Ok(OdePath {
            grid: vec![],
            points,
            steps,
            max_norm_drift: 0.0,
            max_transversality: None,
        });
    };
    let mut r = r0;
    let mut t = start;
    points.push(r);
    for &target in &grid[1..] {
        let span = target - t;
        if span > 0.0 {
            let n = (span / opts.h).ceil().max(1.0) as usize;
            let h = span / n as f64;
            let t0 = t;
            for i in 0..n {
                let ti = t0 + i as f64 * h;
                let k1 = f(ti, r);
                let k2 = f(ti + 0.5 * h, r + (0.5 * h) * k1);
                let k3 = f(ti + 0.5 * h, r + (0.5 * h) * k2);
                let k4 = f(ti + h, r + h * k3);
                let next = r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                if !next.is_finite() {
                    return Err(Error::IntegrationFailure {
                        last_good_theta: ti,
                        reason: "state became non-finite".into(),
                    });
                }
                r = if opts.renormalize {
                    next.normalized().ok_or_else(|| Error::IntegrationFailure {
                        last_good_theta: ti,
                        reason: "state collapsed to zero".into(),
                    })?
                } else {
                    next
                };
                drift = drift.max((r.norm() - 1.0).abs());
                steps += 1;
            }
            t = target;
        }
        points.push(r);
    }
    Ok(OdePath {
        grid: grid.to_vec(),
        points,
        steps,
        max_norm_drift: drift,
        max_transversality: None,
    })
}

/// RK4 trajectory of the θ-equation from the configuration's `r0`.
pub fn integrate(cfg: &SphereConfig, grid: &[f64], opts: &Rk4) -> Result<Trajectory> {
    let path = DriveField::from_config(cfg).integrate(cfg.r0().get(), grid, opts)?;
    Ok(Trajectory::from_points(
        *cfg,
        Method::Ode,
        path.grid
            .iter()
            .zip(&path.points)
            .enumerate()
            .map(|(i, (&t, &r))| (i as u64, t, r)),
    ))
}

/// Deviation allowed between strobes and the RK4 flow at step `h`:
/// `1e-8` at the default `h = 1e-4`, scaling as `h⁴`, floored at `1e-12`.
pub fn strobe_tolerance(h: f64) -> f64 {
    (1e-8 * (h / 1e-4).powi(4)).max(1e-12)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrobeReport {
    pub k_max: u64,
    pub h: f64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub max_norm_drift: f64,
    pub pass: bool,
}

/// Compares `r_strobe(K)` with the integrated flow at `θ = Kα` for
/// `0 <= K <= k_max`.
pub fn strobe_check(cfg: &SphereConfig, k_max: u64, opts: &Rk4) -> Result<StrobeReport> {
    strobe_check_with(cfg, k_max, opts, |k| cfg.r_strobe(k))
}

/// [`strobe_check`] against an arbitrary sample model.
pub fn strobe_check_with(
    cfg: &SphereConfig,
    k_max: u64,
    opts: &Rk4,
    model: impl Fn(u64) -> Vec3,
) -> Result<StrobeReport> {
    let grid: Vec<f64> = (0..=k_max).map(|k| cfg.strobe_theta(k)).collect();
    let path = DriveField::from_config(cfg).integrate(cfg.r0().get(), &grid, opts)?;
    let max_deviation = path
        .points
        .iter()
        .enumerate()
        .map(|(k, r)| r.max_abs_diff(model(k as u64)))
        .fold(0.0, f64::max);
    let tolerance = strobe_tolerance(opts.h);
    Ok(StrobeReport {
        k_max,
        h: opts.h,
        max_deviation,
        tolerance,
        max_norm_drift: path.max_norm_drift,
        pass: max_deviation <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::{Angle, Lambda, Rational};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn field(lambda: f64) -> DriveField {
        DriveField::new(UnitVec3::X, UnitVec3::Z, lambda, 1.0).unwrap()
    }

    #[test]
    fn p_of_theta_values() {
        let f = field(3.0);
        assert_eq!(f.p_of_theta(0.0), Vec3::X);
        assert!(f.p_of_theta(PI).max_abs_diff(Vec3::X) < 1e-15);
        assert!(f.p_of_theta(FRAC_PI_4).max_abs_diff(Vec3::new(0.0, -1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn u_values() {
        let f = field(3.0);
        assert_eq!(f.u_of_theta(0.0), Vec3::new(3.0, 0.0, 1.0));
        assert!(f.u_of_theta(FRAC_PI_4).max_abs_diff(Vec3::new(0.0, -3.0, 1.0)) < 1e-15);
        assert!(f.u_of_t(FRAC_PI_4).max_abs_diff(Vec3::new(0.0, -3.0, 1.0)) < 1e-15);
        let still = field(0.0);
        for t in [0.0, 0.3, 2.0] {
            assert_eq!(still.u_of_theta(t), Vec3::Z);
        }
        let fast = DriveField::new(UnitVec3::X, UnitVec3::Z, 3.0, 2.5).unwrap();
        assert!(fast.u_of_t(0.0).max_abs_diff(Vec3::new(7.5, 0.0, 2.5)) < 1e-15);
        let slow_still = DriveField::new(UnitVec3::X, UnitVec3::Z, 0.0, 2.5).unwrap();
        assert_eq!(slow_still.u_of_t(1.7), Vec3::new(0.0, 0.0, 2.5));
    }

    #[test]
    fn vector_field_at_start() {
        let f = field(3.0);
        let v = f.vector_field(0.0, Vec3::new(0.6, 0.0, 0.8));
        assert!(v.max_abs_diff(Vec3::new(0.0, 3.6, 0.0)) < 1e-15);
        let u = f.u_of_theta(0.3);
        assert_eq!(f.vector_field(0.3, u * 0.25), Vec3::ZERO);
    }

    #[test]
    fn drive_field_validation() {
        assert!(DriveField::new(UnitVec3::X, UnitVec3::Z, 1.0, 0.0).is_err());
        assert!(DriveField::new(UnitVec3::X, UnitVec3::Z, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn rk4_rejects_bad_input() {
        let f = |_: f64, r: Vec3| r;
        assert!(rk4_path(
            f,
            Vec3::X,
            &[0.0, 1.0],
            &Rk4 {
                h: 0.0,
                renormalize: true
            }
        )
        .is_err());
        assert!(rk4_path(f, Vec3::X, &[1.0, 0.0], &Rk4::default()).is_err());
        let empty = rk4_path(f, Vec3::X, &[], &Rk4::default()).unwrap();
        assert!(empty.points.is_empty());
    }

    #[test]
    fn rk4_reports_blow_up() {
        let f = |_: f64, r: Vec3| r * 1e300;
        let err = rk4_path(
            f,
            Vec3::X,
            &[0.0, 1.0],
            &Rk4 {
                h: 0.5,
                renormalize: false,
            },
        );
        assert!(
            matches!(err, Err(Error::IntegrationFailure { last_good_theta, .. }) if last_good_theta == 0.0)
        );
    }

    #[test]
    fn single_axis_flow_matches_rotation() {
        let cfg = SphereConfig::builder().lambda(Lambda::real(0.0)).build().unwrap();
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
        let tr = integrate(
            &cfg,
            &grid,
            &Rk4 {
                h: 1e-3,
                renormalize: true,
            },
        )
        .unwrap();
        for s in &tr.samples {
            let exact = cfg.q().rotate(cfg.r0().get(), 2.0 * s.theta);
            assert!(s.r.max_abs_diff(exact) < 1e-10);
        }
    }

    #[test]
    fn lambda0_strobe_check() {
        let cfg = SphereConfig::builder()
            .alpha(Angle::from_exact_degrees(Rational::from_integer(1)))
            .lambda(Lambda::real(0.0))
            .build()
            .unwrap();
        let rep = strobe_check(&cfg, 200, &Rk4::default()).unwrap();
        assert!(rep.max_deviation <= 1e-10, "{rep:?}");
        assert!(rep.pass);
    }

    #[test]
    fn tolerance_scales_with_h4() {
        assert!((strobe_tolerance(1e-4) - 1e-8).abs() < 1e-20);
        assert!((strobe_tolerance(2e-4) - 16e-8).abs() < 1e-18);
        assert_eq!(strobe_tolerance(1e-7), 1e-12);
    }
}
