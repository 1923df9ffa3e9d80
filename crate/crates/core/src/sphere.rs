//! Constant-`Q` dynamics as motion of unit vectors on the sphere.
//!
//! With `Q = exp(i α/2 σ·q)` and `P = exp(i β/2 σ·p)` the even iterates are
//! `R_{2K} = Q^{2K} P^K R_0 P^{-K} Q^{-2K}`; their rotation axes follow
//!
//! ```text
//! r_{2K} = Rot_q(2Kα) Rot_p(Kβ) r_0
//! r(θ)   = Rot_q(2θ) Rot_p(2λθ) r_0,     λ = β / (2α),  θ = Kα
//! ```
//!
//! where `Rot_s(γ)` is [`UnitVec3::rotate`] (conjugation by `exp(i γ/2 σ·s)`).

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::angle::{Angle, Lambda, LambdaKind, Rational};
use crate::error::{Error, Result};
use crate::group_map::{r1_from_p, MapState, QSequence};
use crate::su2::{AxisAngle, GroupElement};
use crate::vec3::{UnitVec3, Vec3};

/// Strobe angle used when only λ is given.
pub fn default_alpha() -> Angle {
    Angle::from_exact_degrees(Rational::new(1, 100))
}

/// Full parameterization of one sphere experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereConfig {
    alpha: Angle,
    beta: Angle,
    lambda: Lambda,
    p: UnitVec3,
    q: UnitVec3,
    r0: UnitVec3,
    chi0: f64,
    omega: f64,
}

impl SphereConfig {
    pub fn builder() -> SphereConfigBuilder {
        SphereConfigBuilder::default()
    }

    pub fn alpha(&self) -> Angle {
        self.alpha
    }
    pub fn beta(&self) -> Angle {
        self.beta
    }
    pub fn lambda(&self) -> Lambda {
        self.lambda
    }
    pub fn p(&self) -> UnitVec3 {
        self.p
    }
    pub fn q(&self) -> UnitVec3 {
        self.q
    }
    pub fn r0(&self) -> UnitVec3 {
        self.r0
    }
    pub fn chi0(&self) -> f64 {
        self.chi0
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Rebuilds with another strobe angle, keeping λ fixed.
    pub fn with_alpha(&self, alpha: Angle) -> Result<SphereConfig> {
        SphereConfigBuilder::from(*self).beta(None).alpha(alpha).build()
    }

    pub fn with_chi0(&self, chi0: f64) -> Result<SphereConfig> {
        SphereConfigBuilder::from(*self).chi0(chi0).build()
    }

    /// `t(θ) = Rot_p(2λθ) r_0`.
    pub fn t_curve(&self, theta: f64) -> Vec3 {
        self.p.rotate(self.r0.get(), 2.0 * self.lambda.value() * theta)
    }

    /// `r(θ) = Rot_q(2θ) t(θ)`.
    pub fn r_curve(&self, theta: f64) -> Vec3 {
        self.q.rotate(self.t_curve(theta), 2.0 * theta)
    }

    /// Axis of `R_{2K}`; evaluated as `r(Kα)` so strobes and curve agree bit for bit.
    pub fn r_strobe(&self, k: u64) -> Vec3 {
        self.r_curve(self.strobe_theta(k))
    }

    pub fn strobe_theta(&self, k: u64) -> f64 {
        k as f64 * self.alpha.radians()
    }

    pub fn bounds(&self) -> Bounds {
        bounds(self.p.get(), self.q.get(), self.r0.get())
    }

    pub fn q_element(&self) -> GroupElement {
        GroupElement::exp(AxisAngle::new(self.q, self.alpha.radians()))
    }

    pub fn p_element(&self) -> GroupElement {
        GroupElement::exp(AxisAngle::new(self.p, self.beta.radians()))
    }

    pub fn r0_element(&self) -> GroupElement {
        GroupElement::exp(AxisAngle::new(self.r0, self.chi0))
    }

    /// `R_1 = Q P R_0⁻¹ Q⁻¹`.
    pub fn r1_element(&self) -> GroupElement {
        r1_from_p(&self.q_element(), &self.p_element(), &self.r0_element())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SphereConfigBuilder {
    alpha: Option<Angle>,
    beta: Option<Angle>,
    lambda: Option<Lambda>,
    p: Vec3,
    q: Vec3,
    r0: Vec3,
    chi0: f64,
    omega: f64,
}

impl Default for SphereConfigBuilder {
    fn default() -> Self {
        Self {
            alpha: None,
            beta: None,
            lambda: None,
            p: Vec3::X,
            q: Vec3::Z,
            r0: Vec3::new(0.6, 0.0, 0.8),
            chi0: FRAC_PI_2,
            omega: 1.0,
        }
    }
}

impl From<SphereConfig> for SphereConfigBuilder {
    fn from(c: SphereConfig) -> Self {
        Self {
            alpha: Some(c.alpha),
            beta: Some(c.beta),
            lambda: Some(c.lambda),
            p: c.p.get(),
            q: c.q.get(),
            r0: c.r0.get(),
            chi0: c.chi0,
            omega: c.omega,
        }
    }
}

impl SphereConfigBuilder {
    pub fn alpha(mut self, a: impl Into<Option<Angle>>) -> Self {
        self.alpha = a.into();
        self
    }
    pub fn beta(mut self, b: impl Into<Option<Angle>>) -> Self {
        self.beta = b.into();
        self
    }
    pub fn lambda(mut self, l: impl Into<Option<Lambda>>) -> Self {
        self.lambda = l.into();
        self
    }
    pub fn p(mut self, p: Vec3) -> Self {
        self.p = p;
        self
    }
    pub fn q(mut self, q: Vec3) -> Self {
        self.q = q;
        self
    }
    pub fn r0(mut self, r0: Vec3) -> Self {
        self.r0 = r0;
        self
    }
    pub fn chi0(mut self, chi0: f64) -> Self {
        self.chi0 = chi0;
        self
    }
    pub fn omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    /// Resolves α, β, λ from whichever two (or three) were given and
    /// validates the rest.
    ///
    /// With all three present λ must equal `β/(2α)` within `1e-12`
    /// (relative to `max(1, |λ|)`). With only λ, α defaults to 0.01°.
    pub fn build(self) -> Result<SphereConfig> {
        let (alpha, beta, lambda) = match (self.alpha, self.beta, self.lambda) {
            (Some(a), Some(b), l) => {
                check_alpha(a)?;
                let derived = lambda_from(a, b);
                let lambda = match l {
                    Some(l) => {
                        let scale = l.value().abs().max(1.0);
                        if (l.value() - derived.value()).abs() > 1e-12 * scale {
                            return Err(Error::InvalidParameter(format!(
                                "lambda {} disagrees with beta/(2 alpha) = {}",
                                l.value(),
                                derived.value()
                            )));
                        }
                        match (l.kind(), derived.kind()) {
                            (LambdaKind::Unspecified, _) => derived,
                            _ => l,
                        }
                    }
                    None => derived,
                };
                (a, b, lambda)
            }
            (a, None, Some(l)) => {
                let a = a.unwrap_or_else(default_alpha);
                check_alpha(a)?;
                (a, beta_from(a, l), l)
            }
            (None, Some(b), Some(l)) => {
                if l.value() == 0.0 {
                    return Err(Error::InvalidParameter(
                        "alpha cannot be derived from beta with lambda = 0".into(),
                    ));
                }
                let a = match (b.pi_fraction(), l.exact()) {
                    (Some(bf), Some(lr)) => Angle::from_pi_fraction(bf / (lr * 2)),
                    _ => Angle::from_radians(b.radians() / (2.0 * l.value())),
                };
                check_alpha(a)?;
                (a, b, l)
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "need two of alpha, beta, lambda (or lambda alone)".into(),
                ))
            }
        };
        if !lambda.value().is_finite() || !beta.radians().is_finite() {
            return Err(Error::InvalidParameter("beta and lambda must be finite".into()));
        }
        if !self.chi0.is_finite() || (0.5 * self.chi0).sin().abs() < 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "chi0 = {} makes R_0 = ±1 and its axis undefined",
                self.chi0
            )));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        Ok(SphereConfig {
            alpha,
            beta,
            lambda,
            p: UnitVec3::new(self.p)?,
            q: UnitVec3::new(self.q)?,
            r0: UnitVec3::new(self.r0)?,
            chi0: self.chi0,
            omega: self.omega,
        })
    }
}

fn check_alpha(a: Angle) -> Result<()> {
    if a.radians() == 0.0 || !a.radians().is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha must be non-zero and finite, got {a}"
        )));
    }
    Ok(())
}

fn lambda_from(alpha: Angle, beta: Angle) -> Lambda {
    match (alpha.pi_fraction(), beta.pi_fraction()) {
        (Some(a), Some(b)) => Lambda::rational(b / (a * 2)),
        _ => Lambda::real(beta.radians() / (2.0 * alpha.radians())),
    }
}

fn beta_from(alpha: Angle, lambda: Lambda) -> Angle {
    match (alpha.pi_fraction(), lambda.exact()) {
        (Some(a), Some(l)) => Angle::from_pi_fraction(a * l * 2),
        _ => Angle::from_radians(2.0 * lambda.value() * alpha.radians()),
    }
}

/// The parallels `A1 <= r·q <= A2` bounding the motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(rename = "A1")]
    pub a1: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
}

impl Bounds {
    pub fn contains(&self, axial: f64, slack: f64) -> bool {
        axial >= self.a1 - slack && axial <= self.a2 + slack
    }
}

/// `t(θ)·q = c + (a - c) cos φ + b sin φ`, so its range is
/// `c ∓ √(b² + (a - c)²)` with
/// `a = r0·q`, `b = (r0×p)·q`, `c = (p·r0)(p·q)`.
pub fn bounds(p: Vec3, q: Vec3, r0: Vec3) -> Bounds {
    let a = r0.dot(q);
    let b = r0.cross(p).dot(q);
    let c = p.dot(r0) * p.dot(q);
    let radius = b.hypot(a - c);
    Bounds {
        a,
        b,
        c,
        a1: (c - radius).max(-1.0),
        a2: (c + radius).min(1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    ClosedForm,
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub index: u64,
    pub theta: f64,
    pub r: Vec3,
    pub r_dot_q: f64,
}

/// Ordered samples of one run plus the configuration that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub config: SphereConfig,
    pub method: Method,
}

impl Trajectory {
    pub fn from_points(
        config: SphereConfig,
        method: Method,
        points: impl IntoIterator<Item = (u64, f64, Vec3)>,
    ) -> Self {
        let q = config.q.get();
        let samples = points
            .into_iter()
            .map(|(index, theta, r)| Sample {
                index,
                theta,
                r,
                r_dot_q: r.dot(q),
            })
            .collect();
        Self {
            samples,
            config,
            method,
        }
    }

    /// Closed-form strobes `r_{2K}` for `K` in `ks`.
    pub fn strobes(config: &SphereConfig, ks: impl IntoIterator<Item = u64>) -> Self {
        Self::from_points(
            *config,
            Method::ClosedForm,
            ks.into_iter()
                .map(|k| (k, config.strobe_theta(k), config.r_strobe(k))),
        )
    }

    /// Closed-form curve `r(θ)` on an arbitrary grid; indices count grid points.
    pub fn curve(config: &SphereConfig, thetas: &[f64]) -> Self {
        Self::from_points(
            *config,
            Method::ClosedForm,
            thetas
                .iter()
                .enumerate()
                .map(|(i, &t)| (i as u64, t, config.r_curve(t))),
        )
    }

    /// `r_0, r_2, ..., r_{2 k_max}` by iterating the group map with
    /// `R_1 = Q P R_0⁻¹ Q⁻¹`, renormalizing every step.
    pub fn direct(config: &SphereConfig, k_max: u64) -> Result<Self> {
        let qs = QSequence::constant(config.q_element());
        let mut state = MapState::new(config.r0_element(), config.r1_element());
        let mut points = Vec::with_capacity(k_max as usize + 1);
        points.push((0, 0.0, axis_of(&state.prev)?));
        for k in 1..=k_max {
            state = state.step(&qs)?.step(&qs)?;
            points.push((k, config.strobe_theta(k), axis_of(&state.prev)?));
        }
        Ok(Self::from_points(*config, Method::Direct, points))
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.samples.iter().map(|s| s.r)
    }

    /// `r·q` per sample.
    pub fn axial_observable(&self) -> Vec<f64> {
        let q = self.config.q.get();
        self.samples.iter().map(|s| s.r.dot(q)).collect()
    }

    /// Image under `R_N -> Q^κ R_N Q^{-κ}`: every point turned about `q` by `κα`.
    pub fn apply_symmetry(&self, kappa: f64) -> Trajectory {
        let angle = kappa * self.config.alpha.radians();
        let q = self.config.q;
        Self::from_points(
            self.config,
            self.method,
            self.samples
                .iter()
                .map(|s| (s.index, s.theta, q.rotate(s.r, angle))),
        )
    }

    /// Largest componentwise deviation between matching samples.
    pub fn max_deviation(&self, other: &Trajectory) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::InvalidParameter(format!(
                "trajectories differ in length: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.r.max_abs_diff(b.r))
            .fold(0.0, f64::max))
    }
}

/// Rotation axis of a group element with angle in `(0, 2π)`.
pub fn axis_of(g: &GroupElement) -> Result<Vec3> {
    let ex = g.axis_angle();
    if ex.degenerate {
        return Err(Error::NumericalInstability(
            "group element collapsed to ±1; rotation axis lost".into(),
        ));
    }
    Ok(ex.axis_angle.axis.get())
}
