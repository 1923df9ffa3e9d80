//! SU(2) as unit quaternions.
//!
//! An element `exp(i γ/2 σ·s)` is stored as `w = cos(γ/2)`, `v = sin(γ/2) s`,
//! which corresponds to the 2×2 matrix `w·1 + i v·σ`. The product below is the
//! one that makes this correspondence a homomorphism:
//!
//! ```text
//! (w1, v1)(w2, v2) = (w1 w2 - v1·v2,  w1 v2 + w2 v1 - v1×v2)
//! ```
//!
//! The cross-product sign is opposite to the usual Hamilton product because
//! `(i a·σ)(i b·σ) = -(a·b) - i (a×b)·σ`.

use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::{UnitVec3, Vec3};

/// Drift of `|g|` from one above which products are renormalized.
pub const PRODUCT_DRIFT: f64 = 1e-14;

/// Elements with `|v|` below this are treated as `±1` by [`GroupElement::axis_angle`].
pub const DEGENERATE_AXIS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle {
    pub axis: UnitVec3,
    /// Radians. Not wrapped.
    pub angle: f64,
}

impl AxisAngle {
    pub fn new(axis: UnitVec3, angle: f64) -> Self {
        Self { axis, angle }
    }
}

/// Result of reading axis and angle back off a group element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extracted {
    /// Angle in `[0, 2π)`.
    pub axis_angle: AxisAngle,
    /// `exp(axis_angle) = sign · g`. Only `-1` for `g = -1`.
    pub sign: f64,
    /// Set when `g = ±1`; the axis is then the default `[0, 0, 1]`.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub w: f64,
    pub v: Vec3,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        w: 1.0,
        v: Vec3::ZERO,
    };

    /// Raw components; no normalization or validation.
    pub const fn from_parts(w: f64, v: Vec3) -> Self {
        Self { w, v }
    }

    /// `exp(i angle/2 σ·axis)`.
    pub fn exp(aa: AxisAngle) -> Self {
        let (s, c) = (0.5 * aa.angle).sin_cos();
        Self {
            w: c,
            v: aa.axis.get() * s,
        }
    }

    /// The element whose conjugation action is the half-turn about `x`,
    /// i.e. `i σ·x` as a matrix. Used to push vectors through conjugations.
    pub fn from_unit_vector(x: UnitVec3) -> Self {
        Self { w: 0.0, v: x.get() }
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.v.norm_squared()).sqrt()
    }

    pub fn inverse(&self) -> Self {
        Self {
            w: self.w,
            v: -self.v,
        }
    }

    /// Product without the drift check.
    fn raw_mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            w: self.w * o.w - self.v.dot(o.v),
            v: self.w * o.v + o.w * self.v - self.v.cross(o.v),
        }
    }

    /// `self · g · self⁻¹`.
    ///
    /// The vector part of `g` is rotated by the rotation of `self`, the scalar
    /// part (and with it the rotation angle of `g`) is untouched.
    pub fn conjugate(&self, g: &GroupElement) -> GroupElement {
        *self * *g * self.inverse()
    }

    /// Scales back to unit norm.
    ///
    /// Norms outside `(0.5, 1.5)` mean the iteration has gone wrong and are
    /// reported instead of silently repaired.
    pub fn renormalize(&self) -> Result<GroupElement> {
        let n = self.norm();
        if !(n > 0.5 && n < 1.5) {
            return Err(Error::NumericalInstability(format!(
                "group element norm {n} left the window (0.5, 1.5)"
            )));
        }
        Ok(GroupElement {
            w: self.w / n,
            v: self.v / n,
        })
    }

    /// Axis and angle with the angle in `[0, 2π)`.
    pub fn axis_angle(&self) -> Extracted {
        let s = self.v.norm();
        if s < DEGENERATE_AXIS {
            return Extracted {
                axis_angle: AxisAngle::new(UnitVec3::Z, 0.0),
                sign: if self.w < 0.0 { -1.0 } else { 1.0 },
                degenerate: true,
            };
        }
        let angle = 2.0 * s.atan2(self.w);
        Extracted {
            axis_angle: AxisAngle::new(UnitVec3::normalize(self.v).expect("non-zero"), angle),
            sign: 1.0,
            degenerate: false,
        }
    }

    /// Integer power by repeated squaring; negative powers use the inverse.
    pub fn powi(&self, n: i64) -> GroupElement {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = GroupElement::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Real power along the principal branch: the extracted angle in
    /// `[0, 2π)` is scaled by `t`.
    pub fn powf(&self, t: f64) -> GroupElement {
        let ex = self.axis_angle();
        // -1 is exp(2π) about any axis
        let angle = if ex.sign < 0.0 {
            2.0 * std::f64::consts::PI
        } else {
            ex.axis_angle.angle
        };
        GroupElement::exp(AxisAngle::new(ex.axis_angle.axis, t * angle))
    }

    /// Largest componentwise difference, for tolerance checks.
    pub fn max_abs_diff(&self, o: &GroupElement) -> f64 {
        (self.w - o.w).abs().max(self.v.max_abs_diff(o.v))
    }

    /// Componentwise distance modulo the double cover: `min(|g - h|, |g + h|)`.
    pub fn projective_diff(&self, o: &GroupElement) -> f64 {
        self.max_abs_diff(o).min(self.max_abs_diff(&-*o))
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, o: GroupElement) -> GroupElement {
        let r = self.raw_mul(&o);
        let n = r.norm();
        if (n - 1.0).abs() > PRODUCT_DRIFT && n > 0.0 {
            GroupElement {
                w: r.w / n,
                v: r.v / n,
            }
        } else {
            r
        }
    }
}

impl Neg for GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        GroupElement {
            w: -self.w,
            v: -self.v,
        }
    }
}

/// `exp(i angle/2 σ·axis)`, validating the axis.
pub fn exp_axis_angle(axis: Vec3, angle: f64) -> Result<GroupElement> {
    Ok(GroupElement::exp(AxisAngle::new(UnitVec3::new(axis)?, angle)))
}

/// Rotates `x` about unit `s` by `angle` with the `x×s` orientation
/// (see [`UnitVec3::rotate`]).
pub fn rotate_vector(x: Vec3, s: Vec3, angle: f64) -> Result<Vec3> {
    Ok(UnitVec3::new(s)?.rotate(x, angle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn exp_special_angles() {
        let id = exp_axis_angle(Vec3::Z, 0.0).unwrap();
        assert_eq!(id, GroupElement::IDENTITY);
        let minus = exp_axis_angle(Vec3::Z, 2.0 * PI).unwrap();
        assert!((minus.w + 1.0).abs() < 1e-15);
        assert!(minus.v.norm() < 1e-15);
    }

    #[test]
    fn exp_rejects_non_unit_axis() {
        assert!(matches!(
            exp_axis_angle(Vec3::new(1.0, 1.0, 0.0), 1.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(rotate_vector(Vec3::X, Vec3::new(0.0, 0.0, 2.0), 1.0).is_err());
    }

    #[test]
    fn inverse_negates_angle() {
        let g = exp_axis_angle(Vec3::Y, 0.7).unwrap();
        let h = exp_axis_angle(Vec3::Y, -0.7).unwrap();
        assert!(g.inverse().max_abs_diff(&h) < 1e-16);
        assert_eq!(GroupElement::IDENTITY.inverse(), GroupElement::IDENTITY);
    }

    #[test]
    fn identity_laws() {
        let g = exp_axis_angle(Vec3::new(0.6, 0.0, 0.8), 1.3).unwrap();
        assert_eq!(GroupElement::IDENTITY * g, g);
        assert!((g * g.inverse()).max_abs_diff(&GroupElement::IDENTITY) < 1e-15);
        assert_eq!(GroupElement::IDENTITY.conjugate(&g), g);
        assert!(
            g.conjugate(&GroupElement::IDENTITY)
                .max_abs_diff(&GroupElement::IDENTITY)
                < 1e-15
        );
    }

    #[test]
    fn quarter_turn_about_z() {
        let r = rotate_vector(Vec3::X, Vec3::Z, FRAC_PI_2).unwrap();
        assert!(r.max_abs_diff(Vec3::new(0.0, -1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn rotation_about_own_axis_is_fixed() {
        let x = Vec3::new(0.3, -1.2, 2.0);
        let s = x.normalized().unwrap();
        for g in [0.1, 1.0, 2.5, -4.0] {
            assert!(rotate_vector(x, s, g).unwrap().max_abs_diff(x) < 1e-14);
        }
    }

    #[test]
    fn axis_angle_round_trip() {
        let g = exp_axis_angle(Vec3::X, FRAC_PI_3).unwrap();
        let ex = g.axis_angle();
        assert!(!ex.degenerate);
        assert!(ex.axis_angle.axis.get().max_abs_diff(Vec3::X) < 1e-15);
        assert!((ex.axis_angle.angle - FRAC_PI_3).abs() < 1e-15);
    }

    #[test]
    fn axis_angle_of_identity_is_flagged() {
        let ex = GroupElement::IDENTITY.axis_angle();
        assert!(ex.degenerate);
        assert_eq!(ex.axis_angle.axis, UnitVec3::Z);
        assert_eq!(ex.axis_angle.angle, 0.0);
        assert_eq!(ex.sign, 1.0);

        let ex = (-GroupElement::IDENTITY).axis_angle();
        assert!(ex.degenerate);
        assert_eq!(ex.sign, -1.0);
    }

    #[test]
    fn renormalize_window() {
        let g = exp_axis_angle(Vec3::Y, 0.4).unwrap();
        assert!(g.renormalize().unwrap().max_abs_diff(&g) < 1e-16);
        let scaled = GroupElement::from_parts(g.w * 1.0001, g.v * 1.0001);
        assert!((scaled.renormalize().unwrap().norm() - 1.0).abs() < 1e-15);
        let tiny = GroupElement::from_parts(g.w * 0.1, g.v * 0.1);
        assert!(matches!(tiny.renormalize(), Err(Error::NumericalInstability(_))));
        let nan = GroupElement::from_parts(f64::NAN, Vec3::ZERO);
        assert!(nan.renormalize().is_err());
    }

    #[test]
    fn integer_powers_add_angles() {
        let q = exp_axis_angle(Vec3::Z, 0.3).unwrap();
        let q5 = exp_axis_angle(Vec3::Z, 1.5).unwrap();
        assert!(q.powi(5).max_abs_diff(&q5) < 1e-15);
        assert!(q.powi(-5).max_abs_diff(&q5.inverse()) < 1e-15);
        assert_eq!(q.powi(0), GroupElement::IDENTITY);
    }

    #[test]
    fn real_powers() {
        let q = exp_axis_angle(Vec3::Y, 0.8).unwrap();
        assert!(q.powf(0.5).powi(2).max_abs_diff(&q) < 1e-15);
        assert!(q.powf(-1.0).max_abs_diff(&q.inverse()) < 1e-15);
    }

    #[test]
    fn double_cover_sign() {
        let s = Vec3::new(0.0, 0.6, 0.8);
        let a = exp_axis_angle(s, 1.1).unwrap();
        let b = exp_axis_angle(s, 1.1 + 2.0 * PI).unwrap();
        assert!(a.max_abs_diff(&-b) < 1e-15);
        assert!(a.projective_diff(&b) < 1e-15);
    }
}
