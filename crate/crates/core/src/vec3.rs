//! Real 3-vectors and validated unit vectors.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of `|v|` from one for anything accepted as a unit vector.
pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Scales to unit length; `None` for the zero vector or non-finite input.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(self, o: Vec3) -> f64 {
        let d = self - o;
        d.x.abs().max(d.y.abs()).max(d.z.abs())
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Great-circle angle between two (approximately) unit vectors.
    ///
    /// Uses `atan2(|a×b|, a·b)`, which stays accurate for nearly parallel inputs
    /// where `acos` loses half the digits.
    pub fn angle_to(self, o: Vec3) -> f64 {
        self.cross(o).norm().atan2(self.dot(o))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.x, self.y, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// A vector whose length is one within [`UNIT_TOLERANCE`].
///
/// Axes of rotation and the configuration vectors `p`, `q`, `r0` are carried
/// as `UnitVec3` so every rotation downstream can skip re-validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec3", into = "Vec3")]
pub struct UnitVec3(Vec3);

impl UnitVec3 {
    pub const X: UnitVec3 = UnitVec3(Vec3::X);
    pub const Y: UnitVec3 = UnitVec3(Vec3::Y);
    pub const Z: UnitVec3 = UnitVec3(Vec3::Z);

    /// Accepts `v` only if `| |v| - 1 | <= 1e-12`. The vector is stored as given.
    pub fn new(v: Vec3) -> Result<Self> {
        let n = v.norm();
        if v.is_finite() && (n - 1.0).abs() <= UNIT_TOLERANCE {
            Ok(Self(v))
        } else {
            Err(Error::InvalidParameter(format!(
                "expected a unit vector, got {v} with norm {n}"
            )))
        }
    }

    /// Normalizes any non-zero finite vector.
    pub fn normalize(v: Vec3) -> Result<Self> {
        v.normalized()
            .map(Self)
            .ok_or_else(|| Error::InvalidParameter(format!("cannot normalize {v}")))
    }

    pub fn get(self) -> Vec3 {
        self.0
    }

    /// Rotates `x` about this axis by `angle`:
    ///
    /// `x' = cos(a) x + sin(a) x×s + (1 - cos(a)) (s·x) s`
    ///
    /// This is the vector action of conjugation by `exp(i a/2 σ·s)`. Note the
    /// `x×s` orientation: for `s = z` a positive angle turns `x` towards `-y`.
    pub fn rotate(self, x: Vec3, angle: f64) -> Vec3 {
        let s = self.0;
        let (sin, cos) = angle.sin_cos();
        cos * x + sin * x.cross(s) + ((1.0 - cos) * s.dot(x)) * s
    }
}

impl TryFrom<Vec3> for UnitVec3 {
    type Error = Error;
    fn try_from(v: Vec3) -> Result<Self> {
        Self::new(v)
    }
}

impl From<UnitVec3> for Vec3 {
    fn from(u: UnitVec3) -> Vec3 {
        u.0
    }
}

impl fmt::Display for UnitVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
