//! Closure, distinct-point counting, rotational symmetry and band coverage.

use std::f64::consts::PI;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::angle::{LambdaKind, Rational};
use crate::error::{Error, Result};
use crate::sphere::{Bounds, SphereConfig};
use crate::vec3::Vec3;

/// Smallest `K >= 1` with `Kβ = 2mπ` and `2Kα = 2nπ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Closure {
    #[serde(rename = "K")]
    pub k: u64,
    pub m: i64,
    pub n: i64,
}

/// Solves the closure congruences exactly.
///
/// Requires α and β as exact rational multiples of π (degree inputs
/// qualify). A λ declared irrational never closes and yields `None`; floats
/// with no exactness claim are rejected since equality of float angles is
/// meaningless here.
pub fn closure_index(cfg: &SphereConfig) -> Result<Option<Closure>> {
    if cfg.lambda().kind() == LambdaKind::Irrational {
        return Ok(None);
    }
    let (a, b) = match (cfg.alpha().pi_fraction(), cfg.beta().pi_fraction()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::UnsupportedInput(
                "closure needs alpha and beta as exact rationals (use degrees or multiples of pi); \
                 use distinct_point_count for float angles"
                    .into(),
            ))
        }
    };
    // K·(β/π)/2 = m and K·(α/π) = n must both be integers.
    let half_b = b / 2;
    let k = half_b.denom().lcm(a.denom());
    let m = half_b * k;
    let n = a * k;
    debug_assert!(m.is_integer() && n.is_integer());
    Ok(Some(Closure {
        k: k.unsigned_abs(),
        m: m.to_integer(),
        n: n.to_integer(),
    }))
}

/// Indices of the first-seen representatives among `points`, merging points
/// within great-circle distance `tol` of an earlier representative.
pub fn distinct_points(points: &[Vec3], tol: f64) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if !reps.iter().any(|&j| points[j].angle_to(*p) <= tol) {
            reps.push(i);
        }
    }
    reps
}

/// Number of `tol`-distinct points among `r_strobe(K)`, `0 <= K < k_max`.
pub fn distinct_point_count(cfg: &SphereConfig, k_max: u64, tol: f64) -> usize {
    let points: Vec<Vec3> = (0..k_max).map(|k| cfg.r_strobe(k)).collect();
    distinct_points(&points, tol).len()
}

/// For `λ = m/n` in lowest terms, the order `m` of the rotational symmetry
/// about `q`. `λ = 0` gives 0 (the curve is a full parallel).
pub fn symmetry_order(lambda: Rational) -> u64 {
    // Ratio keeps itself reduced
    lambda.numer().unsigned_abs()
}

/// The shift `Δθ = πn/m` and the matching rotation `2πn/m` about `q`:
/// `r(θ + Δθ) = Rot_q(2πn/m) r(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryShift {
    pub order: u64,
    pub delta_theta: f64,
    pub rotation: f64,
}

pub fn symmetry_shift(lambda: Rational) -> Option<SymmetryShift> {
    let m = *lambda.numer();
    let n = *lambda.denom();
    if m == 0 {
        return None;
    }
    let ratio = n as f64 / m as f64;
    Some(SymmetryShift {
        order: m.unsigned_abs(),
        delta_theta: PI * ratio,
        rotation: 2.0 * PI * ratio,
    })
}

/// Visit statistics of a point set over a longitude × band grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandCoverage {
    pub longitude_bins: usize,
    pub band_bins: usize,
    pub visited: usize,
    pub min_axial: f64,
    pub max_axial: f64,
    pub samples: usize,
}

impl BandCoverage {
    pub fn cells(&self) -> usize {
        self.longitude_bins * self.band_bins
    }
}

/// Bins points by longitude about `q` and by `r·q` across `[A1, A2]`.
///
/// Longitude is measured in the plane orthogonal to `q` from the
/// projection of `reference` (any vector not parallel to `q`).
pub fn band_coverage(
    points: impl IntoIterator<Item = Vec3>,
    q: Vec3,
    reference: Vec3,
    bounds: &Bounds,
    longitude_bins: usize,
    band_bins: usize,
) -> Result<BandCoverage> {
    if longitude_bins == 0 || band_bins == 0 {
        return Err(Error::InvalidParameter(
            "coverage grid needs at least one cell".into(),
        ));
    }
    let e1 = (reference - q * reference.dot(q))
        .normalized()
        .ok_or_else(|| Error::InvalidParameter("reference is parallel to q".into()))?;
    let e2 = q.cross(e1);
    let width = bounds.a2 - bounds.a1;
    let mut seen = vec![false; longitude_bins * band_bins];
    let (mut lo, mut hi, mut count) = (f64::INFINITY, f64::NEG_INFINITY, 0usize);
    for r in points {
        let axial = r.dot(q);
        lo = lo.min(axial);
        hi = hi.max(axial);
        count += 1;
        let lon = r.dot(e2).atan2(r.dot(e1)) + PI;
        let li = ((lon / (2.0 * PI) * longitude_bins as f64) as usize).min(longitude_bins - 1);
        let bi = if width > 0.0 {
            (((axial - bounds.a1) / width * band_bins as f64).max(0.0) as usize).min(band_bins - 1)
        } else {
            0
        };
        seen[bi * longitude_bins + li] = true;
    }
    Ok(BandCoverage {
        longitude_bins,
        band_bins,
        visited: seen.iter().filter(|&&s| s).count(),
        min_axial: lo,
        max_axial: hi,
        samples: count,
    })
}
