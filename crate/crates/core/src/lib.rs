//! Discrete-time group actions on SU(2) and the Bloch flow they sample.
//!
//! * [`su2`]: unit-quaternion SU(2) algebra and the vector rotation it induces.
//! * [`group_map`]: the invertible map `R_{N+1} = Q_N R_N Q_{N-1} R_{N-1} ⋯`,
//!   its `R/S` reduction and closed forms.
//! * [`sphere`]: the constant-`Q` case as motion on the unit sphere.
//! * [`periodicity`]: closure, symmetry and coverage of sphere orbits.
//! * [`bloch`]: `dr/dθ = 2 r × u(θ)` and an RK4 integrator for it.

pub mod angle;
pub mod bloch;
pub mod error;
pub mod group_map;
pub mod periodicity;
pub mod sphere;
pub mod su2;
pub mod vec3;

pub use angle::{Angle, Lambda, LambdaKind, Rational};
pub use bloch::{DriveField, OdePath, Rk4, StrobeReport};
pub use error::{Error, Result};
pub use group_map::{MapState, Parity, QSequence, SRecord};
pub use periodicity::{BandCoverage, Closure, SymmetryShift};
pub use sphere::{Bounds, Method, Sample, SphereConfig, Trajectory};
pub use su2::{AxisAngle, GroupElement};
pub use vec3::{UnitVec3, Vec3};
