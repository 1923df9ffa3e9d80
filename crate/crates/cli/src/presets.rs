//! Frozen parameter sets for the three sphere figures.
//!
//! All share `ω = 1`, `p = x̂`, `q = ẑ`, `r0 = (0.6, 0, 0.8)`, so the
//! parallels sit at `r·q = ∓0.8`.

use std::fmt;
use std::str::FromStr;

use strobe_core::{Angle, Lambda, Rational, SphereConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetId {
    Fig1,
    Fig2,
    Fig3,
    Fig3Ergodic,
}

impl PresetId {
    pub const ALL: [PresetId; 4] = [
        PresetId::Fig1,
        PresetId::Fig2,
        PresetId::Fig3,
        PresetId::Fig3Ergodic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetId::Fig1 => "fig1",
            PresetId::Fig2 => "fig2",
            PresetId::Fig3 => "fig3",
            PresetId::Fig3Ergodic => "fig3-ergodic",
        }
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresetId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PresetId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset '{s}' (expected fig1, fig2, fig3 or fig3-ergodic)"))
    }
}

/// One figure: a dense curve, optionally a sparse dotted orbit on top.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigurePreset {
    pub id: PresetId,
    pub curve: SphereConfig,
    /// Curve strobes `0..=curve_k_max`.
    pub curve_k_max: u64,
    /// Dotted orbit and its sample count `0..dots_k`.
    pub dots: Option<(SphereConfig, u64)>,
}

fn degrees(n: i64, d: i64) -> Angle {
    Angle::from_exact_degrees(Rational::new(n, d))
}

fn exact(alpha: Angle, beta: Angle) -> SphereConfig {
    SphereConfig::builder()
        .alpha(alpha)
        .beta(beta)
        .build()
        .expect("preset parameters are valid")
}

/// λ of the ergodic figure.
pub fn ergodic_lambda() -> f64 {
    2f64.sqrt() - 0.389
}

impl FigurePreset {
    pub fn get(id: PresetId) -> Self {
        let fine = degrees(1, 100);
        match id {
            // λ = 3, closes after θ = π
            PresetId::Fig1 => Self {
                id,
                curve: exact(fine, degrees(6, 100)),
                curve_k_max: 18_000,
                dots: None,
            },
            // λ = 2; the dots close after K = 90
            PresetId::Fig2 => Self {
                id,
                curve: exact(fine, degrees(4, 100)),
                curve_k_max: 18_000,
                dots: Some((exact(degrees(2, 1), degrees(8, 1)), 90)),
            },
            // λ = 41/40, drawn for seven of the 41 loops: θ = 7·40π/41
            PresetId::Fig3 => Self {
                id,
                curve: exact(fine, degrees(205, 10_000)),
                curve_k_max: 7 * 720_000 / 41,
                dots: None,
            },
            PresetId::Fig3Ergodic => Self {
                id,
                curve: SphereConfig::builder()
                    .alpha(fine)
                    .lambda(Lambda::irrational(ergodic_lambda()))
                    .build()
                    .expect("preset parameters are valid"),
                curve_k_max: 200_000,
                dots: None,
            },
        }
    }
}
