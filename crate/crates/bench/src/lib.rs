//! Fixtures shared by the benchmarks in `benches/`.

use strobe_core::{Lambda, Rational, SphereConfig};

/// λ = 3 at α = 0.01° with the default vectors.
pub fn fixture() -> SphereConfig {
    SphereConfig::builder()
        .lambda(Lambda::rational(Rational::from_integer(3)))
        .build()
        .expect("valid fixture")
}
