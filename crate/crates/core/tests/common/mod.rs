//! Independent oracles and random inputs shared by the integration tests.
//!
//! The 2×2 complex matrices here never touch the quaternion code paths: the
//! exponential is a truncated power series and conjugation is plain matrix
//! multiplication.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strobe_core::{GroupElement, Vec3};

pub type M2 = [[C; 2]; 2];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn zero() -> M2 {
    [[C::new(0.0, 0.0); 2]; 2]
}

pub fn eye() -> M2 {
    [
        [C::new(1.0, 0.0), C::new(0.0, 0.0)],
        [C::new(0.0, 0.0), C::new(1.0, 0.0)],
    ]
}

pub fn pauli() -> [M2; 3] {
    let o = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    [[[o, one], [one, o]], [[o, -i], [i, o]], [[one, o], [o, -one]]]
}

pub fn add(a: &M2, b: &M2) -> M2 {
    let mut r = zero();
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][j] + b[i][j];
        }
    }
    r
}

pub fn scale(a: &M2, s: C) -> M2 {
    let mut r = *a;
    for row in r.iter_mut() {
        for x in row.iter_mut() {
            *x *= s;
        }
    }
    r
}

pub fn matmul(a: &M2, b: &M2) -> M2 {
    let mut r = zero();
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

pub fn dagger(a: &M2) -> M2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// `σ·x`.
pub fn sigma_dot(x: Vec3) -> M2 {
    let s = pauli();
    let mut r = zero();
    for (k, c) in x.to_array().into_iter().enumerate() {
        r = add(&r, &scale(&s[k], C::new(c, 0.0)));
    }
    r
}

/// Inverse of [`sigma_dot`]: `x_k = tr(σ_k M) / 2`.
pub fn vector_of(m: &M2) -> Vec3 {
    let s = pauli();
    let comp = |k: usize| {
        let p = matmul(&s[k], m);
        (p[0][0] + p[1][1]).re / 2.0
    };
    Vec3::new(comp(0), comp(1), comp(2))
}

/// Power series `Σ M^n / n!` truncated at 40 terms.
pub fn expm(m: &M2) -> M2 {
    let mut sum = eye();
    let mut term = eye();
    for n in 1..40 {
        term = scale(&matmul(&term, m), C::new(1.0 / n as f64, 0.0));
        sum = add(&sum, &term);
    }
    sum
}

/// `exp(i γ/2 σ·s)` by power series.
pub fn su2_oracle(s: Vec3, gamma: f64) -> M2 {
    expm(&scale(&sigma_dot(s), C::new(0.0, gamma / 2.0)))
}

/// `w·1 + i v·σ`.
pub fn to_matrix(g: &GroupElement) -> M2 {
    add(
        &scale(&eye(), C::new(g.w, 0.0)),
        &scale(&sigma_dot(g.v), C::new(0.0, 1.0)),
    )
}

pub fn max_entry_diff(a: &M2, b: &M2) -> f64 {
    let mut m = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

pub fn det(a: &M2) -> C {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Vector part of `S (σ·x) S⁻¹`, with `S` from the power series.
pub fn pauli_rotate(x: Vec3, s: Vec3, gamma: f64) -> Vec3 {
    let sm = su2_oracle(s, gamma);
    vector_of(&matmul(&matmul(&sm, &sigma_dot(x)), &dagger(&sm)))
}

pub fn unit_vector(rng: &mut impl Rng) -> Vec3 {
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

pub fn element(rng: &mut impl Rng) -> GroupElement {
    let s = unit_vector(rng);
    let angle = rng.gen_range(-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI);
    strobe_core::su2::exp_axis_angle(s, angle).unwrap()
}
