//! The invertible second-order map on SU(2)
//!
//! ```text
//! R_{N+1} = Q_N R_N Q_{N-1} R_{N-1} Q_{N-1}⁻¹ R_N⁻¹ Q_N⁻¹
//! ```
//!
//! together with its reduction through `S_N = R_N Q_{N-1} R_{N-1} Q_{N-2}` to
//!
//! ```text
//! R_{N+1} = S_{N+1} R_{N-1} S_{N+1}⁻¹,    S_{N+1} = Q_N S_N Q_{N-2}⁻¹
//! ```
//!
//! and the closed forms obtained by telescoping both recursions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su2::GroupElement;
use crate::vec3::Vec3;

/// Supplier of `Q_N` for `N >= -1`.
#[derive(Debug, Clone, PartialEq)]
pub enum QSequence {
    /// `Q_N = Q` for every index.
    Constant(GroupElement),
    /// `Q_{2K} = even`, `Q_{2K+1} = odd`; `Q_{-1}` is `odd`.
    Alternating { even: GroupElement, odd: GroupElement },
    /// `elements[i]` is `Q_{i-1}`.
    Explicit(Vec<GroupElement>),
}

impl QSequence {
    pub fn constant(q: GroupElement) -> Self {
        Self::Constant(q)
    }

    pub fn alternating(even: GroupElement, odd: GroupElement) -> Self {
        Self::Alternating { even, odd }
    }

    /// `Q_0, Q_1, ...`, with `Q_{-1}` defaulting to `Q_0`.
    pub fn explicit(from_zero: Vec<GroupElement>) -> Result<Self> {
        let first = *from_zero
            .first()
            .ok_or_else(|| Error::InvalidParameter("explicit Q sequence needs at least Q_0".into()))?;
        let mut elements = Vec::with_capacity(from_zero.len() + 1);
        elements.push(first);
        elements.extend(from_zero);
        Ok(Self::Explicit(elements))
    }

    /// `Q_{-1}, Q_0, Q_1, ...`.
    pub fn explicit_from_minus_one(elements: Vec<GroupElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidParameter("explicit Q sequence is empty".into()));
        }
        Ok(Self::Explicit(elements))
    }

    pub fn get(&self, n: i64) -> Result<GroupElement> {
        match self {
            Self::Constant(q) => Ok(*q),
            Self::Alternating { even, odd } => Ok(if n.rem_euclid(2) == 0 { *even } else { *odd }),
            Self::Explicit(elements) => {
                let last = elements.len() as i64 - 2;
                usize::try_from(n + 1)
                    .ok()
                    .and_then(|i| elements.get(i))
                    .copied()
                    .ok_or(Error::OutOfRange {
                        index: n,
                        first: -1,
                        last,
                    })
            }
        }
    }
}

/// `(R_{N-1}, R_N)` at step index `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapState {
    pub index: i64,
    pub prev: GroupElement,
    pub curr: GroupElement,
}

impl MapState {
    /// Initial conditions `R_0`, `R_1`; the state index is 1.
    pub fn new(r0: GroupElement, r1: GroupElement) -> Self {
        Self {
            index: 1,
            prev: r0,
            curr: r1,
        }
    }

    pub fn max_abs_diff(&self, o: &MapState) -> f64 {
        self.prev
            .max_abs_diff(&o.prev)
            .max(self.curr.max_abs_diff(&o.curr))
    }

    /// One forward application of the map, renormalized.
    pub fn step(&self, qs: &QSequence) -> Result<MapState> {
        let n = self.index;
        let qn = qs.get(n)?;
        let qm = qs.get(n - 1)?;
        let x = qn * self.curr * qm;
        let next = (x * self.prev * x.inverse()).renormalize()?;
        Ok(MapState {
            index: n + 1,
            prev: self.curr,
            curr: next,
        })
    }

    /// Exact inverse of [`MapState::step`]: recovers `R_{N-2}` from
    /// `R_N = X R_{N-2} X⁻¹` with `X = Q_{N-1} R_{N-1} Q_{N-2}`.
    pub fn step_back(&self, qs: &QSequence) -> Result<MapState> {
        let n = self.index;
        let qa = qs.get(n - 1)?;
        let qb = qs.get(n - 2)?;
        let x = qa * self.prev * qb;
        let earlier = (x.inverse() * self.curr * x).renormalize()?;
        Ok(MapState {
            index: n - 1,
            prev: earlier,
            curr: self.prev,
        })
    }

    /// `S_N` for this state.
    pub fn s(&self, qs: &QSequence) -> Result<SRecord> {
        s_of(&self.curr, &self.prev, qs, self.index)
    }
}

/// Iterates the map, returning `R_0, R_1, ..., R_{last}`.
pub fn orbit(r0: GroupElement, r1: GroupElement, qs: &QSequence, last: usize) -> Result<Vec<GroupElement>> {
    let mut out = Vec::with_capacity(last + 1);
    out.push(r0);
    if last == 0 {
        return Ok(out);
    }
    out.push(r1);
    let mut state = MapState::new(r0, r1);
    for _ in 1..last {
        state = state.step(qs)?;
        out.push(state.curr);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SRecord {
    pub index: i64,
    pub s: GroupElement,
}

/// `S_N = R_N Q_{N-1} R_{N-1} Q_{N-2}`.
pub fn s_of(r_n: &GroupElement, r_prev: &GroupElement, qs: &QSequence, n: i64) -> Result<SRecord> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "S_N is defined for N >= 1, got {n}"
        )));
    }
    let s = *r_n * qs.get(n - 1)? * *r_prev * qs.get(n - 2)?;
    Ok(SRecord { index: n, s })
}

/// `S_{N+1} = Q_N S_N Q_{N-2}⁻¹`.
pub fn s_advance(s: &SRecord, qs: &QSequence) -> Result<SRecord> {
    let n = s.index;
    let next = (qs.get(n)? * s.s * qs.get(n - 2)?.inverse()).renormalize()?;
    Ok(SRecord {
        index: n + 1,
        s: next,
    })
}

/// One step of the reduced system: from `R_{N-1}` and `S_N` produce
/// `(R_{N+1}, S_{N+1})`.
pub fn rs_step(r_prev: &GroupElement, s: &SRecord, qs: &QSequence) -> Result<(GroupElement, SRecord)> {
    let next = s_advance(s, qs)?;
    let r = (next.s * *r_prev * next.s.inverse()).renormalize()?;
    Ok((r, next))
}

/// `R_0, R_2, ..., R_{2K}` from the reduced system, seeded with `R_0`, `R_1`.
pub fn even_orbit_reduced(
    r0: GroupElement,
    r1: GroupElement,
    qs: &QSequence,
    k_max: usize,
) -> Result<Vec<GroupElement>> {
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(r0);
    let mut s = s_of(&r1, &r0, qs, 1)?;
    let mut r = r0;
    for k in 0..k_max {
        if k > 0 {
            // S_{2K} -> S_{2K+1}; R_{2K+1} is not needed on the even chain.
            s = s_advance(&s, qs)?;
        }
        let (next, s_next) = rs_step(&r, &s, qs)?;
        r = next;
        s = s_next;
        out.push(r);
    }
    Ok(out)
}

/// `S_N = Q_{N-1} ⋯ Q_1 S_1 Q_{-1}⁻¹ ⋯ Q_{N-3}⁻¹`.
pub fn closed_s(n: i64, s1: &GroupElement, qs: &QSequence) -> Result<GroupElement> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "S_N is defined for N >= 1, got {n}"
        )));
    }
    let mut left = GroupElement::IDENTITY;
    for j in (1..n).rev() {
        left = left * qs.get(j)?;
    }
    let mut right = GroupElement::IDENTITY;
    for j in -1..=(n - 3) {
        right = right * qs.get(j)?.inverse();
    }
    (left * *s1 * right).renormalize()
}

/// `R_{2K} = S_{2K} S_{2K-2} ⋯ S_2 R_0 S_2⁻¹ ⋯ S_{2K}⁻¹`.
///
/// Only even-indexed `S` enter: the reduced recursion links `R_{2K}` to
/// `R_{2K-2}` through `S_{2K}` alone. Entries of `s_list` with other indices
/// are ignored.
pub fn closed_r_even(k: u64, r0: &GroupElement, s_list: &[SRecord]) -> Result<GroupElement> {
    let mut product = GroupElement::IDENTITY;
    for j in (1..=k as i64).rev() {
        let idx = 2 * j;
        let s = s_list
            .iter()
            .find(|rec| rec.index == idx)
            .ok_or(Error::MissingEntry(idx))?;
        product = product * s.s;
    }
    (product * *r0 * product.inverse()).renormalize()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// Closed form of the constant-`Q` map.
///
/// * `Even`: `R_{2K} = Q^{2K} P^K R_0 P^{-K} Q^{-2K}` (`seed = R_0`).
/// * `Odd`: `R̃_{2K+1} = Q^{2K} P^K R̃_1 P^{-K} Q^{-2K}` with
///   `R̃_N = Q⁻¹ R_N Q` (`seed = R̃_1`, result is `R̃_{2K+1}`).
///
/// Here `P = Q⁻¹ R_1 Q R_0`. Both parities conjugate by the same
/// `Q^{2K} P^K`, so only the seed differs.
pub fn simplified_solution(
    k: u64,
    _parity: Parity,
    q: &GroupElement,
    p: &GroupElement,
    seed: &GroupElement,
) -> Result<GroupElement> {
    let k = i64::try_from(k).map_err(|_| Error::InvalidParameter("K too large".into()))?;
    let x = q.powi(2 * k) * p.powi(k);
    (x * *seed * x.inverse()).renormalize()
}

/// `P = Q⁻¹ R_1 Q R_0`.
pub fn p_of(q: &GroupElement, r0: &GroupElement, r1: &GroupElement) -> GroupElement {
    q.inverse() * *r1 * *q * *r0
}

/// `R_1 = Q P R_0⁻¹ Q⁻¹`, the second initial condition that makes `P` the
/// prescribed element.
pub fn r1_from_p(q: &GroupElement, p: &GroupElement, r0: &GroupElement) -> GroupElement {
    *q * *p * r0.inverse() * q.inverse()
}

/// Local coordinates `c = (χ/2) r` of one group element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coordinates {
    pub c: Vec3,
    pub degenerate: bool,
}

/// Coordinates `c^k = (χ/2) r^k` along an orbit, with `χ ∈ [0, 2π)`.
pub fn parameter_orbit(elements: &[GroupElement]) -> Vec<Coordinates> {
    elements
        .iter()
        .map(|g| {
            let ex = g.axis_angle();
            Coordinates {
                c: ex.axis_angle.axis.get() * (0.5 * ex.axis_angle.angle),
                degenerate: ex.degenerate,
            }
        })
        .collect()
}
