//! Angles with an optional exact rational annotation.
//!
//! Closure and symmetry questions are congruences on `angle / π`, so an angle
//! entered as `2` degrees keeps the exact value `1/90` (in units of π) next to
//! its floating-point radians.

use std::f64::consts::PI;
use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedDiv, CheckedMul};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    radians: f64,
    pi_fraction: Option<Rational>,
}

impl Angle {
    pub fn from_radians(radians: f64) -> Self {
        Self {
            radians,
            pi_fraction: None,
        }
    }

    /// `fraction · π`, exact.
    pub fn from_pi_fraction(fraction: Rational) -> Self {
        Self {
            radians: PI * ratio_to_f64(fraction),
            pi_fraction: Some(fraction),
        }
    }

    pub fn from_exact_degrees(degrees: Rational) -> Self {
        Self::from_pi_fraction(degrees / 180)
    }

    pub fn from_degrees(degrees: f64) -> Self {
        Self::from_radians(degrees.to_radians())
    }

    /// Parses `text` as an angle.
    ///
    /// Accepted forms are decimals (`0.0205`), fractions (`41/40`) and
    /// multiples of π (`1/90pi`, `0.5pi`). Decimals and fractions are kept
    /// exact when `degrees` is set; in radians only the `pi` form is exact.
    pub fn parse(text: &str, degrees: bool) -> Result<Self> {
        let t = text.trim();
        if let Some(mult) = t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
            let mult = mult.trim().trim_end_matches('*');
            let fraction = if mult.is_empty() {
                Some(Rational::from_integer(1))
            } else {
                parse_rational(mult)
            };
            return match fraction {
                Some(f) if degrees => Err(Error::InvalidParameter(format!(
                    "angle '{t}' mixes a multiple of pi with degrees ({f})"
                ))),
                Some(f) => Ok(Self::from_pi_fraction(f)),
                None => Err(Error::InvalidParameter(format!("cannot parse angle '{t}'"))),
            };
        }
        let value: f64 = t
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse angle '{t}'")))?;
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("angle '{t}' is not finite")));
        }
        Ok(match (degrees, parse_rational(t)) {
            (true, Some(exact)) => Self::from_exact_degrees(exact),
            (true, None) => Self::from_degrees(value),
            (false, _) => Self::from_radians(value),
        })
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }

    pub fn degrees(&self) -> f64 {
        match self.pi_fraction {
            Some(f) => ratio_to_f64(f * 180),
            None => self.radians.to_degrees(),
        }
    }

    /// `angle / π` when known exactly.
    pub fn pi_fraction(&self) -> Option<Rational> {
        self.pi_fraction
    }

    pub fn exact_degrees(&self) -> Option<Rational> {
        self.pi_fraction
            .and_then(|f| f.checked_mul(&Rational::from_integer(180)))
    }

    pub fn is_exact(&self) -> bool {
        self.pi_fraction.is_some()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_fraction {
            Some(r) => write!(f, "{r}π rad"),
            None => write!(f, "{} rad", self.radians),
        }
    }
}

/// What is known about λ beyond its floating-point value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaKind {
    Rational(Rational),
    /// Declared irrational (e.g. `√2 - 0.389`): the orbit never closes.
    Irrational,
    /// A float with no exactness claim.
    Unspecified,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda {
    value: f64,
    kind: LambdaKind,
}

impl Lambda {
    pub fn rational(r: Rational) -> Self {
        Self {
            value: ratio_to_f64(r),
            kind: LambdaKind::Rational(r),
        }
    }

    pub fn irrational(value: f64) -> Self {
        Self {
            value,
            kind: LambdaKind::Irrational,
        }
    }

    pub fn real(value: f64) -> Self {
        Self {
            value,
            kind: LambdaKind::Unspecified,
        }
    }

    /// Decimals and fractions parse as exact rationals.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(r) = parse_rational(t) {
            return Ok(Self::rational(r));
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Self::real(v)),
            _ => Err(Error::InvalidParameter(format!("cannot parse lambda '{t}'"))),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn kind(&self) -> LambdaKind {
        self.kind
    }

    pub fn exact(&self) -> Option<Rational> {
        match self.kind {
            LambdaKind::Rational(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LambdaKind::Rational(r) => write!(f, "{r}"),
            LambdaKind::Irrational => write!(f, "{} (irrational)", self.value),
            LambdaKind::Unspecified => write!(f, "{}", self.value),
        }
    }
}

pub fn ratio_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `a/b` or a plain decimal (`-12.0205`, `3`, `.5`) into an exact
/// rational. Exponent notation and values that overflow `i64` yield `None`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if *d.numer() == 0 {
            return None;
        }
        return n.checked_div(&d);
    }
    let (neg, digits) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let mut numer: i64 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer.checked_mul(10)?.checked_add(i64::from(b - b'0'))?;
    }
    let denom = 10i64.checked_pow(u32::try_from(frac_part.len()).ok()?)?;
    let r = Rational::new(numer, denom);
    Some(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_rational("0.0205"), Some(r(41, 2000)));
        assert_eq!(parse_rational("2"), Some(r(2, 1)));
        assert_eq!(parse_rational("-1.5"), Some(r(-3, 2)));
        assert_eq!(parse_rational(".25"), Some(r(1, 4)));
        assert_eq!(parse_rational("41/40"), Some(r(41, 40)));
        assert_eq!(parse_rational("1e-3"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
        assert_eq!(parse_rational("99999999999999999999"), None);
    }

    #[test]
    fn degree_angles_keep_exact_fraction() {
        let a = Angle::parse("2", true).unwrap();
        assert_eq!(a.pi_fraction(), Some(r(1, 90)));
        assert_eq!(a.exact_degrees(), Some(r(2, 1)));
        assert!((a.radians() - 2f64.to_radians()).abs() < 1e-16);

        let b = Angle::parse("0.0205", true).unwrap();
        assert_eq!(b.exact_degrees(), Some(r(41, 2000)));
    }

    #[test]
    fn radian_angles() {
        let a = Angle::parse("0.5", false).unwrap();
        assert!(!a.is_exact());
        assert_eq!(a.radians(), 0.5);
        let b = Angle::parse("1/90pi", false).unwrap();
        assert_eq!(b.pi_fraction(), Some(r(1, 90)));
        let c = Angle::parse("pi", false).unwrap();
        assert_eq!(c.pi_fraction(), Some(r(1, 1)));
        assert!(Angle::parse("pi", true).is_err());
        assert!(Angle::parse("x", false).is_err());
        assert!(Angle::parse("inf", true).is_err());
    }

    #[test]
    fn lambda_parsing() {
        assert_eq!(Lambda::parse("1.025").unwrap().exact(), Some(r(41, 40)));
        assert_eq!(Lambda::parse("3").unwrap().exact(), Some(r(3, 1)));
        let l = Lambda::parse("1e-2").unwrap();
        assert_eq!(l.kind(), LambdaKind::Unspecified);
        assert_eq!(
            Lambda::irrational(2f64.sqrt() - 0.389).kind(),
            LambdaKind::Irrational
        );
    }
}
