//! Exact arithmetic on the flat torus `T^n = R^n / Z^n`.
//!
//! Every coordinate is a rational representative in `[0, 1)`. Nothing in this
//! module touches floating point: open-cube membership is a strict inequality
//! and has to be decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `p/q`, a plain integer, or a finite decimal such as `0.45` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let s = s.trim();
    let bad = || ParseRationalError::Malformed(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        let int_part: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits.parse().map_err(|_| bad())?
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let mag = BigRational::new(int_part * &scale + frac_part, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// Formats a rational as `p/q` (integers are written `p/1`).
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Reduces `r` modulo 1 into `[0, 1)`.
pub fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

/// A point of `T^1`, stored as its representative in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitRational(BigRational);

impl UnitRational {
    /// Builds `numerator / denominator mod 1`.
    ///
    /// Panics on a zero denominator.
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Self {
        let den = denominator.into();
        assert!(!den.is_zero(), "zero denominator");
        Self::wrap(BigRational::new(numerator.into(), den))
    }

    pub fn zero() -> Self {
        UnitRational(BigRational::zero())
    }

    /// Wraps an arbitrary rational onto the circle.
    pub fn wrap(r: BigRational) -> Self {
        UnitRational(frac(&r))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `self + shift mod 1`.
    pub fn shift(&self, shift: &BigRational) -> Self {
        Self::wrap(&self.0 + shift)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for UnitRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for UnitRational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(UnitRational::wrap)
    }
}

/// Oriented distance on `T^1`: the unique `r` in `[0, 1)` with `b = a + r mod 1`.
pub fn oriented_distance(a: &UnitRational, b: &UnitRational) -> UnitRational {
    UnitRational::wrap(&b.0 - &a.0)
}

/// Puts points of `T^1` in cyclic order starting from the smallest
/// representative. Equal points stay adjacent in input order.
pub fn cyclic_order(points: &[UnitRational]) -> Vec<UnitRational> {
    let mut out = points.to_vec();
    // stable sort keeps ties in input order
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// `k * a mod 1`.
pub fn scale(k: u64, a: &UnitRational) -> UnitRational {
    UnitRational::wrap(&a.0 * BigRational::from_integer(BigInt::from(k)))
}

/// Same as [`scale`] but for arbitrarily large multipliers.
pub fn scale_big(k: &BigInt, a: &UnitRational) -> UnitRational {
    UnitRational::wrap(&a.0 * BigRational::from_integer(k.clone()))
}

/// A point of `T^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    coords: Vec<UnitRational>,
}

impl TorusPoint {
    /// Panics if `coords` is empty.
    pub fn new(coords: Vec<UnitRational>) -> Self {
        assert!(!coords.is_empty(), "torus points need dimension >= 1");
        TorusPoint { coords }
    }

    pub fn origin(n: usize) -> Self {
        Self::new(vec![UnitRational::zero(); n])
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[UnitRational] {
        &self.coords
    }

    pub fn coord(&self, j: usize) -> &UnitRational {
        &self.coords[j]
    }

    /// Adds a rational vector coordinatewise mod 1.
    pub fn translate(&self, shift: &[BigRational]) -> Self {
        assert_eq!(shift.len(), self.dimension(), "dimension mismatch");
        TorusPoint::new(
            self.coords
                .iter()
                .zip(shift)
                .map(|(c, s)| c.shift(s))
                .collect(),
        )
    }

    /// Adds the same rational to every coordinate.
    pub fn translate_all(&self, shift: &BigRational) -> Self {
        TorusPoint::new(self.coords.iter().map(|c| c.shift(shift)).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(UnitRational::to_f64).collect()
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for TorusPoint {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coords = s
            .split(',')
            .map(|c| c.parse::<UnitRational>())
            .collect::<Result<Vec<_>, _>>()?;
        if coords.is_empty() {
            return Err(ParseRationalError::Malformed(s.to_string()));
        }
        Ok(TorusPoint::new(coords))
    }
}

/// Whether `y` lies in the open arc `a + (0, side)`; `side` must be in `(0, 1)`.
pub fn in_open_arc(a: &UnitRational, side: &BigRational, y: &UnitRational) -> bool {
    let d = oriented_distance(a, y);
    d.0.is_positive() && d.0.cmp(side) == Ordering::Less
}

/// Whether `y` lies in the open cube `base + (0, side)^n`.
pub fn in_open_cube(base: &TorusPoint, side: &BigRational, y: &TorusPoint) -> bool {
    assert_eq!(base.dimension(), y.dimension(), "dimension mismatch");
    base.coords
        .iter()
        .zip(&y.coords)
        .all(|(a, b)| in_open_arc(a, side, b))
}

pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
