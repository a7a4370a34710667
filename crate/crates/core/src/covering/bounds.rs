//! Lower bounds and known exact values of `N(T^n, (0, eps)^n)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::torus::format_rational;

/// `(m^{n+1} - 1) / (m - 1) = m^n + ... + m + 1`.
pub fn lower_bound_unit_fraction(n: usize, m: u64) -> BigUint {
    assert!(m >= 2, "m must be at least 2");
    let m = BigUint::from(m);
    let top = num_traits::pow(m.clone(), n + 1) - BigUint::one();
    top / (m - BigUint::one())
}

fn check_eps(eps: &BigRational) {
    assert!(
        eps.is_positive() && eps < &BigRational::one(),
        "eps must lie in (0, 1), got {}",
        format_rational(eps)
    );
}

fn to_biguint(i: BigInt) -> BigUint {
    i.to_biguint().expect("recurrence values are positive")
}

/// `a_0 = 1`, `a_{k+1} = floor(a_k / eps) + 1`; a lower bound for the
/// open-cube covering number.
pub fn lower_bound_recurrence(n: usize, eps: &BigRational) -> BigUint {
    check_eps(eps);
    let inv = eps.recip();
    let mut a = BigInt::one();
    for _ in 0..n {
        a = (BigRational::from_integer(a) * &inv).floor().to_integer() + BigInt::one();
    }
    to_biguint(a)
}

/// `b_0 = 1`, `b_{k+1} = ceil(b_k / eps)`; a lower bound for coverings by
/// closed cubes `[0, eps]^n`.
pub fn closed_cube_lower_bound(n: usize, eps: &BigRational) -> BigUint {
    check_eps(eps);
    let inv = eps.recip();
    let mut b = BigInt::one();
    for _ in 0..n {
        b = (BigRational::from_integer(b) * &inv).ceil().to_integer();
    }
    to_biguint(b)
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("floor of {value} is within {margin:e} of an integer")]
pub struct FloorInconclusive {
    pub value: f64,
    pub margin: f64,
}

/// The `a_n` recurrence for an irrational side known to double precision.
pub fn lower_bound_recurrence_f64(
    n: usize,
    eps: f64,
    margin: f64,
) -> Result<BigUint, FloorInconclusive> {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    let mut a: u64 = 1;
    for _ in 0..n {
        let q = a as f64 / eps;
        let fl = q.floor();
        if q - fl < margin || fl + 1.0 - q < margin || q > 2f64.powi(52) {
            return Err(FloorInconclusive { value: q, margin });
        }
        a = fl as u64 + 1;
    }
    Ok(BigUint::from(a))
}

/// `floor((1/eps) (floor(1/eps) + 1)) + 1`, the exact two-dimensional value.
pub fn exact_value_2d(eps: &BigRational) -> BigUint {
    check_eps(eps);
    let inv = eps.recip();
    let s = inv.floor() + BigRational::one();
    to_biguint((inv * s).floor().to_integer() + BigInt::one())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no tabulated three-dimensional value for eps = {0}")]
pub struct NotTabulated(pub String);

/// Which row of the three-dimensional table produced a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactSource {
    Fixed {
        low: BigRational,
        high: BigRational,
    },
    /// `m^3 + m^2 + m + 1` on `(1/(m + 1/(m^2+m+1)), 1/m]`.
    UnitFraction {
        m: u64,
    },
    /// `m^3` on `(1/m, 1/(m - 1/(m^2-1))]`.
    Cube {
        m: u64,
    },
}

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn in_half_open(eps: &BigRational, low: &BigRational, high: &BigRational) -> bool {
    eps > low && eps <= high
}

/// Interval `(1/(m + 1/(m^2+m+1)), 1/m]`.
pub fn unit_fraction_interval(m: u64) -> (BigRational, BigRational) {
    let m = BigRational::from_integer(BigInt::from(m));
    let inner = (&m * &m + &m + BigRational::one()).recip();
    ((m.clone() + inner).recip(), m.recip())
}

/// Interval `(1/m, 1/(m - 1/(m^2-1))]`, for `m >= 2`.
pub fn cube_interval(m: u64) -> (BigRational, BigRational) {
    assert!(m >= 2);
    let m = BigRational::from_integer(BigInt::from(m));
    let inner = (&m * &m - BigRational::one()).recip();
    (m.recip(), (m - inner).recip())
}

/// The piecewise three-dimensional covering number, where tabulated.
pub fn exact_value_3d(eps: &BigRational) -> Result<(BigUint, ExactSource), NotTabulated> {
    assert!(
        eps.is_positive() && eps <= &BigRational::one(),
        "eps must lie in (0, 1]"
    );
    let fixed: [(i64, i64, i64, i64, u32); 4] = [
        (3, 4, 1, 1, 4),
        (2, 3, 3, 4, 5),
        (3, 5, 2, 3, 7),
        (1, 2, 3, 5, 8),
    ];
    for (lp, lq, hp, hq, value) in fixed {
        let (low, high) = (r(lp, lq), r(hp, hq));
        if in_half_open(eps, &low, &high) {
            return Ok((BigUint::from(value), ExactSource::Fixed { low, high }));
        }
    }
    // both families are indexed by m near 1/eps
    let guess = eps.recip().floor().to_integer();
    let guess = guess.to_u64().unwrap_or(u64::MAX - 2);
    for m in guess.saturating_sub(1).max(1)..=guess.saturating_add(1) {
        let (low, high) = unit_fraction_interval(m);
        if in_half_open(eps, &low, &high) {
            let mb = BigUint::from(m);
            let value = &mb * &mb * &mb + &mb * &mb + &mb + BigUint::one();
            return Ok((value, ExactSource::UnitFraction { m }));
        }
        if m >= 2 {
            let (low, high) = cube_interval(m);
            if in_half_open(eps, &low, &high) {
                let mb = BigUint::from(m);
                return Ok((&mb * &mb * &mb, ExactSource::Cube { m }));
            }
        }
    }
    Err(NotTabulated(format_rational(eps)))
}

/// Returns `m` when `eps = 1/m` for an integer `m >= 2`.
pub fn unit_fraction_denominator(eps: &BigRational) -> Option<u64> {
    if eps.numer().is_one() && !eps.denom().is_one() {
        eps.denom().to_u64()
    } else {
        None
    }
}
