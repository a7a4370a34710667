//! Coverings of `T^n` by translates of the open cube `(0, eps)^n`.
//!
//! [`construct_cover`] builds the explicit optimal cover for `eps = 1/m`,
//! [`verify_cover`] decides coverage on a finite arrangement grid, the
//! [`bounds`] functions give the known lower bounds and exact values, and
//! [`search_minimal_cover`] runs an exact set-cover search over grid-based
//! covers.

pub mod bounds;
pub mod format;
pub mod search;
pub mod verify;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::torus::{self, scale_big, TorusPoint, UnitRational};

pub use bounds::{
    closed_cube_lower_bound, exact_value_2d, exact_value_3d, lower_bound_recurrence,
    lower_bound_recurrence_f64, lower_bound_unit_fraction, ExactSource, NotTabulated,
};
pub use search::{search_minimal_cover, SearchOptions, SearchOutcome};
pub use verify::{verify_cover, GridCoordinate, Witness};

/// Margin used for every strict comparison in float mode.
pub const DEFAULT_FLOAT_MARGIN: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoverError {
    #[error("base {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("cube side must lie strictly between 0 and 1, got {0}")]
    InvalidSide(String),
    #[error("float mode is inconclusive: {0}")]
    FloatModeInconclusive(String),
    #[error("no cover exists among bases on the grid of resolution {0}")]
    Infeasible(u64),
    #[error("node budget of {budget} exhausted (best cover found so far: {best:?})")]
    BudgetExceeded { budget: u64, best: Option<usize> },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Side length of the cubes of a cover.
#[derive(Clone, Debug, PartialEq)]
pub enum Side {
    Exact(BigRational),
    /// An irrational side known only to double precision. Every comparison
    /// closer than `margin` to equality is reported as inconclusive.
    Float {
        value: f64,
        margin: f64,
    },
}

impl Side {
    pub fn exact(eps: BigRational) -> Result<Self, CoverError> {
        if !eps.is_positive() || eps >= BigRational::one() {
            return Err(CoverError::InvalidSide(torus::format_rational(&eps)));
        }
        Ok(Side::Exact(eps))
    }

    pub fn float(value: f64, margin: f64) -> Result<Self, CoverError> {
        if !(value > 0.0 && value < 1.0) || !(margin > 0.0) {
            return Err(CoverError::InvalidSide(format!(
                "{value} (margin {margin})"
            )));
        }
        Ok(Side::Float { value, margin })
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Side::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Side::Float { value, .. } => *value,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Side::Exact(r) => Some(r),
            Side::Float { .. } => None,
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Side::Exact(_) => Mode::Exact,
            Side::Float { margin, .. } => Mode::Float { margin: *margin },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Float { margin: f64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float { margin } => write!(f, "float({margin:e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Covered,
    Uncovered(Witness),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverCertificate {
    pub verdict: Verdict,
    /// Number of arrangement grid points tested.
    pub candidate_grid_size: u64,
    pub mode: Mode,
}

impl CoverCertificate {
    pub fn is_covered(&self) -> bool {
        matches!(self.verdict, Verdict::Covered)
    }
}

/// A union of open cubes `x^i + (0, side)^n` on `T^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeCover {
    dimension: usize,
    side: Side,
    bases: Vec<TorusPoint>,
    pub certificate: Option<CoverCertificate>,
}

impl CubeCover {
    pub fn new(dimension: usize, side: Side, bases: Vec<TorusPoint>) -> Result<Self, CoverError> {
        if dimension == 0 {
            return Err(CoverError::DimensionMismatch {
                index: 0,
                expected: 1,
                found: 0,
            });
        }
        if let Some((index, b)) = bases
            .iter()
            .enumerate()
            .find(|(_, b)| b.dimension() != dimension)
        {
            return Err(CoverError::DimensionMismatch {
                index,
                expected: dimension,
                found: b.dimension(),
            });
        }
        // re-validate the side range
        let side = match side {
            Side::Exact(r) => Side::exact(r)?,
            Side::Float { value, margin } => Side::float(value, margin)?,
        };
        Ok(CubeCover {
            dimension,
            side,
            bases,
            certificate: None,
        })
    }

    pub fn exact(
        dimension: usize,
        side: BigRational,
        bases: Vec<TorusPoint>,
    ) -> Result<Self, CoverError> {
        Self::new(dimension, Side::Exact(side), bases)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn side(&self) -> &Side {
        &self.side
    }

    pub fn bases(&self) -> &[TorusPoint] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// The same cover with cube `index` removed.
    pub fn without(&self, index: usize) -> CubeCover {
        let mut bases = self.bases.clone();
        bases.remove(index);
        CubeCover {
            dimension: self.dimension,
            side: self.side.clone(),
            bases,
            certificate: None,
        }
    }

    /// Direct membership test, independent of the verification grid.
    ///
    /// Only available for exact sides.
    pub fn contains(&self, y: &TorusPoint) -> Option<bool> {
        let side = self.side.as_exact()?;
        Some(self.bases.iter().any(|b| torus::in_open_cube(b, side, y)))
    }

    /// Indices of the cubes that contain `y` (exact sides only).
    pub fn covering_cubes(&self, y: &TorusPoint) -> Option<Vec<usize>> {
        let side = self.side.as_exact()?;
        Some(
            self.bases
                .iter()
                .enumerate()
                .filter(|(_, b)| torus::in_open_cube(b, side, y))
                .map(|(i, _)| i)
                .collect(),
        )
    }
}

/// The explicit cover by `(m^{n+1} - 1)/(m - 1)` cubes of side `1/m`, based at
/// `(u, m u, ..., m^{n-1} u)` for `u = k / b0`, `k = 1..=b0`.
pub fn construct_cover(n: usize, m: u64) -> Result<CubeCover, CoverError> {
    if n == 0 {
        return Err(CoverError::Unsupported(
            "dimension must be at least 1".into(),
        ));
    }
    if m < 2 {
        return Err(CoverError::Unsupported("m must be at least 2".into()));
    }
    let b0 = lower_bound_unit_fraction(n, m);
    let count = b0
        .to_usize()
        .filter(|&c| c <= 50_000_000)
        .ok_or_else(|| CoverError::TooLarge(format!("{b0} cubes")))?;
    let b0 = BigInt::from(b0);
    let m_big = BigInt::from(m);
    let powers: Vec<BigInt> = (0..n).map(|j| num_traits::pow(m_big.clone(), j)).collect();
    let bases = (1..=count)
        .map(|k| {
            let u = UnitRational::wrap(BigRational::new(BigInt::from(k), b0.clone()));
            TorusPoint::new(powers.iter().map(|p| scale_big(p, &u)).collect())
        })
        .collect();
    CubeCover::exact(n, BigRational::new(BigInt::one(), m_big), bases)
}
