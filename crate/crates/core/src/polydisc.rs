//! Illumination of the polydisc `D^n` and its translation into torus covers.
//!
//! A point of `D_0^n = (∂D)^n` is stored by its phases `θ` with coordinates
//! `e^{2πiθ_j}`. A direction `v ∈ D_0^n` illuminates `x ∈ D_0^n` iff every
//! coordinate satisfies `<x_j, v_j> < 0`, which is the open phase cube of
//! side `1/2` based at `phases(v) + 1/4`. A light source at `r·v` with
//! `r > 1` illuminates the cube of side `eps_r = arccos(1/r)/π` centred on
//! `phases(v)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::covering::{
    self, exact_value_2d, exact_value_3d, lower_bound_recurrence, lower_bound_unit_fraction,
    CubeCover, Side, DEFAULT_FLOAT_MARGIN,
};
use crate::torus::{self, in_open_cube, rational, TorusPoint, UnitRational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolydiscError {
    #[error("cover side must be 1/2, got {0}")]
    SideMismatch(String),
    #[error("radius must exceed 1, got {0}")]
    DomainError(f64),
    #[error("direction has a zero coordinate at index {0}")]
    ZeroCoordinate(usize),
    #[error("directions file line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Cover(#[from] covering::CoverError),
}

/// A point of `D_0^n` given by its phases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtremalDirection {
    pub phases: TorusPoint,
}

impl ExtremalDirection {
    pub fn new(phases: TorusPoint) -> Self {
        ExtremalDirection { phases }
    }

    pub fn dimension(&self) -> usize {
        self.phases.dimension()
    }

    /// Normalizes a direction of `C^n` coordinatewise, `v_j / |v_j|`. The
    /// phases are the exact binary values of the `f64` angles.
    pub fn from_complex(v: &[Complex64]) -> Result<Self, PolydiscError> {
        let coords = v
            .iter()
            .enumerate()
            .map(|(j, z)| {
                if z.norm() == 0.0 {
                    return Err(PolydiscError::ZeroCoordinate(j));
                }
                let turn = z.arg() / (2.0 * PI);
                let r = BigRational::from_float(turn).expect("finite angle");
                Ok(UnitRational::wrap(r))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExtremalDirection::new(TorusPoint::new(coords)))
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.phases
            .to_f64()
            .into_iter()
            .map(|t| Complex64::from_polar(1.0, 2.0 * PI * t))
            .collect()
    }
}

/// An open cube on the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseCube {
    pub base: TorusPoint,
    pub side: BigRational,
}

impl PhaseCube {
    pub fn contains(&self, x: &TorusPoint) -> bool {
        in_open_cube(&self.base, &self.side, x)
    }
}

fn quarter() -> BigRational {
    rational(1, 4)
}

/// The phase cube of points illuminated by `v`: side `1/2`, based at
/// `phases(v) + (1/4, ..., 1/4)`.
pub fn illuminated_cube(v: &ExtremalDirection) -> PhaseCube {
    PhaseCube {
        base: v.phases.translate_all(&quarter()),
        side: rational(1, 2),
    }
}

/// `v` illuminates `x` (both in `D_0^n`), decided exactly on phases.
pub fn illuminates(v: &ExtremalDirection, x: &TorusPoint) -> bool {
    illuminated_cube(v).contains(x)
}

/// The interior-ray test: some `t ∈ {2^-1, ..., 2^-20}` has
/// `|x_j + t v_j| < 1` for every `j`. Independent of the phase-cube bridge.
pub fn illuminates_by_ray(v: &[Complex64], x: &[Complex64]) -> bool {
    (1..=20).any(|k| {
        let t = 0.5f64.powi(k);
        x.iter().zip(v).all(|(xj, vj)| (xj + vj * t).norm() < 1.0)
    })
}

/// Directions whose illuminated cubes are exactly the cubes of `cover`.
pub fn direction_set_from_cover(
    cover: &CubeCover,
) -> Result<Vec<ExtremalDirection>, PolydiscError> {
    match cover.side() {
        Side::Exact(s) if *s == rational(1, 2) => {}
        other => {
            return Err(PolydiscError::SideMismatch(match other {
                Side::Exact(s) => torus::format_rational(s),
                Side::Float { value, .. } => value.to_string(),
            }))
        }
    }
    let back = -quarter();
    Ok(cover
        .bases()
        .iter()
        .map(|b| ExtremalDirection::new(b.translate_all(&back)))
        .collect())
}

/// `ill(D^n) = 2^{n+1} - 1`.
pub fn illumination_number_polydisc(n: usize) -> BigUint {
    (BigUint::one() << (n + 1)) - BigUint::one()
}

/// `ill*(D^n) = 2^n`.
pub fn fractional_number_polydisc(n: usize) -> BigUint {
    BigUint::one() << n
}

/// The first point of the phase grid `(Z/q)^n` not illuminated by `dirs`.
pub fn first_unilluminated(dirs: &[ExtremalDirection], n: usize, q: u64) -> Option<TorusPoint> {
    let total = (q as usize).pow(n as u32);
    let cubes: Vec<PhaseCube> = dirs.iter().map(illuminated_cube).collect();
    (0..total)
        .into_par_iter()
        .find_first(|&i| {
            let x = grid_point(i, n, q);
            !cubes.iter().any(|c| c.contains(&x))
        })
        .map(|i| grid_point(i, n, q))
}

fn grid_point(mut i: usize, n: usize, q: u64) -> TorusPoint {
    let mut coords = vec![UnitRational::zero(); n];
    for slot in coords.iter_mut().rev() {
        *slot = UnitRational::new((i % q as usize) as u64, q);
        i /= q as usize;
    }
    TorusPoint::new(coords)
}

/// `eps_r = arccos(1/r) / π`.
pub fn light_source_side(r: f64) -> Result<f64, PolydiscError> {
    if !(r > 1.0) {
        return Err(PolydiscError::DomainError(r));
    }
    Ok((1.0 / r).acos() / PI)
}

/// `ill*_r(D^n) = (π / arccos(1/r))^n`.
pub fn light_source_fractional_number(n: usize, r: f64) -> Result<f64, PolydiscError> {
    Ok(light_source_side(r)?.recip().powi(n as i32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LightSource {
    pub phases: TorusPoint,
    pub radius: f64,
}

impl LightSource {
    pub fn new(phases: TorusPoint, radius: f64) -> Result<Self, PolydiscError> {
        light_source_side(radius)?;
        Ok(LightSource { phases, radius })
    }
}

/// Three-valued answer for float comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    Inconclusive,
}

fn symmetric_distance(a: &UnitRational, b: &UnitRational) -> BigRational {
    let d = torus::oriented_distance(a, b).into_inner();
    let e = BigRational::one() - &d;
    if d.is_zero() {
        d
    } else {
        d.min(e)
    }
}

/// Whether the light source illuminates `x`: every phase is within
/// symmetric distance `eps_r / 2` of the source phase, strictly. Comparisons
/// within `margin` of equality are inconclusive.
pub fn light_source_decision(s: &LightSource, x: &ExtremalDirection, margin: f64) -> Decision {
    let half = light_source_side(s.radius).expect("validated radius") / 2.0;
    let mut result = Decision::Yes;
    for (a, b) in s.phases.coords().iter().zip(x.phases.coords()) {
        let d = symmetric_distance(a, b).to_f64().unwrap_or(f64::NAN);
        if (d - half).abs() < margin {
            result = Decision::Inconclusive;
        } else if d > half {
            return Decision::No;
        }
    }
    result
}

/// Conservative boolean form of [`light_source_decision`]: inconclusive
/// cases count as not illuminated.
pub fn light_source_illuminates(s: &LightSource, x: &ExtremalDirection) -> bool {
    light_source_decision(s, x, DEFAULT_FLOAT_MARGIN) == Decision::Yes
}

/// Replaces `eps` by `p/q` (`q <= 64`) when it is within `1e-12` of it.
pub fn snap_rational(eps: f64) -> Option<BigRational> {
    (1..=64i64).find_map(|q| {
        let p = (eps * q as f64).round();
        if (eps - p / q as f64).abs() < 1e-12 {
            Some(rational(p as i64, q))
        } else {
            None
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum LightSourceSource {
    UnitFraction {
        m: u64,
    },
    Circle,
    Plane,
    Table,
    /// Upper bound from the explicit cover with cubes of side `1/m`.
    Construction {
        m: u64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LightSourceNumber {
    pub eps: f64,
    /// The exact side, when `eps_r` snapped to a small-denominator rational.
    pub eps_exact: Option<BigRational>,
    pub lower: BigUint,
    pub upper: BigUint,
    pub source: LightSourceSource,
}

impl LightSourceNumber {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn exact(&self) -> Option<&BigUint> {
        self.is_exact().then_some(&self.upper)
    }
}

/// Rational bracket `lo <= eps <= hi` of width about `2e-12`.
fn bracket(eps: f64) -> (BigRational, BigRational) {
    let scale = 1_000_000_000_000i64;
    let s = BigRational::from_integer(scale.into());
    let mid = BigRational::from_float(eps).expect("finite side");
    let lo = (&mid * &s).floor() - BigRational::one();
    let hi = (&mid * &s).ceil() + BigRational::one();
    (lo / &s, hi / s)
}

fn tabulated(n: usize, eps: &BigRational) -> Option<(BigUint, LightSourceSource)> {
    if let Some(m) = covering::bounds::unit_fraction_denominator(eps) {
        return Some((
            lower_bound_unit_fraction(n, m),
            LightSourceSource::UnitFraction { m },
        ));
    }
    match n {
        1 => Some((lower_bound_recurrence(1, eps), LightSourceSource::Circle)),
        2 => Some((exact_value_2d(eps), LightSourceSource::Plane)),
        3 => exact_value_3d(eps)
            .ok()
            .map(|(v, _)| (v, LightSourceSource::Table)),
        _ => None,
    }
}

/// Bounds on `ill_r(D^n) = N(T^n, (0, eps_r)^n)`.
///
/// The covering number is non-increasing in the side, so evaluating known
/// formulas at both ends of a rational bracket of `eps_r` is sound whenever
/// the two values agree.
pub fn light_source_number(n: usize, r: f64) -> Result<LightSourceNumber, PolydiscError> {
    let eps = light_source_side(r)?;
    if let Some(exact) = snap_rational(eps) {
        let lower = lower_bound_recurrence(n, &exact);
        if let Some((v, source)) = tabulated(n, &exact) {
            return Ok(LightSourceNumber {
                eps,
                eps_exact: Some(exact),
                lower: v.clone(),
                upper: v,
                source,
            });
        }
        let m = exact
            .recip()
            .ceil()
            .to_integer()
            .to_u64()
            .unwrap_or(u64::MAX);
        return Ok(LightSourceNumber {
            eps,
            eps_exact: Some(exact),
            lower,
            upper: lower_bound_unit_fraction(n, m.max(2)),
            source: LightSourceSource::Construction { m: m.max(2) },
        });
    }
    let (lo, hi) = bracket(eps);
    let lower = lower_bound_recurrence(n, &hi);
    if let (Some((a, source)), Some((b, _))) = (tabulated(n, &lo), tabulated(n, &hi)) {
        if a == b {
            return Ok(LightSourceNumber {
                eps,
                eps_exact: None,
                lower: a.clone(),
                upper: a,
                source,
            });
        }
    }
    let m = lo
        .recip()
        .ceil()
        .to_integer()
        .to_u64()
        .unwrap_or(u64::MAX)
        .max(2);
    Ok(LightSourceNumber {
        eps,
        eps_exact: None,
        lower,
        upper: lower_bound_unit_fraction(n, m),
        source: LightSourceSource::Construction { m },
    })
}

/// Directions file: a header `kind=directions n=<int>` followed by one
/// phase vector per line.
pub fn write_directions(dirs: &[ExtremalDirection], n: usize) -> String {
    let mut out = format!("kind=directions n={n}\n");
    for d in dirs {
        let _ = writeln!(out, "{}", d.phases);
    }
    out
}

pub fn parse_directions(text: &str) -> Result<(usize, Vec<ExtremalDirection>), PolydiscError> {
    let syntax = |line: usize, message: String| PolydiscError::Syntax { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines
        .next()
        .ok_or_else(|| syntax(0, "missing header".into()))?;
    let mut n = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => {
                n = Some(
                    v.parse::<usize>()
                        .map_err(|_| syntax(hl, format!("bad n `{v}`")))?,
                )
            }
            Some(("kind", "directions")) => {}
            _ => return Err(syntax(hl, format!("unexpected header field `{field}`"))),
        }
    }
    let n = n.ok_or_else(|| syntax(hl, "header lacks n=".into()))?;
    let mut dirs = Vec::new();
    for (line, l) in lines {
        let p: TorusPoint = l
            .parse()
            .map_err(|e: torus::ParseRationalError| syntax(line, e.to_string()))?;
        if p.dimension() != n {
            return Err(syntax(
                line,
                format!("expected {n} phases, found {}", p.dimension()),
            ));
        }
        dirs.push(ExtremalDirection::new(p));
    }
    Ok((n, dirs))
}

/// Side `1/2` cover whose cubes are the cubes illuminated by `dirs`.
pub fn cover_from_directions(
    dirs: &[ExtremalDirection],
    n: usize,
) -> Result<CubeCover, PolydiscError> {
    let bases = dirs.iter().map(|d| illuminated_cube(d).base).collect();
    Ok(CubeCover::exact(n, rational(1, 2), bases)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{construct_cover, verify_cover};

    fn dir(s: &str) -> ExtremalDirection {
        ExtremalDirection::new(s.parse().unwrap())
    }

    #[test]
    fn illuminated_cube_examples() {
        let v = dir("0,0");
        assert_eq!(illuminated_cube(&v).base, "1/4,1/4".parse().unwrap());
        assert!(illuminates(&v, &"1/2,1/2".parse().unwrap()));
        assert!(!illuminates(&v, &"0,1/2".parse().unwrap()));
        // boundary of the half-circle is not illuminated
        assert!(!illuminates(&v, &"1/4,1/2".parse().unwrap()));
    }

    #[test]
    fn directions_from_explicit_covers() {
        for (n, expected) in [(1, 3), (2, 7), (3, 15)] {
            let cover = construct_cover(n, 2).unwrap();
            let dirs = direction_set_from_cover(&cover).unwrap();
            assert_eq!(dirs.len(), expected);
            assert_eq!(BigUint::from(expected), illumination_number_polydisc(n));
            let back = cover_from_directions(&dirs, n).unwrap();
            assert_eq!(back.bases(), cover.bases());
            assert!(verify_cover(&back).unwrap().is_covered());
        }
        let wrong = construct_cover(2, 3).unwrap();
        assert!(matches!(
            direction_set_from_cover(&wrong),
            Err(PolydiscError::SideMismatch(_))
        ));
    }

    #[test]
    fn grid_check_on_phase_grid() {
        for n in 1..=3 {
            let dirs = direction_set_from_cover(&construct_cover(n, 2).unwrap()).unwrap();
            assert_eq!(first_unilluminated(&dirs, n, 24), None);
            assert!(first_unilluminated(&dirs[1..], n, 24).is_some());
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(illumination_number_polydisc(1), BigUint::from(3u32));
        assert_eq!(fractional_number_polydisc(1), BigUint::from(2u32));
        assert_eq!(illumination_number_polydisc(3), BigUint::from(15u32));
        assert_eq!(fractional_number_polydisc(10), BigUint::from(1024u32));
        assert_eq!(illumination_number_polydisc(10), BigUint::from(2047u32));
    }

    #[test]
    fn light_source_sides() {
        assert!((light_source_side(2.0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((light_source_side(2f64.sqrt()).unwrap() - 0.25).abs() < 1e-12);
        assert!((light_source_side(1e12).unwrap() - 0.5).abs() < 1e-9);
        assert!(light_source_side(1.0).is_err());
        let mut prev = 0.0;
        for k in 1..50 {
            let e = light_source_side(1.0 + k as f64 * 0.1).unwrap();
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn light_source_predicate() {
        let s = LightSource::new("0,0".parse().unwrap(), 2.0).unwrap();
        assert!(light_source_illuminates(&s, &dir("1/12,11/12")));
        assert!(!light_source_illuminates(&s, &dir("1/6,1/6")));
        assert_eq!(
            light_source_decision(&s, &dir("1/6,0"), 1e-9),
            Decision::Inconclusive
        );
        assert_eq!(light_source_decision(&s, &dir("1/5,0"), 1e-9), Decision::No);
    }

    #[test]
    fn light_source_numbers() {
        let v = light_source_number(2, 2.0).unwrap();
        assert_eq!(v.exact(), Some(&BigUint::from(13u32)));
        assert_eq!(v.eps_exact, Some(rational(1, 3)));
        let v = light_source_number(3, 2.0).unwrap();
        assert_eq!(v.exact(), Some(&BigUint::from(40u32)));
        let v = light_source_number(2, 2f64.sqrt()).unwrap();
        assert_eq!(v.exact(), Some(&BigUint::from(21u32)));
        for n in 1..=5 {
            let v = light_source_number(n, 2.0).unwrap();
            let expected = (BigUint::from(3u32).pow(n as u32 + 1) - 1u32) / 2u32;
            assert_eq!(v.exact(), Some(&expected));
        }
    }

    #[test]
    fn irrational_sides_give_bounds() {
        // eps_3 = arccos(1/3)/π ≈ 0.392
        let v = light_source_number(2, 3.0).unwrap();
        assert!(v.eps_exact.is_none());
        assert_eq!(v.exact(), Some(&BigUint::from(8u32)));
        let v = light_source_number(4, 3.0).unwrap();
        assert!(v.lower <= v.upper);
        assert_eq!(v.source, LightSourceSource::Construction { m: 3 });
    }

    #[test]
    fn from_complex_normalizes() {
        let d =
            ExtremalDirection::from_complex(&[Complex64::new(0.0, 2.0), Complex64::new(-3.0, 0.0)])
                .unwrap();
        assert_eq!(d.phases, "1/4,1/2".parse().unwrap());
        assert!(matches!(
            ExtremalDirection::from_complex(&[Complex64::new(0.0, 0.0)]),
            Err(PolydiscError::ZeroCoordinate(0))
        ));
    }

    #[test]
    fn directions_round_trip() {
        let dirs = direction_set_from_cover(&construct_cover(2, 2).unwrap()).unwrap();
        let text = write_directions(&dirs, 2);
        assert_eq!(parse_directions(&text).unwrap(), (2, dirs));
        assert!(parse_directions("kind=directions n=2\n1/2\n").is_err());
    }
}
