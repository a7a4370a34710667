//! Real and complex zonotopes `Z(a_1, …, a_N) = { Σ y_j a_j : |y_j| <= 1 }`,
//! their canonical form and explicit illuminating sets.
//!
//! Directions and boundary points are written in coefficients relative to
//! the canonical generators. A canonical zonotope has a one-dimensional
//! kernel spanned by `λ`, so a direction `v` illuminates the point with
//! coefficients `x` iff some `t > 0` and scalar `δ` give
//! `|x_j + t v_j + δ λ_j| < 1` for every `j`.

mod complex;
mod fractional;
pub mod linalg;
pub mod mec;
mod real;

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::torus::{format_rational, parse_rational};
use linalg::{combine, greedy_basis, max_modulus, parallel_factor, solve_in_basis, Scalar};

pub use complex::{complex_illuminating_set, complex_v1, polydisc_phases};
pub use fractional::{fractional_measure, FractionalMeasure, ThetaCoverage};
pub use mec::{min_enclosing_circle, Circle};
pub use real::{exact_max_modulus, proof_witness, real_illuminating_set, ProofCase};

/// Margin for strict inequalities in floating point.
pub const FLOAT_MARGIN: f64 = 1e-9;
/// Exponents `k` of the tested steps `t = 2^-k`.
pub const MAX_STEP_EXPONENT: u32 = 30;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZonotopeError {
    #[error("generators do not span the space (rank {rank} < {dimension})")]
    RankDeficient { rank: usize, dimension: usize },
    #[error("after merging parallel generators only {0} remain: the zonotope is a linear image of a cube or polydisc")]
    IsCubeOrPolydisc(usize),
    #[error("not canonical: {0}")]
    NotCanonical(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Real,
    Complex,
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FieldKind::Real => "real",
            FieldKind::Complex => "complex",
        })
    }
}

/// Scalars a zonotope can be built over.
pub trait Field: Scalar + Send + Sync {
    const KIND: FieldKind;
    /// Tolerance for zero tests, relative to the largest input entry.
    const TOLERANCE: f64;
    /// `|self| < 1`, exactly or with [`FLOAT_MARGIN`].
    fn strictly_inside(&self) -> bool;
    /// A `δ` with `|c + δ| < 1` for every `c`, if one exists.
    fn refine(centers: &[Self]) -> Option<Self>;
    fn abs_value(&self) -> Self;
    /// Coefficient `index` out of `radix(q)` admissible values of modulus 1.
    fn unit(index: u64, q: u64) -> Self;
    fn radix(q: u64) -> u64;
    fn parse_entry(s: &str) -> Result<Self, String>;
    fn format_entry(&self) -> String;
}

impl Field for BigRational {
    const KIND: FieldKind = FieldKind::Real;
    const TOLERANCE: f64 = 0.0;

    fn strictly_inside(&self) -> bool {
        self.abs() < <BigRational as Scalar>::one()
    }

    fn refine(centers: &[Self]) -> Option<Self> {
        let Some(first) = centers.first() else {
            return Some(Zero::zero());
        };
        let (lo, hi) = centers.iter().fold((first, first), |(lo, hi), c| {
            (if c < lo { c } else { lo }, if c > hi { c } else { hi })
        });
        let two = BigRational::from_integer(2.into());
        (hi - lo < two).then(|| -(lo + hi) / two)
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn unit(index: u64, _q: u64) -> Self {
        if index == 0 {
            <BigRational as Scalar>::one()
        } else {
            -<BigRational as Scalar>::one()
        }
    }

    fn radix(_q: u64) -> u64 {
        2
    }

    fn parse_entry(s: &str) -> Result<Self, String> {
        parse_rational(s).map_err(|e| e.to_string())
    }

    fn format_entry(&self) -> String {
        if self.is_integer() {
            self.to_integer().to_string()
        } else {
            format_rational(self)
        }
    }
}

impl Field for Complex64 {
    const KIND: FieldKind = FieldKind::Complex;
    const TOLERANCE: f64 = 1e-9;

    fn strictly_inside(&self) -> bool {
        self.norm_sqr() < (1.0 - FLOAT_MARGIN) * (1.0 - FLOAT_MARGIN)
    }

    fn refine(centers: &[Self]) -> Option<Self> {
        // the discs |c + δ| < 1 meet iff the centers -c fit in a circle of radius < 1
        match min_enclosing_circle(centers) {
            None => Some(Complex64::new(0.0, 0.0)),
            Some(c) => (c.radius < 1.0 - 2.0 * FLOAT_MARGIN).then_some(-c.center),
        }
    }

    fn abs_value(&self) -> Self {
        Complex64::new(self.norm(), 0.0)
    }

    fn unit(index: u64, q: u64) -> Self {
        Complex64::from_polar(1.0, std::f64::consts::TAU * index as f64 / q as f64)
    }

    fn radix(q: u64) -> u64 {
        q
    }

    fn parse_entry(s: &str) -> Result<Self, String> {
        parse_complex(s)
    }

    fn format_entry(&self) -> String {
        format_complex(*self)
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also `i`, `-i`, `a+i`).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("malformed complex number {s:?}");
    let real = |t: &str| -> Result<f64, String> {
        if t.contains('/') {
            parse_rational(t)
                .ok()
                .and_then(|r| num_traits::ToPrimitive::to_f64(&r))
                .ok_or_else(bad)
        } else {
            f64::from_str(t).map_err(|_| bad())
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(&s)?, 0.0));
    };
    // split at the last sign that is not the leading one or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t)?,
    };
    Ok(Complex64::new(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:?}", z.re)
    } else if z.im < 0.0 {
        format!("{:?}-{:?}i", z.re, -z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}

/// Generator vectors read from a file, exact over the reals.
#[derive(Clone, Debug, PartialEq)]
pub enum Generators {
    Real {
        dimension: usize,
        vectors: Vec<Vec<BigRational>>,
    },
    Complex {
        dimension: usize,
        vectors: Vec<Vec<Complex64>>,
    },
}

impl Generators {
    pub fn field(&self) -> FieldKind {
        match self {
            Generators::Real { .. } => FieldKind::Real,
            Generators::Complex { .. } => FieldKind::Complex,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Generators::Real { dimension, .. } | Generators::Complex { dimension, .. } => {
                *dimension
            }
        }
    }
}

fn parse_header(line: &str, expected_kind: Option<&str>) -> Result<(FieldKind, usize), String> {
    let mut field = None;
    let mut n = None;
    let mut kind = None;
    for token in line.split_whitespace() {
        match token.split_once('=') {
            Some(("field", "real")) => field = Some(FieldKind::Real),
            Some(("field", "complex")) => field = Some(FieldKind::Complex),
            Some(("n", v)) => {
                n = Some(
                    v.parse::<usize>()
                        .map_err(|_| format!("bad dimension {v:?}"))?,
                )
            }
            Some(("kind", v)) => kind = Some(v),
            _ => return Err(format!("unexpected header token {token:?}")),
        }
    }
    if kind != expected_kind {
        return Err(format!("expected kind {expected_kind:?}, found {kind:?}"));
    }
    match (field, n) {
        (Some(f), Some(n)) if n > 0 => Ok((f, n)),
        _ => Err("header needs field=real|complex and n=<positive int>".into()),
    }
}

fn parse_rows<S: Field>(
    lines: impl Iterator<Item = (usize, String)>,
    n: usize,
) -> Result<Vec<Vec<S>>, ZonotopeError> {
    lines
        .map(|(line, text)| {
            let row = text
                .split(',')
                .map(|e| S::parse_entry(e.trim()))
                .collect::<Result<Vec<S>, _>>()
                .map_err(|message| ZonotopeError::Syntax { line, message })?;
            if row.len() != n {
                return Err(ZonotopeError::Syntax {
                    line,
                    message: format!("expected {n} entries, found {}", row.len()),
                });
            }
            Ok(row)
        })
        .collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, String)> + '_ {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim().to_string()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_with_kind(text: &str, kind: Option<&str>) -> Result<Generators, ZonotopeError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(ZonotopeError::Syntax {
        line: 1,
        message: "missing header".into(),
    })?;
    let (field, n) = parse_header(&header, kind)
        .map_err(|message| ZonotopeError::Syntax { line: hl, message })?;
    Ok(match field {
        FieldKind::Real => Generators::Real {
            dimension: n,
            vectors: parse_rows(lines, n)?,
        },
        FieldKind::Complex => Generators::Complex {
            dimension: n,
            vectors: parse_rows(lines, n)?,
        },
    })
}

/// Parses a generator file: header `field=real|complex n=<int>`, then one
/// generator per line as comma-separated entries.
pub fn parse_generators(text: &str) -> Result<Generators, ZonotopeError> {
    parse_with_kind(text, None)
}

fn write_rows<S: Field>(header: String, rows: &[Vec<S>]) -> String {
    let mut out = header;
    out.push('\n');
    for row in rows {
        let entries: Vec<String> = row.iter().map(Field::format_entry).collect();
        let _ = writeln!(out, "{}", entries.join(","));
    }
    out
}

pub fn write_generators<S: Field>(n: usize, vectors: &[Vec<S>]) -> String {
    write_rows(format!("field={} n={n}", S::KIND), vectors)
}

/// Direction files hold ambient vectors, header
/// `kind=directions field=real|complex n=<int>`.
pub fn write_direction_vectors<S: Field>(n: usize, vectors: &[Vec<S>]) -> String {
    write_rows(format!("kind=directions field={} n={n}", S::KIND), vectors)
}

pub fn parse_direction_vectors(text: &str) -> Result<Generators, ZonotopeError> {
    parse_with_kind(text, Some("directions"))
}

/// Canonical zonotope: `a_1, …, a_n` is a basis and `Σ λ_j a_j = 0` with
/// `λ ∈ {0,1}^{n+1}` ending in three ones.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalZonotope<S> {
    generators: Vec<Vec<S>>,
    lambda: Vec<bool>,
    /// For each canonical generator, the input vector it was built from.
    pub source: Vec<usize>,
}

impl<S: Field> CanonicalZonotope<S> {
    pub fn new(generators: Vec<Vec<S>>, lambda: Vec<bool>) -> Result<Self, ZonotopeError> {
        let source = (0..generators.len()).collect();
        let k = CanonicalZonotope {
            generators,
            lambda,
            source,
        };
        k.check()?;
        Ok(k)
    }

    pub fn dimension(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn generators(&self) -> &[Vec<S>] {
        &self.generators
    }

    pub fn lambda(&self) -> &[bool] {
        &self.lambda
    }

    pub fn lambda_scalars(&self) -> Vec<S> {
        self.lambda
            .iter()
            .map(|&l| if l { S::one() } else { S::zero() })
            .collect()
    }

    fn tolerance(&self) -> f64 {
        S::TOLERANCE * max_modulus(&self.generators).max(1.0)
    }

    /// `‖Σ λ_j a_j‖_∞`.
    pub fn dependence_residual(&self) -> f64 {
        combine(&self.lambda_scalars(), &self.generators)
            .iter()
            .map(Scalar::modulus)
            .fold(0.0, f64::max)
    }

    fn check(&self) -> Result<(), ZonotopeError> {
        let bad = |m: String| Err(ZonotopeError::NotCanonical(m));
        let len = self.generators.len();
        if len < 3 || self.lambda.len() != len {
            return bad(format!(
                "{len} generators with {} dependence entries",
                self.lambda.len()
            ));
        }
        let n = len - 1;
        if self.generators.iter().any(|g| g.len() != n) {
            return bad(format!("generators must have {n} entries"));
        }
        if !self.lambda[n - 2..].iter().all(|&l| l) {
            return bad("the last three dependence coefficients must be 1".into());
        }
        let tol = self.tolerance();
        if solve_in_basis(&self.generators[..n], &self.generators[n], tol).is_none() {
            return bad("a_1, …, a_n is not a basis".into());
        }
        if self.generators[..n]
            .iter()
            .any(|a| parallel_factor(a, &self.generators[n], tol).is_some())
        {
            return bad("a_{n+1} is parallel to another generator".into());
        }
        let residual = self.dependence_residual();
        let scale = max_modulus(&self.generators).max(1.0);
        if residual > 1e-12 * scale {
            return bad(format!("dependence residual {residual:e}"));
        }
        Ok(())
    }

    /// Coefficients of an ambient vector in the basis `a_1, …, a_n`, with
    /// a zero appended for `a_{n+1}`.
    pub fn coefficients_of(&self, w: &[S]) -> Option<Vec<S>> {
        let n = self.dimension();
        if w.len() != n {
            return None;
        }
        let mut c = solve_in_basis(&self.generators[..n], w, self.tolerance())?;
        c.push(S::zero());
        Some(c)
    }

    pub fn vector_of(&self, coefficients: &[S]) -> Vec<S> {
        combine(coefficients, &self.generators)
    }
}

/// Reduces a spanning family to a canonical zonotope that has at least as
/// large (fractional) illumination number.
pub fn reduce_to_canonical<S: Field>(
    vectors: &[Vec<S>],
) -> Result<CanonicalZonotope<S>, ZonotopeError> {
    let n = vectors.first().map_or(0, Vec::len);
    if n == 0 || vectors.iter().any(|v| v.len() != n) {
        return Err(ZonotopeError::RankDeficient {
            rank: 0,
            dimension: n,
        });
    }
    let tol = S::TOLERANCE * max_modulus(vectors).max(1.0);
    let mut merged: Vec<(usize, Vec<S>)> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if v.iter().all(|x| x.is_negligible(tol)) {
            continue;
        }
        match merged
            .iter_mut()
            .find_map(|(_, m)| parallel_factor(m, v, tol).map(|c| (m, c)))
        {
            Some((m, c)) => {
                let f = S::one() + c.abs_value();
                for e in m.iter_mut() {
                    *e = f.clone() * e.clone();
                }
            }
            None => merged.push((i, v.clone())),
        }
    }
    let cols: Vec<Vec<S>> = merged.iter().map(|(_, v)| v.clone()).collect();
    let basis = greedy_basis(&cols, tol);
    if basis.len() < n {
        return Err(ZonotopeError::RankDeficient {
            rank: basis.len(),
            dimension: n,
        });
    }
    if cols.len() == n {
        return Err(ZonotopeError::IsCubeOrPolydisc(n));
    }
    let basis_vecs: Vec<Vec<S>> = basis.iter().map(|&b| cols[b].clone()).collect();
    let mut best: Option<(usize, Vec<S>)> = None;
    for k in (0..cols.len()).filter(|k| !basis.contains(k)) {
        let c = solve_in_basis(&basis_vecs, &cols[k], tol).expect("basis is invertible");
        let nnz = c.iter().filter(|x| !x.is_negligible(tol)).count();
        if best.as_ref().map_or(true, |(_, bc)| {
            nnz > bc.iter().filter(|x| !x.is_negligible(tol)).count()
        }) {
            best = Some((k, c));
        }
    }
    let (extra, c) = best.expect("more generators than the dimension");
    // dependence Σ c_j b_j - b_extra = 0, normalized by the first nonzero c_j
    let pivot = c
        .iter()
        .find(|x| !x.is_negligible(tol))
        .cloned()
        .expect("extra generator is nonzero");
    let eta: Vec<Option<S>> = c
        .iter()
        .map(|x| (!x.is_negligible(tol)).then(|| x.clone() / pivot.clone()))
        .collect();
    let eta_extra = -S::one() / pivot;
    let scaled = |v: &Vec<S>, e: &S| v.iter().map(|x| e.clone() * x.clone()).collect::<Vec<S>>();

    let nonzero: Vec<usize> = (0..n).filter(|&j| eta[j].is_some()).collect();
    let tail = &nonzero[nonzero.len() - 2..];
    let mut order: Vec<usize> = (0..n).filter(|j| !tail.contains(j)).collect();
    order.extend_from_slice(tail);

    let mut generators = Vec::with_capacity(n + 1);
    let mut lambda = Vec::with_capacity(n + 1);
    let mut source = Vec::with_capacity(n + 1);
    for &j in &order {
        let v = &basis_vecs[j];
        match &eta[j] {
            Some(e) => {
                generators.push(scaled(v, e));
                lambda.push(true);
            }
            None => {
                generators.push(v.clone());
                lambda.push(false);
            }
        }
        source.push(merged[basis[j]].0);
    }
    generators.push(scaled(&cols[extra], &eta_extra));
    lambda.push(true);
    source.push(merged[extra].0);

    let mut k = CanonicalZonotope::new(generators, lambda)?;
    k.source = source;
    Ok(k)
}

/// A step `t = 2^-step` and refinement `δ` moving the boundary point `x`
/// into the interior along a direction.
#[derive(Clone, Debug, PartialEq)]
pub struct IlluminationWitness<S> {
    pub direction: usize,
    pub step: u32,
    pub delta: S,
    /// `y = x + t v + δ λ`.
    pub coefficients: Vec<S>,
    pub max_modulus: f64,
}

fn step_value<S: Field>(step: u32) -> S {
    let two = S::one() + S::one();
    (0..step).fold(S::one(), |t, _| t / two.clone())
}

impl<S: Field> IlluminationWitness<S> {
    pub fn t(&self) -> S {
        step_value(self.step)
    }

    /// Recomputes `y` from scratch and checks `|y_j| < 1`.
    pub fn revalidate(&self, x: &[S], v: &[S], lambda: &[bool]) -> bool {
        if x.len() != self.coefficients.len() || v.len() != x.len() || lambda.len() != x.len() {
            return false;
        }
        let t = self.t();
        x.iter()
            .zip(v)
            .zip(lambda)
            .zip(&self.coefficients)
            .all(|(((xj, vj), &l), yj)| {
                let mut y = xj.clone() + t.clone() * vj.clone();
                if l {
                    y = y + self.delta.clone();
                }
                y.strictly_inside() && (y.clone() - yj.clone()).is_negligible(S::TOLERANCE)
            })
    }
}

/// Searches `t = 2^-k` for `k = 0..=30` for a refinement moving `x + t v`
/// into the open coefficient cube. `None` means no tested step worked.
pub fn illuminates_canonical<S: Field>(
    x: &[S],
    v: &[S],
    lambda: &[bool],
) -> Option<IlluminationWitness<S>> {
    illuminates_to_depth(x, v, lambda, MAX_STEP_EXPONENT)
}

/// [`illuminates_canonical`] with steps down to `2^-depth`.
pub fn illuminates_to_depth<S: Field>(
    x: &[S],
    v: &[S],
    lambda: &[bool],
    depth: u32,
) -> Option<IlluminationWitness<S>> {
    let two = S::one() + S::one();
    let mut t = S::one();
    let mut c: Vec<S> = Vec::with_capacity(x.len());
    let mut centers: Vec<S> = Vec::with_capacity(x.len());
    for step in 0..=depth {
        c.clear();
        c.extend(
            x.iter()
                .zip(v)
                .map(|(a, b)| a.clone() + t.clone() * b.clone()),
        );
        let free_ok = c
            .iter()
            .zip(lambda)
            .all(|(cj, &l)| l || cj.strictly_inside());
        if free_ok {
            centers.clear();
            centers.extend(
                c.iter()
                    .zip(lambda)
                    .filter(|(_, &l)| l)
                    .map(|(cj, _)| cj.clone()),
            );
            if let Some(delta) = S::refine(&centers) {
                let coefficients: Vec<S> = c
                    .into_iter()
                    .zip(lambda)
                    .map(|(cj, &l)| if l { cj + delta.clone() } else { cj })
                    .collect();
                let max_modulus = coefficients.iter().map(Scalar::modulus).fold(0.0, f64::max);
                return Some(IlluminationWitness {
                    direction: 0,
                    step,
                    delta,
                    coefficients,
                    max_modulus,
                });
            }
        }
        t = t / two.clone();
    }
    None
}

/// First direction in `dirs` that illuminates `x`.
pub fn find_witness<S: Field>(
    x: &[S],
    dirs: &[Vec<S>],
    lambda: &[bool],
) -> Option<IlluminationWitness<S>> {
    find_witness_to_depth(x, dirs, lambda, MAX_STEP_EXPONENT)
}

pub fn find_witness_to_depth<S: Field>(
    x: &[S],
    dirs: &[Vec<S>],
    lambda: &[bool],
    depth: u32,
) -> Option<IlluminationWitness<S>> {
    dirs.iter().enumerate().find_map(|(i, v)| {
        illuminates_to_depth(x, v, lambda, depth).map(|mut w| {
            w.direction = i;
            w
        })
    })
}

/// A tested boundary point; `index[j]` selects the coefficient
/// `Field::unit(index[j], q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate<S> {
    pub index: Vec<u64>,
    pub point: Vec<S>,
}

#[derive(Clone, Debug)]
pub struct IlluminationReport<S> {
    pub field: FieldKind,
    pub resolution: u64,
    pub candidates: u64,
    pub illuminated: u64,
    /// Lexicographically first candidate without a witness at the tested
    /// steps. This is not a proof of non-illumination.
    pub first_failure: Option<Candidate<S>>,
}

impl<S> IlluminationReport<S> {
    pub fn passes(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn candidate<S: Field>(rank: u64, len: usize, q: u64) -> Candidate<S> {
    let radix = S::radix(q);
    let mut index = vec![0; len];
    let mut r = rank;
    for slot in index.iter_mut().rev() {
        *slot = r % radix;
        r /= radix;
    }
    let point = index.iter().map(|&i| S::unit(i, q)).collect();
    Candidate { index, point }
}

/// Checks every boundary point whose coefficients are all `Field::unit`
/// values: signs over the reals, `q`-th roots of unity over the complex
/// numbers.
pub fn verify_illumination<S: Field>(
    k: &CanonicalZonotope<S>,
    dirs: &[Vec<S>],
    q: u64,
) -> Result<IlluminationReport<S>, ZonotopeError> {
    verify_illumination_to_depth(k, dirs, q, MAX_STEP_EXPONENT)
}

pub fn verify_illumination_to_depth<S: Field>(
    k: &CanonicalZonotope<S>,
    dirs: &[Vec<S>],
    q: u64,
    depth: u32,
) -> Result<IlluminationReport<S>, ZonotopeError> {
    if S::KIND == FieldKind::Complex && q < 8 {
        return Err(ZonotopeError::Unsupported(
            "phase resolution must be at least 8".into(),
        ));
    }
    let len = k.generators.len();
    if let Some(bad) = dirs.iter().find(|d| d.len() != len) {
        return Err(ZonotopeError::Unsupported(format!(
            "direction has {} coefficients, expected {len}",
            bad.len()
        )));
    }
    let total = S::radix(q)
        .checked_pow(len as u32)
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| ZonotopeError::Unsupported("too many candidates".into()))?;
    let hits: Vec<bool> = (0..total)
        .into_par_iter()
        .map(|r| {
            find_witness_to_depth(&candidate::<S>(r, len, q).point, dirs, &k.lambda, depth)
                .is_some()
        })
        .collect();
    let illuminated = hits.iter().filter(|&&h| h).count() as u64;
    let first_failure = hits
        .iter()
        .position(|&h| !h)
        .map(|r| candidate(r as u64, len, q));
    Ok(IlluminationReport {
        field: S::KIND,
        resolution: q,
        candidates: total,
        illuminated,
        first_failure,
    })
}

/// Sampling of small generator entries for random test zonotopes.
pub trait RandomEntry: Sized {
    fn random<R: Rng>(rng: &mut R) -> Self;
}

impl RandomEntry for BigRational {
    fn random<R: Rng>(rng: &mut R) -> Self {
        BigRational::new(
            rng.gen_range(-6i64..=6).into(),
            rng.gen_range(1i64..=4).into(),
        )
    }
}

impl RandomEntry for Complex64 {
    fn random<R: Rng>(rng: &mut R) -> Self {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }
}

/// A random canonical zonotope: random basis, random `λ_1..λ_{n-2}`, and
/// `a_{n+1} = -Σ_{j<=n} λ_j a_j`.
pub fn random_canonical<S: Field + RandomEntry, R: Rng>(
    n: usize,
    rng: &mut R,
) -> CanonicalZonotope<S> {
    assert!(n >= 2, "canonical zonotopes need n >= 2");
    loop {
        let basis: Vec<Vec<S>> = (0..n)
            .map(|_| (0..n).map(|_| S::random(rng)).collect())
            .collect();
        let mut lambda: Vec<bool> = (0..n - 2).map(|_| rng.gen_bool(0.5)).collect();
        lambda.extend([true, true, true]);
        let coeffs: Vec<S> = lambda[..n]
            .iter()
            .map(|&l| if l { -S::one() } else { S::zero() })
            .collect();
        let last = combine(&coeffs, &basis);
        let mut generators = basis;
        generators.push(last);
        if let Ok(k) = CanonicalZonotope::new(generators, lambda) {
            return k;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::rational;

    fn r(p: i64) -> BigRational {
        rational(p, 1)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_plane_reduction() {
        let g = vec![vec![r(1), r(0)], vec![r(0), r(1)], vec![r(1), r(1)]];
        let k = reduce_to_canonical(&g).unwrap();
        assert_eq!(k.lambda(), &[true, true, true]);
        assert_eq!(k.generators()[2], vec![r(-1), r(-1)]);
        assert_eq!(k.dependence_residual(), 0.0);
    }

    #[test]
    fn complex_plane_reduction() {
        let g = vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 1.0), c(0.0, 1.0)],
        ];
        let k = reduce_to_canonical(&g).unwrap();
        assert_eq!(k.lambda(), &[true, true, true]);
        for (a, b) in k.generators()[2].iter().zip([c(-1.0, 0.0), c(-1.0, 0.0)]) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(k.dependence_residual() < 1e-15);
    }

    #[test]
    fn parallel_generators_merge() {
        let g = vec![vec![r(1), r(0)], vec![r(0), r(1)], vec![r(2), r(0)]];
        assert_eq!(
            reduce_to_canonical(&g),
            Err(ZonotopeError::IsCubeOrPolydisc(2))
        );
        let g = vec![vec![r(1), r(0)], vec![r(2), r(0)], vec![r(-1), r(0)]];
        assert!(matches!(
            reduce_to_canonical(&g),
            Err(ZonotopeError::RankDeficient {
                rank: 1,
                dimension: 2
            })
        ));
    }

    #[test]
    fn reduction_prefers_the_densest_dependence() {
        // e1, e2, e3, e1+e2, e1+e2+e3: the last one gives four nonzeros
        let e = |v: [i64; 3]| v.iter().map(|&x| r(x)).collect::<Vec<_>>();
        let g = vec![
            e([1, 0, 0]),
            e([0, 1, 0]),
            e([0, 0, 1]),
            e([1, 1, 0]),
            e([1, 1, 1]),
        ];
        let k = reduce_to_canonical(&g).unwrap();
        assert_eq!(k.lambda(), &[true, true, true, true]);
        assert_eq!(k.source[3], 4);
        let g = vec![e([1, 0, 0]), e([0, 1, 0]), e([0, 0, 1]), e([0, 1, 1])];
        let k = reduce_to_canonical(&g).unwrap();
        assert_eq!(k.lambda(), &[false, true, true, true]);
        assert_eq!(k.source, vec![0, 1, 2, 3]);
    }

    #[test]
    fn canonical_checks() {
        let g = vec![vec![r(1), r(0)], vec![r(0), r(1)], vec![r(1), r(1)]];
        assert!(CanonicalZonotope::new(g.clone(), vec![true; 3]).is_err());
        let g = vec![vec![r(1), r(0)], vec![r(0), r(1)], vec![r(-1), r(-1)]];
        assert!(CanonicalZonotope::new(g.clone(), vec![true; 3]).is_ok());
        assert!(CanonicalZonotope::new(g, vec![true, true, false]).is_err());
    }

    #[test]
    fn complex_entries_parse() {
        assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("-2.5+3i").unwrap(), c(-2.5, 3.0));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e-3i").unwrap(), c(1e-3, 2e-3));
        assert_eq!(parse_complex("1/2+1/4i").unwrap(), c(0.5, 0.25));
        assert!(parse_complex("x").is_err());
        for z in [c(0.1, -0.2), c(-3.0, 0.0), c(0.0, 1.0)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn generator_files_round_trip() {
        let text = "field=real n=2\n1,0\n0,1/2  # comment\n-1,-1/2\n";
        let g = parse_generators(text).unwrap();
        let Generators::Real { dimension, vectors } = &g else {
            panic!("expected real generators")
        };
        assert_eq!(*dimension, 2);
        assert_eq!(parse_generators(&write_generators(2, vectors)).unwrap(), g);
        let text = "field=complex n=2\n1,0\n0,1\ni,1+i\n";
        let Generators::Complex { vectors, .. } = parse_generators(text).unwrap() else {
            panic!("expected complex generators")
        };
        assert_eq!(vectors[2], vec![c(0.0, 1.0), c(1.0, 1.0)]);
        assert!(matches!(
            parse_generators("field=real n=2\n1,2,3\n"),
            Err(ZonotopeError::Syntax { line: 2, .. })
        ));
        assert!(parse_generators("field=quaternion n=2\n").is_err());
        let dirs = write_direction_vectors(2, &vectors);
        assert!(parse_generators(&dirs).is_err());
        assert!(matches!(
            parse_direction_vectors(&dirs),
            Ok(Generators::Complex { .. })
        ));
    }

    #[test]
    fn degenerate_lambda_is_a_coordinate_check() {
        let x = vec![r(1), r(-1)];
        let v = vec![rational(-1, 2), rational(1, 2)];
        let w = illuminates_canonical(&x, &v, &[false, false]).unwrap();
        assert_eq!(w.step, 0);
        assert_eq!(w.coefficients, vec![rational(1, 2), rational(-1, 2)]);
        assert!(illuminates_canonical(&x, &[r(1), r(0)], &[false, false]).is_none());
    }

    #[test]
    fn candidates_enumerate_lexicographically() {
        let cand: Candidate<Complex64> = candidate(25, 3, 24);
        assert_eq!(cand.index, vec![0, 1, 1]);
        let cand: Candidate<BigRational> = candidate(5, 3, 24);
        assert_eq!(cand.point, vec![r(-1), r(1), r(-1)]);
    }
}
