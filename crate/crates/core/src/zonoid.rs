//! Discrete complex zonoids `h_Z(θ) = Σ_k μ_k |⟨x_k, θ⟩|` on unit atoms.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::zonotope::{format_complex, linalg::greedy_basis, parse_complex};

pub const UNIT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZonoidError {
    #[error("atom {0} is not a unit vector")]
    NotUnit(usize),
    #[error("atom {0} has a non-positive weight")]
    NonPositiveWeight(usize),
    #[error("expected vectors of dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cluster {cluster} has diameter {diameter:e}, limit {limit:e}")]
    ClusterTooWide {
        cluster: usize,
        diameter: f64,
        limit: f64,
    },
    #[error("cluster {0} has no atoms")]
    EmptyCluster(usize),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// `⟨x, y⟩ = Σ x_j conj(y_j)`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// `Re ⟨x, y⟩`, the inner product of `C^n = R^{2n}`.
pub fn inner_real(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| a.re * b.re + a.im * b.im)
        .sum()
}

pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

fn distance(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub point: Vec<Complex64>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteZonoid {
    dimension: usize,
    atoms: Vec<Atom>,
}

impl DiscreteZonoid {
    pub fn new(dimension: usize, atoms: Vec<Atom>) -> Result<Self, ZonoidError> {
        for (k, a) in atoms.iter().enumerate() {
            if a.point.len() != dimension {
                return Err(ZonoidError::DimensionMismatch {
                    expected: dimension,
                    found: a.point.len(),
                });
            }
            if (norm(&a.point) - 1.0).abs() > UNIT_TOLERANCE {
                return Err(ZonoidError::NotUnit(k));
            }
            if !(a.weight > 0.0) {
                return Err(ZonoidError::NonPositiveWeight(k));
            }
        }
        Ok(DiscreteZonoid { dimension, atoms })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// The atoms span `C^n`, so the support function is positive away
    /// from zero.
    pub fn is_full_dimensional(&self) -> bool {
        let cols: Vec<Vec<Complex64>> = self.atoms.iter().map(|a| a.point.clone()).collect();
        greedy_basis(&cols, 1e-9).len() == self.dimension
    }
}

pub fn support_function(z: &DiscreteZonoid, theta: &[Complex64]) -> f64 {
    z.atoms
        .iter()
        .map(|a| a.weight * inner(&a.point, theta).norm())
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quadrature {
    Trapezoid,
    /// Composite Simpson on the arcs between sign changes of the integrand.
    SplitSimpson,
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let m = intervals.max(2) + intervals % 2;
    let h = (b - a) / m as f64;
    let inner: f64 = (1..m)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// `∫_0^{2π} |Re(e^{it} c)| dt` for the integrand given through `g`, where
/// `g(t) = Re(e^{it} c)` is sampled from vectors, not from `c`.
fn integrate_abs_sinusoid(g: &dyn Fn(f64) -> f64, c: Complex64, q: usize, rule: Quadrature) -> f64 {
    let f = |t: f64| g(t).abs();
    match rule {
        Quadrature::Trapezoid => {
            let h = TAU / q as f64;
            (0..q).map(|i| f(i as f64 * h)).sum::<f64>() * h
        }
        Quadrature::SplitSimpson => {
            if c.norm() == 0.0 {
                return simpson(&f, 0.0, TAU, q);
            }
            // Re(e^{it} c) = |c| cos(t + arg c) vanishes at t = π/2 - arg c + kπ
            let z0 = (PI / 2.0 - c.arg()).rem_euclid(PI);
            let mut cuts = vec![0.0, z0, z0 + PI, TAU];
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            cuts.windows(2)
                .map(|w| {
                    let n = ((w[1] - w[0]) / TAU * q as f64).round() as usize;
                    simpson(&f, w[0], w[1], n)
                })
                .sum()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityCheck {
    /// `|⟨x, y⟩_C|`.
    pub lhs: f64,
    /// `(1/4) ∫_0^{2π} |⟨e^{it} x, y⟩_R| dt` by quadrature.
    pub rhs: f64,
    pub error: f64,
}

/// Compares the complex inner product with the rotation average of real
/// inner products.
pub fn complex_real_identity_check(
    x: &[Complex64],
    y: &[Complex64],
    q: usize,
    rule: Quadrature,
) -> IdentityCheck {
    let lhs = inner(x, y).norm();
    let g = |t: f64| {
        let rot = Complex64::from_polar(1.0, t);
        let xr: Vec<Complex64> = x.iter().map(|v| rot * v).collect();
        inner_real(&xr, y)
    };
    let rhs = integrate_abs_sinusoid(&g, inner(x, y), q.max(2), rule) / 4.0;
    IdentityCheck {
        lhs,
        rhs,
        error: (lhs - rhs).abs(),
    }
}

/// `Σ μ_k |⟨x_k, θ⟩_R|` for a real zonoid of `C^n = R^{2n}`.
pub fn real_support(atoms: &[Atom], theta: &[Complex64]) -> f64 {
    atoms
        .iter()
        .map(|a| a.weight * inner_real(&a.point, theta).abs())
        .sum()
}

/// `(1/2π) ∫_0^{2π} h(e^{it} θ) dt` for the real support function `h`.
pub fn rotation_averaged_real_support(atoms: &[Atom], theta: &[Complex64], q: usize) -> f64 {
    atoms
        .iter()
        .map(|a| {
            let g = |t: f64| {
                let rot = Complex64::from_polar(1.0, t);
                let th: Vec<Complex64> = theta.iter().map(|v| rot * v).collect();
                inner_real(&a.point, &th)
            };
            // ⟨x, e^{it}θ⟩_R = Re(e^{-it}⟨x,θ⟩): same zeros as e^{it} conj(c)
            let c = inner(&a.point, theta).conj();
            a.weight * integrate_abs_sinusoid(&g, c, q, Quadrature::SplitSimpson)
        })
        .sum::<f64>()
        / TAU
}

/// The complex zonoid whose support function is the rotation average of
/// the real zonoid with the given atoms: weights scale by `4/(2π)`.
pub fn rotation_average(
    dimension: usize,
    real_atoms: &[Atom],
) -> Result<DiscreteZonoid, ZonoidError> {
    let atoms = real_atoms
        .iter()
        .map(|a| Atom {
            point: a.point.clone(),
            weight: a.weight * 4.0 / TAU,
        })
        .collect();
    DiscreteZonoid::new(dimension, atoms)
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Deterministic low-discrepancy points on the unit sphere of `C^n`: Halton
/// points pushed through Box–Muller and normalized. Supports `n <= 8`.
pub fn sphere_sample(n: usize, count: usize) -> Vec<Vec<Complex64>> {
    assert!(
        n >= 1 && 2 * n <= PRIMES.len(),
        "sphere sampling supports 1 <= n <= 8"
    );
    (1..=count as u64)
        .map(|i| {
            let v: Vec<Complex64> = (0..n)
                .map(|j| {
                    let u1 = radical_inverse(i, PRIMES[2 * j]);
                    let u2 = radical_inverse(i, PRIMES[2 * j + 1]);
                    let r = (-2.0 * u1.ln()).sqrt();
                    Complex64::from_polar(r, TAU * u2)
                })
                .collect();
            let s = norm(&v);
            v.into_iter().map(|z| z / s).collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Extraction {
    /// Generators `a_1, …, a_{n+1}` of the zonotope `K`.
    pub zonotope: Vec<Vec<Complex64>>,
    /// `Z_1 / m`, whose support function approximates `h_K`.
    pub scaled_summand: DiscreteZonoid,
    /// `m = min_j μ(U_j)`.
    pub m: f64,
    /// Cluster index of each atom.
    pub assignment: Vec<usize>,
    /// Diameter of each cluster together with its center.
    pub diameters: Vec<f64>,
    /// `max_θ |h_{Z_1/m}(θ) - h_K(θ)|` over `samples` unit vectors.
    pub hausdorff_estimate: f64,
    pub samples: usize,
    /// `h_{Z_1} <= h_Z` checked on the weights and on the sample.
    pub summand_ok: bool,
    pub delta: f64,
}

impl Extraction {
    pub fn within_delta(&self) -> bool {
        self.hausdorff_estimate < self.delta
    }
}

/// Splits the atoms of `z` among the nearest of the unit centers, and
/// compares the reweighted summand with the zonotope on the centers.
pub fn summand_extraction(
    z: &DiscreteZonoid,
    centers: &[Vec<Complex64>],
    delta: f64,
    samples: usize,
) -> Result<Extraction, ZonoidError> {
    let n = z.dimension;
    for (j, c) in centers.iter().enumerate() {
        if c.len() != n {
            return Err(ZonoidError::DimensionMismatch {
                expected: n,
                found: c.len(),
            });
        }
        if (norm(c) - 1.0).abs() > UNIT_TOLERANCE {
            return Err(ZonoidError::NotUnit(j));
        }
    }
    let assignment: Vec<usize> = z
        .atoms
        .iter()
        .map(|a| {
            (0..centers.len())
                .min_by(|&i, &j| {
                    distance(&a.point, &centers[i]).total_cmp(&distance(&a.point, &centers[j]))
                })
                .unwrap_or(0)
        })
        .collect();
    let limit = delta / centers.len() as f64;
    let mut masses = vec![0.0; centers.len()];
    let mut diameters = vec![0.0f64; centers.len()];
    for j in 0..centers.len() {
        let mut members: Vec<&[Complex64]> = vec![&centers[j]];
        for (k, a) in z.atoms.iter().enumerate() {
            if assignment[k] == j {
                masses[j] += a.weight;
                members.push(&a.point);
            }
        }
        if members.len() == 1 {
            return Err(ZonoidError::EmptyCluster(j));
        }
        for (i, p) in members.iter().enumerate() {
            for q in &members[i + 1..] {
                diameters[j] = diameters[j].max(distance(p, q));
            }
        }
        if diameters[j] >= limit {
            return Err(ZonoidError::ClusterTooWide {
                cluster: j,
                diameter: diameters[j],
                limit,
            });
        }
    }
    let m = masses.iter().copied().fold(f64::INFINITY, f64::min);
    // Z_1 carries μ_k m / μ(U_j); dividing by m leaves μ_k / μ(U_j)
    let summand_weights: Vec<f64> = z
        .atoms
        .iter()
        .zip(&assignment)
        .map(|(a, &j)| a.weight * m / masses[j])
        .collect();
    let mut summand_ok = summand_weights
        .iter()
        .zip(&z.atoms)
        .all(|(w, a)| *w <= a.weight * (1.0 + 1e-12));
    let scaled_atoms: Vec<Atom> = z
        .atoms
        .iter()
        .zip(&assignment)
        .map(|(a, &j)| Atom {
            point: a.point.clone(),
            weight: a.weight / masses[j],
        })
        .collect();
    let thetas = sphere_sample(n, samples);
    let (estimate, sample_ok) = thetas
        .par_iter()
        .map(|th| {
            // per cluster Σ_k w_k (|⟨x_k,θ⟩| - |⟨a_j,θ⟩|), exact zero on a_j
            let mut diff = vec![0.0; centers.len()];
            let mut h_z1 = 0.0;
            let mut h_z = 0.0;
            for (k, a) in z.atoms.iter().enumerate() {
                let j = assignment[k];
                let v = inner(&a.point, th).norm();
                diff[j] += scaled_atoms[k].weight * (v - inner(&centers[j], th).norm());
                h_z1 += summand_weights[k] * v;
                h_z += a.weight * v;
            }
            let d: f64 = diff.iter().sum();
            (d.abs(), h_z1 <= h_z * (1.0 + 1e-12))
        })
        .reduce(|| (0.0, true), |a, b| (a.0.max(b.0), a.1 && b.1));
    summand_ok &= sample_ok;
    Ok(Extraction {
        zonotope: centers.to_vec(),
        scaled_summand: DiscreteZonoid::new(n, scaled_atoms)?,
        m,
        assignment,
        diameters,
        hausdorff_estimate: estimate,
        samples,
        summand_ok,
        delta,
    })
}

fn parse_vector(text: &str, n: usize, line: usize) -> Result<Vec<Complex64>, ZonoidError> {
    let v = text
        .split(',')
        .map(|e| parse_complex(e.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|message| ZonoidError::Syntax { line, message })?;
    if v.len() != n {
        return Err(ZonoidError::Syntax {
            line,
            message: format!("expected {n} entries, found {}", v.len()),
        });
    }
    Ok(v)
}

fn parse_kind(text: &str, kind: &str) -> Result<(usize, Vec<(usize, String)>), ZonoidError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim().to_string()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or(ZonoidError::Syntax {
        line: 1,
        message: "missing header".into(),
    })?;
    let bad = |message: String| ZonoidError::Syntax { line: hl, message };
    let mut found_kind = None;
    let mut n = None;
    for tok in header.split_whitespace() {
        match tok.split_once('=') {
            Some(("kind", k)) => found_kind = Some(k.to_string()),
            Some(("n", v)) => n = v.parse::<usize>().ok().filter(|&n| n > 0),
            _ => return Err(bad(format!("unexpected header token {tok:?}"))),
        }
    }
    if found_kind.as_deref() != Some(kind) {
        return Err(bad(format!("expected kind={kind}")));
    }
    let n = n.ok_or_else(|| bad("missing n=<positive int>".into()))?;
    Ok((n, lines.collect()))
}

/// Zonoid files: header `kind=zonoid n=<int>`, then one atom per line as
/// `weight: entry,entry,…`.
pub fn parse_zonoid(text: &str) -> Result<DiscreteZonoid, ZonoidError> {
    let (n, lines) = parse_kind(text, "zonoid")?;
    let atoms = lines
        .into_iter()
        .map(|(line, l)| {
            let (w, v) = l.split_once(':').ok_or(ZonoidError::Syntax {
                line,
                message: "expected weight: vector".into(),
            })?;
            let weight = w.trim().parse::<f64>().map_err(|_| ZonoidError::Syntax {
                line,
                message: format!("bad weight {w:?}"),
            })?;
            Ok(Atom {
                point: parse_vector(v, n, line)?,
                weight,
            })
        })
        .collect::<Result<Vec<_>, ZonoidError>>()?;
    DiscreteZonoid::new(n, atoms)
}

pub fn write_zonoid(z: &DiscreteZonoid) -> String {
    let mut out = format!("kind=zonoid n={}\n", z.dimension);
    for a in &z.atoms {
        let v: Vec<String> = a.point.iter().map(|c| format_complex(*c)).collect();
        let _ = writeln!(out, "{}: {}", a.weight, v.join(","));
    }
    out
}

/// Center files: header `kind=centers n=<int>`, one unit vector per line.
pub fn parse_centers(text: &str) -> Result<Vec<Vec<Complex64>>, ZonoidError> {
    let (n, lines) = parse_kind(text, "centers")?;
    lines
        .into_iter()
        .map(|(line, l)| parse_vector(&l, n, line))
        .collect()
}

pub fn write_centers(n: usize, centers: &[Vec<Complex64>]) -> String {
    let mut out = format!("kind=centers n={n}\n");
    for c in centers {
        let v: Vec<String> = c.iter().map(|z| format_complex(*z)).collect();
        let _ = writeln!(out, "{}", v.join(","));
    }
    out
}
