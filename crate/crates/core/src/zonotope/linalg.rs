//! Small dense linear algebra over exact rationals and `f64` complex numbers.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Field operations plus a zero test, exact for rationals and relative to a
/// tolerance for floats.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_negligible(&self, tol: f64) -> bool;
    fn modulus(&self) -> f64;
    fn to_complex(&self) -> Complex64;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
    fn modulus(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::NAN)
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

pub fn max_modulus<S: Scalar>(vectors: &[Vec<S>]) -> f64 {
    vectors
        .iter()
        .flatten()
        .map(Scalar::modulus)
        .fold(0.0, f64::max)
}

/// Row echelon form of the `n × k` matrix whose columns are `cols`,
/// augmented by nothing. Returns the pivot column indices in order, chosen
/// greedily left to right.
pub fn greedy_basis<S: Scalar>(cols: &[Vec<S>], tol: f64) -> Vec<usize> {
    let Some(n) = cols.first().map(Vec::len) else {
        return Vec::new();
    };
    // orthogonalize incrementally: keep a reduced copy of the chosen columns
    let mut reduced: Vec<(usize, Vec<S>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, c) in cols.iter().enumerate() {
        let mut v = c.clone();
        for (p, r) in &reduced {
            let f = v[*p].clone() / r[*p].clone();
            if !f.is_negligible(0.0) {
                for (a, b) in v.iter_mut().zip(r) {
                    *a = a.clone() - f.clone() * b.clone();
                }
            }
        }
        let pivot = (0..n)
            .filter(|&j| !v[j].is_negligible(tol))
            .max_by(|&a, &b| v[a].modulus().total_cmp(&v[b].modulus()));
        if let Some(p) = pivot {
            reduced.push((p, v));
            chosen.push(i);
            if chosen.len() == n {
                break;
            }
        }
    }
    chosen
}

/// Solves `sum_j c_j basis_j = target` for a square basis (columns).
/// Returns `None` if the basis is singular.
pub fn solve_in_basis<S: Scalar>(basis: &[Vec<S>], target: &[S], tol: f64) -> Option<Vec<S>> {
    let n = target.len();
    if basis.len() != n {
        return None;
    }
    // augmented matrix rows
    let mut m: Vec<Vec<S>> = (0..n)
        .map(|r| {
            let mut row: Vec<S> = basis.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !m[r][col].is_negligible(tol))
            .max_by(|&a, &b| m[a][col].modulus().total_cmp(&m[b][col].modulus()))?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let prow = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_negligible(0.0) {
                let f = row[col].clone();
                for (a, b) in row.iter_mut().zip(&prow) {
                    *a = a.clone() - f.clone() * b.clone();
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// `sum_j coeffs_j vectors_j`.
pub fn combine<S: Scalar>(coeffs: &[S], vectors: &[Vec<S>]) -> Vec<S> {
    let n = vectors.first().map_or(0, Vec::len);
    let mut out = vec![S::zero(); n];
    for (c, v) in coeffs.iter().zip(vectors) {
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() + c.clone() * x.clone();
        }
    }
    out
}

/// `Some(c)` with `b = c a` when the vectors are parallel.
pub fn parallel_factor<S: Scalar>(a: &[S], b: &[S], tol: f64) -> Option<S> {
    let p = (0..a.len())
        .filter(|&j| !a[j].is_negligible(tol))
        .max_by(|&x, &y| a[x].modulus().total_cmp(&a[y].modulus()))?;
    let c = b[p].clone() / a[p].clone();
    a.iter()
        .zip(b)
        .all(|(x, y)| (y.clone() - c.clone() * x.clone()).is_negligible(tol))
        .then_some(c)
}
