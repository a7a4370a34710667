//! Fractional covering numbers of `T^n` by open cubes.
//!
//! The closed form is `(1/eps)^n`, attained by the uniform measure. The LP
//! relaxation places weights on the grid `(Z/k)^n` and asks for window mass
//! at least one at every cell center `(j + 1/2)/k`; with `k eps` an integer
//! those centers represent every cell of the arrangement.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::simplex::{solve_packing, SolverFailure};
use crate::torus::format_rational;

pub const MAX_LP_POINTS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FractionalError {
    #[error("side must lie strictly between 0 and 1, got {0}")]
    InvalidSide(String),
    #[error("LP with {0} grid points exceeds the dense solver limit of {MAX_LP_POINTS}")]
    TooLarge(usize),
    #[error("LP solver failure: {0}")]
    SolverFailure(#[from] SolverFailure),
}

fn check_side(eps: &BigRational) -> Result<(), FractionalError> {
    if eps.is_positive() && eps < &BigRational::one() {
        Ok(())
    } else {
        Err(FractionalError::InvalidSide(format_rational(eps)))
    }
}

/// `(1/eps)^n`.
pub fn fractional_covering_number(
    n: usize,
    eps: &BigRational,
) -> Result<BigRational, FractionalError> {
    check_side(eps)?;
    Ok(num_traits::pow(eps.recip(), n))
}

/// Weights on the grid `(Z/k)^n`, indexed lexicographically (first axis most
/// significant).
#[derive(Clone, Debug, PartialEq)]
pub struct GridMeasure {
    dimension: usize,
    resolution: usize,
    weights: Vec<f64>,
}

impl GridMeasure {
    pub fn new(dimension: usize, resolution: usize, weights: Vec<f64>) -> Self {
        assert_eq!(weights.len(), resolution.pow(dimension as u32));
        assert!(
            weights.iter().all(|&w| w >= 0.0),
            "weights must be non-negative"
        );
        GridMeasure {
            dimension,
            resolution,
            weights,
        }
    }

    pub fn uniform(dimension: usize, resolution: usize, each: f64) -> Self {
        Self::new(
            dimension,
            resolution,
            vec![each; resolution.pow(dimension as u32)],
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Mass of `x - (0, eps)^n` for `x` at the center of cell `cell` of the
    /// grid refined by `refine`.
    pub fn window_mass_at_center(&self, eps: &BigRational, refine: usize, cell: &[usize]) -> f64 {
        let axis = AxisPattern::new(self.resolution, refine, eps);
        let mut total = 0.0;
        for (i, &w) in self.weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let mut idx = i;
            let mut inside = true;
            for &c in cell.iter().rev() {
                let v = idx % self.resolution;
                idx /= self.resolution;
                if !axis.contains(v, c) {
                    inside = false;
                    break;
                }
            }
            if inside {
                total += w;
            }
        }
        total
    }
}

/// Which grid bases `v / k` have the cell center `(c + 1/2)/(k r)` inside
/// their arc `v/k + (0, eps)`.
struct AxisPattern {
    k: usize,
    refine: usize,
    /// hit[offset] for offset = (c - v r) mod (k r)
    hit: Vec<bool>,
}

impl AxisPattern {
    fn new(k: usize, refine: usize, eps: &BigRational) -> Self {
        let kr = k * refine;
        let hit = (0..kr)
            .map(|off| {
                let d = BigRational::new(BigInt::from(2 * off + 1), BigInt::from(2 * kr));
                &d < eps
            })
            .collect();
        AxisPattern { k, refine, hit }
    }

    fn contains(&self, v: usize, c: usize) -> bool {
        let kr = self.k * self.refine;
        self.hit[(c + kr - v * self.refine % kr) % kr]
    }
}

#[derive(Clone, Debug)]
pub struct UniformCertificate {
    pub total_mass: BigRational,
    /// `eps^n * eps^-n`, computed exactly.
    pub window_mass: BigRational,
    /// Window masses at the sampled base points, computed from the exact
    /// volume of the wrapped window.
    pub sampled: Vec<BigRational>,
}

impl UniformCertificate {
    pub fn passes(&self) -> bool {
        self.window_mass.is_one() && self.sampled.iter().all(One::is_one)
    }
}

/// Length of the wrapped arc `x - (0, eps)` inside `[0, 1)`, computed by
/// splitting at 0.
fn wrapped_arc_length(x: &BigRational, eps: &BigRational) -> BigRational {
    let lo = x - eps;
    if lo.is_negative() {
        // pieces [0, x) and [1 + lo, 1)
        x.clone() + (BigRational::one() - (BigRational::one() + lo))
    } else {
        x - lo
    }
}

/// Checks that the uniform measure of total mass `eps^-n` gives every window
/// `x - (0, eps)^n` mass exactly one, analytically and on 100 random rational
/// points.
pub fn uniform_measure_certificate(
    n: usize,
    eps: &BigRational,
    seed: u64,
) -> Result<UniformCertificate, FractionalError> {
    let total = fractional_covering_number(n, eps)?;
    let window = num_traits::pow(eps.clone(), n) * &total;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let sampled = (0..100)
        .map(|_| {
            let vol = (0..n).fold(BigRational::one(), |acc, _| {
                let q: i64 = rng.gen_range(1..=1000);
                let p: i64 = rng.gen_range(0..q);
                let x = BigRational::new(p.into(), q.into());
                acc * wrapped_arc_length(&x, eps)
            });
            vol * &total
        })
        .collect();
    Ok(UniformCertificate {
        total_mass: total,
        window_mass: window,
        sampled,
    })
}

#[derive(Clone, Debug)]
pub struct LpReport {
    pub dimension: usize,
    pub eps: BigRational,
    pub resolution: usize,
    /// `k * eps` is an integer.
    pub aligned: bool,
    pub primal_value: f64,
    pub dual_value: f64,
    pub measure: GridMeasure,
    pub iterations: usize,
}

impl LpReport {
    pub fn gap(&self) -> f64 {
        self.primal_value - self.dual_value
    }

    /// CSV row `n,eps,closed_form,lp_value,gap`.
    pub fn csv_row(&self) -> String {
        let closed = num_traits::pow(self.eps.recip(), self.dimension);
        format!(
            "{},{},{},{},{:e}",
            self.dimension,
            format_rational(&self.eps),
            format_rational(&closed),
            self.primal_value,
            self.gap()
        )
    }
}

pub const CSV_HEADER: &str = "n,eps,closed_form,lp_value,gap";

/// Solves the grid LP relaxation `min sum w_v` subject to window mass `>= 1`
/// at every cell center.
pub fn lp_fractional_cover(
    n: usize,
    eps: &BigRational,
    k: usize,
) -> Result<LpReport, FractionalError> {
    check_side(eps)?;
    let points = k
        .checked_pow(n as u32)
        .filter(|&p| p <= MAX_LP_POINTS && k > 0)
        .ok_or(FractionalError::TooLarge(k.saturating_pow(n as u32)))?;
    let axis = AxisPattern::new(k, 1, eps);
    let digits = |mut i: usize| {
        let mut d = vec![0; n];
        for slot in d.iter_mut().rev() {
            *slot = i % k;
            i /= k;
        }
        d
    };
    // rows: bases v, columns: cell centers x
    let matrix: Vec<Vec<f64>> = (0..points)
        .map(|v| {
            let vd = digits(v);
            (0..points)
                .map(|x| {
                    let xd = digits(x);
                    if vd.iter().zip(&xd).all(|(&a, &b)| axis.contains(a, b)) {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let sol = solve_packing(&matrix, 100_000)?;
    let aligned = (eps * BigRational::from_integer(BigInt::from(k))).is_integer();
    Ok(LpReport {
        dimension: n,
        eps: eps.clone(),
        resolution: k,
        aligned,
        primal_value: sol.primal_value,
        dual_value: sol.dual_value,
        measure: GridMeasure::new(n, k, sol.w),
        iterations: sol.iterations,
    })
}

#[derive(Clone, Debug)]
pub struct ConvolutionReport {
    /// `mu * 1_{(0,eps)^n}` integrated over the torus: `total mass * eps^n`.
    pub integral: f64,
    /// Average window mass over the cell centers of the refined grid.
    pub discrete_average: f64,
    pub min_window: f64,
}

/// Discrete check of `mu * 1_{(0,eps)^n} >= 1` for a grid measure: averages
/// the window mass over cell centers of the grid refined by `refine`.
pub fn convolution_check(
    measure: &GridMeasure,
    eps: &BigRational,
    refine: usize,
) -> ConvolutionReport {
    let n = measure.dimension;
    let side = measure.resolution * refine;
    let cells = side.pow(n as u32);
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut cell = vec![0usize; n];
    for i in 0..cells {
        let mut idx = i;
        for slot in cell.iter_mut().rev() {
            *slot = idx % side;
            idx /= side;
        }
        let m = measure.window_mass_at_center(eps, refine, &cell);
        sum += m;
        min = min.min(m);
    }
    let eps_f = eps.to_f64().unwrap_or(f64::NAN);
    ConvolutionReport {
        integral: measure.total_mass() * eps_f.powi(n as i32),
        discrete_average: sum / cells as f64,
        min_window: if cells == 0 { 0.0 } else { min },
    }
}

impl GridMeasure {
    /// Whether every window at a cell center has mass at least `1 - tol`.
    pub fn is_feasible(&self, eps: &BigRational, tol: f64) -> bool {
        convolution_check(self, eps, 1).min_window >= 1.0 - tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::rational;

    #[test]
    fn closed_forms() {
        assert_eq!(
            fractional_covering_number(2, &rational(1, 2)).unwrap(),
            rational(4, 1)
        );
        assert_eq!(
            fractional_covering_number(1, &rational(1, 3)).unwrap(),
            rational(3, 1)
        );
        assert_eq!(
            fractional_covering_number(3, &rational(1, 2)).unwrap(),
            rational(8, 1)
        );
        assert_eq!(
            fractional_covering_number(2, &rational(2, 5)).unwrap(),
            rational(25, 4)
        );
        assert!(fractional_covering_number(2, &rational(1, 1)).is_err());
    }

    #[test]
    fn uniform_certificate() {
        for (n, p, q) in [(2, 1, 2), (1, 1, 3), (3, 1, 2), (2, 3, 7)] {
            let c = uniform_measure_certificate(n, &rational(p, q), 1).unwrap();
            assert!(c.passes(), "n={n} eps={p}/{q}");
            assert_eq!(c.sampled.len(), 100);
        }
        let c = uniform_measure_certificate(3, &rational(1, 2), 1).unwrap();
        assert_eq!(c.total_mass, rational(8, 1));
    }

    #[test]
    fn wrapped_arc() {
        assert_eq!(
            wrapped_arc_length(&rational(1, 10), &rational(1, 2)),
            rational(1, 2)
        );
        assert_eq!(
            wrapped_arc_length(&rational(7, 10), &rational(1, 2)),
            rational(1, 2)
        );
        assert_eq!(
            wrapped_arc_length(&rational(0, 1), &rational(1, 3)),
            rational(1, 3)
        );
    }

    #[test]
    fn lp_small_cases() {
        let r = lp_fractional_cover(1, &rational(1, 2), 4).unwrap();
        assert!(r.aligned);
        assert!((r.primal_value - 2.0).abs() < 1e-9);
        let r = lp_fractional_cover(2, &rational(1, 2), 4).unwrap();
        assert!((r.primal_value - 4.0).abs() < 1e-9);
        let r = lp_fractional_cover(2, &rational(1, 2), 6).unwrap();
        assert!((r.primal_value - 4.0).abs() < 1e-6);
        assert!(r.gap() >= 0.0 && r.gap() < 1e-6);
        assert_eq!(r.csv_row().split(',').nth(2), Some("4/1"));
    }

    #[test]
    fn lp_unaligned_on_the_circle() {
        // each center lies in exactly c windows, c = #{o : (2o+1)/(2k) < eps},
        // so the circulant LP has value k / c
        let eps = rational(2, 5);
        for k in 5..=15usize {
            let c = (0..k).filter(|&o| (2 * o + 1) * 5 < 4 * k).count();
            let r = lp_fractional_cover(1, &eps, k).unwrap();
            assert_eq!(r.aligned, k % 5 == 0);
            assert!((r.primal_value - k as f64 / c as f64).abs() < 1e-9, "k={k}");
            assert!(r.gap().abs() < 1e-9);
        }
    }

    #[test]
    fn convolution_inequality_for_lp_measures() {
        let eps = rational(1, 2);
        let r = lp_fractional_cover(2, &eps, 4).unwrap();
        assert!(r.measure.is_feasible(&eps, 1e-9));
        let c = convolution_check(&r.measure, &eps, 2);
        assert!(c.integral >= 1.0 - 1e-9);
        assert!((c.discrete_average - c.integral).abs() < 1e-9);
        // an infeasible measure fails
        let sparse = GridMeasure::uniform(2, 4, 0.1);
        assert!(!sparse.is_feasible(&eps, 1e-9));
    }

    #[test]
    fn too_large_lp_is_rejected() {
        assert!(matches!(
            lp_fractional_cover(3, &rational(1, 2), 20),
            Err(FractionalError::TooLarge(8000))
        ));
    }
}
