//! Fractional illumination of canonical complex zonotopes: each direction
//! `y` of the real construction is smeared over the half circle
//! `{ e^{iθ} y : 0 < θ < π }` with unit mass.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::real::real_illuminating_set;
use super::{find_witness, CanonicalZonotope, ZonotopeError};

#[derive(Clone, Debug)]
pub struct FractionalMeasure {
    /// Real coefficient vectors `y`, one unit-mass arc each.
    pub arcs: Vec<Vec<BigRational>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaCoverage {
    pub samples: usize,
    pub illuminated: usize,
}

impl ThetaCoverage {
    pub fn fraction(&self) -> f64 {
        self.illuminated as f64 / self.samples as f64
    }
}

impl FractionalMeasure {
    pub fn total_mass(&self) -> usize {
        self.arcs.len()
    }

    /// The directions `e^{iθ} y` for every arc.
    pub fn directions_at(&self, theta: f64) -> Vec<Vec<Complex64>> {
        let rot = Complex64::from_polar(1.0, theta);
        self.arcs
            .iter()
            .map(|y| {
                y.iter()
                    .map(|v| rot * v.to_f64().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect()
    }

    /// Fraction of the angles `θ_k = (k + 1/2)π/samples` at which some
    /// `e^{iθ_k} y` illuminates `x`.
    pub fn theta_coverage(
        &self,
        k: &CanonicalZonotope<Complex64>,
        x: &[Complex64],
        samples: usize,
    ) -> ThetaCoverage {
        let illuminated = (0..samples)
            .filter(|&s| {
                let theta = (s as f64 + 0.5) * PI / samples as f64;
                find_witness(x, &self.directions_at(theta), k.lambda()).is_some()
            })
            .count();
        ThetaCoverage {
            samples,
            illuminated,
        }
    }
}

/// The half-circle measure built on the real construction for the same
/// generators; its total mass is `3·2^{n-2}`.
pub fn fractional_measure(
    k: &CanonicalZonotope<Complex64>,
) -> Result<FractionalMeasure, ZonotopeError> {
    let n = k.dimension();
    // the real construction depends only on n and λ, not on the generators
    let e = |i: usize| -> Vec<BigRational> {
        (0..n)
            .map(|j| BigRational::from_integer(i64::from(i == j).into()))
            .collect()
    };
    let mut gens: Vec<Vec<BigRational>> = (0..n).map(e).collect();
    let last: Vec<BigRational> = (0..n)
        .map(|j| BigRational::from_integer((-i64::from(k.lambda()[j])).into()))
        .collect();
    gens.push(last);
    let real = CanonicalZonotope::new(gens, k.lambda().to_vec())?;
    Ok(FractionalMeasure {
        arcs: real_illuminating_set(&real)?,
    })
}
