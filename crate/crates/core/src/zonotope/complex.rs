//! Illuminating set of size `2(2^n - 1)` for canonical complex zonotopes,
//! built from two copies of a minimal illuminating set of `D^{n-1}`.

use num_complex::Complex64;

use super::{CanonicalZonotope, ZonotopeError};
use crate::covering::construct_cover;
use crate::polydisc::direction_set_from_cover;

/// Unit directions illuminating `D^m`, from the cube cover of side `1/2`.
pub fn polydisc_phases(m: usize) -> Vec<Vec<Complex64>> {
    let cover = construct_cover(m, 2).expect("m >= 1");
    direction_set_from_cover(&cover)
        .expect("cover has side 1/2")
        .iter()
        .map(|d| d.to_complex())
        .collect()
}

fn check_dimension(k: &CanonicalZonotope<Complex64>) -> Result<usize, ZonotopeError> {
    let n = k.dimension();
    if n < 2 {
        return Err(ZonotopeError::NotCanonical(
            "dimension must be at least 2".into(),
        ));
    }
    Ok(n)
}

/// `V_1`: polydisc directions on `a_1, …, a_{n-1}`.
pub fn complex_v1(k: &CanonicalZonotope<Complex64>) -> Result<Vec<Vec<Complex64>>, ZonotopeError> {
    let n = check_dimension(k)?;
    let zero = Complex64::new(0.0, 0.0);
    Ok(polydisc_phases(n - 1)
        .into_iter()
        .map(|mut w| {
            w.extend([zero, zero]);
            w
        })
        .collect())
}

/// `V_1 ∪ V_3`, where `V_3` takes polydisc directions `w` on
/// `a_1, …, a_{n-2}, a_n` and moves them to
/// `w_1 a_1 + … + w_{n-2} a_{n-2} + w_n a_n - w_n a_{n+1}`.
pub fn complex_illuminating_set(
    k: &CanonicalZonotope<Complex64>,
) -> Result<Vec<Vec<Complex64>>, ZonotopeError> {
    let n = check_dimension(k)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut dirs = complex_v1(k)?;
    for w in polydisc_phases(n - 1) {
        let last = w[n - 2];
        let mut v = w[..n - 2].to_vec();
        v.extend([zero, last, -last]);
        dirs.push(v);
    }
    Ok(dirs)
}
