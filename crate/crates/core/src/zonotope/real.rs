//! Illuminating set `F + V` of size `3·2^{n-2}` for canonical real
//! zonotopes, with the explicit witnesses of its correctness.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{CanonicalZonotope, IlluminationWitness, ZonotopeError};
use crate::torus::rational;

fn third(p: i64) -> BigRational {
    rational(p, 3)
}

/// The three directions `(a_{n-1} - a_n)/3`, `(a_n - a_{n+1})/3`,
/// `(a_{n+1} - a_{n-1})/3` on the last three coefficients.
fn v_tail(k: usize) -> [BigRational; 3] {
    match k {
        0 => [third(1), third(-1), third(0)],
        1 => [third(0), third(1), third(-1)],
        _ => [third(-1), third(0), third(1)],
    }
}

fn sign_bits(n: usize, bits: usize) -> Vec<BigRational> {
    (0..n - 2)
        .map(|j| {
            if bits >> (n - 3 - j) & 1 == 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            }
        })
        .collect()
}

fn direction(n: usize, bits: usize, k: usize) -> Vec<BigRational> {
    let mut v = sign_bits(n, bits);
    v.extend(v_tail(k));
    v
}

/// Coefficient vectors of `Y = F + V`, ordered by the signs on
/// `a_1..a_{n-2}` (`+` first) and then by the element of `V`.
pub fn real_illuminating_set(
    k: &CanonicalZonotope<BigRational>,
) -> Result<Vec<Vec<BigRational>>, ZonotopeError> {
    let n = k.dimension();
    if n < 2 {
        return Err(ZonotopeError::NotCanonical(
            "dimension must be at least 2".into(),
        ));
    }
    Ok((0..1usize << (n - 2))
        .flat_map(|bits| (0..3).map(move |v| direction(n, bits, v)))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofCase {
    /// `x_{n-1} = x_n = x_{n+1}`.
    Equal,
    /// Exactly one of the last three signs differs; the index (among
    /// `n-1, n, n+1`, zero-based) of that one.
    Odd(usize),
}

/// The witness of the construction for the sign vector `x`: `f` cancels
/// the signs on `a_1..a_{n-2}`, `t = 1`, and the refinement is `-α/2` when
/// the last three signs agree, `α/6` with a matched `v` otherwise.
pub fn proof_witness(
    k: &CanonicalZonotope<BigRational>,
    x: &[BigRational],
) -> Result<(ProofCase, IlluminationWitness<BigRational>), ZonotopeError> {
    let n = k.dimension();
    if x.len() != n + 1 || x.iter().any(|s| s.abs() != BigRational::one()) {
        return Err(ZonotopeError::Unsupported("expected n+1 signs".into()));
    }
    let tail = &x[n - 2..];
    let (case, alpha, v) = if tail[0] == tail[1] && tail[1] == tail[2] {
        (ProofCase::Equal, tail[0].clone(), 0)
    } else {
        // the odd sign is the one equal to the product of the three
        let product = &tail[0] * &tail[1] * &tail[2];
        let i = tail
            .iter()
            .position(|s| *s == product)
            .expect("two signs agree");
        let alpha = product;
        // the element of V whose coefficient at i is -α/3
        let target = -&alpha / BigRational::from_integer(3.into());
        let v = (0..3)
            .find(|&v| v_tail(v)[i] == target)
            .expect("each V entry occurs");
        (ProofCase::Odd(i), alpha, v)
    };
    let delta = match case {
        ProofCase::Equal => -&alpha / BigRational::from_integer(2.into()),
        ProofCase::Odd(_) => &alpha / BigRational::from_integer(6.into()),
    };
    // f has σ_j = -x_j
    let bits = x[..n - 2]
        .iter()
        .fold(0usize, |acc, s| acc << 1 | usize::from(s.is_positive()));
    let dir = direction(n, bits, v);
    let coefficients: Vec<BigRational> = x
        .iter()
        .zip(&dir)
        .zip(k.lambda())
        .map(|((xj, vj), &l)| if l { xj + vj + &delta } else { xj + vj })
        .collect();
    let max_modulus = coefficients
        .iter()
        .map(|y| num_traits::ToPrimitive::to_f64(&y.abs()).unwrap_or(f64::NAN))
        .fold(0.0, f64::max);
    let direction = bits * 3 + v;
    Ok((
        case,
        IlluminationWitness {
            direction,
            step: 0,
            delta,
            coefficients,
            max_modulus,
        },
    ))
}

/// Largest `|y_j|` of a witness, exactly.
pub fn exact_max_modulus(w: &IlluminationWitness<BigRational>) -> BigRational {
    w.coefficients
        .iter()
        .map(Signed::abs)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
}
