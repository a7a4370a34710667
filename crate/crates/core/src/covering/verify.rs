//! Finite decision procedure for "the open cubes cover `T^n`".
//!
//! Per axis `j` the arrangement of the cover is cut by the endpoint set
//! `E_j = {x_j} ∪ {x_j + eps}`. Inside every cell of the product arrangement
//! the set of cubes containing a point is constant, so it suffices to test one
//! point per cell: the endpoints themselves (closed cells) and the midpoint of
//! every arc between cyclically consecutive endpoints (open cells).
//!
//! Coordinates are kept symbolically as `r + (h/2) eps` with `r` rational and
//! `h` in `{0, 1, 2}`. In exact mode every comparison is exact; in float mode
//! only comparisons that involve `eps` itself go through `f64`, and those
//! closer than the margin to equality are inconclusive.

use std::cell::Cell;
use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{CoverCertificate, CoverError, CubeCover, Side, Verdict};
use crate::torus::{TorusPoint, UnitRational};

/// A grid coordinate `rational + (side_halves / 2) * eps`, in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridCoordinate {
    pub rational: BigRational,
    pub side_halves: i8,
}

impl GridCoordinate {
    fn exact(r: BigRational) -> Self {
        GridCoordinate {
            rational: r,
            side_halves: 0,
        }
    }

    pub fn to_f64(&self, side: f64) -> f64 {
        self.rational.to_f64().unwrap_or(f64::NAN) + f64::from(self.side_halves) * side / 2.0
    }

    pub fn to_exact(&self, side: &Side) -> Option<UnitRational> {
        match (self.side_halves, side) {
            (0, _) => Some(UnitRational::wrap(self.rational.clone())),
            (h, Side::Exact(eps)) => Some(UnitRational::wrap(
                &self.rational + eps * BigRational::new(h.into(), 2.into()),
            )),
            _ => None,
        }
    }
}

/// An uncovered point found on the arrangement grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub coords: Vec<GridCoordinate>,
    /// The point itself, when it is rational (always in exact mode).
    pub exact: Option<TorusPoint>,
    pub approx: Vec<f64>,
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.exact {
            Some(p) => write!(f, "{p}"),
            None => {
                let parts: Vec<String> = self.approx.iter().map(|v| format!("{v:.12}")).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

#[derive(Debug)]
struct Inconclusive;

/// Decides the sign of `r + (h/2) eps`.
struct SignOracle<'a> {
    side: &'a Side,
}

impl SignOracle<'_> {
    fn sign(&self, r: &BigRational, halves: i8) -> Result<Ordering, Inconclusive> {
        if halves == 0 {
            return Ok(sign_of(r));
        }
        match self.side {
            Side::Exact(eps) => {
                let v = r + eps * BigRational::new(halves.into(), 2.into());
                Ok(sign_of(&v))
            }
            Side::Float { value, margin } => {
                let v = r.to_f64().unwrap_or(f64::NAN) + f64::from(halves) * value / 2.0;
                if !v.is_finite() || v.abs() < *margin {
                    Err(Inconclusive)
                } else if v > 0.0 {
                    Ok(Ordering::Greater)
                } else {
                    Ok(Ordering::Less)
                }
            }
        }
    }

    /// Compares two grid coordinates as real numbers.
    fn cmp(&self, a: &GridCoordinate, b: &GridCoordinate) -> Result<Ordering, Inconclusive> {
        self.sign(&(&a.rational - &b.rational), a.side_halves - b.side_halves)
    }

    /// Brings a coordinate known to lie in `[0, 2)` back into `[0, 1)`.
    fn reduce(&self, mut c: GridCoordinate) -> Result<GridCoordinate, Inconclusive> {
        if self.sign(&(&c.rational - BigRational::one()), c.side_halves)? != Ordering::Less {
            c.rational -= BigRational::one();
        }
        Ok(c)
    }

    /// Whether `y` lies in the open arc `base + (0, eps)`: `Some(bool)` when
    /// decided, `None` when inconclusive.
    fn in_arc(&self, base: &BigRational, y: &GridCoordinate) -> Option<bool> {
        let mut w = &y.rational - base;
        let h = y.side_halves;
        match self.sign(&w, h) {
            Ok(Ordering::Less) => w += BigRational::one(),
            Ok(_) => {}
            Err(_) => return None,
        }
        let positive = match self.sign(&w, h) {
            Ok(o) => o == Ordering::Greater,
            Err(_) => return None,
        };
        if !positive {
            return Some(false);
        }
        match self.sign(&w, h - 2) {
            Ok(o) => Some(o == Ordering::Less),
            Err(_) => None,
        }
    }
}

fn sign_of(r: &BigRational) -> Ordering {
    if r.is_positive() {
        Ordering::Greater
    } else if r.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// Test coordinates for one axis: sorted distinct endpoints interleaved with
/// the midpoints of the arcs between consecutive endpoints.
fn axis_grid(
    oracle: &SignOracle<'_>,
    base_coords: &[&BigRational],
) -> Result<Vec<GridCoordinate>, Inconclusive> {
    let mut endpoints = Vec::with_capacity(2 * base_coords.len());
    for &x in base_coords {
        endpoints.push(GridCoordinate::exact(x.clone()));
        endpoints.push(oracle.reduce(GridCoordinate {
            rational: x.clone(),
            side_halves: 2,
        })?);
    }
    let failed = Cell::new(false);
    endpoints.sort_by(|a, b| match oracle.cmp(a, b) {
        Ok(o) => o,
        Err(_) => {
            failed.set(true);
            Ordering::Equal
        }
    });
    if failed.get() {
        return Err(Inconclusive);
    }
    let mut distinct: Vec<GridCoordinate> = Vec::with_capacity(endpoints.len());
    for e in endpoints {
        match distinct.last() {
            Some(last) if oracle.cmp(last, &e)? == Ordering::Equal => {}
            _ => distinct.push(e),
        }
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut grid = Vec::with_capacity(2 * distinct.len());
    for (i, e) in distinct.iter().enumerate() {
        grid.push(e.clone());
        let next = &distinct[(i + 1) % distinct.len()];
        let mut sum = &e.rational + &next.rational;
        if i + 1 == distinct.len() {
            sum += BigRational::one();
        }
        let mid = GridCoordinate {
            rational: sum * &half,
            side_halves: (e.side_halves + next.side_halves) / 2,
        };
        grid.push(oracle.reduce(mid)?);
    }
    Ok(grid)
}

/// Per-axis coverage bitsets: for each test coordinate, which cubes surely
/// contain it and which might.
struct AxisTable {
    coords: Vec<GridCoordinate>,
    sure: Vec<Vec<u64>>,
    maybe: Vec<Vec<u64>>,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

fn axis_table(
    oracle: &SignOracle<'_>,
    cover: &CubeCover,
    axis: usize,
) -> Result<AxisTable, Inconclusive> {
    let base_coords: Vec<&BigRational> = cover
        .bases()
        .iter()
        .map(|b| b.coord(axis).value())
        .collect();
    let coords = if base_coords.is_empty() {
        vec![GridCoordinate::exact(BigRational::zero())]
    } else {
        axis_grid(oracle, &base_coords)?
    };
    let words = words_for(cover.len());
    let mut sure = vec![vec![0u64; words]; coords.len()];
    let mut maybe = vec![vec![0u64; words]; coords.len()];
    for (g, y) in coords.iter().enumerate() {
        for (i, x) in base_coords.iter().enumerate() {
            match oracle.in_arc(x, y) {
                Some(true) => {
                    sure[g][i / 64] |= 1 << (i % 64);
                    maybe[g][i / 64] |= 1 << (i % 64);
                }
                Some(false) => {}
                None => maybe[g][i / 64] |= 1 << (i % 64),
            }
        }
    }
    Ok(AxisTable {
        coords,
        sure,
        maybe,
    })
}

#[derive(Default)]
struct SlabResult {
    first_uncovered: Option<Vec<usize>>,
    inconclusive: Option<Vec<usize>>,
}

/// Scans all grid points whose first coordinate index is `i0`, in
/// lexicographic order of the remaining indices.
fn scan_slab(tables: &[AxisTable], i0: usize) -> SlabResult {
    let n = tables.len();
    let words = tables[0].sure[0].len();
    let mut sure_prefix = vec![vec![0u64; words]; n];
    let mut maybe_prefix = vec![vec![0u64; words]; n];
    sure_prefix[0].copy_from_slice(&tables[0].sure[i0]);
    maybe_prefix[0].copy_from_slice(&tables[0].maybe[i0]);
    let mut idx = vec![0usize; n];
    idx[0] = i0;
    let mut result = SlabResult::default();
    // depth-first odometer over axes 1..n with prefix intersections
    fn recurse(
        tables: &[AxisTable],
        depth: usize,
        idx: &mut Vec<usize>,
        sure_prefix: &mut Vec<Vec<u64>>,
        maybe_prefix: &mut Vec<Vec<u64>>,
        result: &mut SlabResult,
    ) -> bool {
        let n = tables.len();
        if depth == n {
            let sure_any = sure_prefix[n - 1].iter().any(|&w| w != 0);
            if sure_any {
                return false;
            }
            let maybe_any = maybe_prefix[n - 1].iter().any(|&w| w != 0);
            if !maybe_any {
                result.first_uncovered = Some(idx.clone());
                return true;
            }
            if result.inconclusive.is_none() {
                result.inconclusive = Some(idx.clone());
            }
            return false;
        }
        for g in 0..tables[depth].coords.len() {
            idx[depth] = g;
            let (done, rest) = sure_prefix.split_at_mut(depth);
            let prev = &done[depth - 1];
            let mut any_maybe = false;
            for (w, (p, t)) in rest[0]
                .iter_mut()
                .zip(prev.iter().zip(&tables[depth].sure[g]))
            {
                *w = p & t;
            }
            let (mdone, mrest) = maybe_prefix.split_at_mut(depth);
            for (w, (p, t)) in mrest[0]
                .iter_mut()
                .zip(mdone[depth - 1].iter().zip(&tables[depth].maybe[g]))
            {
                *w = p & t;
                any_maybe |= *w != 0;
            }
            if !any_maybe {
                // no cube can cover any completion of this prefix
                for rest_idx in idx.iter_mut().skip(depth + 1) {
                    *rest_idx = 0;
                }
                result.first_uncovered = Some(idx.clone());
                return true;
            }
            if recurse(tables, depth + 1, idx, sure_prefix, maybe_prefix, result) {
                return true;
            }
        }
        false
    }
    if n == 1 {
        let sure_any = sure_prefix[0].iter().any(|&w| w != 0);
        let maybe_any = maybe_prefix[0].iter().any(|&w| w != 0);
        if !maybe_any {
            result.first_uncovered = Some(idx);
        } else if !sure_any {
            result.inconclusive = Some(idx);
        }
        return result;
    }
    if !maybe_prefix[0].iter().any(|&w| w != 0) {
        result.first_uncovered = Some(idx);
        return result;
    }
    recurse(
        tables,
        1,
        &mut idx,
        &mut sure_prefix,
        &mut maybe_prefix,
        &mut result,
    );
    result
}

fn witness_from(tables: &[AxisTable], idx: &[usize], side: &Side) -> Witness {
    let coords: Vec<GridCoordinate> = idx
        .iter()
        .zip(tables)
        .map(|(&g, t)| t.coords[g].clone())
        .collect();
    let exact = coords
        .iter()
        .map(|c| c.to_exact(side))
        .collect::<Option<Vec<_>>>()
        .map(TorusPoint::new);
    let approx = coords.iter().map(|c| c.to_f64(side.to_f64())).collect();
    Witness {
        coords,
        exact,
        approx,
    }
}

/// Decides whether the cubes of `cover` cover `T^n`.
///
/// Returns the first uncovered arrangement point in lexicographic grid order
/// as the witness. In float mode, any grid point whose coverage hinges on a
/// comparison within the margin yields [`CoverError::FloatModeInconclusive`]
/// unless a surely-uncovered point is found.
pub fn verify_cover(cover: &CubeCover) -> Result<CoverCertificate, CoverError> {
    let n = cover.dimension();
    if let Some((index, b)) = cover
        .bases()
        .iter()
        .enumerate()
        .find(|(_, b)| b.dimension() != n)
    {
        return Err(CoverError::DimensionMismatch {
            index,
            expected: n,
            found: b.dimension(),
        });
    }
    let oracle = SignOracle { side: cover.side() };
    let tables = (0..n)
        .map(|j| axis_table(&oracle, cover, j))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| {
            CoverError::FloatModeInconclusive("endpoints closer than the float margin".into())
        })?;
    let grid_size = tables
        .iter()
        .try_fold(1u64, |acc, t| acc.checked_mul(t.coords.len() as u64))
        .ok_or_else(|| CoverError::TooLarge("verification grid overflows u64".into()))?;

    let slabs: Vec<SlabResult> = (0..tables[0].coords.len())
        .into_par_iter()
        .map(|i0| scan_slab(&tables, i0))
        .collect();

    let mode = cover.side().mode();
    if let Some(idx) = slabs.iter().find_map(|s| s.first_uncovered.as_ref()) {
        return Ok(CoverCertificate {
            verdict: Verdict::Uncovered(witness_from(&tables, idx, cover.side())),
            candidate_grid_size: grid_size,
            mode,
        });
    }
    if let Some(idx) = slabs.iter().find_map(|s| s.inconclusive.as_ref()) {
        let w = witness_from(&tables, idx, cover.side());
        return Err(CoverError::FloatModeInconclusive(format!(
            "coverage of grid point {w} is within the margin of a cube boundary"
        )));
    }
    Ok(CoverCertificate {
        verdict: Verdict::Covered,
        candidate_grid_size: grid_size,
        mode,
    })
}

/// Per-axis arrangement coordinates (endpoints and arc midpoints) for an
/// exact cover, as used by [`verify_cover`].
pub(crate) fn exact_axis_grid(
    base_coords: &[&BigRational],
    side: &BigRational,
) -> Vec<UnitRational> {
    let side = Side::Exact(side.clone());
    let oracle = SignOracle { side: &side };
    axis_grid(&oracle, base_coords)
        .expect("exact comparisons never fail")
        .into_iter()
        .map(|c| c.to_exact(&side).expect("exact side"))
        .collect()
}
