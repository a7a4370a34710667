//! Minimum covers among cubes based on the grid `(Z/q)^n`.
//!
//! The universe is the arrangement grid of all `q^n` candidate cubes, which
//! decides coverage of the whole torus for any sub-family. Translation by a
//! grid vector maps grid covers to grid covers, so the cube at the origin is
//! forced into the solution.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::bounds::{exact_value_2d, exact_value_3d, lower_bound_recurrence};
use super::verify::exact_axis_grid;
use super::{verify_cover, CoverError, CubeCover};
use crate::setcover::{self, BitSet, SetCoverError, SetCoverInstance, SolveOptions};
use crate::torus::{in_open_arc, TorusPoint, UnitRational};

pub const MAX_CANDIDATES: u64 = 1_000_000;
const MAX_UNIVERSE: u64 = 4_000_000;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: 1_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// A minimum grid cover, certified by [`verify_cover`].
    pub cover: CubeCover,
    pub nodes: u64,
    /// Best known lower bound for the covering number.
    pub lower_bound: BigUint,
    /// The found size equals the lower bound, so it is the covering number.
    pub is_exact: bool,
}

fn known_lower_bound(n: usize, eps: &BigRational) -> BigUint {
    let mut lb = lower_bound_recurrence(n, eps);
    let exact = match n {
        2 => Some(exact_value_2d(eps)),
        3 => exact_value_3d(eps).ok().map(|(v, _)| v),
        _ => None,
    };
    if let Some(v) = exact {
        lb = lb.max(v);
    }
    lb
}

/// Indices into a mixed-radix grid, first axis most significant.
fn unrank(mut i: usize, radix: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radix.len()];
    for (slot, &r) in out.iter_mut().zip(radix).rev() {
        *slot = i % r;
        i /= r;
    }
    out
}

/// Drops every element whose candidate set contains another element's
/// candidate set: covering the smaller one covers it too.
fn reduce_elements(owners: Vec<BitSet>) -> Vec<BitSet> {
    let mut order: Vec<usize> = (0..owners.len()).collect();
    order.sort_by_key(|&e| (owners[e].count(), e));
    let mut kept: Vec<usize> = Vec::new();
    for &e in &order {
        if !kept.iter().any(|&k| owners[k].is_subset(&owners[e])) {
            kept.push(e);
        }
    }
    kept.sort_unstable();
    kept.into_iter().map(|e| owners[e].clone()).collect()
}

/// Exact branch-and-bound search for a minimum cover by cubes of side `eps`
/// based on the grid `(Z/q)^n`.
pub fn search_minimal_cover(
    n: usize,
    eps: &BigRational,
    q: u64,
    options: &SearchOptions,
) -> Result<SearchOutcome, CoverError> {
    if n == 0 || q == 0 {
        return Err(CoverError::Unsupported(
            "dimension and grid resolution must be positive".into(),
        ));
    }
    let side = super::Side::exact(eps.clone())?;
    let count = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > u128::from(MAX_CANDIDATES) {
        return Err(CoverError::TooLarge(format!("{q}^{n} candidate bases")));
    }
    let count = count as usize;
    let q_usize = q as usize;

    let axis_values: Vec<UnitRational> = (0..q).map(|i| UnitRational::new(i, q)).collect();
    let refs: Vec<&BigRational> = axis_values.iter().map(|u| u.value()).collect();
    let grid = exact_axis_grid(&refs, eps);
    let g = grid.len();
    let universe = (g as u128).pow(n as u32);
    if universe > u128::from(MAX_UNIVERSE) {
        return Err(CoverError::TooLarge(format!("{g}^{n} arrangement points")));
    }
    let universe = universe as usize;

    // axis_hit[c][i]: grid coordinate c lies in the arc based at i/q
    let axis_hit: Vec<Vec<bool>> = grid
        .iter()
        .map(|y| axis_values.iter().map(|x| in_open_arc(x, eps, y)).collect())
        .collect();

    let radix_g = vec![g; n];
    let radix_q = vec![q_usize; n];
    let owners: Vec<BitSet> = (0..universe)
        .map(|e| {
            let pt = unrank(e, &radix_g);
            let mut s = BitSet::new(count);
            for c in 0..count {
                let base = unrank(c, &radix_q);
                if pt.iter().zip(&base).all(|(&p, &b)| axis_hit[p][b]) {
                    s.insert(c);
                }
            }
            s
        })
        .collect();
    let owners = reduce_elements(owners);
    let u = owners.len();
    let mut sets = vec![BitSet::new(u); count];
    for (e, o) in owners.iter().enumerate() {
        for c in o.iter() {
            sets[c].insert(e);
        }
    }
    let instance = SetCoverInstance::new(u, sets);

    let lower_bound = known_lower_bound(n, eps);
    let solve_opts = SolveOptions {
        node_budget: options.node_budget,
        lower_bound: lower_bound.to_usize().unwrap_or(usize::MAX),
        forced: vec![0],
    };
    let solution = match setcover::solve(&instance, &solve_opts) {
        Ok(s) => s,
        Err(SetCoverError::Infeasible) => return Err(CoverError::Infeasible(q)),
        Err(SetCoverError::BudgetExceeded { budget, best }) => {
            return Err(CoverError::BudgetExceeded {
                budget,
                best: best.map(|b| b.len()),
            })
        }
    };

    let bases = solution
        .sets
        .iter()
        .map(|&c| {
            TorusPoint::new(
                unrank(c, &radix_q)
                    .into_iter()
                    .map(|i| axis_values[i].clone())
                    .collect(),
            )
        })
        .collect();
    let mut cover = CubeCover::new(n, side, bases)?;
    let cert = verify_cover(&cover)?;
    assert!(cert.is_covered(), "search returned a non-cover");
    cover.certificate = Some(cert);
    let is_exact = BigUint::from(cover.len()) == lower_bound;
    Ok(SearchOutcome {
        cover,
        nodes: solution.nodes,
        lower_bound,
        is_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::rational;

    #[test]
    fn circle_needs_three_half_arcs() {
        let out = search_minimal_cover(1, &rational(1, 2), 6, &SearchOptions::default()).unwrap();
        assert_eq!(out.cover.len(), 3);
        assert!(out.is_exact);
    }

    #[test]
    fn circle_general_side() {
        // floor(1/eps) + 1 arcs once the grid allows gaps below eps; on the
        // 1/10 grid every gap is at most 3/10, so a fourth arc is needed
        for (p, q, grid, expected) in [(2, 5, 15, 3), (2, 5, 10, 4), (1, 3, 12, 4), (3, 10, 20, 4)]
        {
            let out =
                search_minimal_cover(1, &rational(p, q), grid, &SearchOptions::default()).unwrap();
            assert_eq!(out.cover.len(), expected, "eps={p}/{q}");
        }
    }

    #[test]
    fn coarse_grid_can_be_infeasible() {
        // arcs of length 1/3 based at 0 and 1/2 leave gaps
        assert!(matches!(
            search_minimal_cover(1, &rational(1, 3), 2, &SearchOptions::default()),
            Err(CoverError::Infeasible(2))
        ));
    }

    #[test]
    fn plane_half_side() {
        let out = search_minimal_cover(2, &rational(1, 2), 14, &SearchOptions::default()).unwrap();
        assert_eq!(out.cover.len(), 7);
        assert!(out.is_exact);
    }

    #[test]
    fn plane_two_fifths() {
        // 8 needs bases off the 1/20 grid; the 1/8 lattice k(1/8, 3/8) works
        let out = search_minimal_cover(2, &rational(2, 5), 8, &SearchOptions::default()).unwrap();
        assert_eq!(out.cover.len(), 8);
        assert!(out.is_exact);
        let opts = SearchOptions {
            node_budget: 10_000_000,
        };
        let out = search_minimal_cover(2, &rational(2, 5), 20, &opts).unwrap();
        assert_eq!(out.cover.len(), 9);
        assert!(!out.is_exact);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            search_minimal_cover(3, &rational(1, 2), 101, &SearchOptions::default()),
            Err(CoverError::TooLarge(_))
        ));
        assert!(search_minimal_cover(2, &rational(3, 2), 4, &SearchOptions::default()).is_err());
    }

    #[test]
    fn unrank_is_lexicographic() {
        assert_eq!(unrank(5, &[2, 3]), vec![1, 2]);
        assert_eq!(unrank(0, &[4, 4, 4]), vec![0, 0, 0]);
    }
}
