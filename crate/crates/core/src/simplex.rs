//! Dense tableau simplex for packing LPs `max 1·y  s.t.  M y <= 1, y >= 0`
//! with a non-negative matrix `M`.
//!
//! The slack basis is feasible, so no phase one is needed. Pivoting uses
//! Bland's rule, which cannot cycle. The optimal duals of the rows (the
//! negated reduced costs of the slacks) solve the covering LP
//! `min 1·w  s.t.  Mᵀ w >= 1, w >= 0`.

use thiserror::Error;

const TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverFailure {
    #[error("iteration limit {limit} reached (objective {objective}, basis size {basis})")]
    IterationLimit {
        limit: usize,
        objective: f64,
        basis: usize,
    },
    #[error("unbounded column {column} after {iterations} iterations")]
    Unbounded { column: usize, iterations: usize },
    #[error("matrix has a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
}

#[derive(Clone, Debug)]
pub struct PackingSolution {
    /// Packing variables, feasible for `M y <= 1`.
    pub y: Vec<f64>,
    /// Covering weights, one per row of `M`, feasible for `Mᵀ w >= 1`.
    pub w: Vec<f64>,
    pub dual_value: f64,
    pub primal_value: f64,
    pub iterations: usize,
}

impl PackingSolution {
    pub fn gap(&self) -> f64 {
        self.primal_value - self.dual_value
    }
}

/// Solves the packing LP for `matrix` (row-major, `rows × cols`).
///
/// The returned `y` and `w` are rescaled so that they are exactly feasible
/// in floating point; whatever the residual error, `primal_value` is then
/// an upper and `dual_value` a lower bound for the common optimum.
pub fn solve_packing(
    matrix: &[Vec<f64>],
    max_iterations: usize,
) -> Result<PackingSolution, SolverFailure> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    for (r, row) in matrix.iter().enumerate() {
        if let Some(c) = row.iter().position(|&v| v < 0.0) {
            return Err(SolverFailure::NegativeEntry { row: r, col: c });
        }
    }
    // tableau columns: structural 0..cols, slacks cols..cols+rows, rhs last
    let width = cols + rows + 1;
    let mut t = vec![vec![0.0; width]; rows + 1];
    for (r, row) in matrix.iter().enumerate() {
        t[r][..cols].copy_from_slice(row);
        t[r][cols + r] = 1.0;
        t[r][width - 1] = 1.0;
    }
    // objective row holds reduced costs c_j - z_j, maximizing
    for c in 0..cols {
        t[rows][c] = 1.0;
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    let mut iterations = 0;
    loop {
        let Some(enter) = (0..cols + rows).find(|&j| t[rows][j] > TOL) else {
            break;
        };
        if iterations >= max_iterations {
            return Err(SolverFailure::IterationLimit {
                limit: max_iterations,
                objective: -t[rows][width - 1],
                basis: basis.len(),
            });
        }
        iterations += 1;
        // ratio test, ties broken by smallest basic variable index
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let a = t[r][enter];
            if a > TOL {
                let ratio = t[r][width - 1] / a;
                match leave {
                    Some((lr, best))
                        if ratio > best + TOL || (ratio > best - TOL && basis[r] > basis[lr]) => {}
                    _ => leave = Some((r, ratio)),
                }
            }
        }
        let Some((pr, _)) = leave else {
            return Err(SolverFailure::Unbounded {
                column: enter,
                iterations,
            });
        };
        let pivot = t[pr][enter];
        for v in t[pr].iter_mut() {
            *v /= pivot;
        }
        let pivot_row = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r == pr {
                continue;
            }
            let f = row[enter];
            if f.abs() > 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        basis[pr] = enter;
    }

    let mut y = vec![0.0; cols];
    for (r, &b) in basis.iter().enumerate() {
        if b < cols {
            y[b] = t[r][width - 1].max(0.0);
        }
    }
    let mut w: Vec<f64> = (0..rows).map(|r| (-t[rows][cols + r]).max(0.0)).collect();

    // rescale into exact feasibility
    let max_load = matrix
        .iter()
        .map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>())
        .fold(0.0, f64::max);
    if max_load > 1.0 {
        for v in &mut y {
            *v /= max_load;
        }
    }
    let min_cover = (0..cols)
        .map(|c| (0..rows).map(|r| matrix[r][c] * w[r]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    if min_cover < 1.0 && min_cover > 0.0 {
        for v in &mut w {
            *v /= min_cover;
        }
    }
    Ok(PackingSolution {
        dual_value: y.iter().sum(),
        primal_value: w.iter().sum(),
        y,
        w,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        // max y1 + y2, y1 + 2 y2 <= 1, 2 y1 + y2 <= 1  ->  2/3
        let m = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        let s = solve_packing(&m, 100).unwrap();
        assert!((s.dual_value - 2.0 / 3.0).abs() < 1e-12);
        assert!((s.primal_value - 2.0 / 3.0).abs() < 1e-12);
        assert!(s.gap() >= -1e-15);
    }

    #[test]
    fn interval_cover_of_a_cycle() {
        // 5-cycle edges: covering number of C5 vertices by edges is 5/2
        let mut m = vec![vec![0.0; 5]; 5];
        for i in 0..5 {
            m[i][i] = 1.0;
            m[i][(i + 1) % 5] = 1.0;
        }
        let s = solve_packing(&m, 100).unwrap();
        assert!((s.primal_value - 2.5).abs() < 1e-9);
        assert!(s.gap().abs() < 1e-9);
    }

    #[test]
    fn rejects_negative_entries_and_respects_limits() {
        assert!(matches!(
            solve_packing(&[vec![-1.0]], 10),
            Err(SolverFailure::NegativeEntry { .. })
        ));
        let m = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert!(matches!(
            solve_packing(&m, 0),
            Err(SolverFailure::IterationLimit { .. })
        ));
    }

    #[test]
    fn empty_column_is_unbounded() {
        let m = vec![vec![1.0, 0.0]];
        assert!(matches!(
            solve_packing(&m, 10),
            Err(SolverFailure::Unbounded { column: 1, .. })
        ));
    }
}
