//! Dense two-phase primal simplex for standard-form linear programs,
//! with Bland's rule to preclude cycling and dual variables read off the
//! optimal basis.
//!
//! Solves `maximize c^T x  subject to  A x = b, x >= 0`.  The instances in
//! this crate are tiny (hundreds of rows and columns), so a full dense
//! tableau is the simplest robust choice.  After termination the basic
//! solution and the row duals are recomputed from the original data by a
//! dense LU solve, which removes the drift accumulated by pivoting.

use ndarray::Array2;

use crate::error::{Error, Result};

/// `maximize objective . x  subject to  constraints . x = rhs, x >= 0`.
#[derive(Debug, Clone)]
pub struct StandardLp {
    pub objective: Vec<f64>,
    pub constraints: Array2<f64>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    /// Optimal objective value.
    pub value: f64,
    /// Optimal primal point, one entry per structural column.
    pub x: Vec<f64>,
    /// Simplex multipliers of the equality rows: the optimal dual solution.
    pub row_duals: Vec<f64>,
}

const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-9;
const MAX_ITER: usize = 200_000;

pub fn solve_max(lp: &StandardLp) -> Result<LpSolution> {
    let m = lp.constraints.nrows();
    let n = lp.constraints.ncols();
    if lp.rhs.len() != m || lp.objective.len() != n {
        return Err(Error::Solver(format!(
            "shape mismatch: A is {m}x{n}, b has {}, c has {}",
            lp.rhs.len(),
            lp.objective.len()
        )));
    }
    if m == 0 || n == 0 {
        return Err(Error::Solver("empty linear program".into()));
    }

    // Normalize rows to nonnegative rhs; remember the sign flips so the
    // duals can be mapped back to the original rows.
    let mut tableau = Array2::zeros((m, n + m));
    let mut rhs = vec![0.0; m];
    let mut row_sign = vec![1.0; m];
    for i in 0..m {
        let s = if lp.rhs[i] < 0.0 { -1.0 } else { 1.0 };
        row_sign[i] = s;
        rhs[i] = s * lp.rhs[i];
        for j in 0..n {
            tableau[(i, j)] = s * lp.constraints[(i, j)];
        }
        tableau[(i, n + i)] = 1.0;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: drive the artificial variables to zero.
    let phase1_cost: Vec<f64> = (0..n + m).map(|j| if j < n { 0.0 } else { -1.0 }).collect();
    let p1 = run_simplex(&mut tableau, &mut rhs, &mut basis, &phase1_cost, n + m)?;
    if p1 < -1e-8 {
        return Err(Error::Solver(format!("infeasible program (phase-1 value {p1:.3e})")));
    }

    // Pivot leftover artificial variables out of the basis where possible;
    // a row with no structural pivot is redundant and keeps its artificial
    // at level zero.
    for r in 0..m {
        if basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| tableau[(r, j)].abs() > PIVOT_TOL) {
                pivot(&mut tableau, &mut rhs, &mut basis, r, j);
            }
        }
    }

    // Phase 2: artificial columns are banned from entering.
    let phase2_cost: Vec<f64> = (0..n + m)
        .map(|j| if j < n { lp.objective[j] } else { f64::NEG_INFINITY })
        .collect();
    run_simplex(&mut tableau, &mut rhs, &mut basis, &phase2_cost, n)?;

    refine(lp, &basis, &row_sign)
}

// Primal simplex iterations with Bland's rule; returns the final objective
// value of `cost` over the basis.  `enter_limit` bounds the entering columns.
fn run_simplex(
    tableau: &mut Array2<f64>,
    rhs: &mut [f64],
    basis: &mut [usize],
    cost: &[f64],
    enter_limit: usize,
) -> Result<f64> {
    let m = tableau.nrows();
    for _ in 0..MAX_ITER {
        // duals of the current basis: pi = c_B^T B^{-1} applied implicitly
        // through the tableau, so the reduced cost of column j is
        // c_j - sum_i c_B(i) T[i,j].
        let entering = (0..enter_limit).find(|&j| {
            if basis.contains(&j) || cost[j] == f64::NEG_INFINITY {
                return false;
            }
            let mut reduced = cost[j];
            for i in 0..m {
                let cb = cost[basis[i]];
                if cb != 0.0 && cb != f64::NEG_INFINITY {
                    reduced -= cb * tableau[(i, j)];
                }
            }
            reduced > COST_TOL
        });
        let Some(j) = entering else {
            let mut value = 0.0;
            for i in 0..m {
                let cb = cost[basis[i]];
                if cb != 0.0 && cb != f64::NEG_INFINITY {
                    value += cb * rhs[i];
                }
            }
            return Ok(value);
        };

        // ratio test; Bland tie-break on the smallest basic variable index
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = tableau[(i, j)];
            if a > PIVOT_TOL {
                let ratio = rhs[i] / a;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((best, best_ratio)) => {
                        if ratio < best_ratio - PIVOT_TOL
                            || (ratio < best_ratio + PIVOT_TOL && basis[i] < basis[best])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((r, _)) = leave else {
            return Err(Error::Solver("unbounded program".into()));
        };
        pivot(tableau, rhs, basis, r, j);
    }
    Err(Error::Solver("simplex iteration limit reached".into()))
}

fn pivot(tableau: &mut Array2<f64>, rhs: &mut [f64], basis: &mut [usize], r: usize, j: usize) {
    let m = tableau.nrows();
    let width = tableau.ncols();
    let p = tableau[(r, j)];
    for col in 0..width {
        tableau[(r, col)] /= p;
    }
    rhs[r] /= p;
    for i in 0..m {
        if i == r {
            continue;
        }
        let factor = tableau[(i, j)];
        if factor != 0.0 {
            for col in 0..width {
                let delta = factor * tableau[(r, col)];
                tableau[(i, col)] -= delta;
            }
            rhs[i] -= factor * rhs[r];
        }
    }
    basis[r] = j;
}

// Recompute the basic solution and the duals from the original data.
fn refine(lp: &StandardLp, basis: &[usize], row_sign: &[f64]) -> Result<LpSolution> {
    let m = lp.constraints.nrows();
    let n = lp.constraints.ncols();

    // basis matrix over the sign-normalized system
    let mut b_mat = Array2::zeros((m, m));
    let mut c_b = vec![0.0; m];
    for (col, &var) in basis.iter().enumerate() {
        if var < n {
            for i in 0..m {
                b_mat[(i, col)] = row_sign[i] * lp.constraints[(i, var)];
            }
            c_b[col] = lp.objective[var];
        } else {
            b_mat[(var - n, col)] = 1.0;
            c_b[col] = 0.0;
        }
    }
    let rhs_norm: Vec<f64> = (0..m).map(|i| row_sign[i] * lp.rhs[i]).collect();

    let x_b = solve_dense(b_mat.clone(), &rhs_norm)
        .ok_or_else(|| Error::Solver("optimal basis is numerically singular".into()))?;
    let mut bt = Array2::zeros((m, m));
    for i in 0..m {
        for j in 0..m {
            bt[(i, j)] = b_mat[(j, i)];
        }
    }
    let pi_norm = solve_dense(bt, &c_b)
        .ok_or_else(|| Error::Solver("optimal basis is numerically singular".into()))?;

    let mut x = vec![0.0; n];
    let mut value = 0.0;
    for (col, &var) in basis.iter().enumerate() {
        if var < n {
            // basic values may carry tiny negative round-off
            x[var] = x_b[col];
            value += lp.objective[var] * x_b[col];
        }
    }
    let row_duals: Vec<f64> = (0..m).map(|i| row_sign[i] * pi_norm[i]).collect();
    Ok(LpSolution { value, x, row_duals })
}

// Gaussian elimination with partial pivoting; None on (near-)singular input.
fn solve_dense(mut a: Array2<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.nrows();
    let mut x: Vec<f64> = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (best, best_val) = (col..n)
            .map(|r| (r, a[(perm[r], col)].abs()))
            .max_by(|u, v| u.1.total_cmp(&v.1))?;
        if best_val < 1e-300 {
            return None;
        }
        perm.swap(col, best);
        let prow = perm[col];
        for r in col + 1..n {
            let row = perm[r];
            let factor = a[(row, col)] / a[(prow, col)];
            if factor != 0.0 {
                for c in col..n {
                    let delta = factor * a[(prow, c)];
                    a[(row, c)] -= delta;
                }
                x[row] -= factor * x[prow];
            }
        }
    }
    let mut out = vec![0.0; n];
    for col in (0..n).rev() {
        let row = perm[col];
        let mut acc = x[row];
        for c in col + 1..n {
            acc -= a[(row, c)] * out[c];
        }
        out[col] = acc / a[(row, col)];
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn assert_dual_feasible(lp: &StandardLp, sol: &LpSolution) {
        // at a maximum, pi^T A_j >= c_j for every column, with equality on
        // the support of x; and the objective equals pi . b
        let m = lp.constraints.nrows();
        let n = lp.constraints.ncols();
        for j in 0..n {
            let mut pa = 0.0;
            for i in 0..m {
                pa += sol.row_duals[i] * lp.constraints[(i, j)];
            }
            assert!(pa >= lp.objective[j] - 1e-8, "column {j}: {pa} < {}", lp.objective[j]);
            if sol.x[j] > 1e-8 {
                assert!((pa - lp.objective[j]).abs() < 1e-8, "slack on basic column {j}");
            }
        }
        let pib: f64 = sol.row_duals.iter().zip(&lp.rhs).map(|(p, b)| p * b).sum();
        assert!((pib - sol.value).abs() < 1e-9);
    }

    #[test]
    fn small_max_problem() {
        // max 3x + 2y  st  x + y <= 4, x <= 2  (slacks added by hand)
        let lp = StandardLp {
            objective: vec![3.0, 2.0, 0.0, 0.0],
            constraints: array![[1.0, 1.0, 1.0, 0.0], [1.0, 0.0, 0.0, 1.0]],
            rhs: vec![4.0, 2.0],
        };
        let sol = solve_max(&lp).unwrap();
        assert!((sol.value - 10.0).abs() < 1e-9);
        assert!((sol.x[0] - 2.0).abs() < 1e-9);
        assert!((sol.x[1] - 2.0).abs() < 1e-9);
        assert_dual_feasible(&lp, &sol);
    }

    #[test]
    fn negative_rhs_rows_are_normalized() {
        // same program with the first row negated
        let lp = StandardLp {
            objective: vec![3.0, 2.0, 0.0, 0.0],
            constraints: array![[-1.0, -1.0, -1.0, 0.0], [1.0, 0.0, 0.0, 1.0]],
            rhs: vec![-4.0, 2.0],
        };
        let sol = solve_max(&lp).unwrap();
        assert!((sol.value - 10.0).abs() < 1e-9);
        assert_dual_feasible(&lp, &sol);
    }

    #[test]
    fn infeasible_is_reported() {
        // x1 + x2 = 1 and x1 + x2 = 2
        let lp = StandardLp {
            objective: vec![1.0, 1.0],
            constraints: array![[1.0, 1.0], [1.0, 1.0]],
            rhs: vec![1.0, 2.0],
        };
        assert!(matches!(solve_max(&lp), Err(Error::Solver(_))));
    }

    #[test]
    fn unbounded_is_reported() {
        // max x1 st x1 - x2 = 0: both can grow together
        let lp = StandardLp {
            objective: vec![1.0, 0.0],
            constraints: array![[1.0, -1.0]],
            rhs: vec![0.0],
        };
        assert!(matches!(solve_max(&lp), Err(Error::Solver(_))));
    }

    #[test]
    fn redundant_rows_keep_duals_consistent() {
        // duplicated constraint row
        let lp = StandardLp {
            objective: vec![1.0, 0.0],
            constraints: array![[1.0, 1.0], [1.0, 1.0], [1.0, 0.0]],
            rhs: vec![1.0, 1.0, 0.25],
        };
        let sol = solve_max(&lp).unwrap();
        assert!((sol.value - 0.25).abs() < 1e-9);
        assert_dual_feasible(&lp, &sol);
    }

    #[test]
    fn degenerate_program_terminates() {
        // zero right-hand sides force x1 = x2 = x3 = 0 through many
        // degenerate bases
        let lp = StandardLp {
            objective: vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0],
            constraints: array![
                [1.0, 1.0, 0.0, 1.0, 0.0, 0.0],
                [1.0, 0.0, 1.0, 0.0, 1.0, 0.0],
                [0.0, 1.0, 1.0, 0.0, 0.0, 1.0]
            ],
            rhs: vec![0.0, 0.0, 1.0],
        };
        let sol = solve_max(&lp).unwrap();
        assert!(sol.value.abs() < 1e-9);
        assert_dual_feasible(&lp, &sol);
    }
}
