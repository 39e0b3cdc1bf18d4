//! Levenberg–Marquardt refinement of a line grid towards an IC-net.
//!
//! Unknowns are `(θ, c)` for every line; residuals are the signed Pitot
//! defects `(|AB| + |CD|) - (|BC| + |DA|)` of all cells divided by the cell
//! perimeter, so that shrinking the grid does not reduce them. Steps are the
//! damped least-squares solutions for a central difference Jacobian, with the
//! damping raised until the residual drops and relaxed after each success. Steps
//! that shrink a cell below a thousandth of the smallest seed cell are refused.

use nalgebra::{DMatrix, DVector};

use super::{build_vertices, cell, LineGrid, P2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub grid: LineGrid,
    pub iterations: usize,
    /// Max absolute Pitot defect over all cells.
    pub max_residual: f64,
}

fn dist(a: P2, b: P2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Signed Pitot defect and perimeter of every cell, row-major.
fn defects(grid: &LineGrid) -> Result<(Vec<f64>, Vec<f64>)> {
    let f = build_vertices(grid)?;
    let (nr, nc) = (f.len(), f[0].len());
    let mut d = Vec::with_capacity((nr - 1) * (nc - 1));
    let mut per = Vec::with_capacity((nr - 1) * (nc - 1));
    for i in 0..nr - 1 {
        for j in 0..nc - 1 {
            let q = cell(&f, i, j);
            let s = [dist(q[0], q[1]), dist(q[1], q[2]), dist(q[2], q[3]), dist(q[3], q[0])];
            d.push(s[0] + s[2] - s[1] - s[3]);
            per.push(s.iter().sum());
        }
    }
    Ok((d, per))
}

/// Signed Pitot defect of every cell, row-major.
pub fn pitot_residuals(grid: &LineGrid) -> Result<Vec<f64>> {
    Ok(defects(grid)?.0)
}

struct State {
    rel: Vec<f64>,
    abs_max: f64,
    min_perimeter: f64,
}

fn evaluate(grid: &LineGrid) -> Result<State> {
    let (d, per) = defects(grid)?;
    let min_perimeter = per.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min_perimeter > 0.0) {
        return Err(Error::Geometry("degenerate cell".into()));
    }
    Ok(State { rel: d.iter().zip(&per).map(|(a, p)| a / p).collect(), abs_max: max_abs(&d), min_perimeter })
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

const STEP: f64 = 1e-7;

fn jacobian(seed: &LineGrid, x: &[f64], m: usize) -> Result<DMatrix<f64>> {
    let mut jac = DMatrix::zeros(m, x.len());
    let mut xp = x.to_vec();
    for k in 0..x.len() {
        xp[k] = x[k] + STEP;
        let rp = evaluate(&seed.from_parameters(&xp))?.rel;
        xp[k] = x[k] - STEP;
        let rm = evaluate(&seed.from_parameters(&xp))?.rel;
        xp[k] = x[k];
        for r in 0..m {
            jac[(r, k)] = (rp[r] - rm[r]) / (2.0 * STEP);
        }
    }
    Ok(jac)
}

/// Refines `seed` until the max Pitot defect is at most `tol`, within
/// `max_iter` Levenberg–Marquardt steps.
pub fn icnet_solve(seed: &LineGrid, max_iter: usize, tol: f64) -> Result<SolveOutcome> {
    let mut x = seed.parameters();
    let mut st = evaluate(seed)?;
    let floor = 1e-3 * st.min_perimeter;
    let m = st.rel.len();
    let mut mu = f64::NAN;
    for it in 0..=max_iter {
        if st.abs_max <= tol {
            return Ok(SolveOutcome { grid: seed.from_parameters(&x), iterations: it, max_residual: st.abs_max });
        }
        if it == max_iter {
            break;
        }
        let worst = st.abs_max;
        let jac = jacobian(seed, &x, m)?;
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * DVector::from_column_slice(&st.rel);
        if mu.is_nan() {
            mu = 1e-3 * jtj.diagonal().max();
        }
        let base = norm_sq(&st.rel);
        let mut accepted = None;
        while mu < 1e12 {
            let a = &jtj + DMatrix::identity(x.len(), x.len()) * mu;
            if let Some(step) = a.cholesky().map(|c| c.solve(&g)) {
                let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a - s).collect();
                if let Ok(t) = evaluate(&seed.from_parameters(&trial)) {
                    if norm_sq(&t.rel) < base && t.min_perimeter > floor {
                        accepted = Some((trial, t));
                        break;
                    }
                }
            }
            mu *= 4.0;
        }
        let Some((xn, tn)) = accepted else {
            return Err(Error::NonConvergence { iterations: it, residual: worst });
        };
        mu = (mu / 3.0).max(1e-15);
        x = xn;
        st = tn;
    }
    Err(Error::NonConvergence { iterations: max_iter, residual: st.abs_max })
}
