//! Classical confocal (elliptic) coordinates on the positive hyperoctant.
//!
//! For `a_1 > … > a_N > 0` the coordinates `u` live in the box
//! `-a_1 < u_1 < -a_2 < u_2 < … < -a_N < u_N`; `x_k^2` is a product of the
//! `|u_i + a_k|` divided by the spectral gaps. This module is the reference
//! system the discrete nets are compared against.

use crate::error::{domain, Error, Result};
use crate::vector::dot;

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousParams {
    a: Vec<f64>,
}

impl ContinuousParams {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::Parameter(format!("need N >= 2 semi-axis parameters, got {}", a.len())));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("semi-axis parameters must be finite".into()));
        }
        if a.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Parameter(format!("need a_1 > a_2 > ... > a_N, got {a:?}")));
        }
        if a[a.len() - 1] <= 0.0 {
            return Err(Error::Parameter(format!("need a_N > 0, got {a:?}")));
        }
        Ok(ContinuousParams { a })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Scaling constants `D_k` with `D_k^{-2} = ∏_{i<k}(a_i-a_k) ∏_{i>k}(a_k-a_i)`,
    /// the unique (up to a common factor) choice making the net orthogonal.
    pub fn scaling_constants(&self) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let inv_sq: f64 = (0..n)
                    .filter(|&i| i != k)
                    .map(|i| (self.a[i] - self.a[k]).abs())
                    .product();
                inv_sq.sqrt().recip()
            })
            .collect()
    }

    fn check_len(&self, v: &[f64], what: &str) -> Result<()> {
        if v.len() != self.dim() {
            return domain(format!("{what} has {} components, expected {}", v.len(), self.dim()));
        }
        if v.iter().any(|c| !c.is_finite()) {
            return domain(format!("{what} has non-finite components"));
        }
        Ok(())
    }

    /// Checks `u` against the closed box (boundary values `-a_k` allowed).
    pub fn check_closed(&self, u: &[f64]) -> Result<()> {
        self.check_len(u, "u")?;
        for (i, &ui) in u.iter().enumerate() {
            if ui < -self.a[i] {
                return domain(format!("u_{} = {ui} < -a_{} = {}", i + 1, i + 1, -self.a[i]));
            }
            if i + 1 < self.dim() && ui > -self.a[i + 1] {
                return domain(format!("u_{} = {ui} > -a_{} = {}", i + 1, i + 2, -self.a[i + 1]));
            }
        }
        Ok(())
    }

    pub fn is_interior(&self, u: &[f64]) -> bool {
        u.len() == self.dim()
            && u.iter().enumerate().all(|(i, &ui)| {
                ui > -self.a[i] && (i + 1 == self.dim() || ui < -self.a[i + 1])
            })
    }

    fn check_interior(&self, u: &[f64]) -> Result<()> {
        self.check_len(u, "u")?;
        if !self.is_interior(u) {
            return domain(format!("u = {u:?} is not interior to the coordinate box"));
        }
        Ok(())
    }
}

/// `√|u_i + a_k|` on the branch fixed by the box: the radicand is `-(u_i+a_k)`
/// for `i < k` and `u_i + a_k` otherwise. Exact zero on the boundary.
fn rho(params: &ContinuousParams, u: &[f64], i: usize, k: usize) -> f64 {
    let t = u[i] + params.a[k];
    if i < k { (-t).max(0.0).sqrt() } else { t.max(0.0).sqrt() }
}

/// Confocal coordinates to Cartesian coordinates in the positive hyperoctant.
pub fn eval_continuous(params: &ContinuousParams, u: &[f64]) -> Result<Vec<f64>> {
    params.check_closed(u)?;
    let d = params.scaling_constants();
    Ok((0..params.dim())
        .map(|k| d[k] * (0..params.dim()).map(|i| rho(params, u, i, k)).product::<f64>())
        .collect())
}

/// `f(λ) = Σ x_k^2/(a_k+λ) - 1`, strictly decreasing between consecutive poles.
fn family_residual(params: &ContinuousParams, x2: &[f64], lambda: f64) -> f64 {
    x2.iter().zip(&params.a).map(|(q, a)| q / (a + lambda)).sum::<f64>() - 1.0
}

fn family_slope(params: &ContinuousParams, x2: &[f64], lambda: f64) -> f64 {
    -x2.iter().zip(&params.a).map(|(q, a)| q / ((a + lambda) * (a + lambda))).sum::<f64>()
}

/// Recovers confocal coordinates of a point with all `x_k > 0`.
///
/// Each `u_k` is the root of `f(λ)` in `(-a_k, -a_{k+1})` (last one in
/// `(-a_N, -a_N + Σx² + a_1)`), found by bisection and polished by Newton.
pub fn invert_continuous(params: &ContinuousParams, x: &[f64]) -> Result<Vec<f64>> {
    params.check_len(x, "x")?;
    if let Some(k) = x.iter().position(|&v| v <= 0.0) {
        return domain(format!("x_{} = {} must be positive", k + 1, x[k]));
    }
    let x2: Vec<f64> = x.iter().map(|v| v * v).collect();
    let n = params.dim();
    let total: f64 = x2.iter().sum();
    let mut u = Vec::with_capacity(n);
    for k in 0..n {
        let lo0 = -params.a[k];
        let hi0 = if k + 1 < n { -params.a[k + 1] } else { -params.a[n - 1] + total + params.a[0] };
        let (mut lo, mut hi) = (lo0, hi0);
        let width = 1e-13 * (hi0 - lo0);
        for _ in 0..200 {
            if hi - lo <= width {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if family_residual(params, &x2, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut root = 0.5 * (lo + hi);
        let mut f = family_residual(params, &x2, root);
        for _ in 0..3 {
            let cand = root - f / family_slope(params, &x2, root);
            if !(cand > lo0 && cand < hi0) {
                break;
            }
            let fc = family_residual(params, &x2, cand);
            if fc.abs() > f.abs() {
                break;
            }
            root = cand;
            f = fc;
        }
        u.push(root);
    }
    Ok(u)
}

/// Closed-form Jacobian `∂x_k/∂u_i = x_k / (2(a_k+u_i))`, indexed `[i][k]`.
pub fn partial_derivatives(params: &ContinuousParams, u: &[f64]) -> Result<Vec<Vec<f64>>> {
    params.check_interior(u)?;
    let x = eval_continuous(params, u)?;
    Ok((0..params.dim())
        .map(|i| (0..params.dim()).map(|k| 0.5 * x[k] / (params.a[k] + u[i])).collect())
        .collect())
}

/// Central-difference estimates of `∂_i x`, `∂_j x` and `∂_i∂_j x` with step `h`.
///
/// The stencil values are differenced through the separable product form
/// (`√(t+h) - √(t-h) = 2h/(√(t+h)+√(t-h))`), which removes the cancellation
/// that otherwise dominates the mixed difference for small `h`.
pub fn central_differences(
    params: &ContinuousParams,
    u: &[f64],
    i: usize,
    j: usize,
    h: f64,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let n = params.dim();
    if i >= n || j >= n || i == j {
        return domain(format!("invalid direction pair ({i}, {j}) for N = {n}"));
    }
    if !(h > 0.0) {
        return domain(format!("step must be positive, got {h}"));
    }
    params.check_interior(u)?;
    for (di, dj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let mut v = u.to_vec();
        v[i] += di * h;
        v[j] += dj * h;
        if !params.is_interior(&v) {
            return Err(Error::SingularStencil(format!("finite-difference stencil at {u:?} with h = {h} leaves the box")));
        }
    }
    let d = params.scaling_constants();
    let step = |t: f64| -> f64 {
        if t > 0.0 {
            2.0 * h / ((t + h).sqrt() + (t - h).sqrt())
        } else {
            -2.0 * h / ((-t - h).sqrt() + (-t + h).sqrt())
        }
    };
    let mut di_x = vec![0.0; n];
    let mut dj_x = vec![0.0; n];
    let mut dij_x = vec![0.0; n];
    for k in 0..n {
        let rest: f64 = d[k]
            * (0..n).filter(|&m| m != i && m != j).map(|m| rho(params, u, m, k)).product::<f64>();
        let ti = u[i] + params.a[k];
        let tj = u[j] + params.a[k];
        let (si, sj) = (step(ti), step(tj));
        di_x[k] = rest * rho(params, u, j, k) * si / (2.0 * h);
        dj_x[k] = rest * rho(params, u, i, k) * sj / (2.0 * h);
        dij_x[k] = rest * si * sj / (4.0 * h * h);
    }
    Ok((di_x, dj_x, dij_x))
}

/// Norm of `∂_i∂_j x - (1/2)/(u_i-u_j) (∂_j x - ∂_i x)` from central differences.
pub fn epd_residual_continuous(params: &ContinuousParams, u: &[f64], i: usize, j: usize, h: f64) -> Result<f64> {
    let (di, dj, dij) = central_differences(params, u, i, j, h)?;
    let c = 0.5 / (u[i] - u[j]);
    Ok(dij
        .iter()
        .zip(di.iter().zip(&dj))
        .map(|(m, (a, b))| (m - c * (b - a)).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// `|⟨∂_i x, ∂_j x⟩|` from central differences with step `h`.
pub fn orthogonality_residual_continuous(params: &ContinuousParams, u: &[f64], i: usize, j: usize, h: f64) -> Result<f64> {
    let (di, dj, _) = central_differences(params, u, i, j, h)?;
    Ok(dot(&di, &dj).abs())
}

/// `|⟨∂_i x, ∂_j x⟩|` from the closed-form Jacobian.
pub fn orthogonality_residual_analytic(params: &ContinuousParams, u: &[f64], i: usize, j: usize) -> Result<f64> {
    let jac = partial_derivatives(params, u)?;
    Ok(dot(&jac[i], &jac[j]).abs())
}

/// `|∂x/∂u_i|^2 = (1/4) ∏_{m≠i}(u_i-u_m) / ∏_m (u_i+a_m)`.
pub fn grad_norm_sq_closed(params: &ContinuousParams, u: &[f64], i: usize) -> Result<f64> {
    params.check_interior(u)?;
    let num: f64 = (0..params.dim()).filter(|&m| m != i).map(|m| u[i] - u[m]).product();
    let den: f64 = params.a.iter().map(|a| u[i] + a).product();
    Ok(0.25 * num / den)
}

/// Conformal factor `s = |u_i-u_j|^{1/2}` and the ratio `α_i(u_i)/α_j(u_j)` of
/// the isothermic factorization `|∂_i x|^2 = α_i s^2`, `|∂_j x|^2 = α_j s^2`.
pub fn isothermic_factors_continuous(params: &ContinuousParams, u: &[f64], i: usize, j: usize) -> Result<(f64, f64)> {
    params.check_interior(u)?;
    let n = params.dim();
    if i >= n || j >= n || i == j {
        return domain(format!("invalid direction pair ({i}, {j}) for N = {n}"));
    }
    let others = || (0..n).filter(move |&m| m != i && m != j);
    let num_i: f64 = others().map(|m| u[i] - u[m]).product();
    let num_j: f64 = others().map(|m| u[j] - u[m]).product();
    let den_i: f64 = params.a.iter().map(|a| u[i] + a).product();
    let den_j: f64 = params.a.iter().map(|a| u[j] + a).product();
    let s = (u[i] - u[j]).abs().sqrt();
    Ok((s, -(num_i / den_i) * (den_j / num_j)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `√(u+c)` for `u ≥ -c`
    Plus,
    /// `√(-(u+c))` for `u ≤ -c`
    Minus,
}

/// Separable factor solving `ρ'/ρ = (1/2)/(c+u)` on the requested branch.
pub fn separable_rho_continuous(u: f64, c: f64, branch: Branch) -> Result<f64> {
    let t = u + c;
    match branch {
        Branch::Plus if t >= 0.0 => Ok(t.sqrt()),
        Branch::Minus if t <= 0.0 => Ok((-t).sqrt()),
        _ => domain(format!("u + c = {t} has the wrong sign for branch {branch:?}")),
    }
}

/// `max_i |Σ_k x_k^2/(a_k+u_i) - 1|` at an interior point.
pub fn quadric_membership_residual(params: &ContinuousParams, u: &[f64]) -> Result<f64> {
    params.check_interior(u)?;
    let x = eval_continuous(params, u)?;
    Ok(u.iter()
        .map(|ui| (x.iter().zip(&params.a).map(|(xk, ak)| xk * xk / (ak + ui)).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max))
}

/// `∏_i(u_i+a_k) / ∏_{i≠k}(a_k-a_i)` for every `k`, at any `u` (no domain check).
pub fn squared_coordinate_formula(params: &ContinuousParams, u: &[f64]) -> Vec<f64> {
    let n = params.dim();
    (0..n)
        .map(|k| {
            let num: f64 = u.iter().map(|ui| ui + params.a[k]).product();
            let den: f64 = (0..n).filter(|&i| i != k).map(|i| params.a[k] - params.a[i]).product();
            num / den
        })
        .collect()
}

/// `max_k |x_k^2 - ∏_i(u_i+a_k)/∏_{i≠k}(a_k-a_i)| / max(1, x_k^2)`.
pub fn squared_coordinate_residual(params: &ContinuousParams, u: &[f64]) -> Result<f64> {
    let x = eval_continuous(params, u)?;
    Ok(squared_coordinate_formula(params, u)
        .iter()
        .zip(&x)
        .map(|(rhs, xk)| (xk * xk - rhs).abs() / rhs.abs().max(1.0))
        .fold(0.0, f64::max))
}

/// `|Σ x_k^2 - Σ (u_k + a_k)|`.
pub fn sphere_residual(params: &ContinuousParams, u: &[f64]) -> Result<f64> {
    let x = eval_continuous(params, u)?;
    let rhs: f64 = u.iter().zip(&params.a).map(|(ui, ai)| ui + ai).sum();
    Ok((dot(&x, &x) - rhs).abs())
}

/// `max_i |⟨x, ∂x/∂u_i⟩ - 1/2|` with the closed-form Jacobian.
pub fn radial_residual(params: &ContinuousParams, u: &[f64]) -> Result<f64> {
    let x = eval_continuous(params, u)?;
    let jac = partial_derivatives(params, u)?;
    Ok(jac.iter().map(|row| (dot(&x, row) - 0.5).abs()).fold(0.0, f64::max))
}
