//! Discrete confocal quadrics in the first octant.
//!
//! ```text
//! x = D₁ s(n₁+α)     s(n₂+α-½) s(n₃+α-1)
//! y = D₂ s(-n₁-β)    s(n₂+β)   s(n₃+β-½)
//! z = D₃ s(-n₁-γ-½)  s(-n₂-γ)  s(n₃+γ)
//! ```
//! on `-α ≤ n₁ ≤ -β ≤ n₂ ≤ -γ ≤ n₃`, with `a = α+½`, `b = β+1`, `c = γ+3/2`,
//! `D₁² = (b-c)D²`, `D₂² = (a-c)D²`, `D₃² = (a-b)D²`, `D² = 1/((a-b)(a-c)(b-c))`.

use crate::discrete::DiscreteParams;
use crate::error::{domain, Error, Result};
use crate::lattice::{HalfLatticePoint, SignVector};
use crate::specfun::dsqrt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params3D {
    pub alpha: i64,
    pub beta: i64,
    /// Third spectrum value (γ of the lattice, not the EPD parameter).
    pub gamma_lat: i64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    d: [f64; 3],
}

fn s2(t: i64) -> Result<f64> {
    dsqrt(t as f64 / 2.0)
}

impl Params3D {
    pub fn new(alpha: i64, beta: i64, gamma_lat: i64) -> Result<Self> {
        if !(alpha > beta && beta > gamma_lat) {
            return Err(Error::Parameter(format!("need alpha > beta > gamma, got {alpha}, {beta}, {gamma_lat}")));
        }
        let a = alpha as f64 + 0.5;
        let b = beta as f64 + 1.0;
        let c = gamma_lat as f64 + 1.5;
        let dd = 1.0 / ((a - b) * (a - c) * (b - c));
        let d = [((b - c) * dd).sqrt(), ((a - c) * dd).sqrt(), ((a - b) * dd).sqrt()];
        Ok(Params3D { alpha, beta, gamma_lat, a, b, c, d })
    }

    /// `D² = 1/((a-b)(a-c)(b-c))`.
    pub fn d_sq(&self) -> f64 {
        1.0 / ((self.a - self.b) * (self.a - self.c) * (self.b - self.c))
    }

    pub fn d(&self) -> [f64; 3] {
        self.d
    }

    pub fn to_discrete(&self) -> DiscreteParams {
        DiscreteParams::new(vec![self.alpha, self.beta, self.gamma_lat]).expect("alpha > beta > gamma")
    }

    pub fn check_point(&self, n: &HalfLatticePoint) -> Result<()> {
        let m = n.m();
        if m.len() != 3 {
            return domain(format!("{n} is not a spatial lattice point"));
        }
        let (a2, b2, g2) = (2 * self.alpha, 2 * self.beta, 2 * self.gamma_lat);
        if m[0] < -a2 || m[0] > -b2 || m[1] < -b2 || m[1] > -g2 || m[2] < -g2 {
            return domain(format!("{n} is outside -alpha <= n1 <= -beta <= n2 <= -gamma <= n3"));
        }
        Ok(())
    }

    pub fn contains(&self, n: &HalfLatticePoint) -> bool {
        self.check_point(n).is_ok()
    }
}

/// Closed form `x(n)`.
pub fn eval_3d(p: &Params3D, n: &HalfLatticePoint) -> Result<[f64; 3]> {
    p.check_point(n)?;
    let m = n.m();
    let (a, b, g) = (p.alpha, p.beta, p.gamma_lat);
    Ok([
        p.d[0] * s2(m[0] + 2 * a)? * s2(m[1] + 2 * a - 1)? * s2(m[2] + 2 * a - 2)?,
        p.d[1] * s2(-m[0] - 2 * b)? * s2(m[1] + 2 * b)? * s2(m[2] + 2 * b - 1)?,
        p.d[2] * s2(-m[0] - 2 * g - 1)? * s2(-m[1] - 2 * g)? * s2(m[2] + 2 * g)?,
    ])
}

/// Closed form of `Δ_i x(n)`, `i ∈ {0, 1, 2}`.
pub fn delta_3d(p: &Params3D, n: &HalfLatticePoint, i: usize) -> Result<[f64; 3]> {
    if i > 2 {
        return Err(Error::Parameter(format!("direction {} out of range", i + 1)));
    }
    p.check_point(n)?;
    p.check_point(&n.shifted(i, 1))?;
    let m = n.m();
    let (a, b, g) = (p.alpha, p.beta, p.gamma_lat);
    let [d1, d2, d3] = p.d;
    let v = match i {
        0 => [
            d1 * s2(m[1] + 2 * a - 1)? * s2(m[2] + 2 * a - 2)? / s2(m[0] + 2 * a + 1)?,
            -d2 * s2(m[1] + 2 * b)? * s2(m[2] + 2 * b - 1)? / s2(-m[0] - 2 * b - 1)?,
            -d3 * s2(-m[1] - 2 * g)? * s2(m[2] + 2 * g)? / s2(-m[0] - 2 * g - 2)?,
        ],
        1 => [
            d1 * s2(m[0] + 2 * a)? * s2(m[2] + 2 * a - 2)? / s2(m[1] + 2 * a)?,
            d2 * s2(-m[0] - 2 * b)? * s2(m[2] + 2 * b - 1)? / s2(m[1] + 2 * b + 1)?,
            -d3 * s2(-m[0] - 2 * g - 1)? * s2(m[2] + 2 * g)? / s2(-m[1] - 2 * g - 1)?,
        ],
        _ => [
            d1 * s2(m[0] + 2 * a)? * s2(m[1] + 2 * a - 1)? / s2(m[2] + 2 * a - 1)?,
            d2 * s2(-m[0] - 2 * b)? * s2(m[1] + 2 * b)? / s2(m[2] + 2 * b)?,
            d3 * s2(-m[0] - 2 * g - 1)? * s2(-m[1] - 2 * g)? / s2(m[2] + 2 * g + 1)?,
        ],
    };
    Ok(v.map(|c| 0.5 * c))
}

/// `⟨Δ_i x(n), Δ_j x(n-e_j+½f)⟩` for `(i,j) = (1,2), (1,3), (2,3)`.
pub fn dual_orthogonality_3d(p: &Params3D, n: &HalfLatticePoint) -> Result<[f64; 3]> {
    let f = SignVector::ones(3);
    let mut out = [0.0; 3];
    for (slot, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        let u = delta_3d(p, n, i)?;
        let v = delta_3d(p, &n.shifted(j, -1).shifted_half(&f), j)?;
        out[slot] = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    }
    Ok(out)
}

/// The three linear conditions
/// `D₁²(t+a-s) - D₂²(t+b-s) + D₃²(t+c-s)` with `(t, s) = (n₃, 3/2), (n₂, 1), (n₁, ½)`.
pub fn orthogonality_system_3d(p: &Params3D, n: &HalfLatticePoint) -> [f64; 3] {
    let [d1, d2, d3] = p.d.map(|d| d * d);
    let row = |t: f64, s: f64| d1 * (t + p.a - s) - d2 * (t + p.b - s) + d3 * (t + p.c - s);
    [row(n.n(2), 1.5), row(n.n(1), 1.0), row(n.n(0), 0.5)]
}

/// `(D₁² - D₂² + D₃², D₁²a - D₂²b + D₃²c)`.
pub fn scaling_relations_3d(p: &Params3D) -> [f64; 2] {
    let [d1, d2, d3] = p.d.map(|d| d * d);
    [d1 - d2 + d3, d1 * p.a - d2 * p.b + d3 * p.c]
}

/// Shifted parameters `(u, v, w) = (n₁+σ₁/4-¾, n₂+σ₂/4-5/4, n₃+σ₃/4-7/4)`.
pub fn shifted_uvw(n: &HalfLatticePoint, sigma: &SignVector) -> [f64; 3] {
    [0.75, 1.25, 1.75]
        .into_iter()
        .enumerate()
        .map(|(i, s)| n.n(i) + 0.25 * sigma.get(i) as f64 - s)
        .collect::<Vec<_>>()
        .try_into()
        .expect("three components")
}

/// Residuals `|lhs - 1|` of the three bilinear quadric relations between
/// `x(n)` and `x(n+½σ)`.
pub fn quadric_relations_3d(p: &Params3D, n: &HalfLatticePoint, sigma: &SignVector) -> Result<[f64; 3]> {
    let x = eval_3d(p, n)?;
    let xs = eval_3d(p, &n.shifted_half(sigma))?;
    let mut out = [0.0; 3];
    for (r, t) in out.iter_mut().zip(shifted_uvw(n, sigma)) {
        let dens = [t + p.a, t + p.b, t + p.c];
        if dens.contains(&0.0) {
            return Err(Error::SingularIndex(format!("vanishing denominator at {n}, sigma {sigma}")));
        }
        let lhs: f64 = (0..3).map(|k| x[k] * xs[k] / dens[k]).sum();
        *r = (lhs - 1.0).abs();
    }
    Ok(out)
}
