//! Discrete Euler-Poisson-Darboux equation and discrete Koenigs nets.
//!
//! Two-dimensional nets are handled through [`NetWindow`], a sparse map from
//! integer offsets to points of R^N. Koenigs certification is done twice,
//! independently: by the explicit gamma-function weight `ν` and by the
//! multi-ratio of diagonal intersections around a vertex star.

use std::collections::HashMap;

use crate::error::{domain, Error, Result};
use crate::specfun::pochhammer;
use crate::vector::{dist, dot, sub};

/// Parameters of `Δ_iΔ_j x = γ/(n_i+ε_i-n_j-ε_j) (Δ_j x - Δ_i x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpdParams {
    pub gamma: f64,
    pub eps: Vec<f64>,
}

impl EpdParams {
    /// `γ = ½`, `ε_i = -i/2`: the shifts of discrete confocal coordinates.
    pub fn confocal(m: usize) -> Self {
        EpdParams { gamma: 0.5, eps: (1..=m).map(|i| -(i as f64) / 2.0).collect() }
    }

    /// `γ/(n_i+ε_i-n_j-ε_j)`
    pub fn coefficient(&self, i: usize, j: usize, n_i: f64, n_j: f64) -> Result<f64> {
        let d = n_i + self.eps[i] - n_j - self.eps[j];
        if d == 0.0 {
            return Err(Error::SingularStencil(format!(
                "n_i + eps_i - n_j - eps_j vanishes at (n_i, n_j) = ({n_i}, {n_j})"
            )));
        }
        Ok(self.gamma / d)
    }
}

/// Two-dimensional subnet in directions `dims = (i, j)`: offset `(a, b)`
/// carries lattice values `(n_i, n_j) = origin + (a, b)`.
#[derive(Debug, Clone, Default)]
pub struct NetWindow {
    pub dims: (usize, usize),
    pub origin: (f64, f64),
    pub values: HashMap<(i64, i64), Vec<f64>>,
}

impl NetWindow {
    pub fn new(dims: (usize, usize), origin: (f64, f64)) -> Self {
        NetWindow { dims, origin, values: HashMap::new() }
    }

    pub fn insert(&mut self, at: (i64, i64), x: Vec<f64>) {
        self.values.insert(at, x);
    }

    pub fn get(&self, at: (i64, i64)) -> Result<&[f64]> {
        self.values
            .get(&at)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Domain(format!("offset {at:?} is outside the window")))
    }

    pub fn offsets(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<_> = self.values.keys().copied().collect();
        v.sort_unstable();
        v
    }
}

/// `‖Δ_iΔ_j x - c (Δ_j x - Δ_i x)‖` for the quad `x, x_(i), x_(j), x_(ij)`.
pub fn depd_quad_residual(x: &[f64], xi: &[f64], xj: &[f64], xij: &[f64], c: f64) -> f64 {
    (0..x.len())
        .map(|k| {
            let di = xi[k] - x[k];
            let dj = xj[k] - x[k];
            let dij = xij[k] - xi[k] - xj[k] + x[k];
            (dij - c * (dj - di)).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// dEPD residual of the elementary quad with lower corner `at`.
pub fn depd_residual(net: &NetWindow, params: &EpdParams, at: (i64, i64)) -> Result<f64> {
    let (i, j) = net.dims;
    let c = params.coefficient(i, j, net.origin.0 + at.0 as f64, net.origin.1 + at.1 as f64)?;
    Ok(depd_quad_residual(
        net.get(at)?,
        net.get((at.0 + 1, at.1))?,
        net.get((at.0, at.1 + 1))?,
        net.get((at.0 + 1, at.1 + 1))?,
        c,
    ))
}

/// Coefficients of the discrete Darboux form `Δ_iΔ_j x = A Δ_i x + B Δ_j x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxCoefficients {
    pub a: f64,
    pub b: f64,
}

/// Darboux coefficients of dEPD: `A = -γ/d`, `B = γ/d`, `d = n_i+ε_i-n_j-ε_j`.
pub fn depd_darboux(params: &EpdParams, i: usize, j: usize, n_i: f64, n_j: f64) -> Result<DarbouxCoefficients> {
    let c = params.coefficient(i, j, n_i, n_j)?;
    Ok(DarbouxCoefficients { a: -c, b: c })
}

/// `μ(m) = Γ(½(m+Δε+γ+1)) / Γ(½(m+Δε-γ+1))` (period-2 factor fixed to 1).
pub fn koenigs_nu(m: i64, delta_eps: f64, gamma: f64) -> Result<f64> {
    let lo = 0.5 * (m as f64 + delta_eps - gamma + 1.0);
    if !(lo > 0.0) {
        return domain(format!("gamma argument {lo} is not positive for m = {m}"));
    }
    pochhammer(lo, gamma)
}

/// `ν` on a 2D subnet. On the part of the lattice where `n_i - n_j + Δε` is
/// too small for [`koenigs_nu`], the roles of `i` and `j` are exchanged, which
/// yields the other positive solution of the same recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KoenigsWeight {
    pub delta_eps: f64,
    pub gamma: f64,
    pub swapped: bool,
}

impl KoenigsWeight {
    /// Picks the orientation for which `ν` is defined on the given `m = n_i - n_j` values.
    pub fn for_range(params: &EpdParams, i: usize, j: usize, ms: &[i64]) -> Result<Self> {
        let delta_eps = params.eps[i] - params.eps[j];
        let gamma = params.gamma;
        if ms.iter().all(|&m| koenigs_nu(m, delta_eps, gamma).is_ok()) {
            return Ok(KoenigsWeight { delta_eps, gamma, swapped: false });
        }
        if ms.iter().all(|&m| koenigs_nu(-m, -delta_eps, gamma).is_ok()) {
            return Ok(KoenigsWeight { delta_eps, gamma, swapped: true });
        }
        domain(format!("no orientation of nu is defined on m in {ms:?}"))
    }

    pub fn nu(&self, m: i64) -> Result<f64> {
        if self.swapped {
            koenigs_nu(-m, -self.delta_eps, self.gamma)
        } else {
            koenigs_nu(m, self.delta_eps, self.gamma)
        }
    }
}

/// Residuals of `(A+1)ν_(i) = (B+1)ν_(j)` and `ν_(ij) = (A+B+1)ν` at `(n_i, n_j)`,
/// relative to the size of the terms.
pub fn koenigs_z2_residual(params: &EpdParams, i: usize, j: usize, m2_i: i64, m2_j: i64) -> Result<(f64, f64)> {
    if (m2_i - m2_j) % 2 != 0 {
        return domain("n_i and n_j must have equal parity");
    }
    let (n_i, n_j) = (m2_i as f64 / 2.0, m2_j as f64 / 2.0);
    let m = (m2_i - m2_j) / 2;
    let w = KoenigsWeight::for_range(params, i, j, &[m - 1, m, m + 1])?;
    let ab = depd_darboux(params, i, j, n_i, n_j)?;
    let (nu, nu_i, nu_j, nu_ij) = (w.nu(m)?, w.nu(m + 1)?, w.nu(m - 1)?, w.nu(m)?);
    let lhs = (ab.a + 1.0) * nu_i;
    let rhs = (ab.b + 1.0) * nu_j;
    let r1 = (lhs - rhs).abs() / lhs.abs().max(rhs.abs());
    let r2 = (nu_ij - (ab.a + ab.b + 1.0) * nu).abs() / nu.abs();
    Ok((r1, r2))
}

/// Darboux coefficients on the four faces `[base, (i), (j), (ij)]` of a 2×2 block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxBlock {
    pub faces: [DarbouxCoefficients; 4],
}

/// `|lhs/rhs - 1|` for the Koenigs compatibility condition
/// `(A_(ij)+1)/(B_(ij)+1) = (A_(j)+B_(j)+1)/(A_(i)+B_(i)+1) · (A+1)/(B+1)`.
pub fn koenigs_compatibility(block: &DarbouxBlock) -> Result<f64> {
    let [f, fi, fj, fij] = block.faces;
    let den = |v: f64, what: &str| {
        if v == 0.0 {
            Err(Error::DegenerateCoefficient(format!("{what} vanishes")))
        } else {
            Ok(v)
        }
    };
    let lhs = (fij.a + 1.0) / den(fij.b + 1.0, "B_(ij)+1")?;
    let rhs = (fj.a + fj.b + 1.0) / den(fi.a + fi.b + 1.0, "A_(i)+B_(i)+1")? * (f.a + 1.0) / den(f.b + 1.0, "B+1")?;
    Ok((lhs / den(rhs, "right-hand side")? - 1.0).abs())
}

/// Intersection point of the diagonals `[x, x_(ij)]` and `[x_(i), x_(j)]` of
/// the quad `(x, x_(i), x_(ij), x_(j))`.
///
/// Fails when the two diagonal lines miss each other by more than `1e-9`
/// times the mean edge length, or when they are parallel.
pub fn diagonal_intersection(face: [&[f64]; 4]) -> Result<Vec<f64>> {
    let [x, xi, xij, xj] = face;
    let p = sub(xij, x);
    let q = sub(xj, xi);
    let w = sub(xi, x);
    let scale = (dist(x, xi) + dist(xi, xij) + dist(xij, xj) + dist(xj, x)) / 4.0;
    if !(scale > 0.0) {
        return Err(Error::Geometry("degenerate face".into()));
    }
    // x + s p = xi + t q  in the least-squares sense
    let (pp, pq, qq) = (dot(&p, &p), dot(&p, &q), dot(&q, &q));
    let (pw, qw) = (dot(&p, &w), dot(&q, &w));
    let det = pp * qq - pq * pq;
    if det.abs() <= 1e-24 * pp * qq || pp == 0.0 || qq == 0.0 {
        return Err(Error::Geometry("diagonals are parallel".into()));
    }
    let s = (pw * qq - pq * qw) / det;
    let t = (pq * pw - pp * qw) / det;
    let on_p: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + s * b).collect();
    let on_q: Vec<f64> = xi.iter().zip(&q).map(|(a, b)| a + t * b).collect();
    let gap = dist(&on_p, &on_q) / scale;
    if gap > 1e-9 {
        return Err(Error::Geometry(format!("face is not planar (diagonal gap {gap:e})")));
    }
    Ok(on_p.iter().zip(&on_q).map(|(a, b)| 0.5 * (a + b)).collect())
}

/// Directed ratio `(a→m) : (m→b)` of three collinear points, by projection
/// onto `b - a`.
pub fn directed_ratio(a: &[f64], m: &[f64], b: &[f64]) -> Result<f64> {
    let d = sub(b, a);
    let num = dot(&sub(m, a), &d);
    let den = dot(&sub(b, m), &d);
    if den == 0.0 || dot(&d, &d) == 0.0 {
        return Err(Error::Geometry("degenerate segment in directed ratio".into()));
    }
    Ok(num / den)
}

/// Neighbours of a vertex in cyclic order `+i, +j, -i, -j`, and the diagonal
/// intersections of the faces `(+i,+j)`, `(-i,+j)`, `(-i,-j)`, `(+i,-j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexStar {
    pub neighbours: [Vec<f64>; 4],
    pub intersections: [Vec<f64>; 4],
}

impl VertexStar {
    /// Builds the star from a 3×3 block `block[a+1][b+1] = x(n + a e_i + b e_j)`.
    pub fn from_block(block: &[[Vec<f64>; 3]; 3]) -> Result<Self> {
        let at = |a: i64, b: i64| block[(a + 1) as usize][(b + 1) as usize].as_slice();
        let face = |a: i64, b: i64| {
            // face spanned by steps a e_i and b e_j, listed as (x, x_(i), x_(ij), x_(j))
            diagonal_intersection([at(0, 0), at(a, 0), at(a, b), at(0, b)])
        };
        Ok(VertexStar {
            neighbours: [at(1, 0).to_vec(), at(0, 1).to_vec(), at(-1, 0).to_vec(), at(0, -1).to_vec()],
            intersections: [face(1, 1)?, face(-1, 1)?, face(-1, -1)?, face(1, -1)?],
        })
    }

    /// Star of a [`NetWindow`] vertex; missing neighbours give a domain error.
    pub fn from_window(net: &NetWindow, at: (i64, i64)) -> Result<Self> {
        let fetch = |a: i64, b: i64| net.get((at.0 + a, at.1 + b)).map(<[f64]>::to_vec);
        let block = [
            [fetch(-1, -1)?, fetch(-1, 0)?, fetch(-1, 1)?],
            [fetch(0, -1)?, fetch(0, 0)?, fetch(0, 1)?],
            [fetch(1, -1)?, fetch(1, 0)?, fetch(1, 1)?],
        ];
        VertexStar::from_block(&block)
    }
}

/// Cyclic product of directed ratios
/// `(q1 q2)/(q2 q3) · (q3 q4)/(q4 q5) · (q5 q6)/(q6 q7) · (q7 q8)/(q8 q1)`
/// with neighbours at odd and diagonal intersections at even positions.
/// Equals 1 exactly when the net is Koenigs at this vertex.
pub fn koenigs_multiratio(star: &VertexStar) -> Result<f64> {
    let mut prod = 1.0;
    for k in 0..4 {
        prod *= directed_ratio(&star.neighbours[k], &star.intersections[k], &star.neighbours[(k + 1) % 4])?;
    }
    Ok(prod)
}

/// `|multiratio - 1|` at a window vertex.
pub fn multiratio_residual(net: &NetWindow, at: (i64, i64)) -> Result<f64> {
    Ok((koenigs_multiratio(&VertexStar::from_window(net, at)?)? - 1.0).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideBranch {
    /// `(n + shift)_γ`
    Right,
    /// `(1 - γ - n - shift)_γ`, equal to `(-n - shift + ½)_{1/2}` for `γ = ½`
    Left,
}

/// Separable factor solving `ρ(n+1) = ρ(n) (n+shift+γ)/(n+shift)`.
pub fn separable_rho_discrete(n: f64, shift: f64, gamma: f64, branch: SideBranch) -> Result<f64> {
    let arg = match branch {
        SideBranch::Right => n + shift,
        SideBranch::Left => 1.0 - gamma - n - shift,
    };
    pochhammer(arg, gamma)
}
