//! Certification of the IC-net theorem on the incenter net:
//! (i) common tangent conic of the lines, (ii) diagonal intersections,
//! (iii) circular-conical quads and vertex stars, (iv) orthogonal dual edges,
//! (v) Koenigs multi-ratio of `η`, `η̃` and `ω`, and the factorization
//! property (vi), which is reported separately.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{build_vertices, cell, check_tangential, ICNetData, LineGrid, PointGrid, P2};
use crate::epd::{diagonal_intersection, koenigs_multiratio, VertexStar};
use crate::error::{Error, Result};
use crate::exec::{sweep, Exec, SweepStats};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcTolerances {
    /// Properties (ii)–(v).
    pub theorem: f64,
    /// Dual-conic tangency residual of property (i).
    pub conic: f64,
    /// Log double differences of property (vi).
    pub factorization: f64,
}

impl Default for IcTolerances {
    fn default() -> Self {
        IcTolerances { theorem: 1e-6, conic: 1e-6, factorization: 1e-5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub count: usize,
    pub skipped: usize,
}

impl PropertyResult {
    pub fn from_stats(s: SweepStats, tolerance: f64) -> Self {
        PropertyResult { max_residual: s.max_residual, tolerance, pass: s.passes(tolerance), count: s.count, skipped: s.skipped }
    }
}

/// Per-property results. `pass` covers every property except the
/// factorization, which is exploratory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcReport {
    pub properties: BTreeMap<String, PropertyResult>,
    pub notes: Vec<String>,
    pub pass: bool,
}

pub const FACTORIZATION: &str = "vi_factorization";

impl IcReport {
    fn finish(properties: BTreeMap<String, PropertyResult>, notes: Vec<String>) -> Self {
        let pass = properties.iter().filter(|(k, _)| k.as_str() != FACTORIZATION).all(|(_, v)| v.pass);
        IcReport { properties, notes, pass }
    }

    pub fn get(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.get(name)
    }
}

fn sub2(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn angle(u: P2, v: P2) -> f64 {
    (u[0] * v[1] - u[1] * v[0]).abs().atan2(u[0] * v[0] + u[1] * v[1])
}

fn len2(a: P2) -> f64 {
    a[0].hypot(a[1])
}

fn dims(g: &PointGrid) -> (usize, usize) {
    (g.len(), g.first().map_or(0, Vec::len))
}

fn indices(rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Vec<(usize, usize)> {
    rows.flat_map(|i| cols.clone().map(move |j| (i, j))).collect()
}

/// The quad of one diagonal subnet centred on `ω_{ij}`:
/// `(ω_{i,j-1}, ω_{i+1,j}, ω_{i,j+1}, ω_{i-1,j})`.
fn diagonal_quad(w: &PointGrid, i: usize, j: usize) -> [P2; 4] {
    [w[i][j - 1], w[i + 1][j], w[i][j + 1], w[i - 1][j]]
}

/// Pitot residual divided by the perimeter, per cell.
fn pitot_stats(f: &PointGrid, exec: Exec) -> SweepStats {
    let (nr, nc) = dims(f);
    sweep(&indices(0..nr - 1, 0..nc - 1), exec, |&(i, j)| {
        let c = check_tangential(cell(f, i, j));
        if !c.convex {
            return Ok(f64::INFINITY);
        }
        Ok(c.pitot_residual / c.perimeter)
    })
}

/// Property (i): fit `ℓᵀ C ℓ = 0` to the unit homogeneous coordinates of all
/// lines; the residual is `max |ℓᵀ C ℓ|` for the unit-norm minimizer `C`.
pub fn dual_conic_fit(grid: &LineGrid) -> Result<f64> {
    let lines: Vec<[f64; 3]> = grid.lines().map(|l| l.homogeneous_unit()).collect();
    if lines.len() < 6 {
        return Err(Error::Geometry("conic fit needs at least six lines".into()));
    }
    let a = DMatrix::from_fn(lines.len(), 6, |r, c| {
        let l = lines[r];
        match c {
            0 => l[0] * l[0],
            1 => l[1] * l[1],
            2 => l[2] * l[2],
            3 => 2.0 * l[0] * l[1],
            4 => 2.0 * l[0] * l[2],
            _ => 2.0 * l[1] * l[2],
        }
    });
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.ok_or_else(|| Error::Geometry("SVD failed".into()))?;
    let k = svd.singular_values.imin();
    let q = vt.row(k).transpose();
    Ok((a * q).amax())
}

/// Runs the theorem checks on an IC-net.
pub fn verify_icnet_theorem(data: &ICNetData, tol: &IcTolerances, exec: Exec) -> IcReport {
    let w = &data.omega;
    let f = &data.f;
    let (nr, nc) = dims(w);
    let mut props = BTreeMap::new();
    let mut notes = Vec::new();
    let t = tol.theorem;

    props.insert("pitot".to_string(), PropertyResult::from_stats(pitot_stats(f, exec), 1e-9));

    match dual_conic_fit(&data.grid) {
        Ok(r) => {
            let s = SweepStats { max_residual: r, count: data.grid.n_lines(), skipped: 0 };
            props.insert("i_dual_conic".into(), PropertyResult::from_stats(s, tol.conic));
        }
        Err(e) => notes.push(format!("dual conic fit: {e}")),
    }

    let centres = if nr >= 3 && nc >= 3 { indices(1..nr - 1, 1..nc - 1) } else { Vec::new() };

    let diag = sweep(&centres, exec, |&(i, j)| {
        let q = diagonal_quad(w, i, j);
        let x = diagonal_intersection([&q[0], &q[1], &q[2], &q[3]])?;
        let mean = (0..4).map(|k| len2(sub2(q[(k + 1) % 4], q[k]))).sum::<f64>() / 4.0;
        Ok(len2(sub2([x[0], x[1]], w[i][j])) / mean)
    });
    props.insert("ii_diagonal_intersections".into(), PropertyResult::from_stats(diag, t));

    let quads = sweep(&centres, exec, |&(i, j)| {
        let q = diagonal_quad(w, i, j);
        let at = |k: usize| angle(sub2(q[(k + 1) % 4], q[k]), sub2(q[(k + 3) % 4], q[k]));
        Ok((at(0) + at(2) - PI).abs().max((at(1) + at(3) - PI).abs()))
    });
    props.insert("iii_circular_quads".into(), PropertyResult::from_stats(quads, t));

    let stars = sweep(&centres, exec, |&(i, j)| {
        let v = w[i][j];
        let nb = [w[i + 1][j + 1], w[i - 1][j + 1], w[i - 1][j - 1], w[i + 1][j - 1]].map(|p| sub2(p, v));
        let phi = |k: usize| angle(nb[k], nb[(k + 1) % 4]);
        Ok((phi(0) + phi(2) - PI).abs().max((phi(1) + phi(3) - PI).abs()))
    });
    props.insert("iii_circular_stars".into(), PropertyResult::from_stats(stars, t));

    let edges = if nr >= 2 && nc >= 2 { indices(0..nr - 1, 0..nc - 1) } else { Vec::new() };
    let ortho = sweep(&edges, exec, |&(i, j)| {
        let e = sub2(w[i + 1][j + 1], w[i][j]);
        let d = sub2(w[i][j + 1], w[i + 1][j]);
        Ok((e[0] * d[0] + e[1] * d[1]).abs() / (len2(e) * len2(d)))
    });
    props.insert("iv_dual_edge_orthogonality".into(), PropertyResult::from_stats(ortho, t));

    // stars of η / η̃ reach two steps out in ω
    let deep = if nr >= 5 && nc >= 5 { indices(2..nr - 2, 2..nc - 2) } else { Vec::new() };
    for (name, parity) in [("v_koenigs_eta", 0), ("v_koenigs_eta_tilde", 1)] {
        let pts: Vec<(usize, usize)> = deep.iter().copied().filter(|(i, j)| (i + j) % 2 == parity).collect();
        let s = sweep(&pts, exec, |&(i, j)| {
            let at = |a: i64, b: i64| {
                let p = w[(i as i64 + a - b) as usize][(j as i64 + a + b) as usize];
                vec![p[0], p[1]]
            };
            let block = [-1, 0, 1].map(|a| [-1, 0, 1].map(|b| at(a, b)));
            Ok((koenigs_multiratio(&VertexStar::from_block(&block)?)? - 1.0).abs())
        });
        props.insert(name.into(), PropertyResult::from_stats(s, t));
    }

    let omega_stars = sweep(&centres, exec, |&(i, j)| {
        let block = [-1i64, 0, 1].map(|a| {
            [-1i64, 0, 1].map(|b| {
                let p = w[(i as i64 + a) as usize][(j as i64 + b) as usize];
                vec![p[0], p[1]]
            })
        });
        Ok((koenigs_multiratio(&VertexStar::from_block(&block)?)? - 1.0).abs())
    });
    props.insert("v_koenigs_omega".into(), PropertyResult::from_stats(omega_stars, t));

    match factorization_numerical_grid(w) {
        Ok(s) => {
            props.insert(FACTORIZATION.into(), PropertyResult::from_stats(s, tol.factorization));
        }
        Err(e) => notes.push(format!("factorization: {e}")),
    }
    IcReport::finish(props, notes)
}

/// Pitot test on every cell, then the theorem checks if all cells are
/// tangential.
pub fn verify_grid(grid: &LineGrid, tol: &IcTolerances, exec: Exec) -> Result<IcReport> {
    let f = build_vertices(grid)?;
    let pitot = PropertyResult::from_stats(pitot_stats(&f, exec), 1e-9);
    if !pitot.pass {
        let mut props = BTreeMap::new();
        props.insert("pitot".to_string(), pitot);
        let note = format!("not an IC-net: max Pitot residual / perimeter {:e}", pitot.max_residual);
        return Ok(IcReport::finish(props, vec![note]));
    }
    match ICNetData::build(grid) {
        Ok(data) => Ok(verify_icnet_theorem(&data, tol, exec)),
        Err(e @ (Error::Geometry(_) | Error::NotTangential { .. })) => {
            let mut props = BTreeMap::new();
            props.insert("pitot".to_string(), PropertyResult { pass: false, ..pitot });
            Ok(IcReport::finish(props, vec![format!("not an IC-net: {e}")]))
        }
        Err(e) => Err(e),
    }
}

/// `Q = ⟨Δ₁x(n), Δ₁x(n+½f)⟩ / ⟨Δ₂x(n-e₂+½f), Δ₂x(n-e₂+f)⟩` for the combined
/// net `x(k,l) = ω_{k-l,k+l}`, at the `ω` index of `n`.
fn factor_quotient(w: &PointGrid, i: usize, j: usize) -> Result<f64> {
    let d = |a: (usize, usize), b: (usize, usize)| sub2(w[a.0][a.1], w[b.0][b.1]);
    let dot = |u: P2, v: P2| u[0] * v[0] + u[1] * v[1];
    let p1 = dot(d((i + 1, j + 1), (i, j)), d((i + 1, j + 2), (i, j + 1)));
    let p2 = dot(d((i, j + 1), (i + 1, j)), d((i, j + 2), (i + 1, j + 1)));
    if p1 == 0.0 || p2 == 0.0 {
        return Err(Error::SingularStencil(format!("vanishing inner product at omega ({i}, {j})")));
    }
    Ok(p1 / p2)
}

/// Property (vi): `|log|Q(k,l)| - log|Q(k+1,l)| - log|Q(k,l+1)| + log|Q(k+1,l+1)||`
/// over all quadruples that fit into the grid. Zero exactly when `Q`
/// separates into a function of `k` times a function of `l`.
pub fn factorization_numerical_grid(w: &PointGrid) -> Result<SweepStats> {
    let (nr, nc) = dims(w);
    if nr < 4 || nc < 5 {
        return Err(Error::Geometry(format!("factorization check needs at least 4×5 incenters, got {nr}×{nc}")));
    }
    let pts = indices(1..nr - 2, 0..nc - 4);
    Ok(sweep(&pts, Exec::Sequential, |&(i, j)| {
        let lq = |a: usize, b: usize| factor_quotient(w, a, b).map(|q| q.abs().ln());
        Ok((lq(i, j)? - lq(i + 1, j + 1)? - lq(i - 1, j + 1)? + lq(i, j + 2)?).abs())
    }))
}

pub fn factorization_numerical(data: &ICNetData) -> Result<SweepStats> {
    factorization_numerical_grid(&data.omega)
}
