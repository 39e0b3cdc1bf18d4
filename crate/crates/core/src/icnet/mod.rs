//! Incircular nets (IC-nets): line grids in the plane in which every
//! elementary quadrilateral has an incircle, the net `ω` of incenters, and
//! its two diagonal subnets `η_{kl} = ω_{k-l,k+l}` (`k, l` integer) and
//! `η̃_{kl}` (`k, l` half-integer).

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_6;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod solve;
mod verify;

pub use solve::{icnet_solve, pitot_residuals, SolveOutcome};
pub use verify::{
    factorization_numerical, factorization_numerical_grid, verify_grid, verify_icnet_theorem, IcReport, IcTolerances,
    PropertyResult, FACTORIZATION,
};

pub type P2 = [f64; 2];

/// The line `{a x + b y = c}` with unit normal `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line2D {
    pub normal: P2,
    pub offset: f64,
}

impl Line2D {
    /// Normalizes `(a, b, c)` so that `a² + b² = 1`.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let r = a.hypot(b);
        if !(r > 0.0 && r.is_finite() && c.is_finite()) {
            return Err(Error::Geometry(format!("({a}, {b}, {c}) is not a line")));
        }
        Ok(Line2D { normal: [a / r, b / r], offset: c / r })
    }

    /// Line with normal `(cos θ, sin θ)`.
    pub fn from_angle(theta: f64, offset: f64) -> Self {
        Line2D { normal: [theta.cos(), theta.sin()], offset }
    }

    pub fn angle(&self) -> f64 {
        self.normal[1].atan2(self.normal[0])
    }

    /// Unit direction `(-b, a)`.
    pub fn direction(&self) -> P2 {
        [-self.normal[1], self.normal[0]]
    }

    pub fn intersect(&self, other: &Line2D) -> Result<P2> {
        let [a1, b1] = self.normal;
        let [a2, b2] = other.normal;
        let det = a1 * b2 - a2 * b1;
        if det.abs() < 1e-14 {
            return Err(Error::Geometry("parallel lines do not intersect".into()));
        }
        Ok([(self.offset * b2 - other.offset * b1) / det, (a1 * other.offset - a2 * self.offset) / det])
    }

    /// Homogeneous coordinates `(a, b, -c)` scaled to unit length.
    pub fn homogeneous_unit(&self) -> [f64; 3] {
        let h = [self.normal[0], self.normal[1], -self.offset];
        let r = (h[0] * h[0] + h[1] * h[1] + h[2] * h[2]).sqrt();
        h.map(|v| v / r)
    }
}

/// Two ordered families of lines; `f_{ij} = rows[i] ∩ cols[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineGrid {
    pub rows: Vec<Line2D>,
    pub cols: Vec<Line2D>,
}

#[derive(Serialize, Deserialize)]
struct GridFile {
    rows: Vec<[f64; 3]>,
    cols: Vec<[f64; 3]>,
}

impl LineGrid {
    pub fn new(rows: Vec<Line2D>, cols: Vec<Line2D>) -> Result<Self> {
        if rows.len() < 2 || cols.len() < 2 {
            return Err(Error::Geometry("a line grid needs at least two rows and two columns".into()));
        }
        Ok(LineGrid { rows, cols })
    }

    /// `n × n` lines: rows `y = i`, columns with normal `(cos π/6, sin π/6)`
    /// and offset `j`. Both strips have unit width, so every cell is a rhombus.
    pub fn rhombic(n: usize) -> Self {
        let rows = (0..n).map(|i| Line2D { normal: [0.0, 1.0], offset: i as f64 }).collect();
        let cols = (0..n).map(|j| Line2D::from_angle(FRAC_PI_6, j as f64)).collect();
        LineGrid { rows, cols }
    }

    pub fn n_lines(&self) -> usize {
        self.rows.len() + self.cols.len()
    }

    pub fn lines(&self) -> impl Iterator<Item = &Line2D> {
        self.rows.iter().chain(&self.cols)
    }

    /// Line parameters `(θ, c)` of rows then columns.
    pub fn parameters(&self) -> Vec<f64> {
        self.lines().flat_map(|l| [l.angle(), l.offset]).collect()
    }

    pub fn from_parameters(&self, p: &[f64]) -> LineGrid {
        let line = |k: usize| Line2D::from_angle(p[2 * k], p[2 * k + 1]);
        let nr = self.rows.len();
        LineGrid {
            rows: (0..nr).map(line).collect(),
            cols: (nr..self.n_lines()).map(line).collect(),
        }
    }

    /// The grid with `(θ, c)` of every line shifted by `offsets`.
    pub fn perturbed(&self, offsets: &[f64]) -> Result<LineGrid> {
        let p = self.parameters();
        if offsets.len() != p.len() {
            return Err(Error::Parameter(format!("need {} offsets, got {}", p.len(), offsets.len())));
        }
        Ok(self.from_parameters(&p.iter().zip(offsets).map(|(a, b)| a + b).collect::<Vec<_>>()))
    }

    pub fn to_json(&self) -> Result<String> {
        let row = |l: &Line2D| [l.normal[0], l.normal[1], l.offset];
        let file = GridFile { rows: self.rows.iter().map(row).collect(), cols: self.cols.iter().map(row).collect() };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Parses `{"rows": [[a,b,c]…], "cols": [[a,b,c]…]}`; normals must be unit.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GridFile = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("line grid JSON: {e}")))?;
        let conv = |v: &[[f64; 3]]| -> Result<Vec<Line2D>> {
            v.iter()
                .map(|&[a, b, c]| {
                    if !((a * a + b * b - 1.0).abs() <= 1e-12 && c.is_finite()) {
                        return Err(Error::Malformed(format!("line ({a}, {b}, {c}) has no unit normal")));
                    }
                    Ok(Line2D { normal: [a, b], offset: c })
                })
                .collect()
        };
        LineGrid::new(conv(&file.rows)?, conv(&file.cols)?).map_err(|e| Error::Malformed(e.to_string()))
    }
}

pub type PointGrid = Vec<Vec<P2>>;

/// `f_{ij} = rows[i] ∩ cols[j]`.
pub fn build_vertices(grid: &LineGrid) -> Result<PointGrid> {
    grid.rows
        .iter()
        .map(|r| grid.cols.iter().map(|c| r.intersect(c)).collect())
        .collect()
}

/// Whether the vertices advance monotonically along every line.
pub fn order_preserved(grid: &LineGrid, f: &PointGrid) -> bool {
    let monotone = |t: P2, pts: &mut dyn Iterator<Item = P2>| {
        let s: Vec<f64> = pts.map(|p| p[0] * t[0] + p[1] * t[1]).collect();
        s.windows(2).all(|w| w[1] > w[0]) || s.windows(2).all(|w| w[1] < w[0])
    };
    let rows_ok = grid.rows.iter().enumerate().all(|(i, l)| monotone(l.direction(), &mut f[i].iter().copied()));
    let cols_ok = grid
        .cols
        .iter()
        .enumerate()
        .all(|(j, l)| monotone(l.direction(), &mut f.iter().map(|row| row[j])));
    rows_ok && cols_ok
}

fn sub2(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn len2(a: P2) -> f64 {
    a[0].hypot(a[1])
}

fn cross2(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Outcome of the Pitot test on a quadrilateral `(A, B, C, D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentialCheck {
    pub tangential: bool,
    /// `|(|AB| + |CD|) - (|BC| + |DA|)|`
    pub pitot_residual: f64,
    pub perimeter: f64,
    pub convex: bool,
}

pub fn check_tangential(q: [P2; 4]) -> TangentialCheck {
    let side = |k: usize| len2(sub2(q[(k + 1) % 4], q[k]));
    let pitot_residual = ((side(0) + side(2)) - (side(1) + side(3))).abs();
    let perimeter = (0..4).map(side).sum::<f64>();
    let turns: Vec<f64> = (0..4)
        .map(|k| cross2(sub2(q[(k + 1) % 4], q[k]), sub2(q[(k + 2) % 4], q[(k + 1) % 4])))
        .collect();
    let convex = turns.iter().all(|&t| t > 0.0) || turns.iter().all(|&t| t < 0.0);
    TangentialCheck { tangential: convex && pitot_residual <= 1e-9 * perimeter, pitot_residual, perimeter, convex }
}

/// Incircle of a tangential quad: intersection of the interior angle
/// bisectors at `A` and `B`, checked against all four sides.
pub fn incircle(q: [P2; 4]) -> Result<(P2, f64)> {
    let chk = check_tangential(q);
    if !chk.tangential {
        return Err(Error::NotTangential { pitot_residual: chk.pitot_residual });
    }
    let unit = |v: P2| {
        let r = len2(v);
        [v[0] / r, v[1] / r]
    };
    let bisector = |k: usize| {
        let u = unit(sub2(q[(k + 1) % 4], q[k]));
        let v = unit(sub2(q[(k + 3) % 4], q[k]));
        [u[0] + v[0], u[1] + v[1]]
    };
    let (da, db) = (bisector(0), bisector(1));
    let det = cross2(da, db);
    if det.abs() < 1e-14 {
        return Err(Error::Geometry("angle bisectors are parallel".into()));
    }
    let w = sub2(q[1], q[0]);
    let s = cross2(w, db) / det;
    let center = [q[0][0] + s * da[0], q[0][1] + s * da[1]];
    let dist = |k: usize| {
        let e = sub2(q[(k + 1) % 4], q[k]);
        cross2(e, sub2(center, q[k])).abs() / len2(e)
    };
    let r = dist(0);
    if (1..4).any(|k| (dist(k) - r).abs() > 1e-9 * r) {
        return Err(Error::NotTangential { pitot_residual: chk.pitot_residual });
    }
    Ok((center, r))
}

/// Vertices `f`, incenters `ω` and incircle radii of a verified IC-net.
#[derive(Debug, Clone, PartialEq)]
pub struct ICNetData {
    pub grid: LineGrid,
    pub f: PointGrid,
    pub omega: PointGrid,
    pub radii: Vec<Vec<f64>>,
}

/// The cell `(f_{ij}, f_{i+1,j}, f_{i+1,j+1}, f_{i,j+1})`.
pub fn cell(f: &PointGrid, i: usize, j: usize) -> [P2; 4] {
    [f[i][j], f[i + 1][j], f[i + 1][j + 1], f[i][j + 1]]
}

impl ICNetData {
    /// Intersections, order check and incircles of every cell.
    pub fn build(grid: &LineGrid) -> Result<Self> {
        let f = build_vertices(grid)?;
        if !order_preserved(grid, &f) {
            return Err(Error::Geometry("vertex order along some line is not preserved".into()));
        }
        let (nr, nc) = (f.len() - 1, f[0].len() - 1);
        let mut omega = vec![Vec::with_capacity(nc); nr];
        let mut radii = vec![Vec::with_capacity(nc); nr];
        for i in 0..nr {
            for j in 0..nc {
                let (c, r) = incircle(cell(&f, i, j))?;
                omega[i].push(c);
                radii[i].push(r);
            }
        }
        Ok(ICNetData { grid: grid.clone(), f, omega, radii })
    }
}

/// The two diagonal subnets keyed by doubled indices `(K, L) = (2k, 2l)`,
/// where `ω_{ij}` sits at `K = i + j`, `L = j - i`. Even `K` gives `η`,
/// odd `K` gives `η̃`.
pub fn dual_subnets(omega: &PointGrid) -> (BTreeMap<(i64, i64), P2>, BTreeMap<(i64, i64), P2>) {
    let mut eta = BTreeMap::new();
    let mut eta_tilde = BTreeMap::new();
    for (i, row) in omega.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            let key = ((i + j) as i64, j as i64 - i as i64);
            if (i + j) % 2 == 0 {
                eta.insert(key, w);
            } else {
                eta_tilde.insert(key, w);
            }
        }
    }
    (eta, eta_tilde)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: P2, b: P2, tol: f64) -> bool {
        (a[0] - b[0]).abs() <= tol && (a[1] - b[1]).abs() <= tol
    }

    #[test]
    fn unit_grid_vertices() {
        let rows = (0..3).map(|i| Line2D::new(0.0, 1.0, i as f64).unwrap()).collect();
        let cols = (0..3).map(|j| Line2D::new(1.0, 0.0, j as f64).unwrap()).collect();
        let g = LineGrid::new(rows, cols).unwrap();
        let f = build_vertices(&g).unwrap();
        assert!(close(f[2][1], [1.0, 2.0], 1e-15));
        assert!(order_preserved(&g, &f));
    }

    #[test]
    fn parallel_lines_rejected() {
        let l = Line2D::new(0.0, 1.0, 0.0).unwrap();
        let g = LineGrid::new(vec![l, Line2D::new(1.0, 0.0, 1.0).unwrap()], vec![l, Line2D::new(1.0, 1.0, 0.0).unwrap()]).unwrap();
        assert!(matches!(build_vertices(&g), Err(Error::Geometry(_))));
    }

    #[test]
    fn pitot() {
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert_eq!(check_tangential(sq).pitot_residual, 0.0);
        let rh = [[0.0, 0.0], [2.0, 0.0], [3.0, 3f64.sqrt()], [1.0, 3f64.sqrt()]];
        let c = check_tangential(rh);
        assert!(c.tangential && c.pitot_residual < 1e-15);
        // trapezoid: 4 + 2 against 2·√2
        let tr = [[0.0, 0.0], [4.0, 0.0], [3.0, 1.0], [1.0, 1.0]];
        let c = check_tangential(tr);
        assert!(!c.tangential && (c.pitot_residual - (6.0 - 2.0 * 2f64.sqrt())).abs() < 1e-14);
        let dart = [[0.0, 0.0], [2.0, 0.0], [0.5, 0.5], [0.0, 2.0]];
        assert!(!check_tangential(dart).convex);
    }

    #[test]
    fn incircles() {
        let (c, r) = incircle([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(close(c, [0.5, 0.5], 1e-15) && (r - 0.5).abs() < 1e-15);
        // rhombus with half-diagonals p = 2, q = 1 around the origin
        let (c, r) = incircle([[-2.0, 0.0], [0.0, -1.0], [2.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!(close(c, [0.0, 0.0], 1e-15) && (r - 2.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            incircle([[0.0, 0.0], [4.0, 0.0], [3.0, 1.0], [1.0, 1.0]]),
            Err(Error::NotTangential { .. })
        ));
    }

    #[test]
    fn rhombic_builtin() {
        let g = LineGrid::rhombic(9);
        let d = ICNetData::build(&g).unwrap();
        assert_eq!((d.omega.len(), d.omega[0].len()), (8, 8));
        let (eta, eta_t) = dual_subnets(&d.omega);
        assert_eq!(eta.len(), 32);
        assert_eq!(eta_t.len(), 32);
        // η_{kl} = ω_{k-l,k+l}
        assert_eq!(eta[&(4, 2)], d.omega[1][3]);
        assert_eq!(eta_t[&(3, 1)], d.omega[1][2]);
    }

    #[test]
    fn json_round_trip() {
        let g = LineGrid::rhombic(4);
        let back = LineGrid::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
        assert!(matches!(LineGrid::from_json(r#"{"rows": [[2,0,0],[0,1,1]], "cols": [[1,0,0],[1,0,1]]}"#), Err(Error::Malformed(_))));
    }
}
