//! Quad meshes of discrete quadrics, discrete conic polylines, and their export.
//!
//! A layer fixes `n_i` at some integer or half-integer level; the remaining
//! coordinates run over the same parity. Layers at `level ± ½` are the dual
//! layers from the other lattice.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::discrete::Net;
use crate::error::{domain, Error, Result};
use crate::lattice::{HalfLatticePoint, Parity, SignVector, Window};
use crate::vector::{dot, norm, sub};

/// Which layer a mesh was cut from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerTag {
    /// Fixed direction, 1-based.
    pub direction: usize,
    /// Doubled level `2 n_i`.
    pub level_m2: i64,
    pub parity: Parity,
    /// Largest face planarity residual of the mesh.
    pub max_planarity: f64,
    pub reflected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadSurfaceMesh {
    pub layer: LayerTag,
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 4]>,
    /// Doubled lattice coordinates of each vertex.
    pub lattice: Vec<Vec<i64>>,
}

/// A layer of an N=2 net: a discrete conic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicCurve {
    pub layer: LayerTag,
    pub vertices: Vec<[f64; 2]>,
    pub lattice: Vec<Vec<i64>>,
}

/// `|det[p₁-p₀, p₂-p₀, p₃-p₀]| / (mean edge length)³`.
pub fn planarity_residual(face: [&[f64]; 4]) -> Result<f64> {
    if face.iter().any(|p| p.len() != 3) {
        return Err(Error::Geometry("planarity needs points in R^3".into()));
    }
    let mean = (0..4).map(|k| norm(&sub(face[(k + 1) % 4], face[k]))).sum::<f64>() / 4.0;
    if mean == 0.0 {
        return Err(Error::Geometry("face has zero perimeter".into()));
    }
    let u = sub(face[1], face[0]);
    let v = sub(face[2], face[0]);
    let w = sub(face[3], face[0]);
    Ok(dot(&u, &cross(&v, &w)).abs() / mean.powi(3))
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Doubled coordinates of one axis of a layer: the window range on the
/// requested parity, cut to the domain interval `[-α_i, -α_{i+1}]`.
fn axis_values(alpha: &[i64], window: &Window, axis: usize, parity: Parity) -> Vec<i64> {
    let (lo, hi) = window.ranges[axis];
    let mut lo2 = 2 * lo;
    let mut hi2 = 2 * hi;
    lo2 = lo2.max(-2 * alpha[axis]);
    if axis + 1 < alpha.len() {
        hi2 = hi2.min(-2 * alpha[axis + 1]);
    }
    let want = if parity == Parity::Integer { 0 } else { 1 };
    (lo2..=hi2).filter(|m| m.rem_euclid(2) == want).collect()
}

fn check_layer<N: Net + ?Sized>(net: &N, dir: usize, window: &Window) -> Result<()> {
    let n = net.params().dim();
    if dir >= n {
        return Err(Error::Parameter(format!("direction {} out of range", dir + 1)));
    }
    if window.dim() != n {
        return Err(Error::Parameter(format!("window has {} axes, net has {n}", window.dim())));
    }
    Ok(())
}

fn layer_level_check<N: Net + ?Sized>(net: &N, dir: usize, level_m2: i64) -> Result<()> {
    let alpha = net.params().alpha();
    let upper = if dir + 1 < alpha.len() { -2 * alpha[dir + 1] } else { i64::MAX };
    if level_m2 < -2 * alpha[dir] || level_m2 > upper {
        return domain(format!("level {} is outside the domain of n_{}", level_m2 as f64 / 2.0, dir + 1));
    }
    Ok(())
}

/// Quad mesh of the N=3 layer `n_dir = level_m2 / 2` over the window.
/// Vertices are row-major in the remaining two lattice indices.
pub fn surface_mesh<N: Net + ?Sized>(net: &N, dir: usize, level_m2: i64, window: &Window) -> Result<QuadSurfaceMesh> {
    check_layer(net, dir, window)?;
    if net.params().dim() != 3 {
        return Err(Error::Parameter("surface meshes need N = 3; use conic_curve for N = 2".into()));
    }
    layer_level_check(net, dir, level_m2)?;
    let parity = if level_m2.rem_euclid(2) == 0 { Parity::Integer } else { Parity::Half };
    let alpha = net.params().alpha();
    let axes: Vec<usize> = (0..3).filter(|&k| k != dir).collect();
    let rows = axis_values(alpha, window, axes[0], parity);
    let cols = axis_values(alpha, window, axes[1], parity);
    if rows.is_empty() || cols.is_empty() {
        return domain(format!("window leaves no points on layer n_{} = {}", dir + 1, level_m2 as f64 / 2.0));
    }
    let mut vertices = Vec::with_capacity(rows.len() * cols.len());
    let mut lattice = Vec::with_capacity(rows.len() * cols.len());
    for &r in &rows {
        for &c in &cols {
            let mut m = vec![0; 3];
            m[dir] = level_m2;
            m[axes[0]] = r;
            m[axes[1]] = c;
            let p = HalfLatticePoint::new(m)?;
            let x = net.x(&p)?;
            vertices.push([x[0], x[1], x[2]]);
            lattice.push(p.m().to_vec());
        }
    }
    let nc = cols.len();
    let mut faces = Vec::new();
    for r in 0..rows.len().saturating_sub(1) {
        for c in 0..nc.saturating_sub(1) {
            faces.push([r * nc + c, r * nc + c + 1, (r + 1) * nc + c + 1, (r + 1) * nc + c]);
        }
    }
    let mut mesh = QuadSurfaceMesh {
        layer: LayerTag { direction: dir + 1, level_m2, parity, max_planarity: 0.0, reflected: false },
        vertices,
        faces,
        lattice,
    };
    mesh.layer.max_planarity = mesh.max_planarity();
    Ok(mesh)
}

/// The layer at `level_m2` and those of its two dual neighbours `level ± ½`
/// that lie in the domain.
pub fn surface_with_duals<N: Net + ?Sized>(net: &N, dir: usize, level_m2: i64, window: &Window) -> Result<Vec<QuadSurfaceMesh>> {
    let mut out = vec![surface_mesh(net, dir, level_m2, window)?];
    for lv in [level_m2 - 1, level_m2 + 1] {
        match surface_mesh(net, dir, lv, window) {
            Ok(m) => out.push(m),
            Err(e) if e.is_skippable() => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// The N=2 layer `n_dir = level_m2 / 2`: a discrete conic.
pub fn conic_curve<N: Net + ?Sized>(net: &N, dir: usize, level_m2: i64, window: &Window) -> Result<ConicCurve> {
    check_layer(net, dir, window)?;
    if net.params().dim() != 2 {
        return Err(Error::Parameter("conic curves need N = 2".into()));
    }
    layer_level_check(net, dir, level_m2)?;
    let parity = if level_m2.rem_euclid(2) == 0 { Parity::Integer } else { Parity::Half };
    let other = 1 - dir;
    let mut vertices = Vec::new();
    let mut lattice = Vec::new();
    for v in axis_values(net.params().alpha(), window, other, parity) {
        let mut m = vec![0; 2];
        m[dir] = level_m2;
        m[other] = v;
        let p = HalfLatticePoint::new(m)?;
        let x = net.x(&p)?;
        vertices.push([x[0], x[1]]);
        lattice.push(p.m().to_vec());
    }
    Ok(ConicCurve {
        layer: LayerTag { direction: dir + 1, level_m2, parity, max_planarity: 0.0, reflected: false },
        vertices,
        lattice,
    })
}

/// Angle in radians between `Δ_i x(n)` and the normal of its dual facet
/// `{x(n + ½e_i + ½(±e_j ± e_k))}` (normal from the cross product of the
/// facet diagonals). Zero for an orthogonal pair.
pub fn edge_dual_facet_angle<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, i: usize) -> Result<f64> {
    if net.params().dim() != 3 || i > 2 {
        return Err(Error::Parameter("edge/facet angles need N = 3 and i < 3".into()));
    }
    let (j, k) = match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let corner = |sj: i8, sk: i8| -> Result<Vec<f64>> {
        let mut s = vec![1i8; 3];
        s[j] = sj;
        s[k] = sk;
        net.x(&p.shifted_half(&SignVector::new(s)?))
    };
    let d1 = sub(&corner(1, 1)?, &corner(-1, -1)?);
    let d2 = sub(&corner(1, -1)?, &corner(-1, 1)?);
    let nrm = cross(&d1, &d2);
    let edge = sub(&net.x(&p.shifted(i, 1))?, &net.x(p)?);
    if norm(&nrm) == 0.0 || norm(&edge) == 0.0 {
        return Err(Error::SingularStencil(format!("degenerate edge or dual facet at {p}")));
    }
    Ok(norm(&cross(&edge, &nrm)).atan2(dot(&edge, &nrm).abs()))
}

/// All sign copies `s ⊙ x` of the point, skipping copies that coincide
/// because a component vanishes.
pub fn reflect_point(x: &[f64]) -> Vec<Vec<f64>> {
    SignVector::all(x.len())
        .into_iter()
        .filter(|s| (0..x.len()).all(|k| x[k] != 0.0 || s.get(k) == 1))
        .map(|s| x.iter().enumerate().map(|(k, v)| v * s.get(k) as f64).collect())
        .collect()
}

/// Reflections of the points into all `2^N` orthants, without duplicates on
/// the mirrors.
pub fn reflect_orthants(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points.iter().flat_map(|x| reflect_point(x)).collect()
}

impl QuadSurfaceMesh {
    pub fn max_planarity(&self) -> f64 {
        self.faces
            .iter()
            .filter_map(|f| planarity_residual(f.map(|v| &self.vertices[v][..])).ok())
            .fold(0.0, f64::max)
    }

    /// The mesh copied into all eight octants. Vertices on a mirror plane are
    /// shared between the copies; copies with an odd number of reflections get
    /// reversed faces so orientation stays consistent.
    pub fn reflected(&self) -> QuadSurfaceMesh {
        let mut index: HashMap<(usize, [i8; 3]), usize> = HashMap::new();
        let mut vertices = Vec::new();
        let mut lattice = Vec::new();
        let mut faces = Vec::new();
        for s in SignVector::all(3) {
            let sign = [s.get(0) as i8, s.get(1) as i8, s.get(2) as i8];
            let mut vid = |v: usize| -> usize {
                let x = self.vertices[v];
                let key_sign = [0, 1, 2].map(|k| if x[k] == 0.0 { 1 } else { sign[k] });
                *index.entry((v, key_sign)).or_insert_with(|| {
                    vertices.push([0, 1, 2].map(|k| x[k] * key_sign[k] as f64));
                    lattice.push(self.lattice[v].clone());
                    vertices.len() - 1
                })
            };
            let flip = sign.iter().filter(|&&c| c < 0).count() % 2 == 1;
            for f in &self.faces {
                let mut g = f.map(&mut vid);
                if flip {
                    g.reverse();
                }
                faces.push(g);
            }
            // isolated vertices (no faces) still get their copies
            for v in 0..self.vertices.len() {
                vid(v);
            }
        }
        let mut layer = self.layer.clone();
        layer.reflected = true;
        QuadSurfaceMesh { layer, vertices, faces, lattice }
    }

    /// `v x y z` lines, then `f i j k l` lines (1-based).
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# layer n{} = {} ({:?}){}",
            self.layer.direction,
            self.layer.level_m2 as f64 / 2.0,
            self.layer.parity,
            if self.layer.reflected { ", reflected" } else { "" }
        );
        for v in &self.vertices {
            let _ = writeln!(s, "v {} {} {}", v[0], v[1], v[2]);
        }
        for f in &self.faces {
            let _ = writeln!(s, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mesh: QuadSurfaceMesh = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("mesh JSON: {e}")))?;
        let nv = mesh.vertices.len();
        if mesh.lattice.len() != nv || mesh.faces.iter().flatten().any(|&v| v >= nv) {
            return Err(Error::Malformed("mesh indices out of range".into()));
        }
        Ok(mesh)
    }
}

impl ConicCurve {
    /// `v x y 0` lines, then one `l` line through all vertices.
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# layer n{} = {} ({:?})", self.layer.direction, self.layer.level_m2 as f64 / 2.0, self.layer.parity);
        for v in &self.vertices {
            let _ = writeln!(s, "v {} {} 0", v[0], v[1]);
        }
        if self.vertices.len() > 1 {
            let idx: Vec<String> = (1..=self.vertices.len()).map(|i| i.to_string()).collect();
            let _ = writeln!(s, "l {}", idx.join(" "));
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Vertices and faces of an OBJ document (`v` and `f` records only; `f`
/// entries may carry `/vt/vn` suffixes).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObjData {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

pub fn parse_obj(text: &str) -> Result<ObjData> {
    let mut out = ObjData::default();
    for (lineno, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        let bad = |what: &str| Error::Malformed(format!("OBJ line {}: {what}", lineno + 1));
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it.map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| bad("bad coordinate"))?;
                if c.len() < 3 {
                    return Err(bad("vertex needs three coordinates"));
                }
                out.vertices.push([c[0], c[1], c[2]]);
            }
            Some("f") => {
                let mut f = Vec::new();
                for tok in it {
                    let i: usize = tok.split('/').next().unwrap_or("").parse().map_err(|_| bad("bad index"))?;
                    if i == 0 || i > out.vertices.len() {
                        return Err(bad("index out of range"));
                    }
                    f.push(i - 1);
                }
                out.faces.push(f);
            }
            _ => {}
        }
    }
    Ok(out)
}
