//! Discrete umbilics and focal conics of the N=3 net.
//!
//! The umbilics of the ellipsoids `n₃ = const` sit at `n₁ = n₂ = -β` and trace
//! the discrete focal hyperbola
//! `(D₁(α-β-½) s(n₃+α-1), 0, D₃(β-γ-½) s(n₃+γ))`, `n₃ ≥ -γ`;
//! those of the two-sheeted hyperboloids `n₁ = const` sit at `n₂ = n₃ = -γ`
//! and trace the discrete focal ellipse
//! `(D₁(α-γ-1) s(n₁+α), D₂(β-γ-½) s(-n₁-β), 0)`, `-α ≤ n₁ ≤ -β`.
//! Both curves run over integers and half-integers.

use serde::{Deserialize, Serialize};

use super::spatial::Params3D;
use crate::error::{domain, Error, Result};
use crate::specfun::dsqrt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolylineKind {
    FocalHyperbola,
    FocalEllipse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub kind: PolylineKind,
    pub points: Vec<[f64; 3]>,
}

impl Polyline {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("polyline JSON: {e}")))
    }

    /// `v` lines and one `l` line through all of them.
    pub fn to_obj(&self) -> String {
        let name = match self.kind {
            PolylineKind::FocalHyperbola => "focal hyperbola",
            PolylineKind::FocalEllipse => "focal ellipse",
        };
        let mut s = format!("# {name}\n");
        for p in &self.points {
            s.push_str(&format!("v {} {} {}\n", p[0], p[1], p[2]));
        }
        if self.points.len() > 1 {
            let idx: Vec<String> = (1..=self.points.len()).map(|i| i.to_string()).collect();
            s.push_str(&format!("l {}\n", idx.join(" ")));
        }
        s
    }
}

fn s2(t: i64) -> Result<f64> {
    dsqrt(t as f64 / 2.0)
}

/// Focal-hyperbola point at doubled parameter `m₃ = 2n₃`.
pub fn ellipsoid_umbilic(p: &Params3D, m3: i64) -> Result<[f64; 3]> {
    if m3 < -2 * p.gamma_lat {
        return domain(format!("n3 = {} < -gamma", m3 as f64 / 2.0));
    }
    let [d1, _, d3] = p.d();
    let (a, b, g) = (p.alpha as f64, p.beta as f64, p.gamma_lat as f64);
    Ok([
        d1 * (a - b - 0.5) * s2(m3 + 2 * p.alpha - 2)?,
        0.0,
        d3 * (b - g - 0.5) * s2(m3 + 2 * p.gamma_lat)?,
    ])
}

/// Focal-ellipse point at doubled parameter `m₁ = 2n₁`.
pub fn hyperboloid_umbilic(p: &Params3D, m1: i64) -> Result<[f64; 3]> {
    if m1 < -2 * p.alpha || m1 > -2 * p.beta {
        return domain(format!("n1 = {} outside [-alpha, -beta]", m1 as f64 / 2.0));
    }
    let [d1, d2, _] = p.d();
    let (a, b, g) = (p.alpha as f64, p.beta as f64, p.gamma_lat as f64);
    Ok([
        d1 * (a - g - 1.0) * s2(m1 + 2 * p.alpha)?,
        d2 * (b - g - 0.5) * s2(-m1 - 2 * p.beta)?,
        0.0,
    ])
}

/// Umbilics of the ellipsoids for `n₃ ∈ [lo, hi]` in half steps.
pub fn umbilic_curve_ellipsoid(p: &Params3D, lo: i64, hi: i64) -> Result<Polyline> {
    let points = (2 * lo..=2 * hi).map(|m| ellipsoid_umbilic(p, m)).collect::<Result<_>>()?;
    Ok(Polyline { kind: PolylineKind::FocalHyperbola, points })
}

/// Umbilics of the two-sheeted hyperboloids for `n₁ ∈ [lo, hi]` in half steps.
pub fn umbilic_curve_hyperboloid(p: &Params3D, lo: i64, hi: i64) -> Result<Polyline> {
    let points = (2 * lo..=2 * hi).map(|m| hyperboloid_umbilic(p, m)).collect::<Result<_>>()?;
    Ok(Polyline { kind: PolylineKind::FocalEllipse, points })
}

/// `|x(n₃)x(n₃+½)/(α-β-½) - z(n₃)z(n₃+½)/(β-γ-½) - 1|`.
pub fn focal_hyperbola_residual(p: &Params3D, m3: i64) -> Result<f64> {
    let u = ellipsoid_umbilic(p, m3)?;
    let v = ellipsoid_umbilic(p, m3 + 1)?;
    let (a, b, g) = (p.alpha as f64, p.beta as f64, p.gamma_lat as f64);
    Ok((u[0] * v[0] / (a - b - 0.5) - u[2] * v[2] / (b - g - 0.5) - 1.0).abs())
}

/// `|x(n₁)x(n₁+½)/(α-γ-1) + y(n₁)y(n₁+½)/(β-γ-½) - 1|`.
pub fn focal_ellipse_residual(p: &Params3D, m1: i64) -> Result<f64> {
    let u = hyperboloid_umbilic(p, m1)?;
    let v = hyperboloid_umbilic(p, m1 + 1)?;
    let (a, b, g) = (p.alpha as f64, p.beta as f64, p.gamma_lat as f64);
    Ok((u[0] * v[0] / (a - g - 1.0) + u[1] * v[1] / (b - g - 0.5) - 1.0).abs())
}

/// Distance of a point from the classical focal conic, measured as `|lhs - 1|`
/// of `x²/(a-b) - z²/(b-c) = 1` or `x²/(a-c) + y²/(b-c) = 1`.
pub fn focal_conic_deviation(p: &Params3D, kind: PolylineKind, x: &[f64; 3]) -> f64 {
    match kind {
        PolylineKind::FocalHyperbola => (x[0] * x[0] / (p.a - p.b) - x[2] * x[2] / (p.b - p.c) - 1.0).abs(),
        PolylineKind::FocalEllipse => (x[0] * x[0] / (p.a - p.c) + x[1] * x[1] / (p.b - p.c) - 1.0).abs(),
    }
}

/// Max deviation of the discrete focal conic from the classical one for the
/// spectrum `L·(α₀, β₀, γ₀)`. The hyperbola is sampled on `n₃ ∈ [-γ, -γ+(α-γ)]`,
/// the ellipse on its full range.
pub fn focal_conic_anchor(alpha0: [i64; 3], scale: i64, kind: PolylineKind) -> Result<f64> {
    let [a, b, g] = alpha0.map(|v| v * scale);
    let p = Params3D::new(a, b, g)?;
    let curve = match kind {
        PolylineKind::FocalHyperbola => umbilic_curve_ellipsoid(&p, -g, a - 2 * g)?,
        PolylineKind::FocalEllipse => umbilic_curve_hyperboloid(&p, -a, -b)?,
    };
    Ok(curve.points.iter().map(|x| focal_conic_deviation(&p, kind, x)).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::HalfLatticePoint;
    use crate::lowdim::spatial::eval_3d;

    fn prm() -> Params3D {
        Params3D::new(8, 4, 1).unwrap()
    }

    #[test]
    fn hyperbola_endpoint_on_axis() {
        let x = ellipsoid_umbilic(&prm(), -2).unwrap();
        assert_eq!(x[1], 0.0);
        assert_eq!(x[2], 0.0);
        assert!(x[0] > 0.0);
        assert!(matches!(ellipsoid_umbilic(&prm(), -3), Err(Error::Domain(_))));
    }

    #[test]
    fn umbilics_lie_on_the_net() {
        let p = prm();
        for m3 in [-2, 0, 4, 10] {
            let n = HalfLatticePoint::new(vec![-8, -8, m3]).unwrap();
            let (u, v) = (ellipsoid_umbilic(&p, m3).unwrap(), eval_3d(&p, &n).unwrap());
            assert!((0..3).all(|k| (u[k] - v[k]).abs() < 1e-12));
        }
        for m1 in [-16, -12, -8] {
            let n = HalfLatticePoint::new(vec![m1, -2, -2]).unwrap();
            let (u, v) = (hyperboloid_umbilic(&p, m1).unwrap(), eval_3d(&p, &n).unwrap());
            assert!((0..3).all(|k| (u[k] - v[k]).abs() < 1e-12));
        }
    }

    #[test]
    fn hyperbola_relation() {
        let p = prm();
        for m3 in -2..16 {
            assert!(focal_hyperbola_residual(&p, m3).unwrap() < 1e-10, "{m3}");
        }
    }

    #[test]
    fn ellipse_relation_and_endpoints() {
        let p = prm();
        for m1 in -16..-8 {
            assert!(focal_ellipse_residual(&p, m1).unwrap() < 1e-10, "{m1}");
        }
        let c = umbilic_curve_hyperboloid(&p, -8, -4).unwrap();
        assert_eq!(c.points.len(), 9);
        assert_eq!(c.points[0][0], 0.0);
        assert_eq!(c.points[8][1], 0.0);
    }

    #[test]
    fn polyline_json() {
        let c = umbilic_curve_ellipsoid(&prm(), -1, 8).unwrap();
        assert_eq!(c.points.len(), 19);
        let text = c.to_json().unwrap();
        assert!(text.contains("\"focal_hyperbola\""));
        assert_eq!(Polyline::from_json(&text).unwrap(), c);
        let obj = c.to_obj();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 19);
        assert!(obj.lines().last().unwrap().starts_with("l 1 2 "));
    }

    #[test]
    fn continuum_anchor_decreases() {
        for kind in [PolylineKind::FocalHyperbola, PolylineKind::FocalEllipse] {
            let d: Vec<f64> = [1, 2, 4, 8].iter().map(|&l| focal_conic_anchor([8, 4, 1], l, kind).unwrap()).collect();
            for w in d.windows(2) {
                assert!(w[1] < 0.7 * w[0], "{kind:?}: {d:?}");
            }
        }
    }
}
