//! Verification suites and the machine-readable report they fill.
//!
//! Every suite entry is a max-reduced residual over a set of stencils with a
//! tolerance. Stencils that reach outside the tabulated window or the domain
//! are counted as skipped.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::continuous::{
    epd_residual_continuous, eval_continuous, invert_continuous, orthogonality_residual_analytic,
    quadric_membership_residual, radial_residual, sphere_residual, squared_coordinate_residual, ContinuousParams,
};
use crate::discrete::{
    depd_residual_discrete, eval_discrete, factorization_residual, orthogonality_residual_scaled, product_residual,
    quadric_residual, radial_identity, scalar_identity, Net,
};
use crate::epd::{koenigs_multiratio, koenigs_z2_residual, EpdParams, VertexStar};
use crate::error::{Error, Result};
use crate::exec::{sweep, Exec, SweepStats};
use crate::icnet::{verify_grid, IcTolerances, LineGrid};
use crate::lattice::{HalfLatticePoint, Parity, SignVector, Window};
use crate::lowdim::planar::{conic_relations_2d, eval_2d, isothermic_ratio_2d, propagate_2d, tau_commutator, TauSign};
use crate::lowdim::spatial::{dual_orthogonality_3d, orthogonality_system_3d, quadric_relations_3d, scaling_relations_3d};
use crate::lowdim::umbilic::{ellipsoid_umbilic, focal_ellipse_residual, focal_hyperbola_residual, hyperboloid_umbilic};
use crate::lowdim::{Params2D, Params3D};
use crate::mesh::{edge_dual_facet_angle, parse_obj, surface_mesh, QuadSurfaceMesh};
use crate::net::TabulatedNet;
use crate::specfun::{dsqrt, pochhammer};
use crate::vector::{norm, sub};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub count: usize,
    pub skipped: usize,
}

impl SuiteResult {
    pub fn from_stats(s: SweepStats, tolerance: f64) -> Self {
        SuiteResult { max_residual: s.max_residual, tolerance, pass: s.passes(tolerance), count: s.count, skipped: s.skipped }
    }

    /// A single number that must stay strictly below `bound`.
    pub fn below(value: f64, bound: f64, count: usize) -> Self {
        SuiteResult { max_residual: value, tolerance: bound, pass: value < bound, count, skipped: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suites: BTreeMap<String, SuiteResult>,
    pub config_echo: Value,
}

impl Report {
    pub fn new(config_echo: Value) -> Self {
        Report { suites: BTreeMap::new(), config_echo }
    }

    pub fn add(&mut self, name: impl Into<String>, r: SuiteResult) {
        self.suites.insert(name.into(), r);
    }

    fn stats(&mut self, name: &str, s: SweepStats, tol: f64) {
        self.add(name, SuiteResult::from_stats(s, tol));
    }

    pub fn get(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.get(name)
    }

    /// True when there is at least one suite and every suite passes.
    pub fn pass(&self) -> bool {
        !self.suites.is_empty() && self.suites.values().all(|r| r.pass)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.suites.iter().filter(|(_, r)| !r.pass).map(|(k, _)| k.as_str()).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Default tolerances of every suite. Each field can be overridden by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub specfun: f64,
    pub continuous: f64,
    pub inversion: f64,
    /// Lower bound for `r(h=1e-3)/r(h=1e-4)` of the EPD finite-difference residual.
    pub epd_decay_ratio: f64,
    pub depd: f64,
    pub orthogonality: f64,
    pub identity: f64,
    pub radial: f64,
    pub conic: f64,
    pub tau: f64,
    pub propagation: f64,
    pub isothermic: f64,
    pub d_consistency: f64,
    pub koenigs: f64,
    pub z2: f64,
    pub planarity: f64,
    pub facet_angle: f64,
    pub umbilic: f64,
    pub closed_form: f64,
    pub ic_theorem: f64,
    pub ic_conic: f64,
    pub ic_factorization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            specfun: 1e-12,
            continuous: 1e-10,
            inversion: 1e-9,
            epd_decay_ratio: 50.0,
            depd: 1e-10,
            orthogonality: 1e-12,
            identity: 1e-10,
            radial: 1e-11,
            conic: 1e-11,
            tau: 1e-12,
            propagation: 1e-10,
            isothermic: 1e-10,
            d_consistency: 1e-14,
            koenigs: 1e-8,
            z2: 1e-12,
            planarity: 1e-10,
            facet_angle: 1e-8,
            umbilic: 1e-10,
            closed_form: 1e-10,
            ic_theorem: 1e-6,
            ic_conic: 1e-6,
            ic_factorization: 1e-5,
        }
    }
}

impl Tolerances {
    /// Overrides one tolerance by field name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::Parameter(format!("tolerance {name} must be finite and non-negative")));
        }
        let mut v = serde_json::to_value(&*self)?;
        match v.get_mut(name) {
            Some(slot) => *slot = Value::from(value),
            None => return Err(Error::Parameter(format!("unknown tolerance {name:?}"))),
        }
        *self = serde_json::from_value(v)?;
        Ok(())
    }

    pub fn icnet(&self) -> IcTolerances {
        IcTolerances { theorem: self.ic_theorem, conic: self.ic_conic, factorization: self.ic_factorization }
    }
}

fn rel(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / rhs.abs().max(1.0)
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Product and difference identities of `(u)_{1/2}` on `u ∈ [0.25, 50]` in
/// steps of ¼, and monotonicity of the scaling limit `√ε (u/ε)_{1/2} → √u`.
pub fn specfun_suite(report: &mut Report, tol: &Tolerances) {
    let grid: Vec<f64> = (1..=200).map(|k| 0.25 * k as f64).collect();
    let product = sweep(&grid, Exec::Sequential, |&u| Ok(rel(dsqrt(u)? * dsqrt(u + 0.5)?, u)));
    report.stats("specfun.product_identity", product, tol.specfun);
    let difference = sweep(&grid, Exec::Sequential, |&u| Ok(dsqrt(u + 1.0)? - dsqrt(u)? - 0.5 / dsqrt(u + 0.5)?));
    report.stats("specfun.difference_identity", difference, tol.specfun);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for u in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let errs: Vec<f64> = (1..=4)
            .map(|k| {
                let eps = 10f64.powi(-k);
                pochhammer(u / eps, 0.5).map(|v| (eps.sqrt() * v - u.sqrt()).abs()).unwrap_or(f64::INFINITY)
            })
            .collect();
        for w in errs.windows(2) {
            worst = worst.max(w[1] / w[0]);
            count += 1;
        }
    }
    // ratio of successive errors; strictly below one means strictly decreasing
    report.add("specfun.scaling_limit", SuiteResult::below(worst, 1.0, count));
}

/// Interior sample points of the continuous domain, `per_axis` per coordinate.
/// The unbounded last coordinate is sampled on `(-a_N, -a_N + 4)`.
pub fn continuous_samples(params: &ContinuousParams, per_axis: usize) -> Vec<Vec<f64>> {
    let a = params.a();
    let n = a.len();
    let axes: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let (lo, hi) = if k + 1 < n { (-a[k], -a[k + 1]) } else { (-a[k], -a[k] + 4.0) };
            (0..per_axis).map(|s| lo + (hi - lo) * (s as f64 + 0.5) / per_axis as f64).collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    for ax in &axes {
        out = out.iter().flat_map(|p| ax.iter().map(move |&v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

pub fn continuous_suite(report: &mut Report, params: &ContinuousParams, per_axis: usize, tol: &Tolerances, exec: Exec) {
    let pts = continuous_samples(params, per_axis);
    let n = params.dim();
    report.stats("continuous.quadric_membership", sweep(&pts, exec, |u| quadric_membership_residual(params, u)), tol.continuous);
    report.stats("continuous.squared_coordinates", sweep(&pts, exec, |u| squared_coordinate_residual(params, u)), tol.continuous);
    report.stats("continuous.sphere", sweep(&pts, exec, |u| sphere_residual(params, u)), tol.continuous);
    report.stats("continuous.radial", sweep(&pts, exec, |u| radial_residual(params, u)), tol.continuous);
    let ortho = sweep(&pts, exec, |u| {
        pairs(n).iter().try_fold(0.0f64, |m, &(i, j)| Ok(m.max(orthogonality_residual_analytic(params, u, i, j)?)))
    });
    report.stats("continuous.orthogonality", ortho, tol.continuous);
    let inversion = sweep(&pts, exec, |u| {
        let back = invert_continuous(params, &eval_continuous(params, u)?)?;
        Ok(u.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    });
    report.stats("continuous.inversion", inversion, tol.inversion);
    // r(1e-4)/r(1e-3) must be at most 1/ratio; stencils already at round-off are skipped
    let decay = sweep(&pts, exec, |u| {
        pairs(n).iter().try_fold(0.0f64, |m, &(i, j)| {
            let r3 = epd_residual_continuous(params, u, i, j, 1e-3)?;
            let r4 = epd_residual_continuous(params, u, i, j, 1e-4)?;
            if r3 < 1e-11 {
                return Err(Error::SingularStencil("residual at round-off level".into()));
            }
            Ok(m.max(r4 / r3))
        })
    });
    report.stats("continuous.epd_decay", decay, 1.0 / tol.epd_decay_ratio);
}

/// Domain-independent identities of any net, swept over its tabulated points.
pub fn discrete_suite(report: &mut Report, net: &TabulatedNet, tol: &Tolerances, exec: Exec) {
    let pts = net.lattice_points();
    let n = net.params().dim();
    let signs = SignVector::all(n);
    let depd = sweep(&pts, exec, |p| {
        pairs(n).iter().try_fold(0.0f64, |m, &(i, j)| Ok(m.max(depd_residual_discrete(net, p, i, j)?)))
    });
    report.stats("discrete.depd", depd, tol.depd);
    let ortho = sweep_each(&pts, exec, &ordered_pairs(n), |p, &(i, j)| orthogonality_residual_scaled(net, p, i, j));
    report.stats("discrete.orthogonality", ortho, tol.orthogonality);
    let product = sweep_each(&pts, exec, &signs, |p, s| product_residual(net, p, s));
    report.stats("discrete.product_identity", product, tol.identity);
    let si: Vec<(SignVector, usize)> = signs.iter().flat_map(|s| (0..n).map(move |i| (s.clone(), i))).collect();
    let quadric = sweep_each(&pts, exec, &si, |p, (s, i)| quadric_residual(net, p, s, *i));
    report.stats("discrete.quadric", quadric, tol.identity);
    let scalar = sweep_each(&pts, exec, &signs, |p, s| scalar_identity(net, p, s).map(|(l, r)| rel(l, r)));
    report.stats("discrete.scalar_identity", scalar, tol.radial);
    let radial_cases: Vec<(SignVector, usize)> = si.iter().filter(|(s, i)| s.get(*i) == -1).cloned().collect();
    let radial = sweep_each(&pts, exec, &radial_cases, |p, (s, i)| radial_identity(net, p, s, *i).map(|v| v - 0.5));
    report.stats("discrete.radial_identity", radial, tol.radial);
    let fact = sweep_each(&pts, exec, &pairs(n), |p, &(i, j)| factorization_residual(net, p, i, j));
    report.stats("discrete.factorization", fact, tol.isothermic);
    let koenigs = sweep_each(&pts, exec, &pairs(n), |p, &(i, j)| multiratio_at(net, p, i, j));
    report.stats("discrete.koenigs_multiratio", koenigs, tol.koenigs);
    let epd = EpdParams::confocal(n);
    let z2 = sweep_each(&pts, exec, &pairs(n), |p, &(i, j)| {
        koenigs_z2_residual(&epd, i, j, p.m()[i], p.m()[j]).map(|(a, b)| a.max(b))
    });
    report.stats("discrete.koenigs_z2", z2, tol.z2);
    let closed = sweep(&pts, exec, |p| {
        let x = net.x(p)?;
        let e = eval_discrete(net.params(), p)?;
        Ok(norm(&sub(&x, &e)) / norm(&e).max(1.0))
    });
    report.stats("discrete.closed_form", closed, tol.closed_form);
}

fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

/// Sweeps `points × cases` with every combination as its own stencil.
fn sweep_each<C, F>(points: &[HalfLatticePoint], exec: Exec, cases: &[C], f: F) -> SweepStats
where
    C: Sync,
    F: Fn(&HalfLatticePoint, &C) -> Result<f64> + Sync + Send,
{
    let idx: Vec<(usize, usize)> = (0..points.len()).flat_map(|a| (0..cases.len()).map(move |b| (a, b))).collect();
    sweep(&idx, exec, |&(a, b)| f(&points[a], &cases[b]))
}

/// `|multiratio - 1|` of the `(i, j)` vertex star at `p`.
pub fn multiratio_at<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, i: usize, j: usize) -> Result<f64> {
    let at = |a: i64, b: i64| net.x(&p.shifted(i, a).shifted(j, b));
    let block = [
        [at(-1, -1)?, at(-1, 0)?, at(-1, 1)?],
        [at(0, -1)?, at(0, 0)?, at(0, 1)?],
        [at(1, -1)?, at(1, 0)?, at(1, 1)?],
    ];
    Ok((koenigs_multiratio(&VertexStar::from_block(&block)?)? - 1.0).abs())
}

fn tabulate(params: &crate::discrete::DiscreteParams, window: &Window, exec: Exec) -> Result<TabulatedNet> {
    TabulatedNet::from_closed_form(params, window, &[Parity::Integer, Parity::Half], exec)
}

/// The N=2 suite on the window (both parities): generic identities plus the
/// explicit conic relations, τ-maps, propagation and isothermic quotient.
pub fn planar_suite(report: &mut Report, params: &Params2D, window: &Window, tol: &Tolerances, exec: Exec) -> Result<()> {
    let net = tabulate(&params.to_discrete(), window, exec)?;
    discrete_suite(report, &net, tol, exec);
    let pts = net.lattice_points();
    let inside = |q: &HalfLatticePoint| -> Result<()> {
        if net.contains(q) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{q} is outside the window")))
        }
    };
    let conic = sweep_each(&pts, exec, &TauSign::ALL, |p, &s| {
        inside(&p.shifted_half(&s.signs()))?;
        conic_relations_2d(params, p, s).map(|(a, b)| a.max(b))
    });
    report.stats("planar.conic_relations", conic, tol.conic);
    let tau = sweep(&pts, exec, |p| {
        for q in [p.shifted_half(&TauSign::PlusMinus.signs()), p.shifted_half(&TauSign::PlusPlus.signs()), p.shifted(0, 1)] {
            inside(&q)?;
        }
        tau_commutator(params, eval_2d(params, p)?, p)
    });
    report.stats("planar.tau_commutator", tau, tol.tau);
    let prop = propagation_residual(params, window, &net);
    report.stats("planar.propagation", prop, tol.propagation);
    let iso = sweep(&pts, exec, |p| {
        for q in [p.shifted(0, 1), p.shifted(1, -1), p.shifted(1, -1).shifted(0, 1)] {
            inside(&q)?;
        }
        isothermic_ratio_2d(params, p).map(|(l, r)| rel(l, r))
    });
    report.stats("planar.isothermic_ratio", iso, tol.isothermic);
    Ok(())
}

/// Propagates from the first point with both components nonzero and compares
/// every reached vertex with the closed form.
fn propagation_residual(params: &Params2D, window: &Window, net: &TabulatedNet) -> SweepStats {
    let Some((seed, x)) = net.points().find(|(_, x)| x.iter().all(|v| *v != 0.0)) else {
        return SweepStats::default();
    };
    match propagate_2d(params, seed, [x[0], x[1]], window) {
        Ok(prop) => {
            let pts: Vec<(HalfLatticePoint, Vec<f64>)> = prop.points().map(|(p, v)| (p.clone(), v.clone())).collect();
            let mut s = sweep(&pts, Exec::Sequential, |(p, v)| {
                let e = net.x(p)?;
                Ok(norm(&sub(v, &e)) / norm(&e).max(1.0))
            });
            s.skipped += net.len().saturating_sub(prop.len());
            s
        }
        Err(_) => SweepStats { max_residual: f64::INFINITY, count: 1, skipped: 0 },
    }
}

/// The N=3 suite on the window (both parities): generic identities plus the
/// dual orthogonality families, the quadric relations for all eight signs,
/// the linear orthogonality system and the scaling relations.
pub fn spatial_suite(report: &mut Report, params: &Params3D, window: &Window, tol: &Tolerances, exec: Exec) -> Result<()> {
    let net = tabulate(&params.to_discrete(), window, exec)?;
    discrete_suite(report, &net, tol, exec);
    let pts = net.lattice_points();
    let f = SignVector::ones(3);
    let dual = sweep(&pts, exec, |p| {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            for q in [p.shifted(i, 1), p.shifted(j, -1).shifted_half(&f), p.shifted_half(&f)] {
                if !net.contains(&q) {
                    return Err(Error::Domain(format!("{q} is outside the window")));
                }
            }
        }
        Ok(dual_orthogonality_3d(params, p)?.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
    });
    report.stats("spatial.dual_orthogonality", dual, tol.identity);
    let system = sweep(&pts, exec, |p| Ok(orthogonality_system_3d(params, p).iter().fold(0.0, |m: f64, v| m.max(v.abs()))));
    report.stats("spatial.orthogonality_system", system, tol.identity);
    let quad = sweep_each(&pts, exec, &SignVector::all(3), |p, s| {
        if !net.contains(&p.shifted_half(s)) {
            return Err(Error::Domain("partner outside the window".into()));
        }
        Ok(quadric_relations_3d(params, p, s)?.iter().fold(0.0, |m: f64, v| m.max(*v)))
    });
    report.stats("spatial.quadric_relations", quad, tol.identity);
    let [r0, r1] = scaling_relations_3d(params);
    report.add("spatial.d_consistency", SuiteResult::from_stats(SweepStats { max_residual: r0.abs().max(r1.abs()), count: 2, skipped: 0 }, tol.d_consistency));
    Ok(())
}

/// Focal-conic relations along both umbilic curves: the hyperbola for
/// `n₃ ∈ [-γ, n3_hi]`, the ellipse for `n₁ ∈ [-α, -β]`, and exact zeros at
/// their ends on the coordinate planes.
pub fn umbilic_suite(report: &mut Report, params: &Params3D, n3_hi: i64, tol: &Tolerances) {
    let hyp: Vec<i64> = (-2 * params.gamma_lat..2 * n3_hi).collect();
    report.stats("umbilic.focal_hyperbola", sweep(&hyp, Exec::Sequential, |&m| focal_hyperbola_residual(params, m)), tol.umbilic);
    let ell: Vec<i64> = (-2 * params.alpha..-2 * params.beta).collect();
    report.stats("umbilic.focal_ellipse", sweep(&ell, Exec::Sequential, |&m| focal_ellipse_residual(params, m)), tol.umbilic);
    let zeros = [
        ellipsoid_umbilic(params, -2 * params.gamma_lat).map(|x| x[2]),
        hyperboloid_umbilic(params, -2 * params.alpha).map(|x| x[0]),
        hyperboloid_umbilic(params, -2 * params.beta).map(|x| x[1]),
    ];
    let z = sweep(&zeros, Exec::Sequential, |r| r.as_ref().map(|v| *v).map_err(|e| Error::Malformed(e.to_string())));
    report.stats("umbilic.boundary_zeros", z, 0.0);
}

/// Doubled levels of axis `k` inside both the window and the domain.
fn levels(net: &TabulatedNet, k: usize) -> Vec<i64> {
    let mut v: Vec<i64> = net.lattice_points().iter().map(|p| p.m()[k]).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Planarity of every layer mesh, edge/dual-facet angles, and lossless OBJ
/// and JSON round trips. Needs N = 3.
pub fn mesh_suite(report: &mut Report, net: &TabulatedNet, window: &Window, tol: &Tolerances, exec: Exec) -> Result<()> {
    if net.params().dim() != 3 {
        return Err(Error::Parameter("the mesh suite needs N = 3".into()));
    }
    let layers: Vec<(usize, i64)> = (0..3).flat_map(|k| levels(net, k).into_iter().map(move |l| (k, l))).collect();
    let meshes: Vec<Result<QuadSurfaceMesh>> = crate::exec::map_collect(&layers, exec, |&(k, l)| surface_mesh(net, k, l, window));
    let planarity = sweep(&meshes, Exec::Sequential, |m| match m {
        Ok(m) if m.faces.is_empty() => Err(Error::Domain("layer without faces".into())),
        Ok(m) => Ok(m.max_planarity()),
        Err(e) if e.is_skippable() => Err(Error::Domain(e.to_string())),
        Err(e) => Err(Error::Malformed(e.to_string())),
    });
    report.stats("mesh.planarity", planarity, tol.planarity);
    let pts = net.lattice_points();
    let angle = sweep_each(&pts, exec, &[0usize, 1, 2], |p, &i| edge_dual_facet_angle(net, p, i));
    report.stats("mesh.edge_dual_facet_angle", angle, tol.facet_angle);
    let round_trip = sweep(&meshes, Exec::Sequential, |m| {
        let m = m.as_ref().map_err(|e| Error::Domain(e.to_string()))?;
        let obj = parse_obj(&m.to_obj())?;
        let faces: Vec<Vec<usize>> = m.faces.iter().map(|f| f.to_vec()).collect();
        if obj.faces != faces || obj.vertices.len() != m.vertices.len() || QuadSurfaceMesh::from_json(&m.to_json()?)? != *m {
            return Ok(f64::INFINITY);
        }
        Ok(obj.vertices.iter().zip(&m.vertices).map(|(a, b)| norm(&sub(a, b))).fold(0.0, f64::max))
    });
    report.stats("mesh.export_round_trip", round_trip, 0.0);
    Ok(())
}

/// Max relative deviation of the rescaled discrete net from the continuous
/// one for each scale in `scales`, on the integer base window `base`.
pub fn continuum_deviations(alpha0: &[i64], scales: &[i64], base: &[Vec<i64>]) -> Result<Vec<f64>> {
    scales.iter().map(|&l| crate::discrete::continuum_deviation(alpha0, l, base)).collect()
}

/// Records whether the deviations strictly decrease with the scale.
pub fn continuum_suite(report: &mut Report, alpha0: &[i64], scales: &[i64], base: &[Vec<i64>]) -> Result<Vec<f64>> {
    let d = continuum_deviations(alpha0, scales, base)?;
    let worst = d.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    report.add("continuum.decreasing", SuiteResult::below(worst, 1.0, d.len().saturating_sub(1)));
    Ok(d)
}

/// Default integer base window for the continuum trend of `α₀ = (a, b)`:
/// `n₁ ∈ [-a+1, -b-1]`, `n₂ ∈ [-b+1, -b+4]`.
pub fn continuum_base_2d(alpha0: [i64; 2]) -> Vec<Vec<i64>> {
    let [a, b] = alpha0;
    (-a + 1..=-b - 1).flat_map(|x| (-b + 1..=-b + 4).map(move |y| vec![x, y])).collect()
}

/// IC-net theorem checks on a line grid, one entry per property.
pub fn icnet_suite(report: &mut Report, grid: &LineGrid, tol: &Tolerances, exec: Exec) -> Result<()> {
    let r = verify_grid(grid, &tol.icnet(), exec)?;
    for (k, v) in &r.properties {
        report.add(
            format!("icnet.{k}"),
            SuiteResult { max_residual: v.max_residual, tolerance: v.tolerance, pass: v.pass, count: v.count, skipped: v.skipped },
        );
    }
    Ok(())
}

/// Smallest window containing every point of the net (integer bounds).
pub fn bounding_window(net: &TabulatedNet) -> Result<Window> {
    let n = net.params().dim();
    let mut ranges = vec![(i64::MAX, i64::MIN); n];
    for p in net.lattice_points() {
        for (k, r) in ranges.iter_mut().enumerate() {
            r.0 = r.0.min(p.m()[k].div_euclid(2));
            r.1 = r.1.max((p.m()[k] + 1).div_euclid(2));
        }
    }
    if net.is_empty() {
        return Err(Error::Malformed("net has no points".into()));
    }
    Window::new(ranges)
}

/// Full suite for a spectrum: generic identities on the window, the explicit
/// N=2 or N=3 forms when they apply, and for N=3 the mesh and umbilic suites.
pub fn spectrum_suite(report: &mut Report, alpha: &[i64], window: &Window, tol: &Tolerances, exec: Exec) -> Result<()> {
    match *alpha {
        [a, b] => planar_suite(report, &Params2D::new(a, b)?, window, tol, exec),
        [a, b, g] => {
            let p = Params3D::new(a, b, g)?;
            spatial_suite(report, &p, window, tol, exec)?;
            let net = tabulate(&p.to_discrete(), window, exec)?;
            mesh_suite(report, &net, window, tol, exec)?;
            let hi = window.ranges[2].1;
            umbilic_suite(report, &p, hi, tol);
            Ok(())
        }
        _ => {
            let params = crate::discrete::DiscreteParams::new(alpha.to_vec())?;
            discrete_suite(report, &tabulate(&params, window, exec)?, tol, exec);
            Ok(())
        }
    }
}

/// Full suite for a tabulated net (for example one read from disk).
pub fn net_suite(report: &mut Report, net: &TabulatedNet, tol: &Tolerances, exec: Exec) -> Result<()> {
    discrete_suite(report, net, tol, exec);
    if net.params().dim() == 3 {
        mesh_suite(report, net, &bounding_window(net)?, tol, exec)?;
    }
    Ok(())
}
