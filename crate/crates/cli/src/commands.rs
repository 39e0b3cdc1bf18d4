use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use confocal_core::continuous::{eval_continuous, ContinuousParams};
use confocal_core::discrete::{DiscreteParams, Net};
use confocal_core::icnet::{icnet_solve, LineGrid};
use confocal_core::lattice::{Parity, Window};
use confocal_core::lowdim::umbilic::{umbilic_curve_ellipsoid, umbilic_curve_hyperboloid};
use confocal_core::lowdim::Params3D;
use confocal_core::mesh::{conic_curve, surface_mesh, surface_with_duals, QuadSurfaceMesh};
use confocal_core::net::TabulatedNet;
use confocal_core::suite::{self, Report, SuiteResult, Tolerances};
use confocal_core::{Error, Exec};

use crate::{ExportArgs, Format, GenerateArgs, IcnetArgs, SpectrumArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write(p, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Integer gaps of the spectrum, and `[-α_N, -α_N + (α₁ - α_N)]` on the last axis.
pub fn default_window(alpha: &[i64]) -> CliResult<Window> {
    let n = alpha.len();
    if n == 0 {
        return usage("empty spectrum");
    }
    let mut ranges: Vec<(i64, i64)> = (0..n - 1).map(|k| (-alpha[k], -alpha[k + 1])).collect();
    ranges.push((-alpha[n - 1], -alpha[n - 1] + (alpha[0] - alpha[n - 1]).max(1)));
    Ok(Window::new(ranges)?)
}

fn spectrum(args: &SpectrumArgs) -> CliResult<(DiscreteParams, Window)> {
    let Some(alpha) = &args.alphas else {
        return usage("--alphas is required");
    };
    let params = DiscreteParams::new(alpha.clone())?;
    let window = match &args.window {
        Some(w) => w.clone(),
        None => default_window(alpha)?,
    };
    if window.dim() != params.dim() {
        return usage(format!("window has {} axes, spectrum has {}", window.dim(), params.dim()));
    }
    Ok((params, window))
}

fn tolerances(overrides: &[String]) -> CliResult<Tolerances> {
    let mut t = Tolerances::default();
    for o in overrides {
        let Some((name, value)) = o.split_once('=') else {
            return usage(format!("tolerance override {o:?} is not NAME=VALUE"));
        };
        let v: f64 = value.parse().map_err(|_| CliError::Usage(format!("tolerance value {value:?} is not a number")))?;
        t.set(name.trim(), v)?;
    }
    Ok(t)
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn finish(report: &Report, path: Option<&Path>) -> CliResult<u8> {
    emit(path, &report.to_json()?)?;
    for name in report.failing() {
        let r = &report.suites[name];
        eprintln!("FAIL {name}: max residual {:e} > tolerance {:e}", r.max_residual, r.tolerance);
    }
    Ok(if report.pass() { 0 } else { 1 })
}

pub fn generate(a: GenerateArgs) -> CliResult<u8> {
    if a.continuous {
        let params = ContinuousParams::new(a.a.clone().unwrap_or_default())?;
        let counts: Vec<usize> = a
            .grid
            .split('x')
            .map(|v| v.trim().parse().map_err(|_| CliError::Usage(format!("bad grid {:?}", a.grid))))
            .collect::<CliResult<_>>()?;
        let counts = match counts.len() {
            1 => vec![counts[0]; params.dim()],
            n if n == params.dim() => counts,
            _ => return usage(format!("grid {:?} does not match N = {}", a.grid, params.dim())),
        };
        if counts.contains(&0) {
            return usage("grid counts must be positive");
        }
        let samples = continuous_grid(&params, &counts);
        let records: Vec<Value> = samples
            .iter()
            .map(|u| Ok(json!({"u": u, "x": eval_continuous(&params, u)?})))
            .collect::<Result<_, Error>>()?;
        let doc = json!({"a": params.a(), "grid": counts, "samples": records});
        emit(a.output.as_deref(), &serde_json::to_string_pretty(&doc).map_err(Error::from)?)?;
        return Ok(0);
    }
    let (params, window) = spectrum(&a.spectrum)?;
    let parities: &[Parity] = if a.both_parities { &[Parity::Integer, Parity::Half] } else { &[Parity::Integer] };
    let net = TabulatedNet::from_closed_form(&params, &window, parities, Exec::Parallel)?;
    emit(a.output.as_deref(), &net.to_json()?)?;
    eprintln!("{} points", net.len());
    Ok(0)
}

/// Interior cell-centred samples; the last coordinate spans `(-a_N, -a_N + 4)`.
fn continuous_grid(params: &ContinuousParams, counts: &[usize]) -> Vec<Vec<f64>> {
    let a = params.a();
    let n = a.len();
    let mut out = vec![Vec::new()];
    for k in 0..n {
        let (lo, hi) = if k + 1 < n { (-a[k], -a[k + 1]) } else { (-a[k], -a[k] + 4.0) };
        let c = counts[k];
        out = out
            .into_iter()
            .flat_map(|p: Vec<f64>| {
                (0..c).map(move |s| {
                    let mut q = p.clone();
                    q.push(lo + (hi - lo) * (s as f64 + 0.5) / c as f64);
                    q
                })
            })
            .collect();
    }
    out
}

fn perturb_net(net: &mut TabulatedNet, amp: f64, seed: u64) -> CliResult<()> {
    if !(amp.is_finite() && amp > 0.0) {
        return usage("--perturb needs a positive amplitude");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = net.params().dim();
    for p in net.lattice_points() {
        let d: Vec<f64> = (0..n).map(|_| rng.random_range(-amp..amp)).collect();
        net.perturb(&p, &d)?;
    }
    Ok(())
}

pub fn verify(a: VerifyArgs) -> CliResult<u8> {
    let tol = tolerances(&a.tolerances)?;
    let ex = exec(a.sequential);
    let mut echo = json!({
        "tolerances": serde_json::to_value(&tol).map_err(Error::from)?,
        "exec": if a.sequential { "sequential" } else { "parallel" },
    });
    let mut report;
    if a.continuous {
        let params = ContinuousParams::new(a.a.clone().unwrap_or_default())?;
        echo["continuous"] = json!({"a": params.a(), "samples": a.samples});
        report = Report::new(echo);
        suite::continuous_suite(&mut report, &params, a.samples, &tol, ex);
    } else if let Some(path) = &a.net {
        let mut net = TabulatedNet::from_json(&read(path)?)?;
        echo["net"] = json!(path.display().to_string());
        echo["alphas"] = json!(net.params().alpha());
        if let Some(amp) = a.perturb {
            perturb_net(&mut net, amp, a.seed)?;
            echo["perturb"] = json!({"amplitude": amp, "seed": a.seed});
        }
        report = Report::new(echo);
        suite::net_suite(&mut report, &net, &tol, ex)?;
    } else {
        let (params, window) = spectrum(&a.spectrum)?;
        echo["alphas"] = json!(params.alpha());
        echo["window"] = json!(window.to_string());
        if let Some(amp) = a.perturb {
            let mut net = TabulatedNet::from_closed_form(&params, &window, &[Parity::Integer, Parity::Half], ex)?;
            perturb_net(&mut net, amp, a.seed)?;
            echo["perturb"] = json!({"amplitude": amp, "seed": a.seed});
            report = Report::new(echo);
            suite::net_suite(&mut report, &net, &tol, ex)?;
        } else {
            report = Report::new(echo);
            suite::specfun_suite(&mut report, &tol);
            suite::spectrum_suite(&mut report, params.alpha(), &window, &tol, ex)?;
        }
    }
    finish(&report, a.output.as_deref())
}

/// `"DIR:LEVEL"` with a 1-based direction and an integer or half-integer level.
pub fn parse_layer(s: &str) -> CliResult<(usize, i64)> {
    let bad = || CliError::Usage(format!("layer {s:?} is not DIR:LEVEL"));
    let (d, l) = s.split_once(':').ok_or_else(bad)?;
    let dir: usize = d.trim().parse().map_err(|_| bad())?;
    let level: f64 = l.trim().parse().map_err(|_| bad())?;
    let m2 = 2.0 * level;
    if dir == 0 || m2.fract() != 0.0 || !m2.is_finite() {
        return Err(bad());
    }
    Ok((dir - 1, m2 as i64))
}

fn level_name(dir: usize, m2: i64) -> String {
    if m2 % 2 == 0 {
        format!("n{}_{}", dir, m2 / 2)
    } else {
        format!("n{}_{}", dir, m2 as f64 / 2.0)
    }
}

fn mesh_text(m: &QuadSurfaceMesh, format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Obj => m.to_obj(),
        Format::Json => m.to_json()?,
    })
}

fn ext(format: Format) -> &'static str {
    match format {
        Format::Obj => "obj",
        Format::Json => "json",
    }
}

pub fn export(a: ExportArgs) -> CliResult<u8> {
    let (net, window) = match &a.net {
        Some(path) => {
            let net = TabulatedNet::from_json(&read(path)?)?;
            let w = suite::bounding_window(&net)?;
            (net, w)
        }
        None => {
            let (params, window) = spectrum(&a.spectrum)?;
            (TabulatedNet::from_closed_form(&params, &window, &[Parity::Integer, Parity::Half], Exec::Parallel)?, window)
        }
    };
    if a.layer.is_empty() && !a.focal {
        return usage("nothing to export: give --layer and/or --focal");
    }
    let n = net.params().dim();
    fs::create_dir_all(&a.output).map_err(|e| CliError::Io(format!("{}: {e}", a.output.display())))?;
    let mut written: Vec<PathBuf> = Vec::new();
    let mut put = |name: String, text: String| -> CliResult<()> {
        let path = a.output.join(name);
        write(&path, &text)?;
        written.push(path);
        Ok(())
    };
    for spec in &a.layer {
        let (dir, m2) = parse_layer(spec)?;
        if dir >= n {
            return usage(format!("layer direction {} exceeds N = {n}", dir + 1));
        }
        match n {
            2 => {
                let c = conic_curve(&net, dir, m2, &window)?;
                let text = match a.format {
                    Format::Obj => c.to_obj(),
                    Format::Json => c.to_json()?,
                };
                put(format!("{}.{}", level_name(dir + 1, m2), ext(a.format)), text)?;
            }
            3 => {
                let meshes = if a.duals { surface_with_duals(&net, dir, m2, &window)? } else { vec![surface_mesh(&net, dir, m2, &window)?] };
                for m in meshes {
                    let m = if a.reflect { m.reflected() } else { m };
                    let name = format!("{}{}.{}", level_name(m.layer.direction, m.layer.level_m2), if a.reflect { "_reflected" } else { "" }, ext(a.format));
                    put(name, mesh_text(&m, a.format)?)?;
                }
            }
            _ => return usage("layers can be exported for N = 2 and N = 3 only"),
        }
    }
    if a.focal {
        let [al, be, ga] = match *net.params().alpha() {
            [x, y, z] => [x, y, z],
            _ => return usage("--focal needs N = 3"),
        };
        let p = Params3D::new(al, be, ga)?;
        let hi = window.ranges[2].1.max(-ga);
        for curve in [umbilic_curve_ellipsoid(&p, -ga, hi)?, umbilic_curve_hyperboloid(&p, -al, -be)?] {
            let text = match a.format {
                Format::Obj => curve.to_obj(),
                Format::Json => curve.to_json()?,
            };
            let name = match curve.kind {
                confocal_core::lowdim::umbilic::PolylineKind::FocalHyperbola => "focal_hyperbola",
                confocal_core::lowdim::umbilic::PolylineKind::FocalEllipse => "focal_ellipse",
            };
            put(format!("{name}.{}", ext(a.format)), text)?;
        }
    }
    for p in &written {
        println!("{}", p.display());
    }
    Ok(0)
}

fn load_grid(path: &str) -> CliResult<LineGrid> {
    Ok(LineGrid::from_json(&read(Path::new(path))?)?)
}

pub fn icnet(a: IcnetArgs) -> CliResult<u8> {
    let tol = tolerances(&a.tolerances)?;
    let builtin = match a.builtin.as_deref() {
        None => None,
        Some("rhombic") => {
            if a.size < 2 {
                return usage("--size must be at least 2");
            }
            Some(LineGrid::rhombic(a.size))
        }
        Some(other) => return usage(format!("unknown builtin grid {other:?}")),
    };
    let pick = |arg: &Option<String>| -> CliResult<Option<LineGrid>> {
        match arg.as_deref() {
            Some(p) if !p.is_empty() => load_grid(p).map(Some),
            _ => Ok(None),
        }
    };
    let from_solve = pick(&a.solve)?;
    let from_verify = pick(&a.verify)?;
    let Some(mut grid) = from_solve.or(from_verify).or(builtin) else {
        return usage("give --builtin NAME or a grid file via --solve/--verify");
    };
    if let Some(amp) = a.perturb {
        if !(amp.is_finite() && amp > 0.0) {
            return usage("--perturb needs a positive amplitude");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let offsets: Vec<f64> = (0..2 * grid.n_lines()).map(|_| rng.random_range(-amp..amp)).collect();
        grid = grid.perturbed(&offsets)?;
    }
    let mut report = Report::new(json!({
        "builtin": a.builtin,
        "size": a.size,
        "solve": a.solve.is_some(),
        "solver_tol": a.tol,
        "max_iter": a.max_iter,
        "perturb": a.perturb.map(|amp| json!({"amplitude": amp, "seed": a.seed})),
        "tolerances": serde_json::to_value(&tol).map_err(Error::from)?,
    }));
    if a.solve.is_some() {
        match icnet_solve(&grid, a.max_iter, a.tol) {
            Ok(out) => {
                report.add("icnet.solver", SuiteResult { max_residual: out.max_residual, tolerance: a.tol, pass: true, count: out.iterations, skipped: 0 });
                grid = out.grid;
                if let Some(path) = &a.output {
                    write(path, &grid.to_json()?)?;
                }
            }
            Err(Error::NonConvergence { iterations, residual }) => {
                report.add("icnet.solver", SuiteResult { max_residual: residual, tolerance: a.tol, pass: false, count: iterations, skipped: 0 });
                return finish(&report, a.report.as_deref());
            }
            Err(e) => return Err(e.into()),
        }
    }
    match suite::icnet_suite(&mut report, &grid, &tol, Exec::Parallel) {
        Ok(()) => {}
        Err(e @ Error::Geometry(_)) => {
            eprintln!("not an IC-net: {e}");
            report.add("icnet.pitot", SuiteResult { max_residual: f64::INFINITY, tolerance: 1e-9, pass: false, count: 0, skipped: 0 });
        }
        Err(e) => return Err(e.into()),
    }
    finish(&report, a.report.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_parse() {
        assert_eq!(parse_layer("3:2").unwrap(), (2, 4));
        assert_eq!(parse_layer("1:-4.5").unwrap(), (0, -9));
        assert!(parse_layer("0:1").is_err());
        assert!(parse_layer("3:0.25").is_err());
        assert!(parse_layer("3").is_err());
    }

    #[test]
    fn default_windows() {
        assert_eq!(default_window(&[5, 1]).unwrap().ranges, vec![(-5, -1), (-1, 3)]);
        assert_eq!(default_window(&[8, 4, 1]).unwrap().ranges, vec![(-8, -4), (-4, -1), (-1, 6)]);
    }

    #[test]
    fn tolerance_flags() {
        assert_eq!(tolerances(&["planarity=1e-6".into()]).unwrap().planarity, 1e-6);
        assert!(tolerances(&["planarity".into()]).is_err());
        assert!(tolerances(&["bogus=1".into()]).is_err());
    }

    #[test]
    fn continuous_grid_counts() {
        let p = ContinuousParams::new(vec![2.0, 1.0]).unwrap();
        let g = continuous_grid(&p, &[4, 3]);
        assert_eq!(g.len(), 12);
        assert!(g.iter().all(|u| u[0] > -2.0 && u[0] < -1.0 && u[1] > -1.0));
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::Parameter("x".into())).exit_code(), 2);
        let io = std::io::Error::new(std::io::ErrorKind::NotFound, "gone");
        assert_eq!(CliError::from(Error::Io(io)).exit_code(), 3);
    }
}
