//! Acceptance criteria 1–9. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::process::ExitCode;

use serde_json::Value;

use confocal_core::continuous::ContinuousParams;
use confocal_core::discrete::{eval_discrete, DiscreteParams};
use confocal_core::icnet::{icnet_solve, verify_grid, IcTolerances, LineGrid, FACTORIZATION};
use confocal_core::lattice::{HalfLatticePoint, Parity, Window};
use confocal_core::lowdim::{Params2D, Params3D};
use confocal_core::net::TabulatedNet;
use confocal_core::suite::{self, multiratio_at, Report, Tolerances};
use confocal_core::Exec;

type Outcome = (bool, String);

fn all_pass(r: &Report, names: &[&str]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in names {
        match r.get(name) {
            Some(s) => {
                ok &= s.pass;
                parts.push(format!("{name}={:.1e}/{:.0e}", s.max_residual, s.tolerance));
            }
            None => {
                ok = false;
                parts.push(format!("{name}=missing"));
            }
        }
    }
    (ok, parts.join(" "))
}

fn w2() -> Window {
    Window::new(vec![(-5, -1), (-1, 6)]).unwrap()
}

fn w3() -> Window {
    Window::new(vec![(-8, -4), (-4, -1), (-1, 8)]).unwrap()
}

fn planar_report() -> Report {
    let mut r = Report::new(Value::Null);
    suite::planar_suite(&mut r, &Params2D::new(5, 1).unwrap(), &w2(), &Tolerances::default(), Exec::Parallel).unwrap();
    r
}

fn spatial_report() -> Report {
    let mut r = Report::new(Value::Null);
    suite::spatial_suite(&mut r, &Params3D::new(8, 4, 1).unwrap(), &w3(), &Tolerances::default(), Exec::Parallel).unwrap();
    r
}

fn criterion_1() -> Outcome {
    let mut r = Report::new(Value::Null);
    suite::specfun_suite(&mut r, &Tolerances::default());
    all_pass(&r, &["specfun.difference_identity", "specfun.product_identity", "specfun.scaling_limit"])
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for a in [vec![2.0, 1.0], vec![3.0, 2.0, 1.0]] {
        let mut r = Report::new(Value::Null);
        suite::continuous_suite(&mut r, &ContinuousParams::new(a.clone()).unwrap(), 6, &Tolerances::default(), Exec::Parallel);
        let (p, d) = all_pass(
            &r,
            &[
                "continuous.quadric_membership",
                "continuous.squared_coordinates",
                "continuous.sphere",
                "continuous.radial",
                "continuous.orthogonality",
                "continuous.inversion",
                "continuous.epd_decay",
            ],
        );
        ok &= p;
        detail.push(format!("a={a:?}: {d}"));
    }
    (ok, detail.join("; "))
}

fn criterion_3() -> Outcome {
    let r = planar_report();
    let (mut ok, mut d) = all_pass(
        &r,
        &[
            "discrete.depd",
            "discrete.orthogonality",
            "planar.conic_relations",
            "planar.tau_commutator",
            "planar.propagation",
            "planar.isothermic_ratio",
        ],
    );
    let params = DiscreteParams::new(vec![5, 1]).unwrap();
    let x = eval_discrete(&params, &HalfLatticePoint::from_integers(&[-1, 0])).unwrap();
    let spot = (x[0] - 4.0 * (2.0f64 / 7.0).sqrt()).abs();
    ok &= spot <= 1e-10 && x[1] == 0.0;
    d.push_str(&format!(" spot x(-1,0)={:.10} err={spot:.1e}", x[0]));
    (ok, d)
}

fn criterion_4() -> Outcome {
    let r = spatial_report();
    let (mut ok, mut d) = all_pass(
        &r,
        &[
            "discrete.depd",
            "spatial.dual_orthogonality",
            "spatial.quadric_relations",
            "discrete.scalar_identity",
            "discrete.radial_identity",
            "spatial.d_consistency",
        ],
    );
    let p = Params3D::new(8, 4, 1).unwrap();
    let err = p
        .d()
        .iter()
        .zip([2.5 / 52.5, 6.0 / 52.5, 3.5 / 52.5])
        .map(|(v, e)| (v * v - e).abs())
        .fold(0.0, f64::max);
    ok &= err <= 1e-14;
    d.push_str(&format!(" D_k^2 ratios err={err:.1e}"));
    (ok, d)
}

fn criterion_5() -> Outcome {
    let (p2, p3) = (planar_report(), spatial_report());
    let (ok2, d2) = all_pass(&p2, &["discrete.koenigs_multiratio", "discrete.koenigs_z2"]);
    let (ok3, d3) = all_pass(&p3, &["discrete.koenigs_multiratio", "discrete.koenigs_z2"]);
    let params = DiscreteParams::new(vec![5, 1]).unwrap();
    let mut net = TabulatedNet::from_closed_form(&params, &w2(), &[Parity::Integer, Parity::Half], Exec::Parallel).unwrap();
    let p = HalfLatticePoint::from_integers(&[-3, 2]);
    net.perturb(&p.shifted(0, 1), &[1e-3, 0.0]).unwrap();
    let control = multiratio_at(&net, &p, 0, 1).unwrap_or(f64::INFINITY);
    let ok = ok2 && ok3 && control > 1e-6;
    (ok, format!("N=2: {d2}; N=3: {d3}; perturbed control={control:.1e} (>1e-6)"))
}

fn criterion_6() -> Outcome {
    let p = Params3D::new(8, 4, 1).unwrap();
    let net = TabulatedNet::from_closed_form(&p.to_discrete(), &w3(), &[Parity::Integer, Parity::Half], Exec::Parallel).unwrap();
    let mut r = Report::new(Value::Null);
    suite::mesh_suite(&mut r, &net, &w3(), &Tolerances::default(), Exec::Parallel).unwrap();
    all_pass(&r, &["mesh.planarity", "mesh.edge_dual_facet_angle", "mesh.export_round_trip"])
}

fn criterion_7() -> Outcome {
    let mut r = Report::new(Value::Null);
    suite::umbilic_suite(&mut r, &Params3D::new(8, 4, 1).unwrap(), 40, &Tolerances::default());
    all_pass(&r, &["umbilic.focal_hyperbola", "umbilic.focal_ellipse", "umbilic.boundary_zeros"])
}

fn criterion_8() -> Outcome {
    let mut r = Report::new(Value::Null);
    let scales = [10, 20, 50, 100];
    let d = suite::continuum_suite(&mut r, &[5, 1], &scales, &suite::continuum_base_2d([5, 1])).unwrap();
    let (ok, _) = all_pass(&r, &["continuum.decreasing"]);
    let parts: Vec<String> = scales.iter().zip(&d).map(|(l, v)| format!("L={l}:{v:.3e}")).collect();
    (ok, parts.join(" "))
}

fn criterion_9() -> Outcome {
    let tight = IcTolerances { theorem: 1e-10, conic: 1e-8, factorization: 1e-5 };
    let rhombic = verify_grid(&LineGrid::rhombic(9), &tight, Exec::Parallel).unwrap();
    let mut ok = rhombic.pass;
    let mut d = format!("rhombic pass={}", rhombic.pass);

    let offsets: Vec<f64> = {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        (0..36).map(|_| rng.random_range(-1e-3..1e-3)).collect()
    };
    let seed = LineGrid::rhombic(9).perturbed(&offsets).unwrap();
    match icnet_solve(&seed, 100, 1e-10) {
        Ok(out) => {
            let rep = verify_grid(&out.grid, &IcTolerances::default(), Exec::Parallel).unwrap();
            let fact = rep.get(FACTORIZATION).map(|p| p.max_residual).unwrap_or(f64::INFINITY);
            ok &= out.max_residual < 1e-10 && rep.pass && fact < 1e-5;
            d.push_str(&format!(
                "; solved in {} iterations, max Pitot {:.1e}, theorem pass={}, (vi) rank-1 residual {fact:.1e}",
                out.iterations, out.max_residual, rep.pass
            ));
        }
        Err(e) => {
            ok = false;
            d.push_str(&format!("; solver: {e}"));
        }
    }
    (ok, d)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("specfun identities", criterion_1),
        ("continuous suite", criterion_2),
        ("discrete suite N=2", criterion_3),
        ("discrete suite N=3", criterion_4),
        ("Koenigs certification", criterion_5),
        ("mesh suite", criterion_6),
        ("umbilics", criterion_7),
        ("continuum trend", criterion_8),
        ("IC-net suite", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        println!("criterion {} {}: {name}: {detail}", k + 1, if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
