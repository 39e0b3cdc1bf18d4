use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use serde_json::Value;

use confocal_core::discrete::DiscreteParams;
use confocal_core::lattice::{Parity, Window};
use confocal_core::net::TabulatedNet;
use confocal_core::suite::{self, Report, Tolerances};
use confocal_core::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn tabulate(c: &mut Criterion) {
    let params = DiscreteParams::new(vec![8, 4, 1]).unwrap();
    let window = Window::new(vec![(-8, -4), (-4, -1), (-1, 40)]).unwrap();
    let mut group = c.benchmark_group("tabulate_n3");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| TabulatedNet::from_closed_form(&params, &window, &[Parity::Integer, Parity::Half], exec).unwrap())
        });
    }
    group.finish();
}

fn spectrum_suite(c: &mut Criterion) {
    let window = Window::new(vec![(-8, -4), (-4, -1), (-1, 8)]).unwrap();
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("spectrum_suite_n3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let mut r = Report::new(Value::Null);
                suite::spectrum_suite(&mut r, &[8, 4, 1], &window, &tol, exec).unwrap();
                r
            })
        });
    }
    group.finish();
}

criterion_group!(benches, tabulate, spectrum_suite);
criterion_main!(benches);
