use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use twotone_bench::reference;
use twotone_core::dynamics::{steady_state_ode, OdeSettings};

fn ode(c: &mut Criterion) {
    let (params, drive) = reference();
    let omega = params.omega_c + 0.5 * params.g_abs;
    let mut group = c.benchmark_group("ode_steady_state");
    group.sample_size(10);
    for tol in [1e-4, 1e-6] {
        let s = OdeSettings::recommended(&params, omega, tol).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(tol), &s, |b, s| {
            b.iter(|| steady_state_ode(&params, &drive, black_box(omega), s.t_max, s.dt_max, s.tol).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ode);
criterion_main!(benches);
