use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use weno_tvd::scenarios::{Scenario, Simulation};
use weno_tvd::weno::{reconstruct_field, PolyField};
use weno_tvd::{apply_bc, Field, WenoParams};

fn advection(n: usize) -> weno_tvd::scenarios::AdvectionRun {
    let mut sc = Scenario::by_name("swirl").unwrap();
    sc.set_cells(n).unwrap();
    match sc.build().unwrap() {
        Simulation::Advection(run) => run,
        Simulation::Atmosphere(_) => unreachable!(),
    }
}

fn reconstruction(c: &mut Criterion) {
    let mut group = c.benchmark_group("reconstruct_field");
    for n in [50, 100, 200] {
        let mut run = advection(n);
        apply_bc(&mut run.field, &run.solver.grid, &run.solver.model);
        let mut polys = PolyField::new(&run.solver.grid);
        let params = WenoParams::default();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| reconstruct_field(black_box(&run.field), &run.solver.grid, &params, &mut polys).unwrap())
        });
    }
    group.finish();
}

fn operator(c: &mut Criterion) {
    let mut group = c.benchmark_group("spatial_operator");
    group.sample_size(20);
    for n in [50, 100, 200] {
        let mut run = advection(n);
        let mut out = Field::zeros(&run.solver.grid);
        let dt = run.solver.compute_dt(&run.field, 0.0).unwrap();
        group.bench_with_input(BenchmarkId::new("swirl", n), &n, |b, _| {
            b.iter(|| run.solver.operator(&mut run.field, 0.0, dt, &mut out).unwrap())
        });
    }
    let sc = Scenario::by_name("bubble-neutral").unwrap();
    if let Simulation::Atmosphere(mut run) = sc.build().unwrap() {
        let mut out = Field::zeros(&run.solver.grid);
        let dt = run.solver.compute_dt(&run.field, 0.0).unwrap();
        group.bench_function("bubble-neutral 160x80", |b| {
            b.iter(|| run.solver.operator(&mut run.field, 0.0, dt, &mut out).unwrap())
        });
        group.bench_function("bubble-neutral strang step", |b| {
            b.iter(|| {
                let mut f = run.field.clone();
                run.solver.strang_step(&mut f, 0.0, dt).unwrap();
                f
            })
        });
    }
    group.finish();
}

criterion_group!(benches, reconstruction, operator);
criterion_main!(benches);
