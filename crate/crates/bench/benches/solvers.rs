use criterion::{black_box, criterion_group, criterion_main, Criterion};

use advdiff::analytic::SeriesSolution;
use advdiff::fdm::{solve_ftcs, AdvectionStencil};
use advdiff::model::{build_grid, validate_scenario, InitialCondition, ScenarioSpec};

fn worked_example() -> advdiff::ValidatedScenario {
    validate_scenario(ScenarioSpec::uniform(
        3.6e-3,
        3.6e-4,
        1.0,
        1.0,
        InitialCondition::SineMode { n: 1 },
    ))
    .unwrap()
}

fn bench_ftcs_march(c: &mut Criterion) {
    let scenario = worked_example();
    let mut group = c.benchmark_group("ftcs_march");
    for (m, n) in [(100usize, 500usize), (400, 2305)] {
        let grid = build_grid(1.0, 1.0, m, n).unwrap();
        group.bench_function(format!("{m}x{n}"), |b| {
            b.iter(|| {
                let surface =
                    solve_ftcs(&scenario, &grid, AdvectionStencil::Forward, false).unwrap();
                black_box(surface.value(m / 2, n))
            })
        });
    }
    group.finish();
}

fn bench_series(c: &mut Criterion) {
    let scenario = worked_example();
    c.bench_function("series_build_k64", |b| {
        b.iter(|| SeriesSolution::for_scenario(&scenario, 64, 2048).unwrap())
    });

    let series = SeriesSolution::for_scenario(&scenario, 64, 2048).unwrap();
    c.bench_function("series_evaluate_k64", |b| {
        b.iter(|| black_box(series.evaluate(black_box(0.6), black_box(0.6)).unwrap().value))
    });
}

criterion_group!(benches, bench_ftcs_march, bench_series);
criterion_main!(benches);
