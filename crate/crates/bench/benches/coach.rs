use std::hint::black_box;

use coach_core::{builtin_profile, enumerate_combos, goal_space, replay, select_goal, simulate, simulate_with_coach, Volume};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn catalog(c: &mut Criterion) {
    c.bench_function("enumerate_combos", |b| {
        b.iter(|| {
            for cap in (0..=900).step_by(15) {
                black_box(enumerate_combos(Volume(f64::from(cap))));
            }
        })
    });
    let goals = goal_space();
    c.bench_function("select_goal", |b| {
        b.iter(|| {
            for (i, prev) in goals.iter().enumerate() {
                let cap = 45.0 + 10.0 * i as f64;
                black_box(select_goal(Volume(cap), Some(prev), Some(Volume(cap - 50.0))).ok());
            }
        })
    });
}

fn simulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    for name in ["A", "B", "C"] {
        let profile = builtin_profile(name).unwrap();
        group.bench_with_input(BenchmarkId::new("weeks_8", name), &profile, |b, p| {
            b.iter(|| simulate(p, 8, 1).unwrap())
        });
    }
    group.finish();

    let (_, coach) = simulate_with_coach(&builtin_profile("B").unwrap(), 26, 1).unwrap();
    let events = coach.events().to_vec();
    c.bench_function("replay_26_weeks", |b| b.iter(|| replay(black_box(&events)).unwrap()));
}

criterion_group!(benches, catalog, simulation);
criterion_main!(benches);
