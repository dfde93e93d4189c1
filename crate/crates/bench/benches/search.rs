use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};

use gpsynth_bench::{config, flatten_fixture, problem};
use gpsynth_core::heuristics::{extract_landmark_graph, HelpfulActionSet};
use gpsynth_core::search::search;
use gpsynth_core::vm::validate;
use gpsynth_core::{Instance, RunOptions};

fn searches(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    for name in ["visitall", "tsum", "intrusion", "corridor"] {
        let p = problem(name);
        let cfg = config(name);
        group.bench_function(format!("{name} {}", cfg.label()), |b| {
            b.iter(|| search(black_box(&p), &cfg).expect("search runs"))
        });
    }
    group.finish();
}

fn execution(c: &mut Criterion) {
    let (p, prog) = flatten_fixture(&[8, 16, 32]);
    let options = RunOptions::default();
    c.bench_function("vm flatten towers 8/16/32", |b| b.iter(|| validate(black_box(&prog), &p, None, &options)));
}

fn guidance(c: &mut Criterion) {
    let p = problem("gripper");
    let d = p.domain.as_strips().expect("strips");
    let insts: Vec<_> = p.instances.iter().filter_map(Instance::as_strips).collect();
    c.bench_function("landmarks gripper", |b| {
        b.iter_batched(|| insts.clone(), |is| is.iter().map(|i| extract_landmark_graph(d, i).len()).sum::<usize>(), BatchSize::SmallInput)
    });
    c.bench_function("helpful actions gripper", |b| b.iter(|| HelpfulActionSet::for_instances(d, insts.iter().copied())));
}

criterion_group!(benches, searches, execution, guidance);
criterion_main!(benches);
