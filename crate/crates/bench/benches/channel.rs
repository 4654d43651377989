use criterion::{criterion_group, criterion_main, Criterion};
use equips_core::{
    solve_baseline, solve_perturbed, ChannelParams, ComponentTarget, PerturbationSpec,
};

fn channel(c: &mut Criterion) {
    let mut group = c.benchmark_group("channel");
    group.sample_size(10);
    for cells in [64, 128] {
        let p = ChannelParams::new(180.0, cells);
        group.bench_function(format!("baseline N={cells}"), |b| {
            b.iter(|| solve_baseline(&p).unwrap())
        });
        let spec = PerturbationSpec::new(ComponentTarget::One, false, 1.0, 0.1).unwrap();
        group.bench_function(format!("1c N={cells}"), |b| {
            b.iter(|| solve_perturbed(&p, &spec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, channel);
criterion_main!(benches);
