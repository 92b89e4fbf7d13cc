use criterion::{criterion_group, criterion_main, Criterion};
use tweq_bench::banded_images;
use tweq_core::cohomology::{inverse_limit, omega_tower, ComplexSpec, TruncationParams};
use tweq_core::linalg::kernel;
use tweq_core::models::{cartan_map_j, extended_to_twisted, instances, ModelContext, SignConvention};

fn tower(c: &mut Criterion) {
    let model = ModelContext::new(instances::circle_circle().unwrap()).unwrap();
    let spec = ComplexSpec::extended(&model, SignConvention::Minus).unwrap();
    c.bench_function("circle-circle tower N<=6 K=3", |b| {
        b.iter(|| inverse_limit(&omega_tower(&spec, 6, TruncationParams::new(0, 3)).unwrap()))
    });
    let model = ModelContext::new(instances::su2_ce().unwrap()).unwrap();
    let spec = ComplexSpec::extended(&model, SignConvention::Minus).unwrap();
    c.bench_function("su2-ce tower N<=2", |b| {
        b.iter(|| inverse_limit(&omega_tower(&spec, 2, TruncationParams::new(0, 0)).unwrap()))
    });
}

fn cartan_map(c: &mut Criterion) {
    let model = ModelContext::new(instances::su2_ce().unwrap()).unwrap();
    let h = extended_to_twisted(&model).unwrap().element().unwrap();
    c.bench_function("su2-ce j(H)", |b| b.iter(|| cartan_map_j(&model, &h).unwrap()));
}

fn elimination(c: &mut Criterion) {
    for n in [32, 64] {
        let imgs = banded_images(n);
        c.bench_function(&format!("kernel banded {n}"), |b| b.iter(|| kernel(&imgs)));
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = tower, cartan_map, elimination
}
criterion_main!(benches);
