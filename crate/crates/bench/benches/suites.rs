use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pitree::hybrid::finite::random_instance;
use pitree::tree::{materialize, rise, FoliageTree};
use pitree::verify::samples::default_samples;
use pitree::verify::{baire_suite, cocountable_checks, hybrid_oracle_suite, BaireParams, StageBounds};
use pitree::{ClopenSet, NodePath, Point};
use pitree_bench::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn trees(c: &mut Criterion) {
    let mut g = c.benchmark_group("materialize");
    let s = standard();
    g.bench_function("standard d4 n8", |b| b.iter(|| materialize(s.as_ref(), black_box(4), 8).unwrap()));
    let p = sorgenfrey_square();
    g.bench_function("sorgenfrey square d4 n4", |b| b.iter(|| materialize(&p, black_box(4), 4).unwrap()));
    g.finish();
}

fn rises(c: &mut Criterion) {
    let s = standard();
    let p = Point::baire(vec![], 0);
    let u = ClopenSet::cyl(NodePath::new(vec![0, 0, 0]));
    c.bench_function("rise standard d8", |b| b.iter(|| rise(s.as_ref(), &p, &u, black_box(8)).unwrap()));
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    let sorg = sorgenfrey();
    g.bench_function("baire sorgenfrey d6 n32", |b| b.iter(|| baire_suite(sorg.as_ref(), &BaireParams::new(6, 32)).unwrap()));
    let sq = sorgenfrey_square();
    g.bench_function("baire sorgenfrey square d5 n16", |b| b.iter(|| baire_suite(&sq, &BaireParams::new(5, 16)).unwrap()));
    let om = omega_sorgenfrey();
    g.bench_function("baire omega product d5 n16", |b| b.iter(|| baire_suite(&om, &BaireParams::new(5, 16)).unwrap()));
    let h = cocountable();
    let samples = default_samples(&h.space(), &five_points(), 10, 0);
    g.bench_function("cocountable checks d10", |b| {
        b.iter(|| cocountable_checks(&h, &samples, 10, StageBounds::default()).unwrap())
    });
    g.bench_function("hybrid oracle 100", |b| b.iter(|| hybrid_oracle_suite(black_box(3), 100, 60, 3)));
    g.finish();
}

fn instances(c: &mut Criterion) {
    c.bench_function("random hybrid instance", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        b.iter(|| random_instance(&mut rng, 60, 3))
    });
}

criterion_group!(benches, trees, rises, suites, instances);
criterion_main!(benches);
