use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fingeo::clubs;
use fingeo::field::FieldTower;
use fingeo::nrc;
use fingeo::par::Exec;
use fingeo::projective::{base_field, ProjPoint, Projectivity, Subspace};
use fingeo::reduction::ReductionContext;
use fingeo::segre::{regulus_of_subline, Subgeometry};
use fingeo::theorems;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn extension_profile(c: &mut Criterion) {
    let tower = FieldTower::for_q(4, 4).unwrap();
    let ctx = ReductionContext::new(tower.clone(), 2).unwrap();
    let segre = regulus_of_subline(&ctx, &Subgeometry::standard(2, 1)).unwrap();
    let s3 = Subspace::from_rows(ctx.base(), 7, &theorems::gf4_example_rows(&tower).unwrap()).unwrap();
    let mut group = c.benchmark_group("extension_profile_q4_n4");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| theorems::extendability_profile(&segre, &s3, exec).unwrap())
        });
    }
    group.finish();
}

fn nrc_test(c: &mut Criterion) {
    let f = base_field(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = Projectivity::random(&f, 5, &mut rng);
    let pts: Vec<ProjPoint> = nrc::moment_curve(&f, 5).iter().map(|p| g.apply(&f, p)).collect();
    let mut group = c.benchmark_group("is_nrc_q7_t5");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| nrc::is_nrc_with(&f, &pts, exec).unwrap()));
    }
    group.finish();
}

fn club_families(c: &mut Criterion) {
    let club = clubs::make_club(4, 6, 3).unwrap();
    let mut group = c.benchmark_group("club_families_q4_n6");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| clubs::club_families(&club, exec).unwrap()));
    }
    group.finish();
}

fn order_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("order_sweep_q4_n3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| theorems::sweep_extension_orders(4, 3, true, None, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, extension_profile, nrc_test, club_families, order_sweep);
criterion_main!(benches);
