use criterion::{black_box, criterion_group, criterion_main, Criterion};

use pgarc::{find_max_complete, ArcSet, Canonizer, FieldSpec, Plane, SearchConfig, SearchMode};
use pgarc_bench::table1;

fn witness(c: &mut Criterion) {
    let (plane, pts) = table1();
    let arc = ArcSet::from_points(&plane, pts).unwrap();
    let canon = Canonizer::new(&plane);
    c.bench_function("secants/q16", |b| b.iter(|| black_box(arc.secant_distribution())));
    c.bench_function("complete/q16", |b| b.iter(|| black_box(arc.is_complete(3))));
    c.bench_function("canonical_form/q16", |b| {
        b.iter(|| black_box(canon.canonical_form(arc.members()).unwrap()))
    });
    c.bench_function("stabilizer/q16", |b| b.iter(|| black_box(canon.stabilizer(arc.members()).unwrap())));
    c.bench_function("max_2arc/q16", |b| b.iter(|| black_box(arc.max_2arc_subset().unwrap())));
}

fn searches(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    for q in [4, 5] {
        let plane = Plane::new(FieldSpec::with_order(q).unwrap());
        let cfg = SearchConfig::new(SearchMode::FindMax, 3, SearchConfig::size_limit(q, 3) + 1);
        g.bench_function(format!("find_max/q{q}/r3"), |b| {
            b.iter(|| black_box(find_max_complete(&plane, &cfg).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, witness, searches);
criterion_main!(benches);
