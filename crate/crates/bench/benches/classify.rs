use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use k3cover_core::vinberg::{enumerate_cone_slice, exhaustive_search};
use k3cover_core::{classify, enumerate_norm, IntegralLattice, NormQuery, StandardLattice, TranscendentalForm};

fn forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for (name, (a, b, cc)) in
        [("II", (3, 2, -1)), ("III-1", (2, 3, 2)), ("III-2", (1, 3, 0)), ("III-3", (1, 1, 0)), ("IV", (1, 1, 1))]
    {
        let t = TranscendentalForm::new(a, b, cc).unwrap();
        group.bench_function(name, |bch| bch.iter(|| classify(black_box(&t)).unwrap()));
    }
    group.bench_function("grid 6x6x15", |bch| {
        bch.iter(|| {
            let mut n = 0;
            for a in 1..=6 {
                for b in 1..=6 {
                    for cc in -7..=7 {
                        if let Ok(t) = TranscendentalForm::new(a, b, cc) {
                            n += usize::from(classify(&t).unwrap().covers);
                        }
                    }
                }
            }
            n
        })
    });
    group.finish();
}

fn shortvec(c: &mut Criterion) {
    let e8 = IntegralLattice::standard(StandardLattice::E8_2);
    c.bench_function("E8(2) vectors of norm -4", |bch| {
        bch.iter(|| enumerate_norm(&NormQuery::exact(black_box(e8.clone()), -4).unwrap()).unwrap().len())
    });
}

fn slices(c: &mut Criterion) {
    c.bench_function("cone slice 14", |bch| bch.iter(|| enumerate_cone_slice(black_box(14)).unwrap().len()));
    c.bench_function("absence of norm 4 up to slice 14", |bch| bch.iter(|| exhaustive_search(black_box(4), 14)));
}

criterion_group!(benches, forms, shortvec, slices);
criterion_main!(benches);
