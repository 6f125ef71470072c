use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use treesplit::iet::{iet_to_system, IntervalExchange};
use treesplit::lamination::{legal_turns_with, regular_words_with};
use treesplit::{Exec, Scalar, SystemOfIsometries};

fn systems() -> Vec<(&'static str, SystemOfIsometries)> {
    let five = IntervalExchange::new(
        vec![
            Scalar::one(),
            Scalar::sqrt(3),
            Scalar::frac(1, 2),
            &(&Scalar::one() + &Scalar::sqrt(3)) / &Scalar::int(3),
            &Scalar::sqrt(3) / &Scalar::int(2),
        ],
        &[5, 4, 3, 2, 1],
    )
    .unwrap();
    vec![
        ("golden", iet_to_system(&IntervalExchange::golden()).unwrap()),
        ("five", iet_to_system(&five).unwrap()),
    ]
}

fn bench(c: &mut Criterion) {
    let modes = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];
    let mut g = c.benchmark_group("legal_turns");
    g.sample_size(10);
    for (name, s) in &systems() {
        for (mode, exec) in modes {
            g.bench_with_input(BenchmarkId::new(mode, name), s, |b, s| b.iter(|| legal_turns_with(s, 10, exec).unwrap()));
        }
    }
    g.finish();

    let mut g = c.benchmark_group("regular_words");
    g.sample_size(10);
    for (name, s) in &systems() {
        for (mode, exec) in modes {
            g.bench_with_input(BenchmarkId::new(mode, name), s, |b, s| b.iter(|| regular_words_with(s, 12, exec).unwrap()));
        }
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
