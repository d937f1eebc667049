use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use negsssp::betweenness::{betweenness_reduce, BetweennessParams};
use negsssp::testkit::{generate, InstanceSpec, Tag};
use negsssp::{normalize, solve_sssp};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// A 1-thread pool runs the same code path as the sequential build; build with
// `--no-default-features` to measure the fallback without rayon at all.
fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let mut out = vec![("sequential".to_string(), rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap())];
    if negsssp::is_parallel() {
        let pool = rayon::ThreadPoolBuilder::new().build().unwrap();
        out.push((format!("parallel-{}", pool.current_num_threads()), pool));
    }
    out
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_sssp");
    group.sample_size(10);
    for (tag, n) in [(Tag::Uniform, 1000), (Tag::Uniform, 2000), (Tag::SandwichPlanted, 2000)] {
        let g = generate(&InstanceSpec::new(tag, n, 4 * n, n / 8, 1)).unwrap();
        for (name, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(format!("{tag}/{name}"), n), &g, |b, g| {
                b.iter(|| pool.install(|| solve_sssp(g, 0, 7).unwrap()))
            });
        }
    }
    group.finish();
}

fn betweenness(c: &mut Criterion) {
    let mut group = c.benchmark_group("betweenness_reduce");
    group.sample_size(10);
    let g = generate(&InstanceSpec::uniform(2000, 8000, 250, 2)).unwrap();
    let (g, _) = normalize(&g);
    for (name, pool) in pools() {
        group.bench_function(name, |b| {
            b.iter(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(5);
                pool.install(|| betweenness_reduce(&g, BetweennessParams::new(8, 4), &mut rng).unwrap())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, solve, betweenness);
criterion_main!(benches);
