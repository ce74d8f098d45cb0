use cogfso_bench::scenario;
use cogfso_core::fso::Detection;
use cogfso_core::mc::{simulate_outage, simulate_selection, McEngine, RngConfig};
use criterion::{criterion_group, criterion_main, Criterion, Throughput};

fn chain(c: &mut Criterion) {
    let s = scenario(Detection::ImDd);
    let engine = McEngine::new(RngConfig::new(1));
    let trials = 1 << 18;
    let mut g = c.benchmark_group("monte_carlo");
    g.throughput(Throughput::Elements(trials));
    g.sample_size(20);
    g.bench_function("outage_chain", |b| b.iter(|| simulate_outage(&s, trials, &engine)));
    g.bench_function("selection", |b| b.iter(|| simulate_selection(&s.profiles, s.p_a, trials, &engine)));
    g.finish();
}

criterion_group!(benches, chain);
criterion_main!(benches);
