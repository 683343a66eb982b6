//! Throughput benches for the data-parallel kernels. Build once with the
//! default `parallel` feature and once with `--no-default-features` to
//! compare the rayon fan-out against the sequential fallback; the group
//! names carry the compiled mode:
//!
//! ```text
//! cargo bench -p mvote-core
//! cargo bench -p mvote-core --no-default-features
//! ```

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mvote_core::election::{Election, WeightVector};
use mvote_core::enumerate::{all_profiles, random_election};
use mvote_core::matching::DominationGraph;
use mvote_core::rules::{plurality_matching, smart_dictatorship};
use mvote_core::{distortion, parallel, ratio::rat};

#[cfg(feature = "parallel")]
const MODE: &str = "parallel";
#[cfg(not(feature = "parallel"))]
const MODE: &str = "sequential";

/// Per-instance matching-rule scan, the shape of `batch` and of the
/// enumeration suites.
fn bench_matching_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("matching_scan/{MODE}"));
    for (n, m) in [(4usize, 3usize), (8, 6)] {
        let elections: Vec<_> = (0..256).map(|s| random_election(n, m, s)).collect();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{n}x{m}")),
            &elections,
            |b, elections| {
                b.iter(|| {
                    parallel::par_map(elections, |e| plurality_matching(e).unwrap().chosen)
                        .into_iter()
                        .sum::<usize>()
                })
            },
        );
    }
    group.finish();
}

/// Exhaustive profile scan checking that some candidate is matchable.
fn bench_lemma2_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("lemma2_enumeration/{MODE}"));
    group.sample_size(20);
    let profiles: Vec<Election> = all_profiles(4, 3).collect();
    group.bench_function("n4_m3_uniform_plurality", |b| {
        b.iter(|| {
            parallel::par_map(&profiles, |e| {
                let p = WeightVector::uniform(e.voters());
                let q = WeightVector::plurality(e);
                usize::from((0..e.candidates()).any(|a| {
                    DominationGraph::build(e, a, p.clone(), q.clone())
                        .unwrap()
                        .check_fractional_matching()
                        .is_matchable()
                }))
            })
            .into_iter()
            .sum::<usize>()
        })
    });
    group.finish();
}

/// Worst-case-ratio LPs; the per-reference solves fan out.
fn bench_distortion_lp(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("distortion_lp/{MODE}"));
    group.sample_size(10);
    let e = random_election(3, 3, 11);
    let alpha = rat(1, 2);
    group.bench_function("n3_m3_smart_dictatorship", |b| {
        b.iter(|| {
            let lottery = smart_dictatorship(&e, &alpha).unwrap();
            distortion::distortion_of_outcome(&e, &lottery, &alpha)
                .value
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_matching_scan,
    bench_lemma2_enumeration,
    bench_distortion_lp
);
criterion_main!(benches);
