//! Randomized property suites on a one-thread pool versus the default pool.
//!
//! Built with `--no-default-features` both variants run the sequential
//! fallback, which gives the third point of comparison.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nccalc::{par, presets, properties};

const SUITES: [&str; 3] = ["twisted-leibniz", "d2", "move-left"];

fn suites(c: &mut Criterion) {
    let mode = if par::is_parallel() { "rayon" } else { "sequential" };
    let mut group = c.benchmark_group(format!("property-suites/{mode}"));
    group.sample_size(10);
    for id in ["quantum_plane_a", "glpq2"] {
        let pre = presets::load(id).expect("preset loads");
        for (label, jobs) in [("1 thread", Some(1)), ("default", None)] {
            group.bench_with_input(BenchmarkId::new(label, id), &pre, |b, pre| {
                b.iter(|| {
                    par::with_jobs(jobs, || {
                        properties::run_suites(&pre.calc, pre.images.as_ref(), &SUITES, 40, 7)
                            .expect("suites run")
                    })
                })
            });
        }
    }
    group.finish();
}

fn determinants(c: &mut Criterion) {
    // coordinate matrix of x, x^2, x^3, x^4 under four concrete shifts
    let calc = presets::shift_calculus(&[("a", -2), ("b", 1), ("c", 3), ("d", 4)]).expect("calculus");
    let coords: Vec<_> = (1..=4)
        .map(|r| calc.spec.algebra.parse(&format!("x^{r}")).expect("parses"))
        .collect();
    c.bench_function("theta-solve/shift-4", |b| {
        b.iter(|| nccalc::calculus::solve_theta_in_differentials(&calc.spec, &coords).expect("solves"))
    });
}

criterion_group!(benches, suites, determinants);
criterion_main!(benches);
