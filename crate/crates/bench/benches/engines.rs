use criterion::{black_box, criterion_group, criterion_main, Criterion};

use tstruct_bench::Inputs;
use tstruct_core::corpus::z_census;
use tstruct_core::derived::{tau_filtration, CechOracle};
use tstruct_core::filtration::CensusFilter;
use tstruct_core::zmodules::smith_normal_form;

fn linear_algebra(c: &mut Criterion) {
    let inp = Inputs::new(100, 0);
    c.bench_function("smith normal form", |b| {
        b.iter(|| {
            for m in &inp.matrices {
                black_box(smith_normal_form(m));
            }
        })
    });
    c.bench_function("homology", |b| {
        b.iter(|| {
            for x in &inp.complexes {
                black_box(x.homology());
            }
        })
    });
}

fn truncation(c: &mut Criterion) {
    let inp = Inputs::new(20, 10);
    c.bench_function("tau_filtration profile engine", |b| {
        b.iter(|| {
            for phi in &inp.filtrations {
                for x in &inp.objects {
                    black_box(tau_filtration(phi, x).expect("determinate"));
                }
            }
        })
    });
    let oracle = CechOracle::default();
    let mut group = c.benchmark_group("cech oracle");
    group.sample_size(10);
    group.bench_function("tau_filtration", |b| {
        b.iter(|| {
            for phi in inp.filtrations.iter().take(3) {
                for x in inp.complexes.iter().take(5) {
                    black_box(oracle.tau_filtration(phi, x).expect("stabilizes"));
                }
            }
        })
    });
    group.finish();
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    group.bench_function("Z window -3..3", |b| b.iter(|| black_box(z_census(CensusFilter::All).expect("cap"))));
    group.finish();
}

criterion_group!(benches, linear_algebra, truncation, census);
criterion_main!(benches);
