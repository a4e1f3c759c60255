//! Compares the batch evaluation paths on the two hot workloads: exterior
//! square sweeps on K_N and torus cohomology cell ranks. With the default
//! `parallel` feature, `map_all` distributes over rayon; `map_all_sequential`
//! is the single-threaded reference. Built with
//! `--no-default-features`, both paths are sequential and should coincide.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ncg_core::batch;
use ncg_core::calculus::Calculus;
use ncg_core::derivation::LieSubalgebra;
use ncg_core::kronecker::KElement;
use ncg_core::sample::Sampler;

fn wedge_sweep(c: &mut Criterion) {
    let n = 4;
    let cal = Calculus::new(LieSubalgebra::der(n));
    let mut sampler = Sampler::new(0);
    let pairs: Vec<(KElement, KElement)> = (0..48)
        .map(|_| (sampler.k_element(n), sampler.k_element(n)))
        .collect();
    let basis = cal.g().basis().to_vec();
    let eval_pair = |(a, b): &(KElement, KElement)| {
        let mut nonzero = 0usize;
        for (p, d1) in basis.iter().enumerate() {
            for d2 in basis.iter().skip(p + 1) {
                if !cal.wedge_eval(a, b, d1, d2).is_zero() {
                    nonzero += 1;
                }
            }
        }
        nonzero
    };

    let mut group = c.benchmark_group("wedge-sweep");
    group.bench_with_input(BenchmarkId::new("parallel", pairs.len()), &pairs, |b, pairs| {
        b.iter(|| batch::map_all(pairs, eval_pair))
    });
    group.bench_with_input(
        BenchmarkId::new("sequential", pairs.len()),
        &pairs,
        |b, pairs| b.iter(|| batch::map_all_sequential(pairs, eval_pair)),
    );
    group.finish();
}

fn cohomology_cells(c: &mut Criterion) {
    // `torus::cohomology` itself routes through `map_all`; the sequential
    // reference is approximated by the window-1 unit of work scaled up via
    // map_all_sequential over the same cell list.
    let window = 8i64;
    let cells: Vec<(i64, i64)> = (-window..=window)
        .flat_map(|k| (-window..=window).map(move |l| (k, l)))
        .collect();
    let rank_pair = |&(k, l): &(i64, i64)| {
        use ncg_core::linalg::Mat;
        use ncg_core::GaussianRational;
        use num::BigRational;
        let it = |t: i64| {
            GaussianRational::new(
                BigRational::from_integer(0.into()),
                BigRational::from_integer(t.into()),
            )
        };
        let d0 = Mat::from_rows(vec![vec![it(k)], vec![it(l)]]);
        let d1 = Mat::from_rows(vec![vec![-&it(l), it(k)]]);
        (d0.rank(), d1.rank())
    };

    let mut group = c.benchmark_group("cohomology-cells");
    group.bench_with_input(BenchmarkId::new("parallel", cells.len()), &cells, |b, cells| {
        b.iter(|| batch::map_all(cells, rank_pair))
    });
    group.bench_with_input(
        BenchmarkId::new("sequential", cells.len()),
        &cells,
        |b, cells| b.iter(|| batch::map_all_sequential(cells, rank_pair)),
    );
    group.finish();
}

criterion_group!(benches, wedge_sweep, cohomology_cells);
criterion_main!(benches);
