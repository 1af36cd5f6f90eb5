use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use hierdepth::agcode::{self, build_code, min_distance, vanishing_basis, EvalPoint, ProjPoint, Space};
use hierdepth::hecke::build_curve_filtration;
use hierdepth::{FMatrix, Field};

fn pseudo_random_matrix(field: Field, rows: usize, cols: usize) -> FMatrix {
    let mut state = 0x9e37_79b9_u64;
    let data = (0..rows * cols)
        .map(|_| {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
            ((state >> 33) % field.p() as u64) as u32
        })
        .collect();
    FMatrix::new(field, rows, cols, data).unwrap()
}

fn row_reduction(c: &mut Criterion) {
    let field = Field::new(7).unwrap();
    let mut g = c.benchmark_group("rref");
    for n in [16usize, 48, 96] {
        let m = pseudo_random_matrix(field, n, n + 8);
        g.bench_with_input(BenchmarkId::new("rref", n), &m, |b, m| b.iter(|| black_box(m.rref())));
        g.bench_with_input(BenchmarkId::new("kernel", n), &m, |b, m| {
            b.iter(|| black_box(m.kernel_basis()))
        });
    }
    g.finish();
}

fn reed_solomon_distance(c: &mut Criterion) {
    let mut g = c.benchmark_group("min_distance");
    for (p, k) in [(7u64, 4u32), (11, 4), (13, 5)] {
        let field = Field::new(p).unwrap();
        let basis = vanishing_basis(k - 1, &[], Space::P1, field).unwrap();
        let pts: Vec<EvalPoint> = agcode::rational_points(field, Space::P1)
            .into_iter()
            .map(EvalPoint::Regular)
            .collect();
        let code = build_code(&[basis], &pts, field).unwrap();
        g.bench_function(format!("rs_p{p}_k{k}"), |b| {
            b.iter(|| black_box(min_distance(&code, u64::MAX).unwrap()))
        });
    }
    let field = Field::new(5).unwrap();
    let p0 = ProjPoint::new(field, Space::P2, &[1, 0, 0]).unwrap();
    let cubics = vanishing_basis(3, &[], Space::P2, field).unwrap();
    let pts: Vec<EvalPoint> = agcode::rational_points(field, Space::P2)
        .into_iter()
        .filter(|q| *q != p0)
        .map(EvalPoint::Regular)
        .collect();
    let code = build_code(&[cubics], &pts, field).unwrap();
    g.sample_size(10);
    g.bench_function("plane_cubics_p5", |b| {
        b.iter(|| black_box(min_distance(&code, u64::MAX).unwrap()))
    });
    g.finish();
}

fn curve_filtration(c: &mut Criterion) {
    let field = Field::new(11).unwrap();
    c.bench_function("build_curve_filtration_rank4_m8", |b| {
        b.iter(|| black_box(build_curve_filtration(&[5, 3, 1, 0], 1, field).unwrap()))
    });
}

criterion_group!(benches, row_reduction, reed_solomon_distance, curve_filtration);
criterion_main!(benches);
