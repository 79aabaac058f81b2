use criterion::{black_box, criterion_group, criterion_main, Criterion};

use sixforms::invariants::coords::coords_to_form;
use sixforms::invariants::{classify_sp, compute_f, compute_k, q_form};
use sixforms::{random, Form, SymplecticForm, Tolerance};

fn bench_invariants(c: &mut Criterion) {
    let mut rng = random::rng(0);
    let exact = coords_to_form(&random::primitive_coords(&mut rng));
    let float: Form<f64> = coords_to_form(&random::float_coords(&mut rng));
    let w_exact = SymplecticForm::standard();
    let w_float = SymplecticForm::<f64>::standard();

    c.bench_function("compute_k/rational", |b| {
        b.iter(|| compute_k(black_box(&exact), &w_exact).unwrap())
    });
    c.bench_function("compute_k/f64", |b| {
        b.iter(|| compute_k(black_box(&float), &w_float).unwrap())
    });
    c.bench_function("compute_f/rational", |b| {
        b.iter(|| compute_f(black_box(&exact), &w_exact).unwrap())
    });
    c.bench_function("compute_f/f64", |b| {
        b.iter(|| compute_f(black_box(&float), &w_float).unwrap())
    });
    c.bench_function("q_form/f64", |b| {
        b.iter(|| q_form(black_box(&float), &w_float).unwrap())
    });
    c.bench_function("classify_sp/rational", |b| {
        b.iter(|| classify_sp(black_box(&exact), &w_exact, Tolerance::default()).unwrap())
    });
    c.bench_function("classify_sp/f64", |b| {
        b.iter(|| classify_sp(black_box(&float), &w_float, Tolerance::default()).unwrap())
    });
}

criterion_group!(benches, bench_invariants);
criterion_main!(benches);
