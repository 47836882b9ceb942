use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qid::{appell_lerch_m, eval, mock_theta_series, parse, prove_zero, AppellLerchSpec, MockThetaSelector, Registry, SignedMonomial};

fn eta_quotient(c: &mut Criterion) {
    let e = parse("f2^7*f3^2/(f1^6*f4*f6)").unwrap();
    c.bench_function("eta quotient to q^200", |b| b.iter(|| eval(black_box(&e), 200).unwrap()));
}

fn mock_theta(c: &mut Criterion) {
    let mut g = c.benchmark_group("B to q^200");
    for sel in [MockThetaSelector::B1, MockThetaSelector::B3] {
        g.bench_function(sel.name(), |b| b.iter(|| mock_theta_series(black_box(sel), 200)));
    }
    g.finish();
}

fn appell_lerch(c: &mut Criterion) {
    let spec = AppellLerchSpec::new(SignedMonomial::ONE, 4, SignedMonomial::q_pow(3)).unwrap();
    c.bench_function("m(1, q^4, q^3) to q^200", |b| b.iter(|| appell_lerch_m(black_box(&spec), 200).unwrap()));
}

fn zero_proof(c: &mut Criterion) {
    let s1 = Registry::bundled().def("S1").unwrap().to_eta().unwrap();
    c.bench_function("prove S1 = 0", |b| b.iter(|| prove_zero(black_box(&s1)).unwrap()));
}

criterion_group!(benches, eta_quotient, mock_theta, appell_lerch, zero_proof);
criterion_main!(benches);
