use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use plconf::generate::{random_model, random_stakeholders, ModelShape};
use plconf::{check_validity, parse_model, parse_stakeholder_json, resolve_session, ManagerRule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PORTAL: &str = include_str!("../../../fixtures/webportal.fm");
const SCENARIO: &str = include_str!("../../../fixtures/scenario.json");

fn portal(c: &mut Criterion) {
    let model = parse_model(PORTAL).unwrap();
    let configs = parse_stakeholder_json(SCENARIO, &model).unwrap();
    c.bench_function("resolve/web-portal", |b| {
        b.iter(|| resolve_session(black_box(&model), black_box(&configs), &ManagerRule::MostComplete).unwrap())
    });
    let final_config = resolve_session(&model, &configs, &ManagerRule::MostComplete)
        .unwrap()
        .final_config;
    c.bench_function("validity/web-portal-final", |b| {
        b.iter(|| check_validity(black_box(&final_config), black_box(&model)).unwrap())
    });
}

fn generated(c: &mut Criterion) {
    let mut group = c.benchmark_group("resolve/generated");
    for scale in [1usize, 2, 4] {
        let mut rng = ChaCha8Rng::seed_from_u64(200);
        let model = random_model(&mut rng, ModelShape::new(200 * scale, 20 * scale, 50 * scale));
        let configs = random_stakeholders(&mut rng, &model, 20, 5 * scale, 15 * scale);
        group.bench_with_input(
            BenchmarkId::from_parameter(model.len()),
            &(model, configs),
            |b, (m, cfgs)| b.iter(|| resolve_session(m, cfgs, &ManagerRule::MostComplete).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, portal, generated);
criterion_main!(benches);
