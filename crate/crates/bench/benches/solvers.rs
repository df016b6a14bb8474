use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use restartkit::dynamics::closed_form_mode;
use restartkit::solvers::{accel_projected_gradient, accelerated_scheme1, fista};
use restartkit::{CompositeObjective, MomentumState, RestartPolicy, SolverConfig, Vector};
use restartkit_bench::{boxqp, lasso, quadratic, start};

fn policies() -> [(&'static str, RestartPolicy); 3] {
    [
        ("none", RestartPolicy::none()),
        ("func", RestartPolicy::function()),
        ("grad", RestartPolicy::gradient()),
    ]
}

fn bench_quadratic(c: &mut Criterion) {
    let q = quadratic(200, 1e4);
    let x0 = start(200);
    let mut group = c.benchmark_group("scheme1_quadratic_n200_500it");
    for (name, policy) in policies() {
        let config = SolverConfig::for_lipschitz(q.l())
            .with_max_iters(500)
            .with_restart(policy);
        group.bench_with_input(BenchmarkId::from_parameter(name), &config, |b, config| {
            b.iter(|| accelerated_scheme1(&q, &x0, config).unwrap())
        });
    }
    group.finish();
}

fn bench_fista(c: &mut Criterion) {
    let problem = lasso(500, 125, 25);
    let x0 = Vector::zeros(500);
    let mut group = c.benchmark_group("fista_lasso_500x125_300it");
    for (name, policy) in policies() {
        let config = SolverConfig::for_lipschitz(problem.lipschitz())
            .with_max_iters(300)
            .with_restart(policy);
        group.bench_with_input(BenchmarkId::from_parameter(name), &config, |b, config| {
            b.iter(|| fista(&problem, &x0, config).unwrap())
        });
    }
    group.finish();
}

fn bench_boxqp(c: &mut Criterion) {
    let qp = boxqp(200, 1e5);
    let x0 = Vector::zeros(200);
    let config = SolverConfig::for_lipschitz(qp.lipschitz())
        .with_max_iters(300)
        .with_restart(RestartPolicy::gradient());
    c.bench_function("apg_boxqp_n200_300it_grad", |b| {
        b.iter(|| accel_projected_gradient(&qp, &x0, &config).unwrap())
    });
}

fn bench_kernels(c: &mut Criterion) {
    c.bench_function("momentum_advance_1000", |b| {
        b.iter(|| {
            let mut m = MomentumState::new(1e-4).unwrap();
            (0..1000).map(|_| m.advance()).sum::<f64>()
        })
    });
    c.bench_function("closed_form_mode_k200", |b| {
        b.iter(|| closed_form_mode(1.0, 0.99, 1e-3, 200).unwrap())
    });
}

criterion_group!(benches, bench_quadratic, bench_fista, bench_boxqp, bench_kernels);
criterion_main!(benches);
