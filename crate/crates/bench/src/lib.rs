//! Fixed-seed fixtures shared by the benchmarks.

use restartkit::oracles::{gen_boxqp, gen_lasso, gen_quadratic, seeded_rng, standard_normal_vector};
use restartkit::{BoxQp, LassoProblem, Quadratic, Vector};

pub const SEED: u64 = 7;

pub fn quadratic(n: usize, cond: f64) -> Quadratic {
    gen_quadratic(n, cond, SEED).expect("valid quadratic parameters")
}

pub fn lasso(n: usize, m: usize, s: usize) -> LassoProblem {
    gen_lasso(n, m, s, 1.0, 0.1, SEED).expect("valid lasso parameters")
}

pub fn boxqp(n: usize, cond: f64) -> BoxQp {
    gen_boxqp(n, cond, SEED).expect("valid box-QP parameters")
}

pub fn start(n: usize) -> Vector {
    standard_normal_vector(&mut seeded_rng(SEED + 1), n)
}
