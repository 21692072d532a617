#![allow(dead_code)]

use ppsm::ci::ProductModel;
use ppsm::ProbabilityTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Flat Dirichlet draw over the eight cells.
pub fn dirichlet_table<R: Rng>(rng: &mut R) -> ProbabilityTable {
    let mut p = [0.0; 8];
    for v in p.iter_mut() {
        *v = Exp1.sample(rng);
    }
    let sum: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= sum);
    ProbabilityTable::new(p).unwrap()
}

/// `Pr(psi)`, `Pr(s|psi)`, `Pr(phi|psi)` each uniform on [0, 1].
pub fn random_product<R: Rng>(rng: &mut R) -> ProductModel {
    let mut u = || rng.random::<f64>();
    ProductModel::new(u(), [u(), u()], [u(), u()]).unwrap()
}

/// Evenly spaced points strictly inside (lo, hi).
pub fn interior_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| lo + (hi - lo) * k as f64 / (n + 1) as f64)
        .collect()
}
