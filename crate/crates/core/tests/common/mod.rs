#![allow(dead_code)]

use lattice_wigner::{Complex64, DMatrix, DensityOperator, PureState};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_amplitudes(rng: &mut ChaCha8Rng, sites: usize) -> Vec<Complex64> {
    (0..sites)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Normalized state on `sites` consecutive sites with nonzero end amplitudes.
pub fn random_pure(rng: &mut ChaCha8Rng, sites: usize, spacing: f64) -> PureState {
    loop {
        let amps = random_amplitudes(rng, sites);
        if amps[0].norm() < 0.05 || amps[sites - 1].norm() < 0.05 {
            continue;
        }
        let n_min = rng.gen_range(-20..=20);
        return PureState::normalized(n_min, amps, spacing).unwrap();
    }
}

/// Convex mixture of a few random pure states on a shared window.
pub fn random_mixed(rng: &mut ChaCha8Rng, sites: usize, spacing: f64) -> DensityOperator {
    let parts = rng.gen_range(2..=4);
    let weights: Vec<f64> = (0..parts).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut matrix = DMatrix::<Complex64>::zeros(sites, sites);
    for w in &weights {
        let amps = random_amplitudes(rng, sites);
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let v = nalgebra_vector(&amps, norm);
        matrix += (&v * v.adjoint()) * Complex64::new(w / total, 0.0);
    }
    // force exact Hermiticity against rounding in the accumulation
    let matrix = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let n_min = rng.gen_range(-20..=20);
    DensityOperator::new(n_min, matrix, spacing).unwrap()
}

fn nalgebra_vector(amps: &[Complex64], norm: f64) -> DMatrix<Complex64> {
    DMatrix::from_iterator(amps.len(), 1, amps.iter().map(|a| a / norm))
}

/// `tr(ρ₁ρ₂)` after embedding both operators in their joint window.
pub fn trace_product(r1: &DensityOperator, r2: &DensityOperator) -> f64 {
    let lo = r1.n_min().min(r2.n_min());
    let hi = r1.n_max().max(r2.n_max());
    let a = r1.embedded(lo, hi).unwrap();
    let b = r2.embedded(lo, hi).unwrap();
    (a.matrix() * b.matrix()).trace().re
}
