//! Fixtures shared by the criterion benchmarks.

use lattice_wigner::{make_gaussian, to_density, DensityOperator, GaussianParams, TwoGaussianParams};

/// Density operator of a single Gaussian of width `sigma_tilde` at the origin.
pub fn gaussian_density(sigma_tilde: f64) -> DensityOperator {
    let p = GaussianParams::new(0, sigma_tilde, 0.0).expect("valid width");
    to_density(&make_gaussian(&p, 1.0, 1e-16).expect("valid gaussian"))
}

/// Density operator of the symmetric two-Gaussian superposition at `±n0`.
pub fn cat_density(n0: i64, sigma_tilde: f64) -> DensityOperator {
    let p = TwoGaussianParams::symmetric_pair(n0, sigma_tilde, 0.0).expect("valid params");
    to_density(&p.state(1.0, 1e-16).expect("valid state"))
}
