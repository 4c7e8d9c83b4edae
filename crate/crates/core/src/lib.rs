//! Wigner quasi-probability functions for a particle on an infinite
//! one-dimensional lattice.
//!
//! The phase space pairs an integer label `m` with a periodic label
//! `k ∈ [-π, π)`. Even rows `m = 2n` sit on lattice sites, odd rows between
//! them. This crate evaluates the Wigner function of lattice states on that
//! space, checks its defining identities (marginals, overlaps,
//! reconstruction), measures non-classicality with a sign-filtered negative
//! volume, and provides closed forms for localized and Gaussian states.
//!
//! ```
//! use lattice_wigner::{eta, make_delta, superpose, to_density, wigner_grid};
//! use num_complex::Complex64;
//!
//! let one = Complex64::new(1.0, 0.0);
//! let cat = superpose(&[make_delta(-2, 1.0)?, make_delta(3, 1.0)?], &[one, one])?;
//! let grid = wigner_grid(&to_density(&cat), 4096)?;
//! let report = eta(&grid)?;
//! assert!((report.eta - 2.0 / std::f64::consts::PI).abs() < 1e-6);
//! # Ok::<(), lattice_wigner::Error>(())
//! ```

pub mod error;
pub mod negativity;
pub mod oracles;
pub mod reduce;
pub mod state;
pub mod theta;
pub mod wigner;

pub use error::{Error, Result};
pub use negativity::{
    classify_nonnegative, eta, raw_negativity, sign_filter, sign_filter_with, Classification,
    NegativityReport, SIGN_EPS_REL,
};
pub use oracles::{
    oracle_delta, oracle_eta_two_delta, oracle_gaussian, oracle_two_delta, oracle_two_gaussian,
    oracle_two_gaussian_cross, oracle_two_gaussian_symmetric, TwoGaussianParams,
};
pub use state::{
    gaussian_norm_sq, make_delta, make_gaussian, momentum_amplitude, superpose, to_density,
    DensityOperator, GaussianParams, PureState, DEFAULT_SPACING, DEFAULT_TAIL_EPS,
};
pub use theta::{theta3, theta3_log_nome, theta3_scaled, ScaledTheta, ThetaResult};
pub use wigner::{
    aliased_marginal_fit, apply_phase_point, canonical_k, continuum_gaussian_reference, k_node,
    momentum_density, momentum_marginal, nyquist_bound, overlap, position_marginal,
    reconstruct_density, reconstruct_matrix, regular_image_deviation, wigner_direct,
    wigner_grid, wigner_grid_direct, wigner_of_product, wigner_point, wigner_transform, AliasFit,
    ComplexGrid, LatticeVector, PhasePoint, WignerGrid, DEFAULT_NK,
};

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;
