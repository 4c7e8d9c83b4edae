//! Wigner function on the hybrid lattice phase space.
//!
//! Phase-space points carry an integer label `m` and a periodic label
//! `k ∈ [-π, π)`. For a density operator on the window `[n_min, n_max]`,
//!
//! ```text
//! W(m, k) = (1/2π) Σₙ ⟨n|ρ|m-n⟩ e^{-i(2n-m)k}
//! ```
//!
//! vanishes outside `m ∈ [2 n_min, 2 n_max]`, and for every `m` it is a
//! trigonometric polynomial in `k` of degree below the window length. A
//! uniform `k` grid with enough nodes therefore makes every quadrature in
//! this crate exact up to roundoff.

mod aliased;
mod continuum;
mod marginals;
mod overlap;
mod product;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::reduce::pairwise_sum;
use crate::state::{DensityOperator, PureState};

pub use aliased::{aliased_marginal_fit, wigner_direct, AliasFit};
pub use continuum::{continuum_gaussian_reference, regular_image_deviation};
pub use marginals::{momentum_density, momentum_marginal, position_marginal};
pub use overlap::{overlap, reconstruct_density, reconstruct_matrix};
pub use product::{wigner_of_product, PRODUCT_MAX_SITES, PRODUCT_MAX_WORK};

/// Relative bound on discarded imaginary parts.
pub const IMAG_TOL: f64 = 1e-10;
/// Default number of `k` samples.
pub const DEFAULT_NK: usize = 4096;

/// Map `k` into `[-π, π)`.
pub fn canonical_k(k: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = k - two_pi * ((k + PI) / two_pi).floor();
    if r >= PI {
        r -= two_pi;
    }
    if r < -PI {
        r = -PI;
    }
    r
}

/// Smallest admissible `k`-grid size for a window of `sites` sites.
pub fn nyquist_bound(sites: usize) -> usize {
    2 * sites + 2
}

/// `k_j = -π + 2πj/N`.
pub fn k_node(j: usize, n_k: usize) -> f64 {
    -PI + 2.0 * PI * j as f64 / n_k as f64
}

fn check_grid_size(n_k: usize, sites: usize) -> Result<()> {
    if n_k < 4 || !n_k.is_multiple_of(2) {
        return Err(Error::BadGridSize(n_k));
    }
    let required = nyquist_bound(sites);
    if n_k < required {
        return Err(Error::Nyquist { n_k, required });
    }
    Ok(())
}

/// Point of the hybrid phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub m: i64,
    pub k: f64,
}

impl PhasePoint {
    pub fn new(m: i64, k: f64) -> Self {
        Self { m, k: canonical_k(k) }
    }
}

fn imag_ok(re: f64, im: f64) -> bool {
    im.abs() < IMAG_TOL * (1.0 + re.abs())
}

/// Sampled Wigner function: rows `m ∈ [m_min, m_max]`, columns `k_j`.
///
/// Rows outside the stored range are implicit zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    m_min: i64,
    rows: usize,
    n_k: usize,
    spacing: f64,
    values: Vec<f64>,
    max_imag_residue: f64,
}

impl WignerGrid {
    /// Assemble a grid from raw row-major values, e.g. read back from disk.
    ///
    /// The row range must be that of a site window: even `m_min`, odd row
    /// count.
    pub fn from_values(m_min: i64, n_k: usize, spacing: f64, values: Vec<f64>) -> Result<Self> {
        if n_k < 4 || !n_k.is_multiple_of(2) {
            return Err(Error::BadGridSize(n_k));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidSpacing(spacing));
        }
        if values.is_empty() || !values.len().is_multiple_of(n_k) {
            return Err(Error::InvalidGrid(format!(
                "{} values do not fill rows of {n_k}",
                values.len()
            )));
        }
        let rows = values.len() / n_k;
        if m_min.rem_euclid(2) != 0 || rows % 2 != 1 {
            return Err(Error::InvalidGrid(format!(
                "row range starting at m = {m_min} with {rows} rows is not a site window"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { m_min, rows, n_k, spacing, values, max_imag_residue: 0.0 })
    }

    pub fn m_min(&self) -> i64 {
        self.m_min
    }

    pub fn m_max(&self) -> i64 {
        self.m_min + self.rows as i64 - 1
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn n_k(&self) -> usize {
        self.n_k
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// First site of the underlying window.
    pub fn n_min(&self) -> i64 {
        self.m_min.div_euclid(2)
    }

    /// Number of sites in the underlying window.
    pub fn sites(&self) -> usize {
        self.rows.div_ceil(2)
    }

    pub fn max_imag_residue(&self) -> f64 {
        self.max_imag_residue
    }

    pub fn k_value(&self, j: usize) -> f64 {
        k_node(j, self.n_k)
    }

    pub fn k_values(&self) -> Vec<f64> {
        (0..self.n_k).map(|j| self.k_value(j)).collect()
    }

    pub fn m_values(&self) -> Vec<i64> {
        (self.m_min..=self.m_max()).collect()
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, m: i64) -> Option<&[f64]> {
        let i = m - self.m_min;
        if i < 0 || i as usize >= self.rows {
            return None;
        }
        let i = i as usize;
        Some(&self.values[i * self.n_k..(i + 1) * self.n_k])
    }

    /// `W(m, k_j)`; zero for rows outside the stored range.
    pub fn value(&self, m: i64, j: usize) -> f64 {
        self.row(m).map_or(0.0, |r| r[j])
    }

    /// `(2π/N) Σ_{m,j} W(m, k_j)`, which equals `tr ρ`.
    pub fn total(&self) -> f64 {
        let row_sums: Vec<f64> = self.values.chunks(self.n_k).map(pairwise_sum).collect();
        pairwise_sum(&row_sums) * 2.0 * PI / self.n_k as f64
    }

    /// Largest violation of `W(m, k + π) = (-1)^m W(m, k)` on the grid.
    pub fn phase_relation_error(&self) -> f64 {
        let half = self.n_k / 2;
        let mut worst = 0.0f64;
        for (i, row) in self.values.chunks(self.n_k).enumerate() {
            let sign = if (self.m_min + i as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            for j in 0..half {
                worst = worst.max((row[j + half] - sign * row[j]).abs());
            }
        }
        worst
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        Self { values, ..self.clone() }
    }

    pub(crate) fn same_axes(&self, other: &Self) -> Result<()> {
        if self.n_k != other.n_k {
            return Err(Error::AxisMismatch(format!("N_k {} vs {}", self.n_k, other.n_k)));
        }
        if (self.spacing - other.spacing).abs() > 1e-12 * self.spacing {
            return Err(Error::AxisMismatch(format!(
                "spacing {} vs {}",
                self.spacing, other.spacing
            )));
        }
        Ok(())
    }
}

/// Complex-valued samples on the same axes as a [`WignerGrid`]; holds the
/// Wigner transform of non-Hermitian operators such as products.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    pub m_min: i64,
    pub rows: usize,
    pub n_k: usize,
    pub spacing: f64,
    pub values: Vec<Complex64>,
}

impl ComplexGrid {
    pub fn value(&self, m: i64, j: usize) -> Complex64 {
        let i = m - self.m_min;
        if i < 0 || i as usize >= self.rows {
            return Complex64::new(0.0, 0.0);
        }
        self.values[i as usize * self.n_k + j]
    }

    pub fn m_max(&self) -> i64 {
        self.m_min + self.rows as i64 - 1
    }
}

/// Complex sum `(1/2π) Σₙ ⟨n|X|m-n⟩ e^{-i(2n-m)k}` for any operator `X`
/// given by its matrix elements on the window `[n_min, n_max]`.
pub fn wigner_transform<F>(n_min: i64, n_max: i64, element: F, p: PhasePoint) -> Complex64
where
    F: Fn(i64, i64) -> Complex64,
{
    let m = p.m;
    let lo = n_min.max(m - n_max);
    let hi = n_max.min(m - n_min);
    if lo > hi {
        return Complex64::new(0.0, 0.0);
    }
    let terms: Vec<Complex64> = (lo..=hi)
        .map(|n| element(n, m - n) * Complex64::from_polar(1.0, -((2 * n - m) as f64) * p.k))
        .collect();
    pairwise_sum(&terms) / (2.0 * PI)
}

/// `W(m, k)` by direct summation.
pub fn wigner_point(rho: &DensityOperator, p: PhasePoint) -> Result<f64> {
    let w = wigner_transform(rho.n_min(), rho.n_max(), |a, b| rho.element(a, b), p);
    if !imag_ok(w.re, w.im) {
        return Err(Error::ImaginaryResidue { residue: w.im.abs() });
    }
    Ok(w.re)
}

fn finish_grid(
    rho: &DensityOperator,
    n_k: usize,
    rows: Vec<(Vec<f64>, f64)>,
) -> Result<WignerGrid> {
    let mut values = Vec::with_capacity(rows.len() * n_k);
    let mut max_imag_residue = 0.0f64;
    for (row, residue) in rows {
        values.extend_from_slice(&row);
        max_imag_residue = max_imag_residue.max(residue);
    }
    if max_imag_residue >= IMAG_TOL {
        return Err(Error::ImaginaryResidue { residue: max_imag_residue });
    }
    Ok(WignerGrid {
        m_min: 2 * rho.n_min(),
        rows: 2 * rho.dim() - 1,
        n_k,
        spacing: rho.spacing(),
        values,
        max_imag_residue,
    })
}

/// Sample `W` on the uniform `k` grid using one FFT per row.
///
/// The coefficient of `e^{-idk}` in row `m` is `⟨n|ρ|m-n⟩` with `d = 2n - m`;
/// since `|d| < N/2` above the Nyquist bound, placing `(-1)^d` times that
/// coefficient at index `d mod N` and taking a forward DFT yields the row
/// at the nodes `k_j = -π + 2πj/N`.
pub fn wigner_grid(rho: &DensityOperator, n_k: usize) -> Result<WignerGrid> {
    check_grid_size(n_k, rho.dim())?;
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(n_k);
    let (n_min, n_max) = (rho.n_min(), rho.n_max());
    let scale = 1.0 / (2.0 * PI);
    let rows: Vec<(Vec<f64>, f64)> = (2 * n_min..=2 * n_max)
        .into_par_iter()
        .map(|m| {
            let mut buf = vec![Complex64::new(0.0, 0.0); n_k];
            for n in n_min.max(m - n_max)..=n_max.min(m - n_min) {
                let d = 2 * n - m;
                let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                buf[d.rem_euclid(n_k as i64) as usize] += rho.element(n, m - n) * sign;
            }
            fft.process(&mut buf);
            let mut residue = 0.0f64;
            let row = buf
                .iter()
                .map(|z| {
                    let w = z * scale;
                    residue = residue.max(w.im.abs() / (1.0 + w.re.abs()));
                    w.re
                })
                .collect();
            (row, residue)
        })
        .collect();
    finish_grid(rho, n_k, rows)
}

/// Same grid as [`wigner_grid`], by direct summation at every node.
pub fn wigner_grid_direct(rho: &DensityOperator, n_k: usize) -> Result<WignerGrid> {
    check_grid_size(n_k, rho.dim())?;
    let (n_min, n_max) = (rho.n_min(), rho.n_max());
    let rows: Vec<(Vec<f64>, f64)> = (2 * n_min..=2 * n_max)
        .into_par_iter()
        .map(|m| {
            let mut residue = 0.0f64;
            let row = (0..n_k)
                .map(|j| {
                    let p = PhasePoint { m, k: k_node(j, n_k) };
                    let w = wigner_transform(n_min, n_max, |a, b| rho.element(a, b), p);
                    residue = residue.max(w.im.abs() / (1.0 + w.re.abs()));
                    w.re
                })
                .collect();
            (row, residue)
        })
        .collect();
    finish_grid(rho, n_k, rows)
}

/// Amplitudes on a contiguous window that need not be normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector {
    pub n_min: i64,
    pub values: Vec<Complex64>,
}

impl LatticeVector {
    pub fn get(&self, n: i64) -> Complex64 {
        let i = n - self.n_min;
        if i < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.values.get(i as usize).copied().unwrap_or_default()
    }

    /// `⟨φ|v⟩`.
    pub fn inner_from(&self, phi: &PureState) -> Complex64 {
        let terms: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| phi.amplitude(self.n_min + i as i64).conj() * v)
            .collect();
        pairwise_sum(&terms)
    }
}

/// `A(m, k)|ψ⟩` with `(Aψ)(n') = (1/2π) e^{-i(m-2n')k} ψ(m-n')`, supported on
/// the reflected window `[m - n_max, m - n_min]`.
pub fn apply_phase_point(psi: &PureState, p: PhasePoint) -> LatticeVector {
    let n_min = p.m - psi.n_max();
    let values = (n_min..=p.m - psi.n_min())
        .map(|np| {
            Complex64::from_polar(1.0 / (2.0 * PI), -((p.m - 2 * np) as f64) * p.k)
                * psi.amplitude(p.m - np)
        })
        .collect();
    LatticeVector { n_min, values }
}
