//! Non-classicality of lattice states.
//!
//! The Wigner function carries a second "ghost" copy of its pattern shifted
//! by π in `k`, whose odd rows have flipped signs. Those negative values come
//! from the phase-space construction, not from the state. The sign filter
//! replaces each odd-row sign with a majority vote over the two adjacent
//! even rows:
//!
//! ```text
//! W⁽ˢ⁾(m, k) = W(m, k)                  m even
//!            = χ(m, k) |W(m, k)|        m odd
//! χ = sign[2 sign W(m-1,k) + sign W(m,k) + 2 sign W(m+1,k)]
//! ```
//!
//! and `η = Σ_m ∫dk (|W⁽ˢ⁾| − W⁽ˢ⁾)` is the negative volume that survives it.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::reduce::pairwise_sum;
use crate::state::{to_density, PureState};
use crate::wigner::{nyquist_bound, wigner_grid, PhasePoint, WignerGrid};

/// Values with `|W| <= SIGN_EPS_REL * max|row|` count as zero in the vote.
pub const SIGN_EPS_REL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativityReport {
    pub eta: f64,
    pub raw_negativity: f64,
    /// `|η(N) − η(N/2)|`, using every other node as the coarse grid.
    pub quad_error_estimate: f64,
    /// Minimum of the unfiltered grid.
    pub min_value: f64,
    pub min_point: PhasePoint,
}

fn row_threshold(row: &[f64], eps_rel: f64) -> f64 {
    eps_rel * row.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

fn sign_with(x: f64, eps: f64) -> i32 {
    if x.abs() <= eps {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

/// Majority sign filter with the default zero threshold.
pub fn sign_filter(grid: &WignerGrid) -> WignerGrid {
    sign_filter_with(grid, SIGN_EPS_REL)
}

/// Majority sign filter; `eps_rel` scales the per-row zero threshold.
pub fn sign_filter_with(grid: &WignerGrid, eps_rel: f64) -> WignerGrid {
    let n_k = grid.n_k();
    let empty: Vec<f64> = vec![0.0; n_k];
    let fetch = |m: i64| grid.row(m).unwrap_or(&empty);
    let rows: Vec<Vec<f64>> = (grid.m_min()..=grid.m_max())
        .into_par_iter()
        .map(|m| {
            let row = fetch(m);
            if m.rem_euclid(2) == 0 {
                return row.to_vec();
            }
            let (below, above) = (fetch(m - 1), fetch(m + 1));
            let (eb, e, ea) = (
                row_threshold(below, eps_rel),
                row_threshold(row, eps_rel),
                row_threshold(above, eps_rel),
            );
            row.iter()
                .enumerate()
                .map(|(j, &w)| {
                    let vote = 2 * sign_with(below[j], eb) + sign_with(w, e) + 2 * sign_with(above[j], ea);
                    match vote.signum() {
                        0 => w,
                        s => f64::from(s) * w.abs(),
                    }
                })
                .collect()
        })
        .collect();
    grid.with_values(rows.concat())
}

/// `Σ_m (2π/N') Σ_j (|W| − W)` over every `stride`-th node.
fn negative_volume(grid: &WignerGrid, stride: usize) -> f64 {
    let n_k = grid.n_k();
    let weight = 2.0 * PI * stride as f64 / n_k as f64;
    let row_sums: Vec<f64> = grid
        .values()
        .chunks(n_k)
        .map(|row| {
            let t: Vec<f64> = row.iter().step_by(stride).map(|w| w.abs() - w).collect();
            pairwise_sum(&t)
        })
        .collect();
    pairwise_sum(&row_sums) * weight
}

/// Negative volume of the unfiltered grid, ghost image included.
pub fn raw_negativity(grid: &WignerGrid) -> f64 {
    negative_volume(grid, 1)
}

fn minimum(grid: &WignerGrid) -> (f64, PhasePoint) {
    let n_k = grid.n_k();
    let mut best = (f64::INFINITY, PhasePoint { m: grid.m_min(), k: grid.k_value(0) });
    for (i, &w) in grid.values().iter().enumerate() {
        if w < best.0 {
            best = (w, PhasePoint { m: grid.m_min() + (i / n_k) as i64, k: grid.k_value(i % n_k) });
        }
    }
    best
}

/// η with its quadrature error estimate and the unfiltered minimum.
pub fn eta(grid: &WignerGrid) -> Result<NegativityReport> {
    let required = nyquist_bound(grid.sites());
    if grid.n_k() < required {
        return Err(Error::Nyquist { n_k: grid.n_k(), required });
    }
    let filtered = sign_filter(grid);
    let fine = negative_volume(&filtered, 1);
    let coarse = negative_volume(&filtered, 2);
    let (min_value, min_point) = minimum(grid);
    Ok(NegativityReport {
        eta: fine,
        raw_negativity: raw_negativity(grid),
        quad_error_estimate: (fine - coarse).abs(),
        min_value,
        min_point,
    })
}

/// Outcome of the non-negativity test for a pure state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub nonnegative: bool,
    pub min_value: f64,
    /// Most negative grid point.
    pub witness: PhasePoint,
}

/// Whether `W >= -tol` on every grid node. Only position eigenstates pass.
pub fn classify_nonnegative(state: &PureState, n_k: usize, tol: f64) -> Result<Classification> {
    let grid = wigner_grid(&to_density(state), n_k)?;
    let (min_value, witness) = minimum(&grid);
    Ok(Classification { nonnegative: min_value >= -tol, min_value, witness })
}
