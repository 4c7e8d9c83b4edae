//! Wigner function of an operator product from the Wigner functions of
//! the factors:
//!
//! ```text
//! W_{ρ₂ρ₁}(m,k) = (1/2π) Σ_{m₁,m₂} ∫dk₁ ∫dk₂ W₁(m+m₁, k+k₁) W₂(m+m₂, k+k₂) e^{i(m₂k₁ − m₁k₂)}
//! ```
//!
//! Both integrals use the grid nodes. Shifted arguments `k + k₁` are folded
//! back into the stored lower half of the grid with `W(m, k+π) = (-1)^m W(m, k)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{ComplexGrid, WignerGrid};
use crate::error::{Error, Result};
use crate::reduce::pairwise_sum;

/// Largest window (in sites) accepted by [`wigner_of_product`].
pub const PRODUCT_MAX_SITES: usize = 16;
/// Budget of multiply-adds accepted by [`wigner_of_product`].
pub const PRODUCT_MAX_WORK: f64 = 4e8;

/// `W(m, k_i)` for an unreduced node index `i >= 0`.
fn folded(grid: &WignerGrid, row: &[f64], m: i64, i: usize) -> f64 {
    let half = grid.n_k() / 2;
    let turns = i / half;
    let v = row[i % half];
    if turns % 2 == 1 && m.rem_euclid(2) == 1 {
        -v
    } else {
        v
    }
}

pub fn wigner_of_product(g1: &WignerGrid, g2: &WignerGrid) -> Result<ComplexGrid> {
    g1.same_axes(g2)?;
    let m_min = g1.m_min().min(g2.m_min());
    let m_max = g1.m_max().max(g2.m_max());
    let rows = (m_max - m_min + 1) as usize;
    let sites = rows.div_ceil(2);
    if sites > PRODUCT_MAX_SITES {
        return Err(Error::WindowTooLarge { sites, max: PRODUCT_MAX_SITES });
    }
    let n_k = g1.n_k();
    // integrands carry frequencies up to 3(L-1) in each k variable
    let required = (3 * sites).next_multiple_of(2).max(4);
    if n_k < required {
        return Err(Error::Nyquist { n_k, required });
    }
    let work = 2.0 * (rows as f64).powi(3) * (n_k as f64).powi(2);
    if work > PRODUCT_MAX_WORK {
        return Err(Error::TooCostly { work, max: PRODUCT_MAX_WORK });
    }

    let span = rows as i64 - 1;
    let k: Vec<f64> = (0..n_k).map(|j| g1.k_value(j)).collect();
    // phases[o + span][j] = e^{i o k_j}
    let phases: Vec<Vec<Complex64>> = (-span..=span)
        .map(|o| k.iter().map(|&kj| Complex64::from_polar(1.0, o as f64 * kj)).collect())
        .collect();
    let zero_row = vec![0.0; n_k];
    let row_of = |g: &'_ WignerGrid, m: i64| -> Vec<f64> { g.row(m).map_or(zero_row.clone(), <[f64]>::to_vec) };
    let rows1: Vec<Vec<f64>> = (m_min..=m_max).map(|m| row_of(g1, m)).collect();
    let rows2: Vec<Vec<f64>> = (m_min..=m_max).map(|m| row_of(g2, m)).collect();
    let half = n_k / 2;
    let scale = (2.0 * PI / n_k as f64).powi(2) / (2.0 * PI);

    let values: Vec<Vec<Complex64>> = (m_min..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut out = Vec::with_capacity(n_k);
            let mut shifted1 = vec![0.0; n_k];
            let mut shifted2 = vec![0.0; n_k];
            let mut a = vec![Complex64::new(0.0, 0.0); rows * rows];
            let mut b = vec![Complex64::new(0.0, 0.0); rows * rows];
            for j in 0..n_k {
                // row r1 feeds W₁ in A and W₂ in B; r2 indexes the conjugate offset
                for r1 in 0..rows {
                    let mr = m_min + r1 as i64;
                    for (j1, s) in shifted1.iter_mut().enumerate() {
                        *s = folded(g1, &rows1[r1], mr, j + j1 + half);
                    }
                    let g2row = &rows2[r1];
                    for (j2, s) in shifted2.iter_mut().enumerate() {
                        *s = folded(g2, g2row, mr, j + j2 + half);
                    }
                    for r2 in 0..rows {
                        let other = m_min + r2 as i64 - m;
                        // A(m₁, m₂) = Σ_{j₁} W₁(m+m₁, k+k₁) e^{i m₂ k₁}
                        let pa = &phases[(other + span) as usize];
                        let ta: Vec<Complex64> = shifted1.iter().zip(pa).map(|(w, p)| p * *w).collect();
                        a[r1 * rows + r2] = pairwise_sum(&ta);
                        // B(m₁, m₂) = Σ_{j₂} W₂(m+m₂, k+k₂) e^{-i m₁ k₂}, stored at [m₁][m₂]
                        let pb = &phases[(span - other) as usize];
                        let tb: Vec<Complex64> = shifted2.iter().zip(pb).map(|(w, p)| p * *w).collect();
                        b[r2 * rows + r1] = pairwise_sum(&tb);
                    }
                }
                let prods: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
                out.push(pairwise_sum(&prods) * scale);
            }
            out
        })
        .collect();

    Ok(ComplexGrid {
        m_min,
        rows,
        n_k,
        spacing: g1.spacing(),
        values: values.into_iter().flatten().collect(),
    })
}
