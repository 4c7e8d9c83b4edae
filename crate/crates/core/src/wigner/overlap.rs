use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_grid_size, WignerGrid};
use crate::error::Result;
use crate::reduce::pairwise_sum;
use crate::state::DensityOperator;

/// `2π Σ_m ∫dk W₁ W₂ = tr(ρ₁ρ₂)`, with the `k` integral on the shared grid.
///
/// Grids may cover different rows; missing rows are zero.
pub fn overlap(g1: &WignerGrid, g2: &WignerGrid) -> Result<f64> {
    g1.same_axes(g2)?;
    let lo = g1.m_min().max(g2.m_min());
    let hi = g1.m_max().min(g2.m_max());
    let row_sums: Vec<f64> = (lo..=hi)
        .map(|m| match (g1.row(m), g2.row(m)) {
            (Some(a), Some(b)) => {
                let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
                pairwise_sum(&prod)
            }
            _ => 0.0,
        })
        .collect();
    Ok(pairwise_sum(&row_sums) * 4.0 * PI * PI / g1.n_k() as f64)
}

/// Unvalidated reconstruction `ρ(n₁,n₂) = ∫dk W(n₁+n₂, k) e^{i(n₁-n₂)k}`.
///
/// Returns the first site of the window and the matrix.
pub fn reconstruct_matrix(grid: &WignerGrid) -> Result<(i64, DMatrix<Complex64>)> {
    check_grid_size(grid.n_k(), grid.sites())?;
    let n_min = grid.n_min();
    let d = grid.sites();
    let n_k = grid.n_k();
    let weight = 2.0 * PI / n_k as f64;
    let matrix = DMatrix::from_fn(d, d, |i, j| {
        let (n1, n2) = (n_min + i as i64, n_min + j as i64);
        let Some(row) = grid.row(n1 + n2) else {
            return Complex64::new(0.0, 0.0);
        };
        let shift = (n1 - n2) as f64;
        let terms: Vec<Complex64> = row
            .iter()
            .enumerate()
            .map(|(jk, &w)| Complex64::from_polar(w, shift * grid.k_value(jk)))
            .collect();
        pairwise_sum(&terms) * weight
    });
    Ok((n_min, matrix))
}

/// Density operator recovered from its sampled Wigner function.
pub fn reconstruct_density(grid: &WignerGrid) -> Result<DensityOperator> {
    let (n_min, matrix) = reconstruct_matrix(grid)?;
    DensityOperator::new(n_min, matrix, grid.spacing())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::state::{make_delta, superpose, to_density, PureState};
    use crate::wigner::wigner_grid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid(s: &PureState, n_k: usize) -> WignerGrid {
        wigner_grid(&to_density(s), n_k).unwrap()
    }

    #[test]
    fn overlaps_of_simple_states() {
        let d0 = make_delta(0, 1.0).unwrap();
        let d5 = make_delta(5, 1.0).unwrap();
        let s = superpose(&[d0.clone(), make_delta(1, 1.0).unwrap()], &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let (g0, g5, gs) = (grid(&d0, 32), grid(&d5, 32), grid(&s, 32));
        assert!((overlap(&g0, &g0).unwrap() - 1.0).abs() < 1e-10);
        assert!((overlap(&gs, &gs).unwrap() - 1.0).abs() < 1e-10);
        assert!(overlap(&g0, &g5).unwrap().abs() < 1e-15);
        assert!((overlap(&g0, &gs).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn overlap_axis_mismatch() {
        let d0 = make_delta(0, 1.0).unwrap();
        assert!(matches!(overlap(&grid(&d0, 32), &grid(&d0, 16)), Err(Error::AxisMismatch(_))));
        let half = make_delta(0, 0.5).unwrap();
        assert!(matches!(overlap(&grid(&d0, 32), &grid(&half, 32)), Err(Error::AxisMismatch(_))));
    }

    #[test]
    fn reconstruction_of_simple_states() {
        let rho = reconstruct_density(&grid(&make_delta(0, 1.0).unwrap(), 8)).unwrap();
        assert_eq!(rho.dim(), 1);
        assert!((rho.element(0, 0) - c(1.0, 0.0)).norm() < 1e-15);

        let s = superpose(&[make_delta(0, 1.0).unwrap(), make_delta(1, 1.0).unwrap()], &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let rho = reconstruct_density(&grid(&s, 8)).unwrap();
        for z in rho.matrix().iter() {
            assert!((z - c(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn reconstruction_refuses_undersampled_grid() {
        let s = PureState::normalized(0, vec![c(1.0, 0.0); 4], 1.0).unwrap();
        let g = grid(&s, 16);
        let coarse: Vec<f64> = g.values().iter().step_by(4).copied().collect();
        let coarse = WignerGrid::from_values(g.m_min(), 4, 1.0, coarse).unwrap();
        assert_eq!(reconstruct_density(&coarse).unwrap_err(), Error::Nyquist { n_k: 4, required: 10 });
    }
}
