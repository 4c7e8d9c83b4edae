use std::f64::consts::PI;

use num_complex::Complex64;

use super::WignerGrid;
use crate::reduce::pairwise_sum;
use crate::state::DensityOperator;

/// `Σ_m W(m, k_j)`: the quasi-momentum density `(1/a)⟨k_j/a|ρ|k_j/a⟩`.
pub fn momentum_marginal(grid: &WignerGrid, j: usize) -> f64 {
    let column: Vec<f64> = (grid.m_min()..=grid.m_max()).map(|m| grid.value(m, j)).collect();
    pairwise_sum(&column)
}

/// `(2π/N) Σ_j W(m, k_j)`: the population `⟨n|ρ|n⟩` for `m = 2n`, zero for odd `m`.
pub fn position_marginal(grid: &WignerGrid, m: i64) -> f64 {
    grid.row(m).map_or(0.0, |row| pairwise_sum(row) * 2.0 * PI / grid.n_k() as f64)
}

/// `(1/a)⟨κ/a|ρ|κ/a⟩ = (1/2π) Σ_{n₁,n₂} ⟨n₁|ρ|n₂⟩ e^{-iκ(n₁-n₂)}`, evaluated
/// from the matrix directly.
pub fn momentum_density(rho: &DensityOperator, kappa: f64) -> f64 {
    let m = rho.matrix();
    let d = rho.dim();
    let mut terms = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            terms.push(m[(i, j)] * Complex64::from_polar(1.0, -kappa * (i as f64 - j as f64)));
        }
    }
    pairwise_sum(&terms).re / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{make_delta, make_gaussian, superpose, to_density, GaussianParams};
    use crate::wigner::wigner_grid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_marginals() {
        let g = wigner_grid(&to_density(&make_delta(0, 1.0).unwrap()), 16).unwrap();
        for j in 0..16 {
            assert!((momentum_marginal(&g, j) - 1.0 / (2.0 * PI)).abs() < 1e-16);
        }
        assert!((position_marginal(&g, 0) - 1.0).abs() < 1e-15);
        assert_eq!(position_marginal(&g, 1), 0.0);
    }

    #[test]
    fn two_site_marginals() {
        let s = superpose(
            &[make_delta(0, 1.0).unwrap(), make_delta(1, 1.0).unwrap()],
            &[c(1.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let g = wigner_grid(&to_density(&s), 16).unwrap();
        // k_0 = -π: destructive interference
        assert!(momentum_marginal(&g, 0).abs() < 1e-16);
        assert!((position_marginal(&g, 0) - 0.5).abs() < 1e-15);
        assert!((position_marginal(&g, 2) - 0.5).abs() < 1e-15);
        assert!(position_marginal(&g, 1).abs() < 1e-16);
    }

    #[test]
    fn gaussian_momentum_marginal_at_zero() {
        let p = GaussianParams::new(0, 2.0, 0.0).unwrap();
        let s = make_gaussian(&p, 1.0, 1e-16).unwrap();
        let g = wigner_grid(&to_density(&s), 128).unwrap();
        let j0 = 64; // k = 0
        assert_eq!(g.k_value(j0), 0.0);
        // (1/2π)|Σ e^{-n²/8}|² / N², with N² = θ₃(0, e^{-1/4})
        let direct: f64 = (-40i64..=40).map(|n| (-(n * n) as f64 / 8.0).exp()).sum();
        let n2 = 3.544_907_701_811_032;
        let expected = direct * direct / n2 / (2.0 * PI);
        assert!((momentum_marginal(&g, j0) - expected).abs() < 1e-13);
        assert!((momentum_density(&to_density(&s), 0.0) - expected).abs() < 1e-13);
    }
}
