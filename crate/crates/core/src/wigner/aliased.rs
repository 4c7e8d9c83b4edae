//! The naive discretization of the continuous phase-point operators,
//! `A_direct(m, k) = (1/2π) U^{2m} Π V(-2k/a) e^{2ikm}`, which in the position
//! basis reads `(1/2π) Σₙ |2m-n⟩⟨n| e^{-2i(n-m)k}`. It has period π in `k`
//! and its position-summed marginal mixes the momenta `k/a` and `(k+π)/a`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::PhasePoint;
use crate::error::{Error, Result};
use crate::reduce::pairwise_sum;
use crate::state::DensityOperator;

/// `W_direct(m, k) = (1/2π) Σₙ ⟨n|ρ|2m-n⟩ e^{-2i(n-m)k}`.
pub fn wigner_direct(rho: &DensityOperator, p: PhasePoint) -> Result<f64> {
    let (n_min, n_max) = (rho.n_min(), rho.n_max());
    let m = p.m;
    let lo = n_min.max(2 * m - n_max);
    let hi = n_max.min(2 * m - n_min);
    if lo > hi {
        return Ok(0.0);
    }
    let terms: Vec<Complex64> = (lo..=hi)
        .map(|n| rho.element(n, 2 * m - n) * Complex64::from_polar(1.0, -2.0 * (n - m) as f64 * p.k))
        .collect();
    let w = pairwise_sum(&terms) / (2.0 * PI);
    if !super::imag_ok(w.re, w.im) {
        return Err(Error::ImaginaryResidue { residue: w.im.abs() });
    }
    Ok(w.re)
}

/// Least-squares fit of `Σ_m W_direct(m, k) = c · [⟨k/a|ρ|k/a⟩ + ⟨(k+π)/a|ρ|(k+π)/a⟩]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliasFit {
    pub constant: f64,
    pub max_residual: f64,
}

fn momentum_expectation(rho: &DensityOperator, kappa: f64) -> f64 {
    // ⟨q|ρ|q⟩ = (a/2π) Σ ρ(n₁,n₂) e^{-iqa(n₁-n₂)} with qa = κ
    rho.spacing() * super::momentum_density(rho, kappa)
}

pub fn aliased_marginal_fit(rho: &DensityOperator, ks: &[f64]) -> Result<AliasFit> {
    if ks.is_empty() {
        return Err(Error::InvalidParameter("no sample points for the alias fit".into()));
    }
    let mut xs = Vec::with_capacity(ks.len());
    let mut ys = Vec::with_capacity(ks.len());
    for &k in ks {
        let column = (rho.n_min()..=rho.n_max())
            .map(|m| wigner_direct(rho, PhasePoint::new(m, k)))
            .collect::<Result<Vec<f64>>>()?;
        ys.push(pairwise_sum(&column));
        xs.push(momentum_expectation(rho, k) + momentum_expectation(rho, k + PI));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("alias fit has a vanishing regressor".into()));
    }
    let constant = sxy / sxx;
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - constant * x).abs())
        .fold(0.0, f64::max);
    Ok(AliasFit { constant, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{make_delta, to_density};
    use crate::wigner::wigner_point;

    #[test]
    fn delta_coincides_with_lattice_wigner_on_even_rows() {
        let rho = to_density(&make_delta(0, 1.0).unwrap());
        for k in [-3.0, -0.5, 0.0, 1.2] {
            let a = wigner_direct(&rho, PhasePoint::new(0, k)).unwrap();
            let b = wigner_point(&rho, PhasePoint::new(0, k)).unwrap();
            assert_eq!(a, b);
            assert_eq!(wigner_direct(&rho, PhasePoint::new(1, k)).unwrap(), 0.0);
        }
    }

    fn sample_state(spacing: f64) -> DensityOperator {
        let amps = [(0.4, 0.1), (-0.3, 0.6), (0.2, -0.2), (0.5, 0.0)];
        let s = crate::state::PureState::normalized(
            -1,
            amps.iter().map(|&(r, i)| Complex64::new(r, i)).collect(),
            spacing,
        )
        .unwrap();
        to_density(&s)
    }

    #[test]
    fn period_is_pi() {
        let rho = sample_state(1.0);
        for m in -2..=3 {
            for k in [-2.9, -1.0, 0.3, 1.7] {
                let a = wigner_direct(&rho, PhasePoint::new(m, k)).unwrap();
                let b = wigner_direct(&rho, PhasePoint::new(m, k + PI)).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn even_rows_of_the_lattice_function() {
        let rho = sample_state(1.0);
        for m in -2..=3 {
            for k in [-2.9, 0.3, 1.7] {
                let a = wigner_direct(&rho, PhasePoint::new(m, k)).unwrap();
                let b = wigner_point(&rho, PhasePoint::new(2 * m, k)).unwrap();
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn marginal_mixes_two_momenta_with_constant_one_over_two_a() {
        for a in [1.0, 0.5, 2.0] {
            let rho = sample_state(a);
            let ks: Vec<f64> = (0..64).map(|j| -PI + 2.0 * PI * j as f64 / 64.0).collect();
            let fit = aliased_marginal_fit(&rho, &ks).unwrap();
            assert!((fit.constant - 1.0 / (2.0 * a)).abs() < 1e-12, "{a}: {}", fit.constant);
            assert!(fit.max_residual < 1e-12);
        }
    }

    #[test]
    fn empty_fit_is_rejected() {
        let rho = to_density(&make_delta(0, 1.0).unwrap());
        assert!(aliased_marginal_fit(&rho, &[]).is_err());
    }
}
