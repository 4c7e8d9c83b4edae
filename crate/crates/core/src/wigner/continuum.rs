use std::f64::consts::PI;

use super::WignerGrid;
use crate::error::{Error, Result};

/// Continuous-space Wigner function of `Ψ(x) ∝ e^{-(x-x₀)²/2σ²} e^{iq₀x}`:
/// `(1/π) e^{-(x-x₀)²/σ²} e^{-σ²(p-q₀)²}`.
pub fn continuum_gaussian_reference(x: f64, p: f64, x0: f64, sigma: f64, q0: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidWidth(sigma));
    }
    let dx = (x - x0) / sigma;
    let dp = sigma * (p - q0);
    Ok((-dx * dx - dp * dp).exp() / PI)
}

/// `max |2W(m, k) − W_c(ma/2, k/a)|` over the grid nodes with `|k − q₀a| ≤ π/2`,
/// the half of the Brillouin zone holding the regular image.
pub fn regular_image_deviation(grid: &WignerGrid, x0: f64, sigma: f64, q0: f64) -> Result<f64> {
    let a = grid.spacing();
    let mut worst = 0.0f64;
    for m in grid.m_min()..=grid.m_max() {
        for j in 0..grid.n_k() {
            let k = grid.k_value(j);
            if super::canonical_k(k - q0 * a).abs() > PI / 2.0 {
                continue;
            }
            let wc = continuum_gaussian_reference(m as f64 * a / 2.0, k / a, x0, sigma, q0)?;
            worst = worst.max((2.0 * grid.value(m, j) - wc).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trapezoid quadrature of (1/π)∫dy Ψ(x+y)Ψ*(x-y) e^{-2ipy}; spectrally
    /// accurate for Gaussian integrands on a wide interval.
    fn defining_integral(x: f64, p: f64, x0: f64, sigma: f64, q0: f64) -> f64 {
        let psi = |t: f64| -> (f64, f64) {
            let amp = (-(t - x0).powi(2) / (2.0 * sigma * sigma)).exp() / (sigma * PI.sqrt()).sqrt();
            (amp * (q0 * t).cos(), amp * (q0 * t).sin())
        };
        let h = 1e-3;
        let mut acc = 0.0;
        let half = 20.0 * sigma;
        let steps = (2.0 * half / h) as i64;
        for i in 0..=steps {
            let y = -half + i as f64 * h;
            let (ar, ai) = psi(x + y);
            let (br, bi) = psi(x - y);
            // (a)(b*) e^{-2ipy}, real part
            let (pr, pi) = (ar * br + ai * bi, ai * br - ar * bi);
            let (cr, ci) = ((2.0 * p * y).cos(), -(2.0 * p * y).sin());
            acc += pr * cr - pi * ci;
        }
        acc * h / PI
    }

    #[test]
    fn peak_value() {
        let v = continuum_gaussian_reference(0.0, 0.0, 0.0, 1.0, 0.0).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-16);
        let v = continuum_gaussian_reference(1.5, -0.4, 1.5, 0.3, -0.4).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-16);
        assert!(continuum_gaussian_reference(0.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn closed_form_matches_defining_integral() {
        for &(x, p, x0, sigma, q0) in &[
            (0.0, 0.0, 0.0, 1.0, 0.0),
            (0.3, -0.7, 0.1, 1.3, 0.4),
            (-1.0, 2.0, 0.5, 0.7, 1.5),
        ] {
            let closed = continuum_gaussian_reference(x, p, x0, sigma, q0).unwrap();
            let numeric = defining_integral(x, p, x0, sigma, q0);
            assert!((closed - numeric).abs() < 1e-12, "{closed} vs {numeric}");
        }
    }
}
