//! Closed-form Wigner functions of localized states, discretized Gaussians
//! and their two-term superpositions, plus the closed-form η of two deltas.
//!
//! Gaussian forms are assembled in log space with [`theta3_scaled`] so that
//! narrow widths and far-off rows neither overflow nor underflow early.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{gaussian_norm_sq, make_gaussian, superpose, GaussianParams, PureState};
use crate::theta::{theta3_log_nome, theta3_scaled};
use crate::wigner::{PhasePoint, IMAG_TOL};

/// Tail tolerance for the theta series used by the oracles.
pub const ORACLE_THETA_TOL: f64 = 1e-17;

fn real_part(w: Complex64) -> Result<f64> {
    if w.im.abs() >= IMAG_TOL * (1.0 + w.re.abs()) {
        return Err(Error::ImaginaryResidue { residue: w.im.abs() });
    }
    Ok(w.re)
}

/// `exp(log_prefactor) · θ₃(z, e^{-c})`.
fn scaled_theta_times(log_prefactor: Complex64, z: Complex64, c: f64) -> Result<Complex64> {
    let t = theta3_scaled(z, c, ORACLE_THETA_TOL)?;
    Ok((log_prefactor + t.log_factor).exp() * t.reduced.value)
}

/// `(1/2π) δ_{m, 2n₀}`.
pub fn oracle_delta(n0: i64, pt: PhasePoint) -> f64 {
    if pt.m == 2 * n0 {
        1.0 / (2.0 * PI)
    } else {
        0.0
    }
}

/// Unnormalized single-Gaussian term: `Σₙ g(n) g*(m-n) e^{-i(2n-m)k}` for
/// `g(n) = e^{-(n-n₀)²/2σ̃²} e^{iq₀a n}`.
fn gaussian_kernel(p: &GaussianParams, pt: PhasePoint) -> Result<Complex64> {
    let c = 1.0 / (p.sigma_tilde * p.sigma_tilde);
    let m = pt.m as f64;
    let n0 = p.n0 as f64;
    let kk = pt.k - p.q0a;
    let log_pre = Complex64::new(-((m - n0).powi(2) + n0 * n0) * c / 2.0, kk * m);
    scaled_theta_times(log_pre, Complex64::new(kk, m * c / 2.0), c)
}

fn theta_at_zero(c: f64) -> Result<f64> {
    Ok(theta3_log_nome(Complex64::new(0.0, 0.0), c, ORACLE_THETA_TOL)?.value.re)
}

/// Wigner function of the normalized discretized Gaussian,
///
/// ```text
/// (1/2π) e^{i(k-q₀a)m} e^{-((m-n₀)²+n₀²)/2σ̃²} θ₃(k - q₀a + i m/2σ̃², e^{-1/σ̃²}) / θ₃(0, e^{-1/σ̃²})
/// ```
pub fn oracle_gaussian(p: &GaussianParams, pt: PhasePoint) -> Result<f64> {
    let c = 1.0 / (p.sigma_tilde * p.sigma_tilde);
    let w = gaussian_kernel(p, pt)? / (2.0 * PI * theta_at_zero(c)?);
    real_part(w)
}

/// Wigner function of `(|n₁⟩ + α|n₂⟩)/√(1+|α|²)`:
///
/// ```text
/// [δ_{m,2n₁} + |α|² δ_{m,2n₂} + 2|α| δ_{m,n₁+n₂} cos(Δn k − φ)] / (2π(1+|α|²))
/// ```
///
/// with `Δn = n₂ − n₁` and `φ = arg α`.
pub fn oracle_two_delta(n1: i64, n2: i64, alpha: Complex64, pt: PhasePoint) -> Result<f64> {
    if n1 == n2 {
        return Err(Error::InvalidParameter("two-delta oracle needs n1 != n2".into()));
    }
    let a2 = alpha.norm_sqr();
    let mut acc = 0.0;
    if pt.m == 2 * n1 {
        acc += 1.0;
    }
    if pt.m == 2 * n2 {
        acc += a2;
    }
    if pt.m == n1 + n2 {
        let dn = (n2 - n1) as f64;
        acc += 2.0 * alpha.norm() * (dn * pt.k - alpha.arg()).cos();
    }
    Ok(acc / (2.0 * PI * (1.0 + a2)))
}

/// `η = 4|α| / (π(1+|α|²))` for two localized states, for any separation.
pub fn oracle_eta_two_delta(alpha: Complex64) -> f64 {
    let a = alpha.norm();
    4.0 * a / (PI * (1.0 + a * a))
}

/// Symmetric superposition of Gaussians at `±n₀` with equal widths, zero
/// momenta and `α = 1`, from the row-parity closed forms
///
/// ```text
/// m = 2s:   θ₃(k) {e^{-n₀²/σ̃²} cosh(2sn₀/σ̃²) + cos 2kn₀} e^{-s²/σ̃²} / (π𝒩²)
/// m = 2s+1: e^{ik} e^{-(s+½)²/σ̃²} e^{-1/4σ̃²} θ₃(k + i/2σ̃²)
///           {e^{-n₀²/σ̃²} cosh((2s+1)n₀/σ̃²) + cos 2kn₀} / (π𝒩²)
/// ```
///
/// with `𝒩² = 2(1 + e^{-n₀²/σ̃²}) θ₃(0)`. The products of exponentials and
/// `cosh` are expanded into single Gaussians before exponentiation.
pub fn oracle_two_gaussian_symmetric(n0: i64, sigma_tilde: f64, pt: PhasePoint) -> Result<f64> {
    if !(sigma_tilde > 0.0 && sigma_tilde.is_finite()) {
        return Err(Error::InvalidWidth(sigma_tilde));
    }
    let c = 1.0 / (sigma_tilde * sigma_tilde);
    let n0 = n0 as f64;
    let k = pt.k;
    let norm_sq = 2.0 * (1.0 + (-n0 * n0 * c).exp()) * theta_at_zero(c)?;
    // x = m/2 is the centre between the two reflected sites
    let x = pt.m as f64 / 2.0;
    let bracket = 0.5 * ((-c * (x - n0).powi(2)).exp() + (-c * (x + n0).powi(2)).exp())
        + (-c * x * x).exp() * (2.0 * k * n0).cos();
    let w = if pt.m.rem_euclid(2) == 0 {
        scaled_theta_times(Complex64::new(0.0, 0.0), Complex64::new(k, 0.0), c)? * bracket
    } else {
        // e^{ik} e^{-c/4} θ₃(k + ic/2)
        scaled_theta_times(Complex64::new(-c / 4.0, k), Complex64::new(k, c / 2.0), c)? * bracket
    };
    real_part(w / (PI * norm_sq))
}

/// Superposition `(g₁ + α g₂)/𝒩` of two discretized Gaussians with
/// `g_i(n) = e^{-(n-n_i)²/2σ̃_i²} e^{i q_i a n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoGaussianParams {
    pub n1: i64,
    pub n2: i64,
    pub sigma1_tilde: f64,
    pub sigma2_tilde: f64,
    pub q1a: f64,
    pub q2a: f64,
    pub alpha: Complex64,
}

impl TwoGaussianParams {
    pub fn new(
        n1: i64,
        n2: i64,
        sigma1_tilde: f64,
        sigma2_tilde: f64,
        q1a: f64,
        q2a: f64,
        alpha: Complex64,
    ) -> Result<Self> {
        let g1 = GaussianParams::new(n1, sigma1_tilde, q1a)?;
        let g2 = GaussianParams::new(n2, sigma2_tilde, q2a)?;
        if !alpha.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            n1,
            n2,
            sigma1_tilde,
            sigma2_tilde,
            q1a: g1.q0a,
            q2a: g2.q0a,
            alpha,
        })
    }

    /// Gaussians at `+n₀` and `−n₀` with width `σ̃`, momenta `0` and `q₀a`, `α = 1`.
    pub fn symmetric_pair(n0: i64, sigma_tilde: f64, q0a: f64) -> Result<Self> {
        Self::new(n0, -n0, sigma_tilde, sigma_tilde, 0.0, q0a, Complex64::new(1.0, 0.0))
    }

    pub fn first(&self) -> GaussianParams {
        GaussianParams { n0: self.n1, sigma_tilde: self.sigma1_tilde, q0a: self.q1a }
    }

    pub fn second(&self) -> GaussianParams {
        GaussianParams { n0: self.n2, sigma_tilde: self.sigma2_tilde, q0a: self.q2a }
    }

    /// Normalized lattice state with the same coefficients as the closed form.
    pub fn state(&self, spacing: f64, tail_eps: f64) -> Result<PureState> {
        let (p1, p2) = (self.first(), self.second());
        let s1 = make_gaussian(&p1, spacing, tail_eps)?;
        let s2 = make_gaussian(&p2, spacing, tail_eps)?;
        // make_gaussian normalizes each term; undo that so α multiplies g₂
        let n1 = gaussian_norm_sq(&p1, tail_eps)?.sqrt();
        let n2 = gaussian_norm_sq(&p2, tail_eps)?.sqrt();
        superpose(&[s1, s2], &[Complex64::new(n1, 0.0), self.alpha * n2])
    }

    /// `𝒩² = Σₙ |g₁(n) + α g₂(n)|²` by direct summation.
    pub fn norm_sq(&self) -> f64 {
        let (p1, p2) = (self.first(), self.second());
        let reach = |p: &GaussianParams| p.half_width(1e-17) + 1;
        let lo = (p1.n0 - reach(&p1)).min(p2.n0 - reach(&p2));
        let hi = (p1.n0 + reach(&p1)).max(p2.n0 + reach(&p2));
        let g = |p: &GaussianParams, n: i64| {
            let d = (n - p.n0) as f64;
            Complex64::from_polar((-d * d / (2.0 * p.sigma_tilde * p.sigma_tilde)).exp(), p.q0a * n as f64)
        };
        let terms: Vec<f64> = (lo..=hi).map(|n| (g(&p1, n) + self.alpha * g(&p2, n)).norm_sqr()).collect();
        crate::reduce::pairwise_sum(&terms)
    }
}

/// Crossed term `W₁₂`:
///
/// ```text
/// (1/2π𝒩²) e^{i(k−q₂a)m} e^{−n₁²/2σ̃₁²} e^{−(m−n₂)²/2σ̃₂²}
///   θ₃(k − (q₁+q₂)a/2 + i((m−n₂)/2σ̃₂² + n₁/2σ̃₁²), e^{−(σ̃₁²+σ̃₂²)/2σ̃₁²σ̃₂²})
/// ```
///
/// which equals `(1/2π𝒩²) Σₙ g₁(n) g₂*(m−n) e^{−i(2n−m)k}`. It enters the full
/// function with coefficient `α*`; `W₂₁ = W₁₂(1↔2) = W₁₂*` enters with `α`.
pub fn oracle_two_gaussian_cross(p: &TwoGaussianParams, pt: PhasePoint) -> Result<Complex64> {
    cross_kernel(&p.first(), &p.second(), pt).map(|w| w / (2.0 * PI * p.norm_sq()))
}

fn cross_kernel(g1: &GaussianParams, g2: &GaussianParams, pt: PhasePoint) -> Result<Complex64> {
    let (s1, s2) = (g1.sigma_tilde * g1.sigma_tilde, g2.sigma_tilde * g2.sigma_tilde);
    let c = (s1 + s2) / (2.0 * s1 * s2);
    let m = pt.m as f64;
    let (n1, n2) = (g1.n0 as f64, g2.n0 as f64);
    let log_pre = Complex64::new(-n1 * n1 / (2.0 * s1) - (m - n2).powi(2) / (2.0 * s2), (pt.k - g2.q0a) * m);
    let z = Complex64::new(pt.k - (g1.q0a + g2.q0a) / 2.0, (m - n2) / (2.0 * s2) + n1 / (2.0 * s1));
    scaled_theta_times(log_pre, z, c)
}

/// Full Wigner function `W₁ + |α|² W₂ + α* W₁₂ + α W₂₁` of the two-Gaussian
/// superposition.
pub fn oracle_two_gaussian(p: &TwoGaussianParams, pt: PhasePoint) -> Result<f64> {
    let (g1, g2) = (p.first(), p.second());
    let w1 = gaussian_kernel(&g1, pt)?;
    let w2 = gaussian_kernel(&g2, pt)?;
    let w12 = cross_kernel(&g1, &g2, pt)?;
    let w21 = cross_kernel(&g2, &g1, pt)?;
    let a = p.alpha;
    let total = w1 + w2 * a.norm_sqr() + w12 * a.conj() + w21 * a;
    real_part(total / (2.0 * PI * p.norm_sq()))
}
