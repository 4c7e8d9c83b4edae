//! Lattice states: pure states on a finite window of sites and density
//! operators built from them.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::reduce::pairwise_sum_by;

/// Tolerance on `Σ|ψ|² = 1` for pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Elementwise Hermiticity tolerance for density operators.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on `tr ρ = 1`.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a density operator.
pub const EIGEN_TOL: f64 = 1e-10;
/// Default truncation threshold for Gaussian amplitudes.
pub const DEFAULT_TAIL_EPS: f64 = 1e-16;
pub const DEFAULT_SPACING: f64 = 1.0;

fn check_spacing(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpacing(a))
    }
}

fn norm_sq(amps: &[Complex64]) -> f64 {
    pairwise_sum_by(amps, &|z: &Complex64| z.norm_sqr())
}

/// Pure state `Σₙ ψ(n)|n⟩` supported on the window `[n_min, n_min + len)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_min: i64,
    amplitudes: Vec<Complex64>,
    spacing: f64,
}

impl PureState {
    /// Wrap already normalized amplitudes.
    pub fn new(n_min: i64, amplitudes: Vec<Complex64>, spacing: f64) -> Result<Self> {
        check_spacing(spacing)?;
        if amplitudes.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if amplitudes.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let ns = norm_sq(&amplitudes);
        if (ns - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq: ns });
        }
        Ok(Self { n_min, amplitudes, spacing })
    }

    /// Rescale arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(n_min: i64, mut amplitudes: Vec<Complex64>, spacing: f64) -> Result<Self> {
        check_spacing(spacing)?;
        if amplitudes.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if amplitudes.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let ns = norm_sq(&amplitudes);
        if ns <= 0.0 {
            return Err(Error::ZeroSuperposition);
        }
        let inv = 1.0 / ns.sqrt();
        amplitudes.iter_mut().for_each(|z| *z *= inv);
        Self::new(n_min, amplitudes, spacing)
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.amplitudes.len() as i64 - 1
    }

    /// Number of sites in the window.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `ψ(n)`, zero outside the window.
    pub fn amplitude(&self, n: i64) -> Complex64 {
        let idx = n - self.n_min;
        if idx < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitudes.get(idx as usize).copied().unwrap_or_default()
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.amplitudes)
    }

    /// Drop exactly-zero amplitudes at both ends of the window.
    pub fn trimmed(mut self) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let first = self.amplitudes.iter().position(|&z| z != zero);
        let Some(first) = first else { return self };
        let last = self.amplitudes.iter().rposition(|&z| z != zero).unwrap_or(first);
        self.amplitudes.truncate(last + 1);
        self.amplitudes.drain(..first);
        self.n_min += first as i64;
        self
    }

    /// Same state on the larger window `[n_min, n_max]`.
    pub fn embedded(&self, n_min: i64, n_max: i64) -> Result<Self> {
        if n_min > self.n_min || n_max < self.n_max() {
            return Err(Error::InvalidParameter(format!(
                "window [{n_min}, {n_max}] does not contain [{}, {}]",
                self.n_min,
                self.n_max()
            )));
        }
        let amplitudes = (n_min..=n_max).map(|n| self.amplitude(n)).collect();
        Ok(Self { n_min, amplitudes, spacing: self.spacing })
    }
}

/// Parameters of a discretized Gaussian `e^{-(n-n₀)²/2σ̃²} e^{i q₀a n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub n0: i64,
    /// Width in units of the lattice spacing.
    pub sigma_tilde: f64,
    /// Momentum phase per site, kept in `[-π, π)`.
    pub q0a: f64,
}

impl GaussianParams {
    pub fn new(n0: i64, sigma_tilde: f64, q0a: f64) -> Result<Self> {
        if !(sigma_tilde > 0.0 && sigma_tilde.is_finite()) {
            return Err(Error::InvalidWidth(sigma_tilde));
        }
        if !q0a.is_finite() {
            return Err(Error::InvalidParameter(format!("q0a must be finite, got {q0a}")));
        }
        Ok(Self { n0, sigma_tilde, q0a: crate::wigner::canonical_k(q0a) })
    }

    /// Half-width of the truncation window for amplitude threshold `tail_eps`.
    pub fn half_width(&self, tail_eps: f64) -> i64 {
        (self.sigma_tilde * (2.0 * (1.0 / tail_eps).ln()).sqrt()).ceil() as i64
    }
}

fn check_tail_eps(tail_eps: f64) -> Result<()> {
    if tail_eps > 0.0 && tail_eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidTailEps(tail_eps))
    }
}

/// The localized state `|n₀⟩`.
pub fn make_delta(n0: i64, spacing: f64) -> Result<PureState> {
    PureState::new(n0, vec![Complex64::new(1.0, 0.0)], spacing)
}

/// Discretized Gaussian, truncated where the envelope drops below
/// `tail_eps` and renormalized on the truncated window.
pub fn make_gaussian(p: &GaussianParams, spacing: f64, tail_eps: f64) -> Result<PureState> {
    check_spacing(spacing)?;
    check_tail_eps(tail_eps)?;
    let h = p.half_width(tail_eps);
    let two_var = 2.0 * p.sigma_tilde * p.sigma_tilde;
    let amplitudes = (p.n0 - h..=p.n0 + h)
        .map(|n| {
            let d = (n - p.n0) as f64;
            Complex64::from_polar((-d * d / two_var).exp(), p.q0a * n as f64)
        })
        .collect();
    Ok(PureState::normalized(p.n0 - h, amplitudes, spacing)?.trimmed())
}

/// `Σₙ e^{-(n-n₀)²/σ̃²}` over the truncation window of [`make_gaussian`]:
/// the squared norm of the unnormalized amplitudes.
pub fn gaussian_norm_sq(p: &GaussianParams, tail_eps: f64) -> Result<f64> {
    check_tail_eps(tail_eps)?;
    let h = p.half_width(tail_eps);
    let var = p.sigma_tilde * p.sigma_tilde;
    let terms: Vec<f64> = (-h..=h).map(|d| (-(d * d) as f64 / var).exp()).collect();
    Ok(pairwise_sum_by(&terms, &|&x| x))
}

/// Normalized `Σᵢ cᵢ ψᵢ` on the union of the input windows.
pub fn superpose(states: &[PureState], coeffs: &[Complex64]) -> Result<PureState> {
    if states.len() != coeffs.len() {
        return Err(Error::LengthMismatch { states: states.len(), coeffs: coeffs.len() });
    }
    let Some(first) = states.first() else {
        return Err(Error::EmptySuperposition);
    };
    let spacing = first.spacing();
    for s in &states[1..] {
        if (s.spacing() - spacing).abs() > 1e-12 * spacing {
            return Err(Error::SpacingMismatch(spacing, s.spacing()));
        }
    }
    let n_min = states.iter().map(PureState::n_min).min().unwrap_or(0);
    let n_max = states.iter().map(PureState::n_max).max().unwrap_or(0);
    let amplitudes: Vec<Complex64> = (n_min..=n_max)
        .map(|n| states.iter().zip(coeffs).map(|(s, &c)| c * s.amplitude(n)).sum())
        .collect();

    // Treat residues at roundoff level relative to the inputs as cancellation.
    let scale: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let ns = norm_sq(&amplitudes);
    if ns <= 1e-28 * scale || ns == 0.0 {
        return Err(Error::ZeroSuperposition);
    }
    PureState::normalized(n_min, amplitudes, spacing)
}

/// Quasi-momentum amplitude `⟨q = κ/a | ψ⟩ = √(a/2π) Σₙ e^{-iκn} ψ(n)`.
pub fn momentum_amplitude(state: &PureState, kappa: f64) -> Complex64 {
    let terms: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &psi)| {
            let n = (state.n_min() + i as i64) as f64;
            Complex64::from_polar(1.0, -kappa * n) * psi
        })
        .collect();
    crate::reduce::pairwise_sum(&terms) * (state.spacing() / (2.0 * PI)).sqrt()
}

/// Density operator with matrix elements `⟨n₁|ρ|n₂⟩` on a finite window.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n_min: i64,
    matrix: DMatrix<Complex64>,
    spacing: f64,
}

impl DensityOperator {
    /// Validate Hermiticity, unit trace and positivity.
    pub fn new(n_min: i64, matrix: DMatrix<Complex64>, spacing: f64) -> Result<Self> {
        check_spacing(spacing)?;
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyWindow);
        }
        if matrix.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut deviation = 0.0f64;
        for i in 0..rows {
            for j in i..rows {
                deviation = deviation.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace: trace.re });
        }
        if rows > 1 {
            let min_eigenvalue = matrix
                .clone()
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            if min_eigenvalue < -EIGEN_TOL {
                return Err(Error::NotPositive { min_eigenvalue });
            }
        }
        Ok(Self { n_min, matrix, spacing })
    }

    /// `|ψ⟩⟨ψ|` on the window of `state`.
    pub fn from_pure(state: &PureState) -> Self {
        let psi = state.amplitudes();
        let d = psi.len();
        let matrix = DMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj());
        Self { n_min: state.n_min(), matrix, spacing: state.spacing() }
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.dim() as i64 - 1
    }

    /// Number of sites in the window.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `⟨n₁|ρ|n₂⟩`, zero outside the window.
    pub fn element(&self, n1: i64, n2: i64) -> Complex64 {
        let (i, j) = (n1 - self.n_min, n2 - self.n_min);
        let d = self.dim() as i64;
        if i < 0 || j < 0 || i >= d || j >= d {
            Complex64::new(0.0, 0.0)
        } else {
            self.matrix[(i as usize, j as usize)]
        }
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        trace_product(&self.matrix, &self.matrix).re
    }

    /// Same operator on the larger window `[n_min, n_max]`.
    pub fn embedded(&self, n_min: i64, n_max: i64) -> Result<Self> {
        if n_min > self.n_min || n_max < self.n_max() {
            return Err(Error::InvalidParameter(format!(
                "window [{n_min}, {n_max}] does not contain [{}, {}]",
                self.n_min,
                self.n_max()
            )));
        }
        let d = (n_max - n_min + 1) as usize;
        let matrix = DMatrix::from_fn(d, d, |i, j| {
            self.element(n_min + i as i64, n_min + j as i64)
        });
        Ok(Self { n_min, matrix, spacing: self.spacing })
    }
}

/// `tr(AB)` without forming the product.
pub(crate) fn trace_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let d = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Convenience wrapper matching the free-function style of the other
/// constructors.
pub fn to_density(state: &PureState) -> DensityOperator {
    DensityOperator::from_pure(state)
}
