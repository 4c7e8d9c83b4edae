//! Jacobi theta function θ₃(z, q) = Σₙ q^{n²} e^{2inz} for complex `z` and a
//! real nome `0 <= q < 1`.
//!
//! The series is summed symmetrically (the `n` and `-n` terms together) so
//! that θ₃(-z) = θ₃(z) holds bit for bit. Summation stops once a geometric
//! majorant of the remaining tail drops below the requested tolerance.
//!
//! For arguments with a large imaginary part the terms grow before they
//! decay. [`theta3_scaled`] first moves `z` into the fundamental strip with
//! the quasi-periodicity θ₃(w + jπτ) = q^{-j²} e^{-2ijw} θ₃(w) and returns the
//! factor in logarithmic form, so callers can combine it with their own
//! exponential prefactors without overflow.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Upper bound on the number of series terms before giving up.
pub const MAX_TERMS: usize = 1_000_000;

/// Value of a truncated theta series together with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaResult {
    pub value: Complex64,
    /// Largest `n` included in the symmetric sum.
    pub terms_used: usize,
    /// Rigorous bound on the modulus of the discarded tail.
    pub tail_bound: f64,
}

/// θ₃(z, q) = exp(`log_factor`) · `reduced.value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledTheta {
    pub log_factor: Complex64,
    pub reduced: ThetaResult,
}

impl ScaledTheta {
    pub fn value(&self) -> Complex64 {
        self.log_factor.exp() * self.reduced.value
    }
}

/// Evaluate θ₃(z, q) with an absolute tail tolerance `tol`.
pub fn theta3(z: Complex64, q: f64, tol: f64) -> Result<ThetaResult> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::ThetaDivergent(q));
    }
    check_tol(tol)?;
    if q == 0.0 {
        return Ok(ThetaResult { value: Complex64::new(1.0, 0.0), terms_used: 0, tail_bound: 0.0 });
    }
    series(z, -q.ln(), tol, q)
}

/// θ₃(z, e^{-c}) parametrized by `c = -ln q > 0`; `c = +inf` means `q = 0`.
///
/// Useful when the nome underflows, as for very narrow Gaussians.
pub fn theta3_log_nome(z: Complex64, c: f64, tol: f64) -> Result<ThetaResult> {
    check_log_nome(c)?;
    check_tol(tol)?;
    if c == f64::INFINITY {
        return Ok(ThetaResult { value: Complex64::new(1.0, 0.0), terms_used: 0, tail_bound: 0.0 });
    }
    series(z, c, tol, (-c).exp())
}

/// θ₃(z, e^{-c}) with `Im z` first reduced into `[-c/2, c/2]`.
///
/// The tail bound of the reduced series is absolute with respect to the
/// reduced value, i.e. relative to the scale `exp(log_factor)`.
pub fn theta3_scaled(z: Complex64, c: f64, tol: f64) -> Result<ScaledTheta> {
    check_log_nome(c)?;
    check_tol(tol)?;
    if c == f64::INFINITY {
        return Ok(ScaledTheta {
            log_factor: Complex64::new(0.0, 0.0),
            reduced: ThetaResult { value: Complex64::new(1.0, 0.0), terms_used: 0, tail_bound: 0.0 },
        });
    }
    let shift = (z.im / c).round();
    let w = Complex64::new(z.re, z.im - shift * c);
    // θ₃(w + j·ic) = e^{c j²} e^{-2ijw} θ₃(w)
    let log_factor = Complex64::new(c * shift * shift, 0.0) - Complex64::new(0.0, 2.0 * shift) * w;
    let reduced = series(w, c, tol, (-c).exp())?;
    Ok(ScaledTheta { log_factor, reduced })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::ThetaTolerance(tol))
    }
}

fn check_log_nome(c: f64) -> Result<()> {
    if c > 0.0 {
        Ok(())
    } else {
        Err(Error::ThetaDivergent((-c).exp()))
    }
}

fn series(z: Complex64, c: f64, tol: f64, q: f64) -> Result<ThetaResult> {
    let y = z.im.abs();
    let two_iz = Complex64::new(0.0, 2.0) * z;
    let mut tail_sum = Complex64::new(0.0, 0.0);
    let mut n = 0usize;
    loop {
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::ThetaTermCap { q, cap: MAX_TERMS });
        }
        let nf = n as f64;
        let gauss = -c * nf * nf;
        tail_sum += (gauss + two_iz * nf).exp() + (gauss - two_iz * nf).exp();

        // |terms beyond n| <= 2 t_{n+1} / (1 - r), with t_j = e^{-c j² + 2 j y}
        // and r = t_{j+1}/t_j decreasing in j.
        let next = nf + 1.0;
        let log_ratio = -c * (2.0 * next + 1.0) + 2.0 * y;
        if log_ratio < 0.0 {
            let log_next = -c * next * next + 2.0 * next * y;
            let bound = 2.0 * log_next.exp() / (1.0 - log_ratio.exp());
            if bound < tol {
                return Ok(ThetaResult {
                    value: Complex64::new(1.0, 0.0) + tail_sum,
                    terms_used: n,
                    tail_bound: bound,
                });
            }
        }
    }
}
