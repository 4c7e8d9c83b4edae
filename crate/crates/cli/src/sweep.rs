//! Parameter sweeps over a two-term template spec.
//!
//! `--n0 a:b[:step]` places the first term at `+n0` and the second at
//! `-n0`; `--q0a a:b:count` sets the momentum of the last term;
//! `--sigma a:b:count` sets the width of every Gaussian term. Real bounds
//! accept multiples of `pi` such as `pi`, `-pi/2` or `2pi/3`.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{CliError, Result};
use crate::spec::{StateSpec, TermSpec};

/// Inclusive integer range with a positive step.
#[derive(Debug, Clone, PartialEq)]
pub struct IntAxis(pub Vec<i64>);

/// `count` evenly spaced reals, both ends included.
#[derive(Debug, Clone, PartialEq)]
pub struct RealAxis(pub Vec<f64>);

fn axis_err(s: &str, why: &str) -> String {
    format!("axis `{s}`: {why}")
}

/// A real number or a rational multiple of π (`pi`, `-2pi/3`, `3*pi`).
pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| format!("bad denominator in `{s}`"))?),
        None => (body, 1.0),
    };
    let coef = num.strip_suffix("pi").ok_or_else(|| format!("`{s}` is not a number"))?;
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let coef = if coef.is_empty() { 1.0 } else { coef.parse::<f64>().map_err(|_| format!("bad multiplier in `{s}`"))? };
    Ok(sign * coef * std::f64::consts::PI / den)
}

impl FromStr for IntAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let int = |p: &str| p.trim().parse::<i64>().map_err(|_| axis_err(s, "bounds must be integers"));
        let (a, b, step) = match parts.as_slice() {
            [a, b] => (int(a)?, int(b)?, 1),
            [a, b, st] => (int(a)?, int(b)?, int(st)?),
            _ => return Err(axis_err(s, "expected a:b or a:b:step")),
        };
        if step <= 0 || b < a {
            return Err(axis_err(s, "need a <= b and a positive step"));
        }
        Ok(IntAxis((a..=b).step_by(step as usize).collect()))
    }
}

impl FromStr for RealAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, count] = parts.as_slice() else {
            return Err(axis_err(s, "expected a:b:count"));
        };
        let (a, b) = (parse_real(a)?, parse_real(b)?);
        let count: usize = count.trim().parse().map_err(|_| axis_err(s, "count must be a positive integer"))?;
        match count {
            0 => Err(axis_err(s, "count must be a positive integer")),
            1 => Ok(RealAxis(vec![a])),
            _ => Ok(RealAxis((0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect())),
        }
    }
}

/// One point of the sweep with the parameters that were applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub n0: i64,
    pub q0a: f64,
    pub sigma_tilde: f64,
}

fn n0_of(t: &TermSpec) -> i64 {
    match t {
        TermSpec::Delta { n0, .. } | TermSpec::Gaussian { n0, .. } => *n0,
    }
}

fn q0a_of(t: &TermSpec) -> f64 {
    match t {
        TermSpec::Delta { .. } => 0.0,
        TermSpec::Gaussian { q0a, .. } => *q0a,
    }
}

/// Specs for every combination of the given axes, in row-major order
/// `n0` → `q0a` → `sigma`. Missing axes keep the template's values.
pub fn expand(
    template: &StateSpec,
    n0: Option<&IntAxis>,
    q0a: Option<&RealAxis>,
    sigma: Option<&RealAxis>,
) -> Result<Vec<(SweepPoint, StateSpec)>> {
    if template.density.is_some() || template.terms.is_empty() {
        return Err(CliError::Invalid("sweep template needs `terms`".into()));
    }
    let first = &template.terms[0];
    let last = template.terms.last().expect("non-empty");
    let first_sigma = template.terms.iter().find_map(|t| match t {
        TermSpec::Gaussian { sigma_tilde, .. } => Some(*sigma_tilde),
        TermSpec::Delta { .. } => None,
    });
    if sigma.is_some() && first_sigma.is_none() {
        return Err(CliError::Invalid("a sigma sweep needs at least one gaussian term".into()));
    }
    if q0a.is_some() && matches!(last, TermSpec::Delta { .. }) {
        return Err(CliError::Invalid("a q0a sweep needs the last term to be a gaussian".into()));
    }
    let n0s = n0.map_or_else(|| vec![n0_of(first)], |a| a.0.clone());
    let q0as = q0a.map_or_else(|| vec![q0a_of(last)], |a| a.0.clone());
    let sigmas = sigma.map_or_else(|| vec![first_sigma.unwrap_or(0.0)], |a| a.0.clone());

    let mut out = Vec::with_capacity(n0s.len() * q0as.len() * sigmas.len());
    for &n in &n0s {
        for &q in &q0as {
            for &s in &sigmas {
                let mut spec = template.clone();
                let count = spec.terms.len();
                for (i, term) in spec.terms.iter_mut().enumerate() {
                    let (n0_slot, sigma_slot, q0a_slot) = match term {
                        TermSpec::Delta { n0, .. } => (n0, None, None),
                        TermSpec::Gaussian { n0, sigma_tilde, q0a, .. } => (n0, Some(sigma_tilde), Some(q0a)),
                    };
                    if n0.is_some() && i < 2 {
                        *n0_slot = if i == 0 { n } else { -n };
                    }
                    if let (true, Some(slot)) = (sigma.is_some(), sigma_slot) {
                        *slot = s;
                    }
                    if let (true, true, Some(slot)) = (q0a.is_some(), i + 1 == count, q0a_slot) {
                        *slot = q;
                    }
                }
                out.push((SweepPoint { n0: n, q0a: q, sigma_tilde: s }, spec));
            }
        }
    }
    Ok(out)
}
