//! JSON state specifications.
//!
//! A pure state is a superposition of lattice deltas and discretized
//! Gaussians:
//!
//! ```json
//! {"spacing": 1.0, "terms": [
//!   {"type": "gaussian", "n0": 6, "sigma_tilde": 1.5, "q0a": 0.0, "coeff": [1, 0]},
//!   {"type": "gaussian", "n0": -6, "sigma_tilde": 1.5, "coeff": [1, 0]}
//! ]}
//! ```
//!
//! A mixed state gives its density matrix instead, as `[re, im]` pairs:
//!
//! ```json
//! {"density": {"n_min": 0, "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}}
//! ```

use std::path::Path;

use lattice_wigner::{
    make_delta, make_gaussian, superpose, to_density, Complex64, DMatrix, DensityOperator,
    GaussianParams, PureState,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

fn default_spacing() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
    /// Free-form annotations, ignored when the state is built.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum TermSpec {
    Delta {
        n0: i64,
        coeff: [f64; 2],
    },
    Gaussian {
        n0: i64,
        sigma_tilde: f64,
        #[serde(default)]
        q0a: f64,
        coeff: [f64; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    pub n_min: i64,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// A state assembled from a spec.
#[derive(Debug, Clone)]
pub enum StateInput {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl StateInput {
    pub fn density(&self) -> DensityOperator {
        match self {
            StateInput::Pure(s) => to_density(s),
            StateInput::Mixed(rho) => rho.clone(),
        }
    }
}

impl TermSpec {
    fn coeff(&self) -> Complex64 {
        let [re, im] = match self {
            TermSpec::Delta { coeff, .. } | TermSpec::Gaussian { coeff, .. } => *coeff,
        };
        Complex64::new(re, im)
    }

    fn state(&self, spacing: f64, tail_eps: f64) -> Result<PureState> {
        Ok(match *self {
            TermSpec::Delta { n0, .. } => make_delta(n0, spacing)?,
            TermSpec::Gaussian { n0, sigma_tilde, q0a, .. } => {
                make_gaussian(&GaussianParams::new(n0, sigma_tilde, q0a)?, spacing, tail_eps)?
            }
        })
    }
}

impl StateSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("state spec: {e}")))
    }

    /// Whether any term is a Gaussian, whose tails are truncated at `tail_eps`.
    pub fn has_truncated_tails(&self) -> bool {
        self.terms.iter().any(|t| matches!(t, TermSpec::Gaussian { .. }))
    }

    pub fn build(&self, tail_eps: f64) -> Result<StateInput> {
        match (&self.density, self.terms.is_empty()) {
            (Some(_), false) => Err(CliError::Invalid("spec gives both `terms` and `density`".into())),
            (None, true) => Err(CliError::Invalid("spec needs at least one term or a `density`".into())),
            (Some(d), true) => Ok(StateInput::Mixed(d.build(self.spacing)?)),
            (None, false) => {
                if self.terms.iter().all(|t| t.coeff() == Complex64::new(0.0, 0.0)) {
                    return Err(CliError::Invalid("all term coefficients are zero".into()));
                }
                let states = self
                    .terms
                    .iter()
                    .map(|t| t.state(self.spacing, tail_eps))
                    .collect::<Result<Vec<_>>>()?;
                let coeffs: Vec<Complex64> = self.terms.iter().map(TermSpec::coeff).collect();
                Ok(StateInput::Pure(superpose(&states, &coeffs)?))
            }
        }
    }
}

impl DensitySpec {
    fn build(&self, spacing: f64) -> Result<DensityOperator> {
        let d = self.matrix.len();
        if d == 0 || self.matrix.iter().any(|row| row.len() != d) {
            return Err(CliError::Invalid("density matrix must be square and non-empty".into()));
        }
        let m = DMatrix::from_fn(d, d, |i, j| {
            let [re, im] = self.matrix[i][j];
            Complex64::new(re, im)
        });
        Ok(DensityOperator::new(self.n_min, m, spacing)?)
    }

    pub fn from_operator(rho: &DensityOperator) -> Self {
        let m = rho.matrix();
        DensitySpec {
            n_min: rho.n_min(),
            matrix: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }
}
