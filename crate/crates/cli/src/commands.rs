use std::path::{Path, PathBuf};

use lattice_wigner::{
    eta, momentum_density, momentum_marginal, overlap, position_marginal, reconstruct_density,
    reconstruct_matrix, wigner_grid, wigner_transform, DensityOperator, NegativityReport, PhasePoint,
    WignerGrid,
};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::grid_io::{emit, fmt_f64, read_grid, render_grid, to_json, Format, GridMeta, RunConfig};
use crate::spec::{DensitySpec, StateSpec};
use crate::sweep::{expand, IntAxis, RealAxis, SweepPoint};
use crate::{Command, GlobalOpts};

pub fn dispatch(opts: &GlobalOpts, command: &Command) -> Result<()> {
    let out = opts.out.as_deref();
    match command {
        Command::Wigner { spec } => emit(out, &cmd_wigner(spec, &opts.config(Format::Csv)?)?),
        Command::Eta { spec } => emit(out, &cmd_eta(spec, &opts.config(Format::Json)?)?),
        Command::Marginals { spec } => emit(out, &cmd_marginals(spec, &opts.config(Format::Csv)?)?),
        Command::Reconstruct { spec, grid } => {
            let source = source(spec, grid);
            emit(out, &cmd_reconstruct(source, &opts.config(Format::Json)?)?)
        }
        Command::Sweep { spec, n0, q0a, sigma } => emit(
            out,
            &cmd_sweep(spec, n0.as_ref(), q0a.as_ref(), sigma.as_ref(), &opts.config(Format::Csv)?)?,
        ),
        Command::Check { spec, grid } => {
            let config = opts.config(Format::Json)?;
            let report = cmd_check(source(spec, grid), &config)?;
            emit(out, &render_checks(&report, &config)?)?;
            report.verdict()
        }
    }
}

/// Where a command takes its state from.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Spec(&'a Path),
    Grid(&'a Path),
}

fn source<'a>(spec: &'a Option<PathBuf>, grid: &'a Option<PathBuf>) -> Source<'a> {
    match (spec, grid) {
        (Some(s), _) => Source::Spec(s),
        (None, Some(g)) => Source::Grid(g),
        (None, None) => unreachable!("clap requires one of --spec and --grid"),
    }
}

struct Loaded {
    spec: StateSpec,
    rho: DensityOperator,
    grid: WignerGrid,
}

fn load(path: &Path, config: &RunConfig) -> Result<Loaded> {
    let spec = StateSpec::load(path)?;
    let rho = spec.build(config.tail_eps)?.density();
    let grid = wigner_grid(&rho, config.n_k)?;
    Ok(Loaded { spec, rho, grid })
}

pub fn cmd_wigner(path: &Path, config: &RunConfig) -> Result<String> {
    let l = load(path, config)?;
    let meta = GridMeta::new(*config, &l.grid, l.spec.has_truncated_tails());
    render_grid(&l.grid, &meta, config.output_format)
}

#[derive(Serialize)]
struct EtaOut<'a> {
    #[serde(flatten)]
    report: &'a NegativityReport,
    #[serde(flatten)]
    config: &'a RunConfig,
}

pub fn cmd_eta(path: &Path, config: &RunConfig) -> Result<String> {
    let l = load(path, config)?;
    let report = eta(&l.grid)?;
    match config.output_format {
        Format::Json => to_json(&EtaOut { report: &report, config }),
        Format::Csv => Ok(format!(
            "eta,raw_negativity,quad_error_estimate,min_value,min_m,min_k\n{},{},{},{},{},{}\n",
            fmt_f64(report.eta),
            fmt_f64(report.raw_negativity),
            fmt_f64(report.quad_error_estimate),
            fmt_f64(report.min_value),
            report.min_point.m,
            fmt_f64(report.min_point.k),
        )),
    }
}

#[derive(Serialize)]
struct MarginalOut {
    config: RunConfig,
    position: Marginal<i64>,
    momentum: Marginal<f64>,
}

/// Marginal computed from the grid alongside the value taken directly from
/// the density matrix.
#[derive(Serialize)]
struct Marginal<T> {
    coordinates: Vec<T>,
    marginal: Vec<f64>,
    expected: Vec<f64>,
}

pub fn cmd_marginals(path: &Path, config: &RunConfig) -> Result<String> {
    let l = load(path, config)?;
    let g = &l.grid;
    let ms = g.m_values();
    let position = Marginal {
        marginal: ms.iter().map(|&m| position_marginal(g, m)).collect(),
        expected: ms
            .iter()
            .map(|&m| if m.rem_euclid(2) == 0 { l.rho.element(m / 2, m / 2).re } else { 0.0 })
            .collect(),
        coordinates: ms,
    };
    let ks = g.k_values();
    let momentum = Marginal {
        marginal: (0..g.n_k()).map(|j| momentum_marginal(g, j)).collect(),
        expected: ks.iter().map(|&k| momentum_density(&l.rho, k)).collect(),
        coordinates: ks,
    };
    match config.output_format {
        Format::Json => to_json(&MarginalOut { config: *config, position, momentum }),
        Format::Csv => {
            let mut out = String::from("axis,coordinate,marginal,expected\n");
            for i in 0..position.coordinates.len() {
                out.push_str(&format!(
                    "m,{},{},{}\n",
                    position.coordinates[i],
                    fmt_f64(position.marginal[i]),
                    fmt_f64(position.expected[i])
                ));
            }
            for i in 0..momentum.coordinates.len() {
                out.push_str(&format!(
                    "k,{},{},{}\n",
                    fmt_f64(momentum.coordinates[i]),
                    fmt_f64(momentum.marginal[i]),
                    fmt_f64(momentum.expected[i])
                ));
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct ReconstructMeta {
    #[serde(flatten)]
    config: RunConfig,
    /// Largest `|ρ_rec − ρ|` when the input was a state spec.
    max_deviation: Option<f64>,
}

/// The JSON output is itself a valid mixed-state spec.
pub fn cmd_reconstruct(source: Source, config: &RunConfig) -> Result<String> {
    let (grid, original) = match source {
        Source::Spec(p) => {
            let l = load(p, config)?;
            (l.grid, Some(l.rho))
        }
        Source::Grid(p) => (read_grid(p)?, None),
    };
    let rho = reconstruct_density(&grid)?;
    let max_deviation = original.map(|orig| {
        let mut worst = 0.0f64;
        for n1 in rho.n_min()..=rho.n_max() {
            for n2 in rho.n_min()..=rho.n_max() {
                worst = worst.max((rho.element(n1, n2) - orig.element(n1, n2)).norm());
            }
        }
        worst
    });
    match config.output_format {
        Format::Json => {
            let meta = ReconstructMeta { config: *config, max_deviation };
            let spec = StateSpec {
                spacing: rho.spacing(),
                terms: Vec::new(),
                density: Some(DensitySpec::from_operator(&rho)),
                meta: Some(serde_json::to_value(meta).map_err(|e| CliError::Invalid(e.to_string()))?),
            };
            to_json(&spec)
        }
        Format::Csv => {
            let mut out = String::from("n1,n2,re,im\n");
            for n1 in rho.n_min()..=rho.n_max() {
                for n2 in rho.n_min()..=rho.n_max() {
                    let v = rho.element(n1, n2);
                    out.push_str(&format!("{n1},{n2},{},{}\n", fmt_f64(v.re), fmt_f64(v.im)));
                }
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(flatten)]
    point: SweepPoint,
    eta: f64,
    raw_negativity: f64,
    quad_error_estimate: f64,
}

#[derive(Serialize)]
struct SweepOut<'a> {
    config: &'a RunConfig,
    points: Vec<SweepRow>,
}

pub fn cmd_sweep(
    path: &Path,
    n0: Option<&IntAxis>,
    q0a: Option<&RealAxis>,
    sigma: Option<&RealAxis>,
    config: &RunConfig,
) -> Result<String> {
    let template = StateSpec::load(path)?;
    let mut rows = Vec::new();
    for (point, spec) in expand(&template, n0, q0a, sigma)? {
        let rho = spec.build(config.tail_eps)?.density();
        let r = eta(&wigner_grid(&rho, config.n_k)?)?;
        rows.push(SweepRow {
            point,
            eta: r.eta,
            raw_negativity: r.raw_negativity,
            quad_error_estimate: r.quad_error_estimate,
        });
    }
    match config.output_format {
        Format::Json => to_json(&SweepOut { config, points: rows }),
        Format::Csv => {
            let mut out = String::from("n0,q0a,sigma_tilde,eta,raw_negativity,quad_error_estimate\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.point.n0,
                    fmt_f64(r.point.q0a),
                    fmt_f64(r.point.sigma_tilde),
                    fmt_f64(r.eta),
                    fmt_f64(r.raw_negativity),
                    fmt_f64(r.quad_error_estimate)
                ));
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    /// Size of the violation; compared against `tol`.
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    fn new(tol: f64, values: Vec<(&'static str, f64)>) -> Self {
        let checks: Vec<CheckResult> = values
            .into_iter()
            .map(|(name, value)| CheckResult { name, value, tol, passed: value <= tol })
            .collect();
        CheckReport { passed: checks.iter().all(|c| c.passed), checks }
    }

    fn verdict(&self) -> Result<()> {
        let failed: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({} > {})", c.name, c.value, c.tol))
            .collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(CliError::CheckFailed(failed.join(", ")))
        }
    }
}

fn render_checks(report: &CheckReport, config: &RunConfig) -> Result<String> {
    #[derive(Serialize)]
    struct Out<'a> {
        #[serde(flatten)]
        report: &'a CheckReport,
        config: &'a RunConfig,
    }
    match config.output_format {
        Format::Json => to_json(&Out { report, config }),
        Format::Csv => {
            let mut out = String::from("name,value,tol,passed\n");
            for c in &report.checks {
                out.push_str(&format!("{},{},{},{}\n", c.name, fmt_f64(c.value), fmt_f64(c.tol), c.passed));
            }
            Ok(out)
        }
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that it can never pass a check
    values.into_iter().fold(0.0, |acc, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

pub fn cmd_check(source: Source, config: &RunConfig) -> Result<CheckReport> {
    let values = match source {
        Source::Spec(p) => state_checks(&load(p, config)?),
        Source::Grid(p) => grid_checks(&read_grid(p)?)?,
    };
    Ok(CheckReport::new(config.tol, values))
}

fn state_checks(l: &Loaded) -> Vec<(&'static str, f64)> {
    let (g, rho) = (&l.grid, &l.rho);
    let position = max_of(g.m_values().into_iter().map(|m| {
        let want = if m.rem_euclid(2) == 0 { rho.element(m / 2, m / 2).re } else { 0.0 };
        (position_marginal(g, m) - want).abs()
    }));
    let momentum = max_of((0..g.n_k()).map(|j| (momentum_marginal(g, j) - momentum_density(rho, g.k_value(j))).abs()));
    let purity = overlap(g, g).map_or(f64::NAN, |o| (o - rho.purity()).abs());
    let reconstruction = reconstruct_matrix(g).map_or(f64::NAN, |(n_min, m)| {
        max_of((0..m.nrows()).flat_map(|i| {
            let m = &m;
            (0..m.ncols()).map(move |j| {
                (m[(i, j)] - rho.element(n_min + i as i64, n_min + j as i64)).norm()
            })
        }))
    });
    vec![
        ("normalization", (g.total() - 1.0).abs()),
        ("phase_relation", g.phase_relation_error()),
        ("position_marginal", position),
        ("momentum_marginal", momentum),
        ("overlap_purity", purity),
        ("reconstruction", reconstruction),
    ]
}

fn grid_checks(g: &WignerGrid) -> Result<Vec<(&'static str, f64)>> {
    let odd_rows = max_of(g.m_values().into_iter().filter(|m| m.rem_euclid(2) == 1).map(|m| position_marginal(g, m).abs()));
    let (n_min, m) = reconstruct_matrix(g)?;
    let hermiticity = max_of((0..m.nrows()).flat_map(|i| {
        let m = &m;
        (0..m.ncols()).map(move |j| (m[(i, j)] - m[(j, i)].conj()).norm())
    }));
    let hermitian_part = (&m + m.adjoint()) * lattice_wigner::Complex64::new(0.5, 0.0);
    let min_eigenvalue = hermitian_part.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    let n_max = n_min + m.nrows() as i64 - 1;
    let mut round_trip = 0.0f64;
    for row in g.m_values() {
        for j in 0..g.n_k() {
            let w = wigner_transform(
                n_min,
                n_max,
                |a, b| m[((a - n_min) as usize, (b - n_min) as usize)],
                PhasePoint::new(row, g.k_value(j)),
            );
            round_trip = max_of([round_trip, (w.re - g.value(row, j)).abs(), w.im.abs()]);
        }
    }
    Ok(vec![
        ("normalization", (g.total() - 1.0).abs()),
        ("phase_relation", g.phase_relation_error()),
        ("odd_row_marginals", odd_rows),
        ("hermiticity", hermiticity),
        ("positivity", (-min_eigenvalue).max(0.0)),
        ("round_trip", round_trip),
    ])
}
