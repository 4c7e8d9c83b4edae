//! Grid files and atomic output.
//!
//! CSV grids have the header `m,k,W` and one line per node, rows in
//! increasing `m` and nodes in increasing `k`. JSON grids hold
//! `{meta, m_values, k_values, values}` with `values[i][j] = W(m_i, k_j)`.
//! Floats are written in shortest round-trip form, so a grid read back is
//! bit-identical to the one written.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use lattice_wigner::{k_node, WignerGrid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Run parameters echoed into every output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub n_k: usize,
    pub tail_eps: f64,
    pub tol: f64,
    pub output_format: Format,
}

/// Header of a JSON grid file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMeta {
    #[serde(flatten)]
    pub config: RunConfig,
    pub spacing: f64,
    pub n_min: i64,
    pub n_max: i64,
    pub m_min: i64,
    pub m_max: i64,
    pub max_imag_residue: f64,
    /// True when Gaussian tails were cut at `tail_eps`, so values carry that
    /// truncation error on top of rounding.
    pub tails_truncated: bool,
}

impl GridMeta {
    pub fn new(config: RunConfig, grid: &WignerGrid, tails_truncated: bool) -> Self {
        GridMeta {
            config,
            spacing: grid.spacing(),
            n_min: grid.n_min(),
            n_max: grid.n_min() + grid.sites() as i64 - 1,
            m_min: grid.m_min(),
            m_max: grid.m_max(),
            max_imag_residue: grid.max_imag_residue(),
            tails_truncated,
        }
    }
}

#[derive(Serialize)]
struct GridOut<'a> {
    meta: &'a GridMeta,
    m_values: Vec<i64>,
    k_values: Vec<f64>,
    values: Vec<&'a [f64]>,
}

#[derive(Deserialize)]
struct GridIn {
    #[serde(default)]
    meta: Option<MetaIn>,
    m_values: Vec<i64>,
    k_values: Vec<f64>,
    values: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct MetaIn {
    #[serde(default = "unit")]
    spacing: f64,
}

fn unit() -> f64 {
    1.0
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn render_grid(grid: &WignerGrid, meta: &GridMeta, format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut out = String::with_capacity(grid.values().len() * 40);
            out.push_str("m,k,W\n");
            let ks: Vec<String> = grid.k_values().into_iter().map(fmt_f64).collect();
            for m in grid.m_min()..=grid.m_max() {
                let row = grid.row(m).unwrap_or_default();
                for (k, w) in ks.iter().zip(row) {
                    out.push_str(&format!("{m},{k},{}\n", fmt_f64(*w)));
                }
            }
            Ok(out)
        }
        Format::Json => {
            let doc = GridOut {
                meta,
                m_values: grid.m_values(),
                k_values: grid.k_values(),
                values: (grid.m_min()..=grid.m_max()).map(|m| grid.row(m).unwrap_or_default()).collect(),
            };
            to_json(&doc)
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value).map_err(|e| CliError::Invalid(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Index of `k` on the `n_k`-node grid, if it is one of the nodes.
fn node_index(k: f64, n_k: usize) -> Option<usize> {
    let j = ((k + PI) * n_k as f64 / (2.0 * PI)).round();
    if !(0.0..n_k as f64).contains(&j) {
        return None;
    }
    let j = j as usize;
    ((k - k_node(j, n_k)).abs() <= 1e-12).then_some(j)
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Invalid(format!("grid file: {}", msg.into()))
}

/// Read a grid written by [`render_grid`]. The format is taken from the
/// first non-blank character: `{` for JSON, anything else for CSV.
pub fn read_grid(path: &Path) -> Result<WignerGrid> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if text.trim_start().starts_with('{') {
        parse_json_grid(&text)
    } else {
        parse_csv_grid(&text)
    }
}

fn parse_json_grid(text: &str) -> Result<WignerGrid> {
    let g: GridIn = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let n_k = g.k_values.len();
    if g.values.len() != g.m_values.len() || g.values.iter().any(|r| r.len() != n_k) {
        return Err(bad("values must have one row of k_values.len() entries per m"));
    }
    for (j, &k) in g.k_values.iter().enumerate() {
        if node_index(k, n_k) != Some(j) {
            return Err(bad(format!("k_values[{j}] = {k} is not a grid node")));
        }
    }
    let m_min = *g.m_values.first().ok_or_else(|| bad("no rows"))?;
    if g.m_values.iter().enumerate().any(|(i, &m)| m != m_min + i as i64) {
        return Err(bad("m_values must be consecutive"));
    }
    let spacing = g.meta.map_or(1.0, |m| m.spacing);
    Ok(WignerGrid::from_values(m_min, n_k, spacing, g.values.concat())?)
}

fn parse_csv_grid(text: &str) -> Result<WignerGrid> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(e.to_string()))?;
    if header != vec!["m", "k", "W"] {
        return Err(bad(format!("header must be `m,k,W`, found `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut rows: Vec<(i64, f64, f64)> = Vec::new();
    for (line, record) in reader.deserialize().enumerate() {
        rows.push(record.map_err(|e| bad(format!("record {}: {e}", line + 1)))?);
    }
    let (m_min, _, _) = *rows.first().ok_or_else(|| bad("no data"))?;
    let n_k = rows.iter().take_while(|r| r.0 == m_min).count();
    if n_k == 0 || !rows.len().is_multiple_of(n_k) {
        return Err(bad("every row must have the same number of k nodes"));
    }
    let mut values = vec![0.0; rows.len()];
    let mut seen = vec![false; rows.len()];
    let n_rows = (rows.len() / n_k) as i64;
    for &(m, k, w) in &rows {
        let j = node_index(k, n_k).ok_or_else(|| bad(format!("k = {k} is not a node of the {n_k}-point grid")))?;
        if !(m_min..m_min + n_rows).contains(&m) {
            return Err(bad(format!("m = {m} outside the consecutive row range")));
        }
        let idx = (m - m_min) as usize * n_k + j;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(bad(format!("duplicate node (m = {m}, k = {k})")));
        }
        values[idx] = w;
    }
    Ok(WignerGrid::from_values(m_min, n_k, 1.0, values)?)
}

/// Write `content` to `out`, or to stdout when `out` is `None`. Files are
/// written to a temporary sibling and renamed, so a failure leaves no
/// partial output behind.
pub fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
            tmp.write_all(content.as_bytes()).map_err(|e| CliError::io(path, e))?;
            tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
            tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lattice_wigner::{make_gaussian, to_density, wigner_grid, GaussianParams};

    fn sample() -> (WignerGrid, GridMeta) {
        let p = GaussianParams::new(1, 1.3, 0.7).unwrap();
        let g = wigner_grid(&to_density(&make_gaussian(&p, 0.5, 1e-16).unwrap()), 64).unwrap();
        let config = RunConfig { n_k: 64, tail_eps: 1e-16, tol: 1e-10, output_format: Format::Csv };
        let meta = GridMeta::new(config, &g, true);
        (g, meta)
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let (g, meta) = sample();
        let text = render_grid(&g, &meta, Format::Csv).unwrap();
        assert!(text.starts_with("m,k,W\n"));
        let back = parse_csv_grid(&text).unwrap();
        assert_eq!(back.values(), g.values());
        assert_eq!((back.m_min(), back.n_k()), (g.m_min(), g.n_k()));
    }

    #[test]
    fn json_round_trip_is_exact_and_keeps_spacing() {
        let (g, meta) = sample();
        let text = render_grid(&g, &meta, Format::Json).unwrap();
        let back = parse_json_grid(&text).unwrap();
        assert_eq!(back.values(), g.values());
        assert_eq!((back.m_min(), back.n_k(), back.spacing()), (g.m_min(), g.n_k(), 0.5));
    }

    #[test]
    fn rejects_malformed_grids() {
        assert!(parse_csv_grid("m,k,V\n0,-3.141592653589793,1\n").is_err());
        assert!(parse_csv_grid("m,k,W\n0,0.1,1\n0,2,1\n0,3,1\n0,-1,1\n").is_err());
        let dup = "m,k,W\n0,-3.141592653589793,1\n0,-3.141592653589793,1\n0,0.0,1\n0,1.5707963267948966,1\n";
        assert!(parse_csv_grid(dup).is_err());
        assert!(parse_json_grid(r#"{"m_values": [0], "k_values": [0.0], "values": [[1.0, 2.0]]}"#).is_err());
    }

    #[test]
    fn emit_writes_atomically() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        emit(Some(&path), "m,k,W\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "m,k,W\n");
        let missing = dir.path().join("no/such/dir/out.csv");
        assert!(matches!(emit(Some(&missing), "x"), Err(CliError::Io(_))));
        assert!(!missing.exists());
    }
}
