//! `oracle`: Helstrom error and Chernoff exponent of two states on disk.
//!
//! State file schema (JSON):
//! `{"mode_dims": [d1, ...], "real": [[...], ...], "imag": [[...], ...]}`
//! with `imag` optional and rows of length `prod(mode_dims)`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qi_fading::oracle::linalg::CMatrix;
use qi_fading::oracle::{helstrom, qcb, DEFAULT_DEFICIT_TOL};
use qi_fading::DensityMatrix;

use crate::args::Common;
use crate::error::{CliError, CliResult};
use crate::output::{emit, sci, CurveRecord, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub mode_dims: Vec<usize>,
    pub real: Vec<Vec<f64>>,
    #[serde(default)]
    pub imag: Option<Vec<Vec<f64>>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            mode_dims: rho.mode_dims().to_vec(),
            real: rows(|z| z.re),
            imag: Some(rows(|z| z.im)),
        }
    }

    pub fn into_density(self, field: &str) -> CliResult<DensityMatrix> {
        let n: usize = self.mode_dims.iter().product();
        let shape_ok = |rows: &[Vec<f64>]| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if self.mode_dims.is_empty() || !shape_ok(&self.real) {
            return Err(CliError::invalid(field, format!("`real` must be {n} x {n}")));
        }
        if let Some(im) = &self.imag {
            if !shape_ok(im) {
                return Err(CliError::invalid(field, format!("`imag` must be {n} x {n}")));
            }
        }
        let data = CMatrix::from_fn(n, n, |i, j| {
            let im = self.imag.as_ref().map_or(0.0, |m| m[i][j]);
            Complex64::new(self.real[i][j], im)
        });
        DensityMatrix::from_matrix(data, self.mode_dims, DEFAULT_DEFICIT_TOL)
            .map_err(|e| CliError::invalid(field, e.to_string()))
    }
}

pub fn load_state(path: &Path, field: &str) -> CliResult<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let file: StateFile = serde_json::from_str(&text).map_err(|e| CliError::invalid(field, e.to_string()))?;
    file.into_density(field)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleReport {
    pub pi0: f64,
    pub helstrom_error: f64,
    pub helstrom_error_equal_priors: f64,
    pub qcb_exponent: f64,
    pub optimal_s: f64,
}

pub fn report(rho0: &DensityMatrix, rho1: &DensityMatrix, pi0: f64) -> CliResult<OracleReport> {
    let r0 = rho0.renormalized();
    let r1 = rho1.renormalized();
    let d = qcb(&r0, &r1)?;
    Ok(OracleReport {
        pi0,
        helstrom_error: helstrom(rho0, rho1, pi0)?,
        helstrom_error_equal_priors: d.helstrom_error,
        qcb_exponent: d.qcb_exponent,
        optimal_s: d.optimal_s,
    })
}

pub fn run(common: &Common, state0: &Path, state1: &Path, pi0: f64) -> CliResult<()> {
    let rho0 = load_state(state0, "state0")?;
    let rho1 = load_state(state1, "state1")?;
    let r = report(&rho0, &rho1, pi0)?;
    let rows = [
        ("helstrom_error", r.helstrom_error),
        ("helstrom_error_equal_priors", r.helstrom_error_equal_priors),
        ("qcb_exponent", r.qcb_exponent),
        ("optimal_s", r.optimal_s),
    ];
    let mut table = Table::new(vec!["metric", "value"]);
    let mut records = Vec::new();
    for (metric, v) in rows {
        table.push(vec![metric.to_string(), sci(v)]);
        records.push(CurveRecord::new("oracle", &[("pi0", pi0)], metric, v));
    }
    emit(common.format, &table, &records, common.out.as_deref())
}
