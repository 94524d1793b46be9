//! JSON configuration. Complex matrices are nested row-major arrays whose
//! entries are `[re, im]` pairs (a bare number is read as a real entry).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qpoc_core::tensor::{lambda_min, site_dim};
use qpoc_core::{DensityMatrix, ModelParams, QMatrix, Tolerances, C64};

use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(self) -> C64 {
        match self {
            Entry::Complex([re, im]) => C64::new(re, im),
            Entry::Real(re) => C64::new(re, 0.0),
        }
    }
}

pub type MatrixSpec = Vec<Vec<Entry>>;

fn default_stride() -> usize {
    10
}

fn default_true() -> bool {
    true
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub d: usize,
    pub h_tilde: MatrixSpec,
    pub a_int: MatrixSpec,
    pub l_jump: MatrixSpec,
    pub m0: MatrixSpec,
    pub t_end: f64,
    pub dt: f64,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub n_list: Option<Vec<usize>>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
    /// Evaluate `tr(m_t^{⊗N} e^{qW})` at every record.
    #[serde(default = "default_true")]
    pub exp_moment: bool,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
}

/// A configuration that passed every check, with matrices materialized.
#[derive(Debug, Clone)]
pub struct Validated {
    pub raw: SimConfig,
    pub params: ModelParams,
    pub m0: DensityMatrix,
    pub tol: Tolerances,
}

impl SimConfig {
    pub fn from_path(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))
    }

    /// Single `n`, or the first entry of `n_list`.
    pub fn single_n(&self) -> Option<usize> {
        self.n.or_else(|| self.n_list.as_ref().and_then(|l| l.first().copied()))
    }

    /// `n_list`, or `[n]`.
    pub fn all_n(&self) -> Vec<usize> {
        self.n_list.clone().or_else(|| self.n.map(|n| vec![n])).unwrap_or_default()
    }

    pub fn validate(&self) -> Result<Validated, RunError> {
        let tol = self.tolerances.unwrap_or_default();
        let d = self.d;
        if d == 0 {
            return Err(RunError::Config("d must be positive".into()));
        }
        let h = matrix("h_tilde", &self.h_tilde, d)?;
        let a = matrix("a_int", &self.a_int, d * d)?;
        let l = matrix("l_jump", &self.l_jump, d)?;
        let m = matrix("m0", &self.m0, d)?;
        let params = ModelParams::new(d, h, a, l, &tol).map_err(|e| RunError::Config(e.to_string()))?;
        let m0 = DensityMatrix::new(m, &tol).map_err(|e| RunError::Config(format!("m0: {e}")))?;
        let lmin = lambda_min(m0.as_matrix(), tol.herm_tol).map_err(|e| RunError::Config(e.to_string()))?;
        if !(lmin > 0.0) {
            return Err(RunError::Config(format!("m0 must be faithful, smallest eigenvalue {lmin:e}")));
        }
        if !(self.dt > 0.0) || !(self.t_end >= 0.0) {
            return Err(RunError::Config(format!("need dt > 0 and t_end >= 0, got dt = {}, t_end = {}", self.dt, self.t_end)));
        }
        if self.record_stride == 0 {
            return Err(RunError::Config("record_stride must be positive".into()));
        }
        if let Some(q) = self.q {
            if !(q > 0.0) {
                return Err(RunError::Config(format!("q must be positive, got {q}")));
            }
        }
        for n in self.all_n() {
            if n == 0 {
                return Err(RunError::Config("N must be at least 1".into()));
            }
            site_dim(d, n).map_err(|e| RunError::Config(format!("N = {n}: {e}")))?;
        }
        Ok(Validated { raw: self.clone(), params, m0, tol })
    }
}

fn matrix(name: &str, rows: &MatrixSpec, dim: usize) -> Result<QMatrix, RunError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(RunError::Config(format!("{name} must be a {dim}x{dim} matrix")));
    }
    let data: Vec<C64> = rows.iter().flatten().map(|e| e.value()).collect();
    if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(RunError::Config(format!("{name} has non-finite entries")));
    }
    Ok(QMatrix::from_vec(dim, data)?)
}

/// Encodes a matrix in the configuration format.
pub fn encode_matrix(m: &QMatrix) -> MatrixSpec {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| Entry::Complex([m[(i, j)].re, m[(i, j)].im])).collect())
        .collect()
}
