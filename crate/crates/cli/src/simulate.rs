//! One N-body run next to the mean-field flow.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use qpoc_core::bounds::{bound_constants, faithfulness_floor, k_constant, log_entropy, theorem_rhs_log, BoundParams};
use qpoc_core::dynamics::{integrate_with, IntegrateOptions, MeanFieldGenerator, NBodyGenerator, SanitizeReport};
use qpoc_core::entropy::{marginal_entropy, marginal_trace_distance, normalized_entropy};
use qpoc_core::meanfield::{exp_moment, interaction_observables};
use qpoc_core::tensor::{lambda_min, tensor_power};
use qpoc_core::DensityMatrix;

use crate::config::{SimConfig, Validated};
use crate::format::{sig12, sig12_opt};
use crate::{RunError, TOOL_VERSION};

pub const CSV_HEADER: &str = "t,h_n,bound_rhs_log,lambda_min_m,floor,trace_dist_k1,trace_dist_k2,exp_moment";

/// Absolute round-off allowance on `h_n`, the same size as the negativity
/// allowance. When the bound's numerator vanishes (no interaction) the
/// right-hand side is `log h0` of a round-off-sized `h0`, and only an
/// absolute allowance can certify `h_n ≡ 0` in floating point.
const ENTROPY_ROUNDOFF: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyRecord {
    pub t: f64,
    pub h_n: f64,
    pub bound_rhs_log: f64,
    pub lambda_min_m: f64,
    pub floor: f64,
    pub trace_dist_k1: f64,
    /// `None` when N < 2.
    pub trace_dist_k2: Option<f64>,
    pub exp_moment: Option<f64>,
}

impl EntropyRecord {
    pub fn csv_row(&self) -> String {
        [
            sig12(self.t),
            sig12(self.h_n),
            sig12(self.bound_rhs_log),
            sig12(self.lambda_min_m),
            sig12(self.floor),
            sig12(self.trace_dist_k1),
            sig12_opt(self.trace_dist_k2),
            sig12_opt(self.exp_moment),
        ]
        .join(",")
    }

    /// Violated record invariants, empty when all hold.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.h_n >= -1e-10) {
            out.push(format!("t={}: h_n = {:e} below -1e-10", self.t, self.h_n));
        }
        if !(self.lambda_min_m >= self.floor - 1e-8) {
            out.push(format!("t={}: lambda_min(m) = {:e} below floor {:e}", self.t, self.lambda_min_m, self.floor));
        }
        if !(log_entropy(self.h_n - ENTROPY_ROUNDOFF) <= self.bound_rhs_log) {
            out.push(format!("t={}: log h_n exceeds the entropy bound {}", self.t, self.bound_rhs_log));
        }
        out
    }
}

/// Marginal relative entropies kept alongside each record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginalEntropies {
    pub t: f64,
    pub k1: f64,
    pub k2: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationResult {
    pub n: usize,
    pub records: Vec<EntropyRecord>,
    pub marginals: Vec<MarginalEntropies>,
    pub bound: BoundParams,
    pub n_body_report: ReportSummary,
    pub meanfield_report: ReportSummary,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReportSummary {
    pub steps: usize,
    pub max_trace_drift: f64,
    pub max_repair: f64,
    pub clip_events: usize,
    pub renormalizations: usize,
    pub warned: bool,
}

impl From<SanitizeReport> for ReportSummary {
    fn from(r: SanitizeReport) -> Self {
        Self {
            steps: r.steps,
            max_trace_drift: r.max_trace_drift,
            max_repair: r.max_repair,
            clip_events: r.clip_events,
            renormalizations: r.renormalizations,
            warned: r.warned,
        }
    }
}

impl SimulationResult {
    pub fn final_entropy(&self) -> f64 {
        self.records.last().map(|r| r.h_n).unwrap_or(f64::NAN)
    }

    pub fn csv(&self) -> String {
        let mut s = String::with_capacity(100 * (self.records.len() + 1));
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.records {
            let _ = writeln!(s, "{}", r.csv_row());
        }
        s
    }
}

/// Constants for the configured model, with `q = q_max/2` unless given.
pub fn bound_params(v: &Validated) -> Result<BoundParams, RunError> {
    let lmin = lambda_min(v.m0.as_matrix(), v.tol.herm_tol)?;
    let k = k_constant(lmin, v.params.l_norm(), v.raw.t_end)?;
    let a_norm = v.params.a_norm();
    Ok(match v.raw.q {
        Some(q) => bound_constants(q, a_norm, k).map_err(|e| RunError::Config(e.to_string()))?,
        None => BoundParams::with_default_q(a_norm, k)?,
    })
}

/// Integrates both flows from `m0^{⊗n}` and `m0` on the same grid and
/// evaluates every record quantity.
pub fn run_simulation(v: &Validated, n: usize) -> Result<SimulationResult, RunError> {
    let bp = bound_params(v)?;
    let mut opts = IntegrateOptions::new(v.raw.t_end, v.raw.dt);
    opts.record_stride = v.raw.record_stride;
    opts.tol = v.tol;

    let mf = MeanFieldGenerator::new(&v.params);
    let mean_field = integrate_with(|m| mf.apply(m), &v.m0, &opts)?;
    let gen = NBodyGenerator::new(&v.params, n)?;
    let start = DensityMatrix::new_unchecked(tensor_power(v.m0.as_matrix(), n));
    let n_body = integrate_with(|r| gen.apply_hermitian(r), &start, &opts)?;

    let lmin0 = lambda_min(v.m0.as_matrix(), v.tol.herm_tol)?;
    let l_norm = v.params.l_norm();
    let mut records = Vec::with_capacity(n_body.len());
    let mut marginals = Vec::with_capacity(n_body.len());
    let mut h0 = 0.0;
    for (idx, (&t, rho)) in n_body.times.iter().zip(&n_body.states).enumerate() {
        let m = &mean_field.states[idx];
        let h_n = normalized_entropy(rho, m, n, &v.tol)?;
        if idx == 0 {
            h0 = h_n.max(0.0);
        }
        let k2 = if n >= 2 {
            Some((
                marginal_trace_distance(rho.as_matrix(), m.as_matrix(), n, 2)?,
                marginal_entropy(rho, m, n, 2, &v.tol)?,
            ))
        } else {
            None
        };
        let moment = if v.raw.exp_moment && n >= 2 {
            let obs = interaction_observables(v.params.a_int(), m, &v.tol)?;
            Some(exp_moment(m, &obs.a_hat, n, bp.q, &v.tol)?)
        } else {
            None
        };
        records.push(EntropyRecord {
            t,
            h_n,
            bound_rhs_log: theorem_rhs_log(t, h0, n, &bp),
            lambda_min_m: lambda_min(m.as_matrix(), v.tol.herm_tol)?,
            floor: faithfulness_floor(t, lmin0, l_norm),
            trace_dist_k1: marginal_trace_distance(rho.as_matrix(), m.as_matrix(), n, 1)?,
            trace_dist_k2: k2.map(|x| x.0),
            exp_moment: moment,
        });
        marginals.push(MarginalEntropies {
            t,
            k1: marginal_entropy(rho, m, n, 1, &v.tol)?,
            k2: k2.map(|x| x.1),
        });
    }
    let violations = records.iter().flat_map(|r| r.violations()).collect();
    Ok(SimulationResult {
        n,
        records,
        marginals,
        bound: bp,
        n_body_report: n_body.report.into(),
        meanfield_report: mean_field.report.into(),
        violations,
    })
}

#[derive(Debug, Serialize)]
struct SimulationSummary<'a> {
    tool_version: &'a str,
    n: usize,
    final_entropy: f64,
    bound: &'a BoundParams,
    n_body_sanitization: &'a ReportSummary,
    meanfield_sanitization: &'a ReportSummary,
    violations: &'a [String],
    config: &'a SimConfig,
}

/// Writes `trajectory_N<n>.csv` and `summary.json` into `out`.
pub fn write_simulation(out: &Path, result: &SimulationResult, cfg: &SimConfig) -> Result<(), RunError> {
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join(format!("trajectory_N{}.csv", result.n)), result.csv())?;
    let summary = SimulationSummary {
        tool_version: TOOL_VERSION,
        n: result.n,
        final_entropy: result.final_entropy(),
        bound: &result.bound,
        n_body_sanitization: &result.n_body_report,
        meanfield_sanitization: &result.meanfield_report,
        violations: &result.violations,
        config: cfg,
    };
    let text = serde_json::to_string_pretty(&summary).map_err(|e| RunError::Config(e.to_string()))?;
    std::fs::write(out.join("summary.json"), text + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_invariants() {
        let ok = EntropyRecord {
            t: 0.1,
            h_n: 1e-4,
            bound_rhs_log: 5.0,
            lambda_min_m: 0.3,
            floor: 0.29,
            trace_dist_k1: 0.0,
            trace_dist_k2: None,
            exp_moment: None,
        };
        assert!(ok.violations().is_empty());
        assert_eq!(ok.csv_row(), "0.1,0.0001,5,0.3,0.29,0,,");
        let bad = EntropyRecord { h_n: -1e-6, lambda_min_m: 0.1, bound_rhs_log: -1e9, ..ok };
        assert_eq!(bad.violations().len(), 2);
        let above = EntropyRecord { bound_rhs_log: -1e9, ..ok };
        assert_eq!(above.violations().len(), 1);
        // Round-off against a collapsed bound, e.g. no interaction.
        let roundoff = EntropyRecord { h_n: 3e-15, bound_rhs_log: -36.0, ..ok };
        assert!(roundoff.violations().is_empty());
        let exact = EntropyRecord { h_n: 0.0, bound_rhs_log: f64::NEG_INFINITY, ..ok };
        assert!(exact.violations().is_empty());
    }
}
