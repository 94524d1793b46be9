//! Runs one simulation per N and fits the decay rate of the final entropy.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{SimConfig, Validated};
use crate::format::sig12;
use crate::simulate::{run_simulation, SimulationResult, CSV_HEADER};
use crate::{RunError, TOOL_VERSION};

/// Least-squares line `y = slope·x + intercept`; `None` for fewer than two
/// distinct abscissae.
pub fn fit_line(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Fit of `log H_N` against `log N` over the positive entries.
pub fn fit_rate(entropies: &BTreeMap<usize, f64>) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = entropies
        .iter()
        .filter(|(_, &h)| h > 0.0)
        .map(|(&n, &h)| ((n as f64).ln(), h.ln()))
        .collect();
    fit_line(&pts)
}

#[derive(Debug, Clone, Serialize)]
pub struct RateFit {
    pub t: f64,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Sorted by N.
    pub runs: Vec<SimulationResult>,
    pub per_n_final_entropy: BTreeMap<usize, f64>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// Fits at every shared record time (reported, not gated).
    pub intermediate_fits: Vec<RateFit>,
}

impl SweepResult {
    pub fn strictly_decreasing(&self) -> bool {
        let v: Vec<f64> = self.per_n_final_entropy.values().copied().collect();
        v.windows(2).all(|w| w[1] < w[0])
    }

    pub fn violations(&self) -> Vec<String> {
        self.runs
            .iter()
            .flat_map(|r| r.violations.iter().map(move |v| format!("N={}: {v}", r.n)))
            .collect()
    }

    pub fn combined_csv(&self) -> String {
        let mut s = format!("n,{CSV_HEADER}\n");
        for run in &self.runs {
            for r in &run.records {
                s.push_str(&format!("{},{}\n", run.n, r.csv_row()));
            }
        }
        s
    }
}

pub fn run_sweep(v: &Validated, n_list: &[usize]) -> Result<SweepResult, RunError> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return Err(RunError::Config("empty N list".into()));
    }
    let runs: Vec<SimulationResult> = ns
        .par_iter()
        .map(|&n| run_simulation(v, n))
        .collect::<Result<_, _>>()?;
    let per_n_final_entropy: BTreeMap<usize, f64> = runs.iter().map(|r| (r.n, r.final_entropy())).collect();
    let fit = fit_rate(&per_n_final_entropy);
    let grid_len = runs.iter().map(|r| r.records.len()).min().unwrap_or(0);
    let intermediate_fits = (1..grid_len)
        .map(|i| {
            let at: BTreeMap<usize, f64> = runs.iter().map(|r| (r.n, r.records[i].h_n)).collect();
            let f = fit_rate(&at);
            RateFit { t: runs[0].records[i].t, slope: f.map(|x| x.0), intercept: f.map(|x| x.1) }
        })
        .collect();
    Ok(SweepResult {
        runs,
        per_n_final_entropy,
        slope: fit.map(|f| f.0),
        intercept: fit.map(|f| f.1),
        intermediate_fits,
    })
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    tool_version: &'a str,
    per_n_final_entropy: &'a BTreeMap<usize, f64>,
    slope: Option<f64>,
    intercept: Option<f64>,
    strictly_decreasing: bool,
    intermediate_fits: &'a [RateFit],
    violations: Vec<String>,
    config: &'a SimConfig,
}

/// Writes per-N trajectories, `sweep.csv` and `summary.json` into `out`.
pub fn write_sweep(out: &Path, result: &SweepResult, cfg: &SimConfig) -> Result<(), RunError> {
    std::fs::create_dir_all(out)?;
    for run in &result.runs {
        std::fs::write(out.join(format!("trajectory_N{}.csv", run.n)), run.csv())?;
    }
    std::fs::write(out.join("sweep.csv"), result.combined_csv())?;
    let summary = SweepSummary {
        tool_version: TOOL_VERSION,
        per_n_final_entropy: &result.per_n_final_entropy,
        slope: result.slope,
        intercept: result.intercept,
        strictly_decreasing: result.strictly_decreasing(),
        intermediate_fits: &result.intermediate_fits,
        violations: result.violations(),
        config: cfg,
    };
    let text = serde_json::to_string_pretty(&summary).map_err(|e| RunError::Config(e.to_string()))?;
    std::fs::write(out.join("summary.json"), text + "\n")?;
    Ok(())
}

/// Human-readable table of the finals and the fit.
pub fn describe(result: &SweepResult) -> String {
    let mut s = String::from("N,h_n_final\n");
    for (n, h) in &result.per_n_final_entropy {
        s.push_str(&format!("{n},{}\n", sig12(*h)));
    }
    match (result.slope, result.intercept) {
        (Some(b), Some(a)) => s.push_str(&format!("slope {}, intercept {}\n", sig12(b), sig12(a))),
        _ => s.push_str("slope null (fewer than two usable N)\n"),
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit() {
        let (b, a) = fit_line(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]).unwrap();
        assert!((b - 2.0).abs() < 1e-14 && (a - 1.0).abs() < 1e-14);
        assert!(fit_line(&[(1.0, 1.0)]).is_none());
        assert!(fit_line(&[(1.0, 1.0), (1.0, 2.0)]).is_none());
    }

    #[test]
    fn power_law_rate() {
        let m: BTreeMap<usize, f64> = (2..=8).map(|n| (n, 0.3 / n as f64)).collect();
        let (b, _) = fit_rate(&m).unwrap();
        assert!((b + 1.0).abs() < 1e-12);
        let single: BTreeMap<usize, f64> = [(2, 0.1)].into_iter().collect();
        assert!(fit_rate(&single).is_none());
    }
}
