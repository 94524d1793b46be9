use faer::Side;

use crate::tensor::{herm_eig, DensityMatrix, QMatrix};
use crate::{Error, Result, Tolerances, C64};

/// One classical RK4 step of size `h`.
pub fn rk4_step(f: &impl Fn(&QMatrix) -> QMatrix, y: &QMatrix, h: f64) -> QMatrix {
    let half = C64::new(0.5 * h, 0.0);
    let k1 = f(y);
    let mut probe = y.clone();
    probe.axpy(half, &k1);
    let k2 = f(&probe);
    probe = y.clone();
    probe.axpy(half, &k2);
    let k3 = f(&probe);
    probe = y.clone();
    probe.axpy(C64::new(h, 0.0), &k3);
    let k4 = f(&probe);
    let mut out = y.clone();
    out.axpy(C64::new(h / 6.0, 0.0), &k1);
    out.axpy(C64::new(h / 3.0, 0.0), &k2);
    out.axpy(C64::new(h / 3.0, 0.0), &k3);
    out.axpy(C64::new(h / 6.0, 0.0), &k4);
    out
}

/// Number of steps of size `dt` covering `[0, t_end]`, the last one possibly
/// partial.
pub fn step_count(t_end: f64, dt: f64) -> usize {
    if t_end <= 0.0 {
        return 0;
    }
    ((t_end / dt) - 1e-9).ceil().max(1.0) as usize
}

/// Evolves `y` for `duration` with uniform RK4 substeps no longer than `max_dt`.
/// No sanitization.
pub fn evolve(f: &impl Fn(&QMatrix) -> QMatrix, y: &QMatrix, duration: f64, max_dt: f64) -> QMatrix {
    let steps = step_count(duration, max_dt);
    let mut y = y.clone();
    if steps == 0 {
        return y;
    }
    let h = duration / steps as f64;
    for _ in 0..steps {
        y = rk4_step(f, &y, h);
    }
    y
}

#[derive(Debug, Clone, Copy)]
pub struct IntegrateOptions {
    pub t_end: f64,
    pub dt: f64,
    /// Record every `record_stride`-th step; the final time is always recorded.
    pub record_stride: usize,
    /// Compute `λ_min` of every step before repair (costs one eigensolve per step).
    pub track_lambda_min: bool,
    pub tol: Tolerances,
}

impl IntegrateOptions {
    pub fn new(t_end: f64, dt: f64) -> Self {
        Self {
            t_end,
            dt,
            record_stride: 1,
            track_lambda_min: false,
            tol: Tolerances::default(),
        }
    }
}

/// What the post-step repair had to do along a trajectory.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SanitizeReport {
    pub steps: usize,
    /// Largest `|tr ρ - 1|` seen before renormalization.
    pub max_trace_drift: f64,
    /// Smallest eigenvalue seen before clipping, when one was computed.
    pub min_eigenvalue: Option<f64>,
    /// Largest single repair (clipped eigenvalue mass or trace correction).
    pub max_repair: f64,
    pub clip_events: usize,
    pub renormalizations: usize,
    /// Some repair exceeded `sanitize_warn`.
    pub warned: bool,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Number of sites (1 for the mean-field flow).
    pub n_sites: usize,
    pub report: SanitizeReport,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// RK4 with fixed step `dt` and sanitization after every step; every step is
/// recorded.
pub fn integrate(
    rhs: impl Fn(&QMatrix) -> QMatrix,
    state0: &DensityMatrix,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    integrate_with(rhs, state0, &IntegrateOptions::new(t_end, dt))
}

pub fn integrate_with(
    rhs: impl Fn(&QMatrix) -> QMatrix,
    state0: &DensityMatrix,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    if !(opts.dt > 0.0) || !(opts.t_end >= 0.0) || opts.record_stride == 0 {
        return Err(Error::InvalidArgument(format!(
            "need dt > 0, t_end >= 0 and a positive stride (dt = {}, t_end = {}, stride = {})",
            opts.dt, opts.t_end, opts.record_stride
        )));
    }
    let steps = step_count(opts.t_end, opts.dt);
    let mut report = SanitizeReport::default();
    let mut times = vec![0.0];
    let mut states = vec![state0.clone()];
    let mut y = state0.as_matrix().clone();
    let mut t = 0.0;
    for k in 1..=steps {
        let t_next = if k == steps { opts.t_end } else { k as f64 * opts.dt };
        y = rk4_step(&rhs, &y, t_next - t);
        y = sanitize(y, &opts.tol, opts.track_lambda_min, &mut report)?;
        t = t_next;
        if k % opts.record_stride == 0 || k == steps {
            times.push(t);
            states.push(DensityMatrix::new_unchecked(y.clone()));
        }
    }
    report.steps = steps;
    Ok(Trajectory {
        times,
        states,
        n_sites: 1,
        report,
    })
}

/// Re-Hermitize, clip eigenvalues below `-psd_clip`, renormalize when the
/// trace drifted by more than `trace_tol`.
fn sanitize(y: QMatrix, tol: &Tolerances, track: bool, report: &mut SanitizeReport) -> Result<QMatrix> {
    let mut h = y.hermitian_part();
    let drift = (h.trace().re - 1.0).abs();
    report.max_trace_drift = report.max_trace_drift.max(drift);
    let mut repair: f64 = 0.0;

    if track || !psd_within(&h, tol.psd_clip) {
        let eig = herm_eig(&h, f64::INFINITY)?;
        let lmin = eig.lambda_min();
        report.min_eigenvalue = Some(report.min_eigenvalue.map_or(lmin, |m| m.min(lmin)));
        if lmin < -tol.psd_clip {
            let clipped: f64 = eig.values.iter().filter(|&&x| x < -tol.psd_clip).map(|x| -x).sum();
            repair = repair.max(clipped);
            h = eig.apply(|x| if x < -tol.psd_clip { 0.0 } else { x });
            report.clip_events += 1;
        }
    }

    let tr = h.trace().re;
    let drift = (tr - 1.0).abs();
    if drift > tol.trace_tol {
        if !(tr > 0.0) {
            return Err(Error::Numerical(format!("trace collapsed to {tr:e}")));
        }
        h = h.scale_real(1.0 / tr);
        repair = repair.max(drift);
        report.renormalizations += 1;
    }

    if !repair.is_finite() || repair > tol.sanitize_fail {
        return Err(Error::Numerical(format!(
            "state repair of {repair:e} exceeds the failure threshold {:e}",
            tol.sanitize_fail
        )));
    }
    report.max_repair = report.max_repair.max(repair);
    if repair > tol.sanitize_warn {
        report.warned = true;
    }
    Ok(h)
}

/// True when `h + shift·1` admits a Cholesky factorization, i.e. `λ_min(h) > -shift`.
fn psd_within(h: &QMatrix, shift: f64) -> bool {
    let mut shifted = h.clone();
    for i in 0..h.dim() {
        shifted[(i, i)] += C64::new(shift, 0.0);
    }
    shifted.as_faer().llt(Side::Lower).is_ok()
}
