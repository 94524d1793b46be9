use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the kernels. Every field can be overridden
/// from a configuration file; missing fields keep their defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Max entrywise |M_ij - conj(M_ji)| accepted as Hermitian.
    pub herm_tol: f64,
    /// Max |tr(ρ) - 1| accepted for a state.
    pub trace_tol: f64,
    /// Reconstruction residual for spectral calculus.
    pub recon_tol: f64,
    /// Eigenvalues below this make a state non-faithful for `log`.
    pub eig_floor: f64,
    /// Most negative eigenvalue accepted by the density-matrix check.
    pub psd_floor: f64,
    /// Eigenvalues below this count as null space in the support check.
    pub supp_tol: f64,
    /// Negative eigenvalues below `-psd_clip` are clipped after a step.
    pub psd_clip: f64,
    /// Repairs larger than this are flagged on the trajectory.
    pub sanitize_warn: f64,
    /// Repairs larger than this abort the integration.
    pub sanitize_fail: f64,
    /// Duhamel reconstruction residual at dt = 1e-3.
    pub duhamel_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm_tol: 1e-10,
            trace_tol: 1e-9,
            recon_tol: 1e-10,
            eig_floor: 1e-14,
            psd_floor: 1e-9,
            supp_tol: 1e-12,
            psd_clip: 1e-10,
            sanitize_warn: 1e-7,
            sanitize_fail: 1e-4,
            duhamel_tol: 1e-5,
        }
    }
}
