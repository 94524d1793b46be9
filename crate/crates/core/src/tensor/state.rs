use crate::{Error, Result, Tolerances, C64};

use super::spectral::herm_eigenvalues;
use super::QMatrix;

/// A Hermitian, positive semidefinite, unit-trace matrix.
///
/// The checked constructor enforces the invariants up to the tolerances;
/// `psd_floor` records the most negative eigenvalue that was accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: QMatrix,
    psd_floor: f64,
}

impl DensityMatrix {
    pub fn new(mat: QMatrix, tol: &Tolerances) -> Result<Self> {
        let residual = mat.hermitian_residual();
        if residual > tol.herm_tol {
            return Err(Error::NotHermitian(residual));
        }
        let tr = mat.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol.trace_tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let lmin = herm_eigenvalues(&mat, tol.herm_tol)?[0];
        if lmin < -tol.psd_floor {
            return Err(Error::InvalidState(format!("negative eigenvalue {lmin:e}")));
        }
        Ok(Self {
            mat,
            psd_floor: tol.psd_floor,
        })
    }

    /// Wraps a matrix already known to be a state (e.g. produced by a
    /// sanitized integrator step). No checks are made.
    pub fn new_unchecked(mat: QMatrix) -> Self {
        Self {
            mat,
            psd_floor: Tolerances::default().psd_floor,
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::new_unchecked(QMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    /// `diag(p)`; `p` must be a probability vector.
    pub fn diagonal(p: &[f64], tol: &Tolerances) -> Result<Self> {
        Self::new(QMatrix::from_diag(p), tol)
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let n = psi.len();
        Ok(Self::new_unchecked(QMatrix::from_fn(n, |i, j| {
            psi[i] * psi[j].conj() / (norm * norm)
        })))
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn as_matrix(&self) -> &QMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> QMatrix {
        self.mat
    }

    pub fn psd_floor(&self) -> f64 {
        self.psd_floor
    }
}

impl AsRef<QMatrix> for DensityMatrix {
    fn as_ref(&self) -> &QMatrix {
        &self.mat
    }
}
