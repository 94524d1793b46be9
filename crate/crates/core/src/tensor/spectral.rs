//! Hermitian spectral calculus on top of faer's self-adjoint eigensolver.

use faer::linalg::solvers::Solve;
use faer::Side;

use crate::{Error, Result, Tolerances, C64};

use super::{DensityMatrix, QMatrix};

/// Eigendecomposition `m = U diag(λ) U†` of a Hermitian matrix, eigenvalues
/// ascending.
///
/// Each eigenvector's phase is fixed so that its largest-magnitude component
/// is real and positive, which makes the factorization deterministic.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: QMatrix,
}

impl HermEig {
    /// `U diag(f(λ)) U†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> QMatrix {
        let n = self.values.len();
        let u = &self.vectors;
        let scaled = QMatrix::from_fn(n, |i, j| u[(i, j)] * f(self.values[j]));
        scaled.matmul_adjoint(u)
    }

    pub fn reconstruct(&self) -> QMatrix {
        self.apply(|x| x)
    }

    pub fn lambda_min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn lambda_max(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    /// `U† x U`, i.e. `x` expressed in the eigenbasis.
    pub fn to_eigenbasis(&self, x: &QMatrix) -> QMatrix {
        self.vectors.adjoint_matmul(x).matmul(&self.vectors)
    }

    /// `U y U†`, the inverse of [`HermEig::to_eigenbasis`].
    pub fn from_eigenbasis(&self, y: &QMatrix) -> QMatrix {
        self.vectors.matmul(y).matmul_adjoint(&self.vectors)
    }
}

/// Hermitian eigendecomposition. Input must be Hermitian within `herm_tol`;
/// it is symmetrized as `(m + m†)/2` before factorization.
pub fn herm_eig(m: &QMatrix, herm_tol: f64) -> Result<HermEig> {
    let residual = m.hermitian_residual();
    if residual > herm_tol {
        return Err(Error::NotHermitian(residual));
    }
    let sym = m.hermitian_part();
    let evd = sym
        .as_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::EigenFailure)?;
    let n = m.dim();
    let values: Vec<f64> = (0..n).map(|i| evd.S()[i].re).collect();
    let mut vectors = QMatrix::from_faer(evd.U());
    fix_phases(&mut vectors);
    Ok(HermEig { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn herm_eigenvalues(m: &QMatrix, herm_tol: f64) -> Result<Vec<f64>> {
    let residual = m.hermitian_residual();
    if residual > herm_tol {
        return Err(Error::NotHermitian(residual));
    }
    m.hermitian_part()
        .as_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::EigenFailure)
}

fn fix_phases(u: &mut QMatrix) {
    let n = u.dim();
    for col in 0..n {
        let mut best = 0;
        let mut best_abs = -1.0;
        for row in 0..n {
            let a = u[(row, col)].norm();
            if a > best_abs {
                best_abs = a;
                best = row;
            }
        }
        if best_abs <= 0.0 {
            continue;
        }
        let phase = u[(best, col)].conj() / best_abs;
        for row in 0..n {
            u[(row, col)] *= phase;
        }
        u[(best, col)] = C64::new(best_abs, 0.0);
    }
}

/// Matrix logarithm of a Hermitian matrix whose eigenvalues all exceed `eig_floor`.
pub fn herm_log(m: &QMatrix, eig_floor: f64, herm_tol: f64) -> Result<QMatrix> {
    let eig = herm_eig(m, herm_tol)?;
    if eig.lambda_min() < eig_floor {
        return Err(Error::NotFaithful(eig.lambda_min()));
    }
    Ok(eig.apply(f64::ln))
}

/// Matrix exponential of a Hermitian matrix.
pub fn herm_exp(m: &QMatrix, herm_tol: f64) -> Result<QMatrix> {
    Ok(herm_eig(m, herm_tol)?.apply(f64::exp))
}

/// Divided difference of `log` at `(a, b)`, with the confluent limit `1/a`
/// when the two points coincide up to `degenerate` absolute spacing.
#[inline]
fn log_divided_difference(a: f64, b: f64, degenerate: f64) -> f64 {
    let gap = a - b;
    if gap.abs() < degenerate {
        1.0 / a
    } else {
        (gap / b).ln_1p() / gap
    }
}

/// Fréchet derivative of the matrix logarithm at a faithful state σ, applied to `x`:
///
/// ```text
/// T_σ(X) = ∫_0^∞ (σ + s)^{-1} X (σ + s)^{-1} ds
/// ```
///
/// evaluated in σ's eigenbasis, where entry `(i, j)` of `U† X U` is
/// multiplied by `(log λ_i - log λ_j)/(λ_i - λ_j)`.
pub fn frechet_log(sigma: &DensityMatrix, x: &QMatrix, tol: &Tolerances) -> Result<QMatrix> {
    let eig = herm_eig(sigma.as_matrix(), tol.herm_tol)?;
    frechet_log_with(&eig, x, tol.eig_floor)
}

/// [`frechet_log`] with a precomputed eigendecomposition.
pub fn frechet_log_with(eig: &HermEig, x: &QMatrix, eig_floor: f64) -> Result<QMatrix> {
    if x.dim() != eig.values.len() {
        return Err(Error::DimensionMismatch {
            expected: eig.values.len(),
            got: x.dim(),
        });
    }
    if eig.lambda_min() < eig_floor {
        return Err(Error::NotFaithful(eig.lambda_min()));
    }
    let lam = &eig.values;
    let degenerate = 1e-12 * eig.lambda_max();
    let mut y = eig.to_eigenbasis(x);
    let n = lam.len();
    for i in 0..n {
        for j in 0..n {
            y[(i, j)] *= log_divided_difference(lam[i], lam[j], degenerate);
        }
    }
    Ok(eig.from_eigenbasis(&y))
}

/// Trace norm, operator norm and (for Hermitian input) smallest eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralFunctionals {
    pub trace_norm: f64,
    pub op_norm: f64,
    pub lambda_min: Option<f64>,
}

/// Hermitian input goes through the eigenvalues; anything else through the
/// singular values, and then `lambda_min` is `None`.
pub fn spectral_functionals(m: &QMatrix, herm_tol: f64) -> Result<SpectralFunctionals> {
    if m.is_hermitian(herm_tol) {
        let values = herm_eigenvalues(m, herm_tol)?;
        let trace_norm = values.iter().map(|x| x.abs()).sum();
        let op_norm = values.iter().map(|x| x.abs()).fold(0.0, f64::max);
        Ok(SpectralFunctionals {
            trace_norm,
            op_norm,
            lambda_min: values.first().copied(),
        })
    } else {
        let sv = singular_values(m)?;
        Ok(SpectralFunctionals {
            trace_norm: sv.iter().sum(),
            op_norm: sv.first().copied().unwrap_or(0.0),
            lambda_min: None,
        })
    }
}

/// Singular values, nonincreasing.
pub fn singular_values(m: &QMatrix) -> Result<Vec<f64>> {
    m.as_faer()
        .singular_values()
        .map_err(|_| Error::Numerical("SVD did not converge".into()))
}

pub fn trace_norm(m: &QMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Spectral norm `sup_{|ψ|≤1} |Oψ|`.
pub fn op_norm(m: &QMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Smallest eigenvalue; errors on non-Hermitian input.
pub fn lambda_min(m: &QMatrix, herm_tol: f64) -> Result<f64> {
    Ok(herm_eigenvalues(m, herm_tol)?[0])
}

/// `σ_max / σ_min`.
pub fn condition_number(m: &QMatrix) -> Result<f64> {
    let sv = singular_values(m)?;
    let max = sv.first().copied().unwrap_or(0.0);
    let min = sv.last().copied().unwrap_or(0.0);
    Ok(if min > 0.0 { max / min } else { f64::INFINITY })
}

/// Solves `a · x = b` by LU with partial pivoting.
pub fn solve(a: &QMatrix, b: &QMatrix) -> Result<QMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let lu = a.as_faer().partial_piv_lu();
    let x = lu.solve(b.as_faer());
    Ok(QMatrix::from_faer(x.as_ref()))
}
