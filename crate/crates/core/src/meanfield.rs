//! Centered two-body observables along the mean-field flow.
//!
//! With `Λ = log m`:
//!
//! ```text
//! a = -i[A, Λ⊗1 + 1⊗Λ],   b = tr₂((1⊗m) a),   â = a - b⊗1 - 1⊗b,
//! W = (1/N) Σ_{i<j} â_ij,   U = W / N.
//! ```

use crate::dynamics::a_sigma;
use crate::tensor::{
    contract_first, contract_second, embed, herm_eig, kron, op_norm, partial_trace, site_dim,
    tensor_power, DensityMatrix, QMatrix,
};
use crate::{Error, Result, Tolerances, C64};

#[derive(Debug, Clone)]
pub struct InteractionObservables {
    pub a: QMatrix,
    pub b: QMatrix,
    pub a_hat: QMatrix,
    pub lambda: QMatrix,
}

/// Residuals of the identities the observables must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableResiduals {
    /// `‖b - (-i[A^m, Λ])‖_max`
    pub b_identification: f64,
    /// `‖tr₂((1⊗m)â)‖_max`
    pub centering_second: f64,
    /// `‖tr₁((m⊗1)â)‖_max`
    pub centering_first: f64,
    /// `|tr(m b)|`
    pub trace_mb: f64,
    /// Largest anti-Hermitian residual among `a`, `b`, `â`.
    pub hermiticity: f64,
    /// `‖â‖ - ‖a‖ - 2‖b‖`, nonpositive when the triangle bound holds.
    pub norm_excess: f64,
}

impl ObservableResiduals {
    pub fn max_identity_residual(&self) -> f64 {
        self.b_identification
            .max(self.centering_second)
            .max(self.centering_first)
            .max(self.trace_mb)
    }
}

pub fn interaction_observables(a_int: &QMatrix, m: &DensityMatrix, tol: &Tolerances) -> Result<InteractionObservables> {
    let d = m.dim();
    if a_int.dim() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, got: a_int.dim() });
    }
    let eig = herm_eig(m.as_matrix(), tol.herm_tol)?;
    if eig.lambda_min() < tol.eig_floor {
        return Err(Error::NotFaithful(eig.lambda_min()));
    }
    let lambda = eig.apply(f64::ln);
    let one = QMatrix::identity(d);
    let lift = &kron(&lambda, &one) + &kron(&one, &lambda);
    let a = a_int.commutator(&lift).scale(C64::new(0.0, -1.0));
    let b = contract_second(&a, m.as_matrix())?;
    let a_hat = &(&a - &kron(&b, &one)) - &kron(&one, &b);
    Ok(InteractionObservables { a, b, a_hat, lambda })
}

impl InteractionObservables {
    pub fn residuals(&self, a_int: &QMatrix, m: &DensityMatrix) -> Result<ObservableResiduals> {
        let mm = m.as_matrix();
        let am = a_sigma(a_int, mm)?;
        let b_ref = am.commutator(&self.lambda).scale(C64::new(0.0, -1.0));
        Ok(ObservableResiduals {
            b_identification: self.b.max_abs_diff(&b_ref),
            centering_second: contract_second(&self.a_hat, mm)?.max_abs(),
            centering_first: contract_first(&self.a_hat, mm)?.max_abs(),
            trace_mb: mm.trace_product(&self.b).norm(),
            hermiticity: self
                .a
                .hermitian_residual()
                .max(self.b.hermitian_residual())
                .max(self.a_hat.hermitian_residual()),
            norm_excess: op_norm(&self.a_hat)? - op_norm(&self.a)? - 2.0 * op_norm(&self.b)?,
        })
    }
}

/// `W = (1/N) Σ_{i<j} â_ij` on `d^n`.
pub fn build_w(a_hat: &QMatrix, n: usize, d: usize) -> Result<QMatrix> {
    if a_hat.dim() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, got: a_hat.dim() });
    }
    let dim = site_dim(d, n)?;
    let mut w = QMatrix::zeros(dim);
    let inv_n = C64::new(1.0 / n as f64, 0.0);
    for i in 1..=n {
        for j in i + 1..=n {
            w.axpy(inv_n, &embed(a_hat, &[i, j], n, d)?);
        }
    }
    Ok(w)
}

/// `tr(m^{⊗n} e^{qW})` for several `q` at once, from one eigendecomposition of `W`.
pub fn exp_moments(m: &DensityMatrix, a_hat: &QMatrix, n: usize, qs: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    let d = m.dim();
    let w = build_w(a_hat, n, d)?;
    let eig = herm_eig(&w, tol.herm_tol.max(1e-9))?;
    let big_m = tensor_power(m.as_matrix(), n);
    // weights_k = ⟨u_k| M |u_k⟩
    let mu = big_m.matmul(&eig.vectors);
    let u = &eig.vectors;
    let dim = w.dim();
    let weights: Vec<f64> = (0..dim)
        .map(|k| (0..dim).map(|i| (u[(i, k)].conj() * mu[(i, k)]).re).sum())
        .collect();
    Ok(qs
        .iter()
        .map(|&q| eig.values.iter().zip(&weights).map(|(l, w)| w * (q * l).exp()).sum())
        .collect())
}

/// `tr(m^{⊗n} e^{qW})`.
pub fn exp_moment(m: &DensityMatrix, a_hat: &QMatrix, n: usize, q: f64, tol: &Tolerances) -> Result<f64> {
    Ok(exp_moments(m, a_hat, n, &[q], tol)?[0])
}

/// `tr(m^{⊗n} W^k)`.
pub fn moment_term(m: &DensityMatrix, a_hat: &QMatrix, n: usize, k: usize) -> Result<f64> {
    let w = build_w(a_hat, n, m.dim())?;
    let mut x = tensor_power(m.as_matrix(), n);
    for _ in 0..k {
        x = x.matmul(&w);
    }
    Ok(x.trace().re)
}

/// Both sides of `tr(ρᴺ U) = ((N-1)/2N) tr(ρ^{N:(2)} â)` for exchangeable `ρᴺ`.
pub fn exchangeability_bridge(rho_n: &DensityMatrix, a_hat: &QMatrix, n: usize, d: usize) -> Result<(f64, f64)> {
    let u = build_w(a_hat, n, d)?.scale_real(1.0 / n as f64);
    let lhs = rho_n.as_matrix().trace_product(&u).re;
    let pair = partial_trace(rho_n.as_matrix(), &[1, 2], n, d)?;
    let rhs = (n as f64 - 1.0) / (2.0 * n as f64) * pair.trace_product(a_hat).re;
    Ok((lhs, rhs))
}
