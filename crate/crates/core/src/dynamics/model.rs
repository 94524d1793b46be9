use crate::tensor::{op_norm, swap_operator, QMatrix};
use crate::{Error, Result, Tolerances};

/// One-body Hamiltonian `H̃`, swap-symmetric two-body interaction `A` and
/// jump operator `L` on local dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    d: usize,
    h_tilde: QMatrix,
    a_int: QMatrix,
    l_jump: QMatrix,
}

impl ModelParams {
    pub fn new(d: usize, h_tilde: QMatrix, a_int: QMatrix, l_jump: QMatrix, tol: &Tolerances) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("local dimension must be positive".into()));
        }
        for (m, expected) in [(&h_tilde, d), (&a_int, d * d), (&l_jump, d)] {
            if m.dim() != expected {
                return Err(Error::DimensionMismatch { expected, got: m.dim() });
            }
        }
        let r = h_tilde.hermitian_residual().max(a_int.hermitian_residual());
        if r > tol.herm_tol {
            return Err(Error::NotHermitian(r));
        }
        let s = swap_operator(d);
        let asym = s.matmul(&a_int).matmul(&s).max_abs_diff(&a_int);
        if asym > tol.herm_tol {
            return Err(Error::InvalidArgument(format!(
                "interaction is not swap-symmetric (residual {asym:e})"
            )));
        }
        Ok(Self::new_unchecked(d, h_tilde, a_int, l_jump))
    }

    pub fn new_unchecked(d: usize, h_tilde: QMatrix, a_int: QMatrix, l_jump: QMatrix) -> Self {
        Self { d, h_tilde, a_int, l_jump }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn h_tilde(&self) -> &QMatrix {
        &self.h_tilde
    }

    pub fn a_int(&self) -> &QMatrix {
        &self.a_int
    }

    pub fn l_jump(&self) -> &QMatrix {
        &self.l_jump
    }

    /// `L†L`.
    pub fn l_dag_l(&self) -> QMatrix {
        self.l_jump.adjoint_matmul(&self.l_jump)
    }

    /// Operator norm of `A`.
    pub fn a_norm(&self) -> f64 {
        op_norm(&self.a_int).unwrap_or(f64::NAN)
    }

    /// Operator norm of `L`.
    pub fn l_norm(&self) -> f64 {
        op_norm(&self.l_jump).unwrap_or(f64::NAN)
    }
}
