//! Dense complex matrices, tensor-product site manipulation and Hermitian
//! spectral calculus.
//!
//! Sites are numbered from 1, and site 1 is the most significant digit of the
//! row-major basis index, so `kron(a, b)` acts as `a` on site 1.

mod matrix;
pub mod operators;
mod sites;
mod spectral;
mod state;

pub use matrix::QMatrix;
pub use sites::{
    contract_first, contract_second, embed, kron, local_sandwich, partial_trace, permute_sites, site_count, site_dim,
    swap_operator, tensor_power,
};
pub use spectral::{
    condition_number, frechet_log, frechet_log_with, herm_eig, herm_eigenvalues, herm_exp,
    herm_log, lambda_min, op_norm, singular_values, solve, spectral_functionals, trace_norm,
    HermEig, SpectralFunctionals,
};
pub use state::DensityMatrix;
