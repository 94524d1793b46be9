//! Numerical laboratory for mean-field Lindblad dynamics.
//!
//! The crate simulates the N-particle Lindblad flow
//!
//! ```text
//! dρ/dt = -i[Σ_l H̃_l + (1/N) Σ_{l<l'} A_{ll'}, ρ] + Σ_l (L_l ρ L_l† - ½{L_l†L_l, ρ})
//! ```
//!
//! next to its nonlinear one-body mean-field limit, and evaluates the normalized
//! relative entropy `H_N(t) = (1/N) D(ρ_t^N || m_t^{⊗N})` together with every
//! identity, inequality and counting lemma used to bound it by `O(1/N)`.
//!
//! Modules:
//!
//! - [`tensor`]: dense complex matrices, tensor embeddings, partial traces and
//!   Hermitian spectral calculus (including the Fréchet derivative of `log`).
//! - [`entropy`]: Umegaki relative entropy and the inequality toolkit.
//! - [`dynamics`]: N-body and mean-field generators, RK4 integration and the
//!   Duhamel representation of the mean-field flow.
//! - [`meanfield`]: the centered two-body observables and exponential moments.
//! - [`bounds`]: explicit constants of the entropy estimate.
//! - [`combinatorics`]: brute-force oracles for the isolated-vertex and
//!   endpoint-counting lemmas.
//! - [`random`] and [`symmetry`]: seeded test instances and permutation tools.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod combinatorics;
pub mod dynamics;
pub mod entropy;
mod error;
pub mod meanfield;
pub mod random;
pub mod symmetry;
pub mod tensor;
mod tolerances;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use tolerances::Tolerances;

pub use bounds::BoundParams;
pub use dynamics::{ModelParams, Trajectory};
pub use entropy::EntropyResult;
pub use meanfield::InteractionObservables;
pub use tensor::{DensityMatrix, QMatrix};

/// Largest Hilbert-space dimension handled by the dense kernels.
pub const MAX_DIM: usize = 4096;
