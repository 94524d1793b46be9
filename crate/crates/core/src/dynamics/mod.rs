//! N-body and mean-field Lindblad flows.
//!
//! The N-body generator acts on `d^N`-dimensional states as
//!
//! ```text
//! 𝓛ᴺ(ρ) = -i[Hᴺ, ρ] + Σ_l (L_l ρ L_l† - ½{L_l†L_l, ρ}),
//! Hᴺ    = Σ_l H̃_l + (1/N) Σ_{l<l'} A_{ll'},
//! ```
//!
//! and the mean-field flow on one-body states as
//! `ṁ = -i[H̃ + A^m, m] + L m L† - ½{L†L, m}` with `A^m = tr₂((1⊗m)A)`.

mod duhamel;
mod generator;
mod integrate;
mod model;

pub use duhamel::{duhamel_decompose, DuhamelTrajectory};
pub use generator::{
    a_sigma, defect_identity_residual, defect_operator, lindblad_rhs_n, meanfield_rhs,
    meanfield_rhs_partial_trace, n_body_hamiltonian, product_rule_derivative, MeanFieldGenerator,
    NBodyGenerator,
};
pub use integrate::{
    evolve, integrate, integrate_with, rk4_step, step_count, IntegrateOptions, SanitizeReport,
    Trajectory,
};
pub use model::ModelParams;
