//! Fixtures shared by the benchmarks.

use qpoc_core::random::random_model;
use qpoc_core::tensor::tensor_power;
use qpoc_core::{DensityMatrix, ModelParams};

/// A random qubit model and the product state `m^{⊗n}` it starts from.
pub fn fixture(n: usize, seed: u64) -> (ModelParams, DensityMatrix, DensityMatrix) {
    let p = random_model(2, seed, 1.0);
    let m = qpoc_core::random::random_state(2, seed + 1);
    let rho = DensityMatrix::new_unchecked(tensor_power(m.as_matrix(), n));
    (p, m, rho)
}
