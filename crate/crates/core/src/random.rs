//! Seeded random instances.
//!
//! Every draw uses a `ChaCha8Rng` stream seeded with `seed_from_u64(seed)`, and
//! complex Gaussian entries take independent standard normal real and
//! imaginary parts. The same seed always reproduces the same matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dynamics::ModelParams;
use crate::tensor::{swap_operator, DensityMatrix, QMatrix};
use crate::C64;

pub type Prng = ChaCha8Rng;

pub fn rng(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. complex standard normal entries.
pub fn gaussian_matrix(rng: &mut impl Rng, d: usize) -> QMatrix {
    QMatrix::from_fn(d, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `(G + G†)/2`.
pub fn hermitian_from(rng: &mut impl Rng, d: usize) -> QMatrix {
    gaussian_matrix(rng, d).hermitian_part()
}

/// `G G† / tr(G G†)`.
pub fn state_from(rng: &mut impl Rng, d: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, d);
    let gg = g.matmul_adjoint(&g).hermitian_part();
    let tr = gg.trace().re;
    DensityMatrix::new_unchecked(gg.scale_real(1.0 / tr))
}

pub fn random_hermitian(d: usize, seed: u64) -> QMatrix {
    hermitian_from(&mut rng(seed), d)
}

pub fn random_state(d: usize, seed: u64) -> DensityMatrix {
    state_from(&mut rng(seed), d)
}

/// Random swap-symmetric two-body operator `(B + S B S)/2` on `d²`.
pub fn swap_symmetric_from(rng: &mut impl Rng, d: usize) -> QMatrix {
    let b = hermitian_from(rng, d * d);
    let s = swap_operator(d);
    (&b + &s.matmul(&b).matmul(&s)).scale_real(0.5)
}

/// Random model with Hermitian `H̃`, swap-symmetric `A` and Gaussian `L`,
/// each rescaled to operator norm at most `scale`.
pub fn random_model(d: usize, seed: u64, scale: f64) -> ModelParams {
    let mut r = rng(seed);
    let h = hermitian_from(&mut r, d);
    let a = swap_symmetric_from(&mut r, d);
    let l = gaussian_matrix(&mut r, d);
    let normalize = |m: QMatrix| {
        let n = crate::tensor::op_norm(&m).unwrap_or(1.0);
        if n > 0.0 {
            m.scale_real(scale / n)
        } else {
            m
        }
    };
    ModelParams::new_unchecked(d, normalize(h), normalize(a), normalize(l))
}
