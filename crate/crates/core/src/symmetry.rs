//! Site permutations and exchangeability.

use crate::tensor::{permute_sites, DensityMatrix, QMatrix};
use crate::{Error, Result};

/// Largest `n` accepted by [`symmetrize`] (`n!` conjugations).
pub const MAX_SYMMETRIZE_SITES: usize = 6;

/// All permutations of `1..=n` in lexicographic order, as one-line images.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (1..=n).collect();
    let mut out = vec![current.clone()];
    // Narayana's next-permutation.
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// `(1/n!) Σ_π P_π m P_π†`.
pub fn symmetrize_matrix(m: &QMatrix, n: usize, d: usize) -> Result<QMatrix> {
    if n > MAX_SYMMETRIZE_SITES {
        return Err(Error::InvalidArgument(format!(
            "symmetrization over {n} sites exceeds the limit of {MAX_SYMMETRIZE_SITES}"
        )));
    }
    let perms = permutations(n);
    let mut acc = QMatrix::zeros(m.dim());
    for p in &perms {
        acc += &permute_sites(m, p, n, d)?;
    }
    Ok(acc.scale_real(1.0 / perms.len() as f64))
}

pub fn symmetrize(rho: &DensityMatrix, n: usize, d: usize) -> Result<DensityMatrix> {
    Ok(DensityMatrix::new_unchecked(symmetrize_matrix(rho.as_matrix(), n, d)?))
}

/// Largest entrywise change of `m` under any site permutation.
pub fn exchangeability_residual(m: &QMatrix, n: usize, d: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in permutations(n) {
        worst = worst.max(permute_sites(m, &p, n, d)?.max_abs_diff(m));
    }
    Ok(worst)
}
