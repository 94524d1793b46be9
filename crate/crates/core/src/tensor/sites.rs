//! Tensor-product structure of `H^{⊗n}`.
//!
//! Sites are numbered `1..=n`. Site 1 is the most significant digit of the
//! computational-basis index, so `kron(a, b)` places `a` on site 1.

use crate::{Error, Result, C64, MAX_DIM};

use super::QMatrix;

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let (da, db) = (a.dim(), b.dim());
    let dim = da * db;
    let mut out = QMatrix::zeros(dim);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `m ⊗ m ⊗ … ⊗ m` with `n` factors; `n = 0` gives the 1×1 identity.
pub fn tensor_power(m: &QMatrix, n: usize) -> QMatrix {
    let mut out = QMatrix::identity(1);
    for _ in 0..n {
        out = kron(&out, m);
    }
    out
}

/// Checked `d^n`, capped at [`MAX_DIM`].
pub fn site_dim(d: usize, n: usize) -> Result<usize> {
    let dim = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if dim > MAX_DIM as u128 {
        return Err(Error::DimensionOverflow(dim.min(usize::MAX as u128) as usize));
    }
    Ok(dim as usize)
}

/// Recovers `n` from `dim = d^n`.
pub fn site_count(dim: usize, d: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {d} has no unique site count")));
    }
    let mut n = 0;
    let mut acc = 1;
    while acc < dim {
        acc *= d;
        n += 1;
    }
    if acc != dim {
        return Err(Error::InvalidArgument(format!("{dim} is not a power of {d}")));
    }
    Ok(n)
}

/// Stride of 1-based site `l` among `n` sites.
#[inline]
fn stride(l: usize, n: usize, d: usize) -> usize {
    d.pow((n - l) as u32)
}

/// For each local multi-index on `sites` (listed order, first site most
/// significant), its offset in the full index.
fn offsets(sites: &[usize], n: usize, d: usize) -> Vec<usize> {
    let k = sites.len();
    let count = d.pow(k as u32);
    (0..count)
        .map(|local| {
            let mut rest = local;
            let mut off = 0;
            for j in (0..k).rev() {
                off += (rest % d) * stride(sites[j], n, d);
                rest /= d;
            }
            off
        })
        .collect()
}

/// Position of `index`'s digits on `sites`, as a local multi-index.
#[inline]
fn local_index(index: usize, sites: &[usize], n: usize, d: usize) -> usize {
    sites
        .iter()
        .fold(0, |acc, &s| acc * d + (index / stride(s, n, d)) % d)
}

fn check_sites(sites: &[usize], n: usize) -> Result<()> {
    for (i, &s) in sites.iter().enumerate() {
        if s == 0 || s > n {
            return Err(Error::InvalidSites(format!("site {s} outside 1..={n}")));
        }
        if sites[..i].contains(&s) {
            return Err(Error::InvalidSites(format!("site {s} repeated")));
        }
    }
    Ok(())
}

fn check_dim(m: &QMatrix, expected: usize) -> Result<()> {
    if m.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: m.dim(),
        });
    }
    Ok(())
}

/// The operator on `d^n` acting as `o` on `sites` (in the listed order) and as
/// the identity elsewhere.
pub fn embed(o: &QMatrix, sites: &[usize], n: usize, d: usize) -> Result<QMatrix> {
    check_sites(sites, n)?;
    check_dim(o, d.pow(sites.len() as u32))?;
    let dim = site_dim(d, n)?;
    let offs = offsets(sites, n, d);
    let mut out = QMatrix::zeros(dim);
    for r in 0..dim {
        let sr = local_index(r, sites, n, d);
        let base = r - offs[sr];
        for (sc, &off) in offs.iter().enumerate() {
            out[(r, base + off)] = o[(sr, sc)];
        }
    }
    Ok(out)
}

/// Partial trace keeping the sites in `keep`. The kept sites appear in
/// ascending order in the result.
pub fn partial_trace(m: &QMatrix, keep: &[usize], n: usize, d: usize) -> Result<QMatrix> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    check_sites(&keep, n)?;
    check_dim(m, site_dim(d, n)?)?;
    let traced: Vec<usize> = (1..=n).filter(|s| !keep.contains(s)).collect();
    let keep_offs = offsets(&keep, n, d);
    let trace_offs = offsets(&traced, n, d);
    let kd = keep_offs.len();
    let mut out = QMatrix::zeros(kd);
    for a in 0..kd {
        for b in 0..kd {
            let (ra, rb) = (keep_offs[a], keep_offs[b]);
            out[(a, b)] = trace_offs.iter().map(|&t| m[(ra + t, rb + t)]).sum();
        }
    }
    Ok(out)
}

/// The flip `S(ψ⊗φ) = φ⊗ψ` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> QMatrix {
    let mut s = QMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    s
}

/// `P_π m P_π†` where `P_π` moves the factor on site `l` to site `perm[l-1]`.
/// `perm` is a permutation of `1..=n`.
pub fn permute_sites(m: &QMatrix, perm: &[usize], n: usize, d: usize) -> Result<QMatrix> {
    if perm.len() != n {
        return Err(Error::InvalidSites(format!("permutation of length {} for {n} sites", perm.len())));
    }
    check_sites(perm, n)?;
    let dim = site_dim(d, n)?;
    check_dim(m, dim)?;
    // Output digit on site perm[l] equals input digit on site l.
    let source: Vec<usize> = (0..dim)
        .map(|out_idx| {
            (1..=n).fold(0, |acc, l| {
                let digit = (out_idx / stride(perm[l - 1], n, d)) % d;
                acc + digit * stride(l, n, d)
            })
        })
        .collect();
    Ok(QMatrix::from_fn(dim, |r, c| m[(source[r], source[c])]))
}

/// `O_l m O_l†` for a one-site operator `o` on site `l`, without forming `O_l`.
pub fn local_sandwich(o: &QMatrix, site: usize, n: usize, d: usize, m: &QMatrix) -> Result<QMatrix> {
    check_sites(&[site], n)?;
    check_dim(o, d)?;
    let dim = site_dim(d, n)?;
    check_dim(m, dim)?;
    let s = stride(site, n, d);
    // (O_l m)[r][c] = Σ_a o[r_l][a] m[r|a][c]
    let mut left = QMatrix::zeros(dim);
    for r in 0..dim {
        let rl = (r / s) % d;
        let base = r - rl * s;
        for a in 0..d {
            let coef = o[(rl, a)];
            if coef == C64::new(0.0, 0.0) {
                continue;
            }
            let src = base + a * s;
            let src_row = &m.as_slice()[src * dim..(src + 1) * dim];
            let dst_row = &mut left.as_mut_slice()[r * dim..(r + 1) * dim];
            for (x, &y) in dst_row.iter_mut().zip(src_row) {
                *x += coef * y;
            }
        }
    }
    // (left O_l†)[r][c] = Σ_b left[r][c|b] conj(o[c_l][b])
    let mut out = QMatrix::zeros(dim);
    for r in 0..dim {
        let row = &left.as_slice()[r * dim..(r + 1) * dim];
        let dst = &mut out.as_mut_slice()[r * dim..(r + 1) * dim];
        for (c, x) in dst.iter_mut().enumerate() {
            let cl = (c / s) % d;
            let base = c - cl * s;
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..d {
                acc += row[base + b * s] * o[(cl, b)].conj();
            }
            *x = acc;
        }
    }
    Ok(out)
}

/// `tr₂((1⊗σ) x)` for a two-site operator `x` on `d²`, by direct index
/// summation: entry `(i, j)` is `Σ_{k,l} σ[k][l] x[(i,l),(j,k)]`.
pub fn contract_second(x: &QMatrix, sigma: &QMatrix) -> Result<QMatrix> {
    let d = sigma.dim();
    check_dim(x, d * d)?;
    Ok(QMatrix::from_fn(d, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..d {
            for l in 0..d {
                acc += sigma[(k, l)] * x[(i * d + l, j * d + k)];
            }
        }
        acc
    }))
}

/// `tr₁((σ⊗1) x)`: entry `(i, j)` is `Σ_{k,l} σ[k][l] x[(l,i),(k,j)]`.
pub fn contract_first(x: &QMatrix, sigma: &QMatrix) -> Result<QMatrix> {
    let d = sigma.dim();
    check_dim(x, d * d)?;
    Ok(QMatrix::from_fn(d, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..d {
            for l in 0..d {
                acc += sigma[(k, l)] * x[(l * d + i, k * d + j)];
            }
        }
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::operators::{pauli_x, pauli_z};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn kron_identity_and_diagonal() {
        assert_eq!(kron(&QMatrix::identity(2), &QMatrix::identity(2)), QMatrix::identity(4));
        let k = kron(&QMatrix::from_diag(&[1.0, 2.0]), &QMatrix::identity(2));
        assert_eq!(k, QMatrix::from_diag(&[1.0, 1.0, 2.0, 2.0]));
    }

    #[test]
    fn kron_x_z_maps_e00_to_e10() {
        // (X⊗Z)|00⟩ = X|0⟩ ⊗ Z|0⟩ = |1⟩⊗|0⟩, i.e. basis index 2.
        let k = kron(&pauli_x(), &pauli_z());
        let column: Vec<C64> = (0..4).map(|i| k[(i, 0)]).collect();
        assert_eq!(column, vec![c(0.0), c(0.0), c(1.0), c(0.0)]);
    }

    #[test]
    fn kron_mixed_product_rule() {
        let a = QMatrix::from_fn(2, |i, j| C64::new(i as f64 + 0.5, j as f64));
        let b = QMatrix::from_fn(3, |i, j| C64::new(j as f64, i as f64 - 1.0));
        let cc = a.adjoint();
        let dd = b.scale(C64::new(0.0, 2.0));
        let lhs = kron(&a, &b).matmul(&kron(&cc, &dd));
        let rhs = kron(&a.matmul(&cc), &b.matmul(&dd));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn embed_first_site_and_full() {
        let z = pauli_z();
        assert_eq!(embed(&z, &[1], 2, 2).unwrap(), kron(&z, &QMatrix::identity(2)));
        let a = kron(&pauli_x(), &z);
        assert_eq!(embed(&a, &[1, 2], 2, 2).unwrap(), a);
    }

    #[test]
    fn embed_two_sites_matches_kron_chain() {
        let zz = kron(&pauli_z(), &pauli_z());
        let expected = kron(&QMatrix::identity(2), &zz);
        assert_eq!(embed(&zz, &[2, 3], 3, 2).unwrap(), expected);
    }

    #[test]
    fn embed_reversed_sites_swaps_factors() {
        let xz = kron(&pauli_x(), &pauli_z());
        let zx = kron(&pauli_z(), &pauli_x());
        assert_eq!(embed(&xz, &[2, 1], 2, 2).unwrap(), zx);
    }

    #[test]
    fn embed_respects_products() {
        let a = QMatrix::from_fn(4, |i, j| C64::new((i + j) as f64, i as f64 * 0.1));
        let b = QMatrix::from_fn(4, |i, j| C64::new(1.0 - j as f64, (i * j) as f64));
        let lhs = embed(&a.matmul(&b), &[3, 1], 3, 2).unwrap();
        let rhs = embed(&a, &[3, 1], 3, 2).unwrap().matmul(&embed(&b, &[3, 1], 3, 2).unwrap());
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn embed_rejects_bad_sites() {
        let z = pauli_z();
        assert!(matches!(embed(&z, &[0], 2, 2), Err(Error::InvalidSites(_))));
        assert!(matches!(embed(&z, &[3], 2, 2), Err(Error::InvalidSites(_))));
        let zz = kron(&z, &z);
        assert!(matches!(embed(&zz, &[1, 1], 2, 2), Err(Error::InvalidSites(_))));
        assert!(matches!(embed(&zz, &[1], 2, 2), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho = QMatrix::from_real_rows(&[[0.6, 0.1], [0.1, 0.4]]);
        let sigma = QMatrix::from_real_rows(&[[2.0, 0.0], [0.0, 1.0]]);
        let pt = partial_trace(&kron(&rho, &sigma), &[1], 2, 2).unwrap();
        assert!(pt.max_abs_diff(&rho.scale_real(3.0)) < 1e-14);
        let pt2 = partial_trace(&kron(&rho, &sigma), &[2], 2, 2).unwrap();
        assert!(pt2.max_abs_diff(&sigma) < 1e-14);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        // |Φ+⟩⟨Φ+| with |Φ+⟩ = (|00⟩ + |11⟩)/√2.
        let mut bell = QMatrix::zeros(4);
        for &i in &[0, 3] {
            for &j in &[0, 3] {
                bell[(i, j)] = c(0.5);
            }
        }
        let reduced = partial_trace(&bell, &[1], 2, 2).unwrap();
        assert!(reduced.max_abs_diff(&QMatrix::from_diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_keep_all_is_identity_map() {
        let m = QMatrix::from_fn(8, |i, j| C64::new(i as f64, j as f64));
        assert_eq!(partial_trace(&m, &[1, 2, 3], 3, 2).unwrap(), m);
        assert_eq!(partial_trace(&m, &[3, 1, 2], 3, 2).unwrap(), m);
        let scalar = partial_trace(&m, &[], 3, 2).unwrap();
        assert_eq!(scalar.dim(), 1);
        assert!((scalar[(0, 0)] - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_embedded_operator_factorizes() {
        // tr_{2,3}(O_1 (a⊗b⊗c)) = tr(b) tr(c) O a.
        let a = QMatrix::from_real_rows(&[[0.7, 0.2], [0.2, 0.3]]);
        let b = QMatrix::from_real_rows(&[[0.5, 0.0], [0.0, 0.5]]);
        let cc = QMatrix::from_real_rows(&[[0.9, 0.1], [0.1, 0.1]]);
        let o = pauli_x();
        let state = kron(&kron(&a, &b), &cc);
        let lhs = partial_trace(&embed(&o, &[1], 3, 2).unwrap().matmul(&state), &[1], 3, 2).unwrap();
        assert!(lhs.max_abs_diff(&o.matmul(&a)) < 1e-14);
    }

    #[test]
    fn swap_operator_cases() {
        assert_eq!(swap_operator(1), QMatrix::identity(1));
        let s = swap_operator(2);
        let expected = QMatrix::from_real_rows(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(s, expected);
        assert_eq!(s.matmul(&s), QMatrix::identity(4));
        let zx = kron(&pauli_z(), &pauli_x());
        let conj = s.matmul(&zx).matmul(&s);
        assert_eq!(conj, kron(&pauli_x(), &pauli_z()));
    }

    #[test]
    fn swap_operator_exchanges_basis_vectors_for_qutrits() {
        let s = swap_operator(3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s[(j * 3 + i, i * 3 + j)], c(1.0));
            }
        }
        assert!(s.matmul(&s).max_abs_diff(&QMatrix::identity(9)) == 0.0);
    }

    #[test]
    fn permute_sites_moves_factors() {
        let a = QMatrix::from_diag(&[1.0, 2.0]);
        let b = QMatrix::from_diag(&[3.0, 5.0]);
        let cc = QMatrix::from_diag(&[7.0, 11.0]);
        let abc = kron(&kron(&a, &b), &cc);
        // site 1 -> 2, site 2 -> 3, site 3 -> 1: result is c ⊗ a ⊗ b.
        let permuted = permute_sites(&abc, &[2, 3, 1], 3, 2).unwrap();
        assert_eq!(permuted, kron(&kron(&cc, &a), &b));
        let swap2 = permute_sites(&kron(&a, &b), &[2, 1], 2, 2).unwrap();
        let s = swap_operator(2);
        assert_eq!(swap2, s.matmul(&kron(&a, &b)).matmul(&s));
    }

    #[test]
    fn local_sandwich_matches_embedded_product() {
        let o = QMatrix::from_fn(2, |i, j| C64::new(i as f64 - j as f64, 0.5 * (i + j) as f64));
        let m = QMatrix::from_fn(8, |i, j| C64::new((i * 3 + j) as f64 * 0.1, (i as f64) - (j as f64)));
        for site in 1..=3 {
            let e = embed(&o, &[site], 3, 2).unwrap();
            let reference = e.matmul(&m).matmul(&e.adjoint());
            let fast = local_sandwich(&o, site, 3, 2, &m).unwrap();
            assert!(fast.max_abs_diff(&reference) < 1e-12);
        }
    }

    #[test]
    fn site_count_roundtrip() {
        assert_eq!(site_count(256, 2).unwrap(), 8);
        assert_eq!(site_count(27, 3).unwrap(), 3);
        assert!(site_count(12, 2).is_err());
        assert!(site_dim(2, 13).is_err());
    }

    #[test]
    fn contractions_match_partial_trace_route() {
        use crate::random::{random_hermitian, random_state};
        for seed in 0..10 {
            let x = random_hermitian(9, seed);
            let sigma = random_state(3, 100 + seed);
            let one = QMatrix::identity(3);
            let right = partial_trace(&kron(&one, sigma.as_matrix()).matmul(&x), &[1], 2, 3).unwrap();
            let left = partial_trace(&kron(sigma.as_matrix(), &one).matmul(&x), &[2], 2, 3).unwrap();
            assert!(contract_second(&x, sigma.as_matrix()).unwrap().max_abs_diff(&right) < 1e-14);
            assert!(contract_first(&x, sigma.as_matrix()).unwrap().max_abs_diff(&left) < 1e-14);
        }
    }
}
