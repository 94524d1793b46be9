//! Brute-force oracles for the moment expansion of `tr(m^{⊗N} Wᵏ)`.
//!
//! Expanding `Wᵏ` produces ordered tuples of edges `(e_1, …, e_k)`. A product
//! of centered two-body factors has vanishing expectation as soon as some
//! vertex is an endpoint of exactly one edge, and the surviving index tuples
//! form the set `𝔎_{N,2k}` of ordered `2k`-tuples over `{1..N}` in which no
//! index occurs exactly once.

use std::f64::consts::E;

use crate::random::random_hermitian;
use crate::tensor::{contract_first, contract_second, embed, kron, site_dim, tensor_power, DensityMatrix, QMatrix};
use crate::{Error, Result, C64};

/// Maximum number of tuples visited by [`enumerate_admissible`].
pub const ENUMERATION_BUDGET: u128 = 100_000_000;

/// Ordered edges `(i, j)` with `1 ≤ i < j ≤ n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeTuple {
    edges: Vec<(usize, usize)>,
}

impl EdgeTuple {
    pub fn new(edges: Vec<(usize, usize)>, n: usize) -> Result<Self> {
        for &(i, j) in &edges {
            if !(1 <= i && i < j && j <= n) {
                return Err(Error::InvalidSites(format!("edge ({i}, {j}) not ordered within 1..={n}")));
            }
        }
        Ok(Self { edges })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Some vertex is an endpoint of exactly one edge.
    pub fn has_isolated_endpoint(&self) -> bool {
        let mut touched: Vec<usize> = self.edges.iter().flat_map(|&(i, j)| [i, j]).collect();
        touched.sort_unstable();
        touched.dedup();
        touched
            .iter()
            .any(|&v| self.edges.iter().filter(|&&(i, j)| i == v || j == v).count() == 1)
    }
}

/// Every ordered `k`-tuple of edges on `n` vertices.
pub fn all_edge_tuples(n: usize, k: usize) -> Vec<EdgeTuple> {
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<(usize, usize)>| {
                pairs.iter().map(move |&p| {
                    let mut next = prefix.clone();
                    next.push(p);
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(|edges| EdgeTuple { edges }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `2k ≤ N`
    SmallK,
    LargeK,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleCount {
    pub n: usize,
    pub k: usize,
    pub count: u64,
    pub bound: f64,
    pub regime: Regime,
}

/// `k eᵏ Nᵏ kᵏ` when `2k ≤ N`, else `N^{2k}`.
pub fn counting_bound(n: usize, k: usize) -> (f64, Regime) {
    let (nf, kf) = (n as f64, k as f64);
    if 2 * k <= n {
        (kf * E.powf(kf) * nf.powf(kf) * kf.powf(kf), Regime::SmallK)
    } else {
        (nf.powf(2.0 * kf), Regime::LargeK)
    }
}

/// `Σ_{r=1}^{k} C(N, r) r^{2k}`.
pub fn intermediate_bound(n: usize, k: usize) -> f64 {
    let mut binom = 1.0;
    let mut total = 0.0;
    for r in 1..=k.min(n) {
        binom *= (n + 1 - r) as f64 / r as f64;
        total += binom * (r as f64).powi(2 * k as i32);
    }
    total
}

/// `|𝔎_{N,2k}|` by visiting every ordered `2k`-tuple over `{1..N}`.
pub fn enumerate_admissible(n: usize, k: usize) -> Result<AdmissibleCount> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument(format!("need n ≥ 1 and k ≥ 1, got n = {n}, k = {k}")));
    }
    let len = 2 * k;
    let total = (n as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded(total));
    }
    // Odometer over the tuple, with multiplicities maintained incrementally.
    let mut digits = vec![0usize; len];
    let mut mult = vec![0usize; n];
    mult[0] = len;
    let mut singles = 0usize;
    let mut count = 0u64;
    loop {
        if singles == 0 {
            count += 1;
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                let (bound, regime) = counting_bound(n, k);
                return Ok(AdmissibleCount { n, k, count, bound, regime });
            }
            pos -= 1;
            let old = digits[pos];
            let new = if old + 1 == n { 0 } else { old + 1 };
            for (v, delta) in [(old, -1isize), (new, 1)] {
                let before = mult[v];
                let after = (before as isize + delta) as usize;
                singles = singles + usize::from(after == 1) - usize::from(before == 1);
                mult[v] = after;
            }
            digits[pos] = new;
            if new != 0 {
                break;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingCheck {
    pub count: u64,
    pub bound: f64,
    pub intermediate: f64,
    /// `count ≤ bound`
    pub ok: bool,
    /// `count ≤ intermediate`
    pub intermediate_ok: bool,
}

pub fn counting_bound_check(n: usize, k: usize) -> Result<CountingCheck> {
    let c = enumerate_admissible(n, k)?;
    let intermediate = intermediate_bound(n, k);
    Ok(CountingCheck {
        count: c.count,
        bound: c.bound,
        intermediate,
        ok: c.count as f64 <= c.bound,
        intermediate_ok: c.count as f64 <= intermediate,
    })
}

/// `h₀ - B₂⊗1 - 1⊗B₁ + c·1⊗1` with `B₂ = tr₂((1⊗ρ)h₀)`, `B₁ = tr₁((ρ⊗1)h₀)`,
/// `c = tr((ρ⊗ρ)h₀)`.
pub fn center_two_body(h0: &QMatrix, rho: &QMatrix) -> Result<QMatrix> {
    let d = rho.dim();
    let b2 = contract_second(h0, rho)?;
    let b1 = contract_first(h0, rho)?;
    let c = kron(rho, rho).trace_product(h0);
    let one = QMatrix::identity(d);
    let mut h = h0 - &kron(&b2, &one);
    h -= &kron(&one, &b1);
    h.axpy(c, &QMatrix::identity(d * d));
    Ok(h)
}

/// Largest of the two centering residuals `‖tr₂((1⊗ρ)h)‖`, `‖tr₁((ρ⊗1)h)‖`.
pub fn centering_residual(h: &QMatrix, rho: &QMatrix) -> Result<f64> {
    Ok(contract_second(h, rho)?.max_abs().max(contract_first(h, rho)?.max_abs()))
}

/// Centered random Hermitian two-body operator, deterministic per seed.
pub fn random_centered_h(rho: &DensityMatrix, seed: u64) -> QMatrix {
    let d = rho.dim();
    let h0 = random_hermitian(d * d, seed);
    center_two_body(&h0, rho.as_matrix())
        .expect("dimensions agree by construction")
        .hermitian_part()
}

/// `tr(ρ^{⊗n} h_{e_1} ⋯ h_{e_k})` by explicit embedding.
pub fn isolated_vertex_trace(h: &QMatrix, rho: &DensityMatrix, edges: &EdgeTuple, n: usize) -> Result<C64> {
    let d = rho.dim();
    if h.dim() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, got: h.dim() });
    }
    let residual = centering_residual(h, rho.as_matrix())?;
    if residual > 1e-10 {
        return Err(Error::NotCentered(residual));
    }
    if let Some(&(_, j)) = edges.edges.iter().find(|&&(_, j)| j > n) {
        return Err(Error::InvalidSites(format!("edge endpoint {j} exceeds {n}")));
    }
    let dim = site_dim(d, n)?;
    let mut prod = tensor_power(rho.as_matrix(), n);
    debug_assert_eq!(prod.dim(), dim);
    for &(i, j) in &edges.edges {
        prod = prod.matmul(&embed(h, &[i, j], n, d)?);
    }
    Ok(prod.trace())
}
