//! Umegaki relative entropy `D(ρ||σ) = tr ρ(log ρ - log σ)` and the
//! inequalities built on it.

use crate::dynamics::evolve;
use crate::tensor::{
    herm_eig, herm_eigenvalues, partial_trace, site_count, tensor_power, trace_norm, DensityMatrix,
    HermEig, QMatrix,
};
use crate::{Error, Result, Tolerances};

/// A relative entropy value; `Infinite` when the support of `ρ` is not
/// contained in the support of `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyResult {
    Finite(f64),
    Infinite,
}

impl EntropyResult {
    /// The value, with `f64::INFINITY` for the sentinel.
    pub fn value(self) -> f64 {
        match self {
            Self::Finite(x) => x,
            Self::Infinite => f64::INFINITY,
        }
    }

    pub fn support_violation(self) -> bool {
        matches!(self, Self::Infinite)
    }

    pub fn finite(self) -> Result<f64> {
        match self {
            Self::Finite(x) => Ok(x),
            Self::Infinite => Err(Error::SupportViolation),
        }
    }
}

/// `Σ λ log λ` over the positive eigenvalues.
fn neg_von_neumann(values: &[f64]) -> f64 {
    values.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum()
}

fn check_same_dim(a: &QMatrix, b: &QMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

/// `D(ρ||σ)`, each logarithm in its own eigenbasis with `0 log 0 = 0`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, tol: &Tolerances) -> Result<EntropyResult> {
    check_same_dim(rho.as_matrix(), sigma.as_matrix())?;
    let er = herm_eig(rho.as_matrix(), tol.herm_tol)?;
    let es = herm_eig(sigma.as_matrix(), tol.herm_tol)?;
    relative_entropy_eig(&er, &es, tol.supp_tol)
}

fn relative_entropy_eig(er: &HermEig, es: &HermEig, supp_tol: f64) -> Result<EntropyResult> {
    let n = er.values.len();
    let (u, v) = (&er.vectors, &es.vectors);
    // overlap[j][i] = |⟨v_j, u_i⟩|²
    let w = v.adjoint_matmul(u);
    let null: Vec<usize> = (0..n).filter(|&j| es.values[j] < supp_tol).collect();
    for i in (0..n).filter(|&i| er.values[i] > supp_tol) {
        let leak: f64 = null.iter().map(|&j| w[(j, i)].norm_sqr()).sum();
        if leak > supp_tol {
            return Ok(EntropyResult::Infinite);
        }
    }
    // tr(ρ log σ) = Σ_j log μ_j ⟨v_j|ρ|v_j⟩, ⟨v_j|ρ|v_j⟩ = Σ_i λ_i |⟨v_j,u_i⟩|²
    let mut cross = 0.0;
    for j in (0..n).filter(|&j| es.values[j] >= supp_tol) {
        let weight: f64 = (0..n).map(|i| er.values[i].max(0.0) * w[(j, i)].norm_sqr()).sum();
        cross += weight * es.values[j].ln();
    }
    Ok(EntropyResult::Finite(neg_von_neumann(&er.values) - cross))
}

/// `log m` together with a faithfulness check.
fn faithful_log(m: &DensityMatrix, tol: &Tolerances) -> Result<QMatrix> {
    let eig = herm_eig(m.as_matrix(), tol.herm_tol)?;
    if eig.lambda_min() < tol.eig_floor {
        return Err(Error::NotFaithful(eig.lambda_min()));
    }
    Ok(eig.apply(f64::ln))
}

/// `D(ρᴺ || m^{⊗n})`, using `log m^{⊗n} = Σ_l (log m)_l` so that only `m` and
/// `ρᴺ` are diagonalized.
pub fn tensor_power_entropy(rho_n: &DensityMatrix, m: &DensityMatrix, n: usize, tol: &Tolerances) -> Result<f64> {
    let d = m.dim();
    let dim = crate::tensor::site_dim(d, n)?;
    if rho_n.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: rho_n.dim() });
    }
    let log_m = faithful_log(m, tol)?;
    let values = herm_eigenvalues(rho_n.as_matrix(), tol.herm_tol)?;
    let mut cross = 0.0;
    for l in 1..=n {
        let marginal = partial_trace(rho_n.as_matrix(), &[l], n, d)?;
        cross += marginal.trace_product(&log_m).re;
    }
    Ok(neg_von_neumann(&values) - cross)
}

/// `H_N = (1/n) D(ρᴺ || m^{⊗n})`.
pub fn normalized_entropy(rho_n: &DensityMatrix, m: &DensityMatrix, n: usize, tol: &Tolerances) -> Result<f64> {
    Ok(tensor_power_entropy(rho_n, m, n, tol)? / n as f64)
}

/// `D(ρ||σ) - ½‖ρ - σ‖₁²`.
pub fn pinsker_gap(rho: &DensityMatrix, sigma: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let d = relative_entropy(rho, sigma, tol)?.finite()?;
    let t = trace_norm(&(rho.as_matrix() - sigma.as_matrix()))?;
    Ok(d - 0.5 * t * t)
}

/// `tr(e^a e^b) - tr(e^{a+b})`.
pub fn golden_thompson_gap(a: &QMatrix, b: &QMatrix, tol: &Tolerances) -> Result<f64> {
    check_same_dim(a, b)?;
    let ea = herm_eig(a, tol.herm_tol)?.apply(f64::exp);
    let eb = herm_eig(b, tol.herm_tol)?.apply(f64::exp);
    let eab: f64 = herm_eigenvalues(&(a + b), tol.herm_tol)?.iter().map(|x| x.exp()).sum();
    Ok(ea.trace_product(&eb).re - eab)
}

/// `log tr(σ e^{λx})`, shifted by the top eigenvalue of `λx` for stability.
fn log_exp_moment(sigma: &QMatrix, x: &QMatrix, lambda: f64, herm_tol: f64) -> Result<f64> {
    let eig = herm_eig(x, herm_tol)?;
    let top = lambda * eig.lambda_max();
    let e = eig.apply(|v| (lambda * v - top).exp());
    Ok(top + sigma.trace_product(&e).re.ln())
}

/// `(1/λ) D(ρ||σ) + (1/λ) log tr(σ e^{λx}) - tr(ρx)`.
pub fn variational_gap(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    x: &QMatrix,
    lambda: f64,
    tol: &Tolerances,
) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    check_same_dim(rho.as_matrix(), x)?;
    let lmin = crate::tensor::lambda_min(sigma.as_matrix(), tol.herm_tol)?;
    if lmin < tol.eig_floor {
        return Err(Error::NotFaithful(lmin));
    }
    let d = relative_entropy(rho, sigma, tol)?.finite()?;
    let lem = log_exp_moment(sigma.as_matrix(), x, lambda, tol.herm_tol)?;
    Ok(d / lambda + lem / lambda - rho.as_matrix().trace_product(x).re)
}

/// `D(ρᴺ||σ^{⊗N}) - Σ_j D(ρ^{B_j}||σ^{⊗k})` over the consecutive blocks
/// `B_j = {(j-1)k+1, …, jk}`.
pub fn superadditivity_gap(rho_n: &DensityMatrix, sigma: &DensityMatrix, k: usize, tol: &Tolerances) -> Result<f64> {
    let d = sigma.dim();
    let n = site_count(rho_n.dim(), d)?;
    if k == 0 || n % k != 0 {
        return Err(Error::InvalidArgument(format!("{n} sites cannot be split into blocks of {k}")));
    }
    let whole = tensor_power_entropy(rho_n, sigma, n, tol)?;
    let mut parts = 0.0;
    for j in 0..n / k {
        let block: Vec<usize> = (j * k + 1..=(j + 1) * k).collect();
        let marginal = DensityMatrix::new_unchecked(partial_trace(rho_n.as_matrix(), &block, n, d)?);
        parts += tensor_power_entropy(&marginal, sigma, k, tol)?;
    }
    Ok(whole - parts)
}

/// `(D(tr_out ρ || tr_out σ), D(ρ||σ))` for states on `n` sites of dimension
/// `d`, keeping the sites in `keep`.
pub fn partial_trace_pair(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    keep: &[usize],
    n: usize,
    d: usize,
    tol: &Tolerances,
) -> Result<(EntropyResult, EntropyResult)> {
    let r = DensityMatrix::new_unchecked(partial_trace(rho.as_matrix(), keep, n, d)?);
    let s = DensityMatrix::new_unchecked(partial_trace(sigma.as_matrix(), keep, n, d)?);
    Ok((relative_entropy(&r, &s, tol)?, relative_entropy(rho, sigma, tol)?))
}

/// Largest RK4 substep used by [`monotonicity_profile`].
pub const PROFILE_MAX_DT: f64 = 1e-3;

/// `g(s) = D(e^{s𝓛}ρ || e^{s𝓛}σ)` on an ascending grid of nonnegative times.
pub fn monotonicity_profile(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    generator: impl Fn(&QMatrix) -> QMatrix,
    s_grid: &[f64],
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    check_same_dim(rho.as_matrix(), sigma.as_matrix())?;
    if s_grid.iter().any(|&s| !(s >= 0.0)) || s_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("time grid must be nonnegative and ascending".into()));
    }
    let mut r = rho.as_matrix().clone();
    let mut s = sigma.as_matrix().clone();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(s_grid.len());
    for &target in s_grid {
        r = evolve(&generator, &r, target - now, PROFILE_MAX_DT).hermitian_part();
        s = evolve(&generator, &s, target - now, PROFILE_MAX_DT).hermitian_part();
        now = target;
        let value = relative_entropy(
            &DensityMatrix::new_unchecked(r.clone()),
            &DensityMatrix::new_unchecked(s.clone()),
            tol,
        )?;
        out.push(value.finite()?);
    }
    Ok(out)
}

/// `D(ρᴺ^{(k)} || m^{⊗k})` for the marginal on the first `k` sites.
pub fn marginal_entropy(rho_n: &DensityMatrix, m: &DensityMatrix, n: usize, k: usize, tol: &Tolerances) -> Result<f64> {
    let sites: Vec<usize> = (1..=k).collect();
    let marginal = DensityMatrix::new_unchecked(partial_trace(rho_n.as_matrix(), &sites, n, m.dim())?);
    tensor_power_entropy(&marginal, m, k, tol)
}

/// `‖ρᴺ^{(k)} - m^{⊗k}‖₁` for the marginal on the first `k` sites.
pub fn marginal_trace_distance(rho_n: &QMatrix, m: &QMatrix, n: usize, k: usize) -> Result<f64> {
    let sites: Vec<usize> = (1..=k).collect();
    let marginal = partial_trace(rho_n, &sites, n, m.dim())?;
    trace_norm(&(&marginal - &tensor_power(m, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{MeanFieldGenerator, ModelParams};
    use crate::random::{random_hermitian, random_state};
    use crate::symmetry::symmetrize;
    use crate::tensor::operators::{lowering, pauli_x, pauli_z};
    use crate::tensor::{kron, permute_sites};
    use crate::C64;
    use std::f64::consts::LN_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn diag(p: &[f64]) -> DensityMatrix {
        DensityMatrix::new_unchecked(QMatrix::from_diag(p))
    }

    #[test]
    fn relative_entropy_examples() {
        let r = random_state(3, 1);
        assert!(relative_entropy(&r, &r, &tol()).unwrap().value().abs() < 1e-12);
        let v = relative_entropy(&diag(&[1.0, 0.0]), &diag(&[0.5, 0.5]), &tol()).unwrap();
        assert!((v.value() - LN_2).abs() < 1e-14);
        let inf = relative_entropy(&diag(&[0.5, 0.5]), &diag(&[1.0, 0.0]), &tol()).unwrap();
        assert_eq!(inf, EntropyResult::Infinite);
        assert!(inf.support_violation());
    }

    #[test]
    fn diagonal_inputs_reduce_to_kl() {
        let p: [f64; 4] = [0.1, 0.2, 0.3, 0.4];
        let q: [f64; 4] = [0.4, 0.3, 0.2, 0.1];
        let kl: f64 = p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum();
        let v = relative_entropy(&diag(&p), &diag(&q), &tol()).unwrap().value();
        assert!((v - kl).abs() < 1e-12);
    }

    #[test]
    fn normalized_entropy_examples() {
        let m = random_state(2, 3);
        let mm = DensityMatrix::new_unchecked(tensor_power(m.as_matrix(), 3));
        assert!(normalized_entropy(&mm, &m, 3, &tol()).unwrap().abs() < 1e-12);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::pure(&[C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)]).unwrap();
        let v = normalized_entropy(&bell, &DensityMatrix::maximally_mixed(2), 2, &tol()).unwrap();
        assert!((v - LN_2).abs() < 1e-12);
    }

    #[test]
    fn normalized_entropy_matches_direct_route() {
        for seed in 0..10 {
            let rho = random_state(8, seed);
            let m = random_state(2, 50 + seed);
            let mm = DensityMatrix::new_unchecked(tensor_power(m.as_matrix(), 3));
            let direct = relative_entropy(&rho, &mm, &tol()).unwrap().value() / 3.0;
            assert!((normalized_entropy(&rho, &m, 3, &tol()).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn normalized_entropy_permutation_invariant() {
        let rho = symmetrize(&random_state(8, 4), 3, 2).unwrap();
        let m = random_state(2, 5);
        let a = normalized_entropy(&rho, &m, 3, &tol()).unwrap();
        let p = DensityMatrix::new_unchecked(permute_sites(rho.as_matrix(), &[2, 3, 1], 3, 2).unwrap());
        let b = normalized_entropy(&p, &m, 3, &tol()).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn pinsker_examples() {
        let r = random_state(2, 1);
        assert!(pinsker_gap(&r, &r, &tol()).unwrap().abs() < 1e-12);
        let g = pinsker_gap(&diag(&[1.0, 0.0]), &diag(&[0.5, 0.5]), &tol()).unwrap();
        assert!((g - (LN_2 - 0.5)).abs() < 1e-12);
        assert!(matches!(
            pinsker_gap(&diag(&[0.5, 0.5]), &diag(&[1.0, 0.0]), &tol()),
            Err(Error::SupportViolation)
        ));
    }

    #[test]
    fn golden_thompson_examples() {
        let a = QMatrix::from_diag(&[0.3, -1.0]);
        let b = QMatrix::from_diag(&[2.0, 0.5]);
        assert!(golden_thompson_gap(&a, &b, &tol()).unwrap().abs() < 1e-12);
        // e^X e^Z has trace 2cosh²(1); e^{X+Z} has trace 2cosh(√2).
        let c = 1f64.cosh();
        let expected = 2.0 * c * c - 2.0 * 2f64.sqrt().cosh();
        let g = golden_thompson_gap(&pauli_x(), &pauli_z(), &tol()).unwrap();
        assert!(g > 0.0);
        assert!((g - expected).abs() < 1e-12);
    }

    #[test]
    fn variational_examples() {
        let r = random_state(2, 1);
        let s = random_state(2, 2);
        let d = relative_entropy(&r, &s, &tol()).unwrap().value();
        let g = variational_gap(&r, &s, &QMatrix::zeros(2), 0.7, &tol()).unwrap();
        assert!((g - d / 0.7).abs() < 1e-12);
        let x = random_hermitian(2, 3);
        assert!(variational_gap(&s, &s, &x, 1.3, &tol()).unwrap() >= -1e-12);
        assert!(variational_gap(&r, &diag(&[1.0, 0.0]), &x, 1.0, &tol()).is_err());
    }

    #[test]
    fn superadditivity_examples() {
        let s = random_state(2, 1);
        let sss = DensityMatrix::new_unchecked(tensor_power(s.as_matrix(), 4));
        assert!(superadditivity_gap(&sss, &s, 2, &tol()).unwrap().abs() < 1e-11);
        let parts: Vec<_> = (0..3).map(|i| random_state(2, 10 + i)).collect();
        let prod = kron(&kron(parts[0].as_matrix(), parts[1].as_matrix()), parts[2].as_matrix());
        let g = superadditivity_gap(&DensityMatrix::new_unchecked(prod), &s, 1, &tol()).unwrap();
        assert!(g.abs() < 1e-11);
        assert!(superadditivity_gap(&sss, &s, 3, &tol()).is_err());
    }

    #[test]
    fn monotonicity_examples() {
        let r = random_state(2, 1);
        let s = random_state(2, 2);
        let grid = [0.0, 0.1, 0.2, 0.5];
        let same = monotonicity_profile(&r, &r, |y| QMatrix::zeros(y.dim()), &grid, &tol()).unwrap();
        assert!(same.iter().all(|x| x.abs() < 1e-12));
        let flat = monotonicity_profile(&r, &s, |y| QMatrix::zeros(y.dim()), &grid, &tol()).unwrap();
        assert!(flat.windows(2).all(|w| (w[1] - w[0]).abs() < 1e-14));
        let p = ModelParams::new_unchecked(2, QMatrix::zeros(2), QMatrix::zeros(4), lowering());
        let gen = MeanFieldGenerator::new(&p);
        let decay = monotonicity_profile(&r, &s, |y| gen.apply(y), &grid, &tol()).unwrap();
        assert!(decay.windows(2).all(|w| w[1] < w[0]), "{decay:?}");
    }
}
