use crate::tensor::{
    contract_second, embed, kron, local_sandwich, partial_trace, site_dim, tensor_power, QMatrix,
};
use crate::{Error, Result, C64};

use super::ModelParams;

const MINUS_I: C64 = C64::new(0.0, -1.0);

/// Mean-field potential `A^σ = tr₂((1⊗σ)A)`.
pub fn a_sigma(a_int: &QMatrix, sigma: &QMatrix) -> Result<QMatrix> {
    let d = sigma.dim();
    if a_int.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            got: a_int.dim(),
        });
    }
    contract_second(a_int, sigma)
}

/// `Hᴺ = Σ_l H̃_l + (1/N) Σ_{l<l'} A_{ll'}`.
pub fn n_body_hamiltonian(params: &ModelParams, n: usize) -> Result<QMatrix> {
    let d = params.d();
    let dim = site_dim(d, n)?;
    let mut h = QMatrix::zeros(dim);
    for l in 1..=n {
        h += &embed(params.h_tilde(), &[l], n, d)?;
    }
    let inv_n = C64::new(1.0 / n as f64, 0.0);
    for l in 1..=n {
        for r in l + 1..=n {
            h.axpy(inv_n, &embed(params.a_int(), &[l, r], n, d)?);
        }
    }
    Ok(h)
}

/// The N-body Lindblad generator.
///
/// The Hamiltonian and the anticommutator part of the dissipator are folded
/// into the non-Hermitian `K = Hᴺ - (i/2) Σ_l L_l†L_l`, so that
/// `𝓛ᴺ(ρ) = -i(Kρ - ρK†) + Σ_l L_l ρ L_l†`. The jump terms are applied site by
/// site without forming `L_l`.
#[derive(Debug, Clone)]
pub struct NBodyGenerator {
    n: usize,
    d: usize,
    k_eff: QMatrix,
    l_jump: QMatrix,
    has_jumps: bool,
}

impl NBodyGenerator {
    pub fn new(params: &ModelParams, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one site".into()));
        }
        let d = params.d();
        let mut k_eff = n_body_hamiltonian(params, n)?;
        let ldl = params.l_dag_l();
        for l in 1..=n {
            k_eff.axpy(C64::new(0.0, -0.5), &embed(&ldl, &[l], n, d)?);
        }
        Ok(Self {
            n,
            d,
            k_eff,
            l_jump: params.l_jump().clone(),
            has_jumps: params.l_jump().max_abs() > 0.0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.k_eff.dim()
    }

    /// `𝓛ᴺ(ρ)` for any square `ρ` of the right dimension.
    pub fn apply(&self, rho: &QMatrix) -> QMatrix {
        assert_eq!(rho.dim(), self.dim(), "state dimension");
        let mut out = self.k_eff.matmul(rho);
        out -= &rho.matmul_adjoint(&self.k_eff);
        let mut out = out.scale(MINUS_I);
        self.add_jumps(rho, &mut out);
        out
    }

    /// `𝓛ᴺ(ρ)` for Hermitian `ρ`, using `ρK† = (Kρ)†`. The output is exactly
    /// Hermitian.
    pub fn apply_hermitian(&self, rho: &QMatrix) -> QMatrix {
        assert_eq!(rho.dim(), self.dim(), "state dimension");
        let x = self.k_eff.matmul(rho);
        let dim = self.dim();
        let mut out = QMatrix::from_fn(dim, |i, j| MINUS_I * (x[(i, j)] - x[(j, i)].conj()));
        self.add_jumps(rho, &mut out);
        out.hermitian_part()
    }

    fn add_jumps(&self, rho: &QMatrix, out: &mut QMatrix) {
        if !self.has_jumps {
            return;
        }
        for l in 1..=self.n {
            let j = local_sandwich(&self.l_jump, l, self.n, self.d, rho).expect("validated sites");
            *out += &j;
        }
    }
}

/// `𝓛ᴺ(ρ)` for `ρ` on `d^n`.
pub fn lindblad_rhs_n(rho: &QMatrix, params: &ModelParams, n: usize) -> Result<QMatrix> {
    let gen = NBodyGenerator::new(params, n)?;
    if rho.dim() != gen.dim() {
        return Err(Error::DimensionMismatch {
            expected: gen.dim(),
            got: rho.dim(),
        });
    }
    Ok(gen.apply(rho))
}

/// The nonlinear mean-field vector field.
#[derive(Debug, Clone)]
pub struct MeanFieldGenerator {
    params: ModelParams,
    l_dag_l: QMatrix,
}

impl MeanFieldGenerator {
    pub fn new(params: &ModelParams) -> Self {
        Self {
            l_dag_l: params.l_dag_l(),
            params: params.clone(),
        }
    }

    /// `H̃ + A^m`.
    pub fn effective_hamiltonian(&self, m: &QMatrix) -> QMatrix {
        let am = contract_second(self.params.a_int(), m).expect("dimension checked");
        self.params.h_tilde() + &am
    }

    /// `L m L† - ½{L†L, m}`.
    pub fn dissipator(&self, m: &QMatrix) -> QMatrix {
        let l = self.params.l_jump();
        let mut out = l.matmul(m).matmul_adjoint(l);
        out -= &self.l_dag_l.anticommutator(m).scale_real(0.5);
        out
    }

    pub fn apply(&self, m: &QMatrix) -> QMatrix {
        assert_eq!(m.dim(), self.params.d(), "state dimension");
        let h = self.effective_hamiltonian(m);
        let mut out = h.commutator(m).scale(MINUS_I);
        out += &self.dissipator(m);
        out
    }
}

/// `-i[H̃ + A^m, m] + L m L† - ½{L†L, m}`.
pub fn meanfield_rhs(m: &QMatrix, params: &ModelParams) -> Result<QMatrix> {
    if m.dim() != params.d() {
        return Err(Error::DimensionMismatch {
            expected: params.d(),
            got: m.dim(),
        });
    }
    Ok(MeanFieldGenerator::new(params).apply(m))
}

/// The same vector field with the interaction written as `-i tr₂[A, m⊗m]`.
pub fn meanfield_rhs_partial_trace(m: &QMatrix, params: &ModelParams) -> Result<QMatrix> {
    let d = params.d();
    if m.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: m.dim() });
    }
    let mm = kron(m, m);
    let inter = partial_trace(&params.a_int().commutator(&mm), &[1], 2, d)?;
    let mut out = (&params.h_tilde().commutator(m) + &inter).scale(MINUS_I);
    out += &MeanFieldGenerator::new(params).dissipator(m);
    Ok(out)
}

/// `Σ_l m ⊗ … ⊗ ṁ (site l) ⊗ … ⊗ m`, the time derivative of `m^{⊗n}`.
pub fn product_rule_derivative(m: &QMatrix, m_dot: &QMatrix, n: usize) -> Result<QMatrix> {
    let dim = site_dim(m.dim(), n)?;
    let mut out = QMatrix::zeros(dim);
    for l in 0..n {
        let left = tensor_power(m, l);
        let right = tensor_power(m, n - l - 1);
        out += &kron(&kron(&left, m_dot), &right);
    }
    Ok(out)
}

/// `Δᴺ = (1/N) Σ_{l<r} A_{lr} - Σ_l A^m_l`.
pub fn defect_operator(m: &QMatrix, params: &ModelParams, n: usize) -> Result<QMatrix> {
    let d = params.d();
    let am = a_sigma(params.a_int(), m)?;
    let dim = site_dim(d, n)?;
    let mut delta = QMatrix::zeros(dim);
    let inv_n = C64::new(1.0 / n as f64, 0.0);
    for l in 1..=n {
        for r in l + 1..=n {
            delta.axpy(inv_n, &embed(params.a_int(), &[l, r], n, d)?);
        }
        delta -= &embed(&am, &[l], n, d)?;
    }
    Ok(delta)
}

/// Max entrywise residual of `𝓛ᴺ(m^{⊗N}) - d/dt(m^{⊗N}) = -i[Δᴺ, m^{⊗N}]`,
/// with the time derivative assembled from the mean-field vector field.
pub fn defect_identity_residual(m: &QMatrix, params: &ModelParams, n: usize) -> Result<f64> {
    let big_m = tensor_power(m, n);
    let m_dot = meanfield_rhs(m, params)?;
    let lhs = &lindblad_rhs_n(&big_m, params, n)? - &product_rule_derivative(m, &m_dot, n)?;
    let rhs = defect_operator(m, params, n)?.commutator(&big_m).scale(MINUS_I);
    Ok(lhs.max_abs_diff(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_model, random_state};
    use crate::tensor::operators::{lowering, pauli_x, pauli_z};
    use crate::tensor::{op_norm, permute_sites, DensityMatrix};

    fn zz() -> QMatrix {
        kron(&pauli_z(), &pauli_z())
    }

    #[test]
    fn a_sigma_examples() {
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(a_sigma(&zz(), mixed.as_matrix()).unwrap().max_abs() < 1e-15);
        let m = QMatrix::from_diag(&[0.7, 0.3]);
        let am = a_sigma(&zz(), &m).unwrap();
        assert!(am.max_abs_diff(&pauli_z().scale_real(0.4)) < 1e-15);
        let a = &kron(&pauli_x(), &pauli_z()) + &kron(&pauli_z(), &pauli_x());
        let am = a_sigma(&a, &m).unwrap();
        assert!(am.max_abs_diff(&pauli_x().scale_real(0.4)) < 1e-15);
        assert!(op_norm(&am).unwrap() <= op_norm(&a).unwrap());
    }

    #[test]
    fn a_sigma_is_linear_and_hermitian() {
        let p = random_model(3, 1, 1.0);
        let s1 = random_state(3, 2);
        let s2 = random_state(3, 3);
        let mix = (&s1.as_matrix().scale_real(0.25) + &s2.as_matrix().scale_real(0.75)).clone();
        let lhs = a_sigma(p.a_int(), &mix).unwrap();
        let rhs = &a_sigma(p.a_int(), s1.as_matrix()).unwrap().scale_real(0.25)
            + &a_sigma(p.a_int(), s2.as_matrix()).unwrap().scale_real(0.75);
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        assert!(lhs.is_hermitian(1e-14));
    }

    #[test]
    fn single_site_decay() {
        let p = ModelParams::new_unchecked(2, QMatrix::zeros(2), zz(), lowering());
        let out = lindblad_rhs_n(&QMatrix::from_diag(&[0.0, 1.0]), &p, 1).unwrap();
        assert!(out.max_abs_diff(&QMatrix::from_diag(&[1.0, -1.0])) < 1e-15);
    }

    #[test]
    fn n_body_output_traceless_hermitian() {
        let p = random_model(2, 5, 1.0);
        let rho = random_state(8, 6);
        let gen = NBodyGenerator::new(&p, 3).unwrap();
        let out = gen.apply(rho.as_matrix());
        assert!(out.trace().norm() < 1e-13);
        assert!(out.is_hermitian(1e-13));
        assert!(gen.apply_hermitian(rho.as_matrix()).max_abs_diff(&out) < 1e-13);
    }

    #[test]
    fn n_body_permutation_covariance() {
        let p = random_model(2, 8, 1.0);
        let rho = random_state(8, 9);
        let perm = [3, 1, 2];
        let gen = NBodyGenerator::new(&p, 3).unwrap();
        let a = gen.apply(&permute_sites(rho.as_matrix(), &perm, 3, 2).unwrap());
        let b = permute_sites(&gen.apply(rho.as_matrix()), &perm, 3, 2).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-10);
    }

    #[test]
    fn meanfield_examples() {
        let dark = ModelParams::new_unchecked(2, QMatrix::zeros(2), QMatrix::zeros(4), lowering());
        let out = meanfield_rhs(&QMatrix::from_diag(&[1.0, 0.0]), &dark).unwrap();
        assert!(out.max_abs() < 1e-15);

        let p = ModelParams::new_unchecked(2, QMatrix::zeros(2), zz(), QMatrix::zeros(2));
        let out = meanfield_rhs(&QMatrix::from_diag(&[0.6, 0.4]), &p).unwrap();
        assert!(out.max_abs() < 1e-15);
    }

    #[test]
    fn meanfield_forms_agree() {
        for seed in 0..20 {
            let p = random_model(3, seed, 1.0);
            let m = random_state(3, 100 + seed);
            let a = meanfield_rhs(m.as_matrix(), &p).unwrap();
            let b = meanfield_rhs_partial_trace(m.as_matrix(), &p).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12);
            assert!(a.trace().norm() < 1e-13);
        }
    }

    #[test]
    fn defect_examples() {
        let p = ModelParams::new_unchecked(2, pauli_x(), zz(), QMatrix::zeros(2));
        let delta = defect_operator(DensityMatrix::maximally_mixed(2).as_matrix(), &p, 2).unwrap();
        assert!(delta.max_abs_diff(&zz().scale_real(0.5)) < 1e-15);
        let free = ModelParams::new_unchecked(2, pauli_x(), QMatrix::zeros(4), lowering());
        let delta = defect_operator(&QMatrix::from_diag(&[0.2, 0.8]), &free, 3).unwrap();
        assert!(delta.max_abs() == 0.0);
    }

    #[test]
    fn defect_identity_holds() {
        for seed in 0..10 {
            let p = random_model(2, 40 + seed, 1.0);
            let m = random_state(2, 60 + seed);
            for n in 1..=3 {
                assert!(defect_identity_residual(m.as_matrix(), &p, n).unwrap() < 1e-12);
            }
        }
    }
}
