use crate::tensor::{condition_number, op_norm, solve, DensityMatrix, QMatrix};
use crate::{Error, Result, Tolerances, C64};

use super::integrate::step_count;
use super::{MeanFieldGenerator, ModelParams};

const MINUS_I: C64 = C64::new(0.0, -1.0);
const MAX_CONDITION: f64 = 1e12;

/// Mean-field flow together with its Duhamel splitting
///
/// ```text
/// m_t = V_t m_0 V_t† + V_t [∫_0^t V_s⁻¹ L m_s L† V_s^{-†} ds] V_t†,
/// dV/dt = -i K_t V,   K_t = H̃ + A^{m_t} - (i/2) L†L.
/// ```
#[derive(Debug, Clone)]
pub struct DuhamelTrajectory {
    pub times: Vec<f64>,
    pub m: Vec<QMatrix>,
    pub v: Vec<QMatrix>,
    /// `V_t [∫ V_s⁻¹ L m_s L† V_s^{-†} ds] V_t†` at each time.
    pub integral: Vec<QMatrix>,
    pub m0: QMatrix,
}

impl DuhamelTrajectory {
    /// `V_t m_0 V_t† + integral` at grid index `k`.
    pub fn reconstruction(&self, k: usize) -> QMatrix {
        let v = &self.v[k];
        &v.matmul(&self.m0).matmul_adjoint(v) + &self.integral[k]
    }

    /// Operator-norm distance between `reference` and the reconstruction at `k`.
    pub fn residual_against(&self, k: usize, reference: &QMatrix) -> f64 {
        op_norm(&(reference - &self.reconstruction(k))).unwrap_or(f64::NAN)
    }

    /// Grid index closest to `t`.
    pub fn index_of(&self, t: f64) -> usize {
        self.times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}

/// Integrates `(m, V)` jointly with RK4 on the fixed grid of step `dt` and
/// accumulates the dissipative integral with the trapezoidal rule.
pub fn duhamel_decompose(
    params: &ModelParams,
    m0: &DensityMatrix,
    t_end: f64,
    dt: f64,
    tol: &Tolerances,
) -> Result<DuhamelTrajectory> {
    let d = params.d();
    if m0.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: m0.dim() });
    }
    let lmin = crate::tensor::lambda_min(m0.as_matrix(), tol.herm_tol)?;
    if lmin < tol.eig_floor {
        return Err(Error::NotFaithful(lmin));
    }
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::InvalidArgument(format!("need dt > 0 and t_end >= 0 (dt = {dt}, t_end = {t_end})")));
    }

    let gen = MeanFieldGenerator::new(params);
    let half_ldl = params.l_dag_l().scale(C64::new(0.0, -0.5));
    let l = params.l_jump();
    let k_of = |m: &QMatrix| &gen.effective_hamiltonian(m) + &half_ldl;
    let field = |m: &QMatrix, v: &QMatrix| (gen.apply(m), k_of(m).matmul(v).scale(MINUS_I));
    let integrand = |m: &QMatrix, v: &QMatrix| -> Result<QMatrix> {
        let cond = condition_number(v)?;
        if cond > MAX_CONDITION {
            return Err(Error::SingularPropagator(cond));
        }
        let x = l.matmul(m).matmul_adjoint(l);
        // V⁻¹ X V^{-†} = (V⁻¹ (V⁻¹ X)†)†
        let y = solve(v, &x)?;
        Ok(solve(v, &y.adjoint())?.adjoint())
    };

    let steps = step_count(t_end, dt);
    let mut m = m0.as_matrix().clone();
    let mut v = QMatrix::identity(d);
    let mut inner = QMatrix::zeros(d);
    let mut g_prev = integrand(&m, &v)?;
    let mut out = DuhamelTrajectory {
        times: vec![0.0],
        m: vec![m.clone()],
        v: vec![v.clone()],
        integral: vec![QMatrix::zeros(d)],
        m0: m.clone(),
    };
    let mut t = 0.0;
    for k in 1..=steps {
        let t_next = if k == steps { t_end } else { k as f64 * dt };
        let h = t_next - t;
        let hc = |x: f64| C64::new(x, 0.0);
        let (km1, kv1) = field(&m, &v);
        let stage = |a: &QMatrix, da: &QMatrix, c: f64| {
            let mut s = a.clone();
            s.axpy(hc(c), da);
            s
        };
        let (km2, kv2) = field(&stage(&m, &km1, 0.5 * h), &stage(&v, &kv1, 0.5 * h));
        let (km3, kv3) = field(&stage(&m, &km2, 0.5 * h), &stage(&v, &kv2, 0.5 * h));
        let (km4, kv4) = field(&stage(&m, &km3, h), &stage(&v, &kv3, h));
        for (y, k1, k2, k3, k4) in [(&mut m, &km1, &km2, &km3, &km4), (&mut v, &kv1, &kv2, &kv3, &kv4)] {
            y.axpy(hc(h / 6.0), k1);
            y.axpy(hc(h / 3.0), k2);
            y.axpy(hc(h / 3.0), k3);
            y.axpy(hc(h / 6.0), k4);
        }
        m = m.hermitian_part();

        let g = integrand(&m, &v)?;
        inner.axpy(hc(0.5 * h), &g_prev);
        inner.axpy(hc(0.5 * h), &g);
        g_prev = g;
        t = t_next;

        out.times.push(t);
        out.m.push(m.clone());
        out.v.push(v.clone());
        out.integral.push(v.matmul(&inner).matmul_adjoint(&v).hermitian_part());
    }
    Ok(out)
}
