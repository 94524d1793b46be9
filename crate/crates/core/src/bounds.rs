//! Constants of the relative-entropy estimate
//!
//! ```text
//! H_N(t) ≤ e^{t/q} (H_N(0) + (log C_{T,q} + 2q‖A‖K) / N),
//! K = -log λ_min(m_0) + ‖L‖² T,
//! x = 8e² q ‖A‖ K,  y = 16e q ‖A‖ K,  C_{T,q} = 1 + x/(1-x)² + y/(1-y),
//! ```
//!
//! valid for `0 < q < e⁻²/(8‖A‖K)`.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `K = -log λ_min(m_0) + ‖L‖² T`.
pub fn k_constant(lambda_min_m0: f64, l_norm: f64, t_horizon: f64) -> Result<f64> {
    if !(lambda_min_m0 > 0.0 && lambda_min_m0 <= 1.0) {
        return Err(Error::NotFaithful(lambda_min_m0));
    }
    Ok(-lambda_min_m0.ln() + l_norm * l_norm * t_horizon)
}

/// `e⁻² / (8‖A‖K)`, infinite when `‖A‖K = 0`.
pub fn q_max(a_norm: f64, k_const: f64) -> f64 {
    let ak = a_norm * k_const;
    if ak > 0.0 {
        (-2.0f64).exp() / (8.0 * ak)
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub q: f64,
    pub k_const: f64,
    pub a_norm: f64,
    pub x: f64,
    pub y: f64,
    pub c_tq: f64,
    pub q_max: f64,
}

/// Builds the constants for an admissible `q`.
pub fn bound_constants(q: f64, a_norm: f64, k_const: f64) -> Result<BoundParams> {
    let qm = q_max(a_norm, k_const);
    if !(q > 0.0 && q < qm) {
        return Err(Error::InadmissibleQ { q, q_max: qm });
    }
    let ak = a_norm * k_const;
    let x = 8.0 * E * E * q * ak;
    let y = 16.0 * E * q * ak;
    let c_tq = 1.0 + x / ((1.0 - x) * (1.0 - x)) + y / (1.0 - y);
    Ok(BoundParams { q, k_const, a_norm, x, y, c_tq, q_max: qm })
}

impl BoundParams {
    pub fn new(q: f64, a_norm: f64, k_const: f64) -> Result<Self> {
        bound_constants(q, a_norm, k_const)
    }

    /// `q = q_max/2`, or `q = 1` when `q_max` is infinite.
    pub fn with_default_q(a_norm: f64, k_const: f64) -> Result<Self> {
        let qm = q_max(a_norm, k_const);
        let q = if qm.is_finite() { 0.5 * qm } else { 1.0 };
        bound_constants(q, a_norm, k_const)
    }

    /// `log C_{T,q} + 2q‖A‖K`.
    pub fn numerator(&self) -> f64 {
        self.c_tq.ln() + 2.0 * self.q * self.a_norm * self.k_const
    }
}

/// `t/q + log(h0 + (log C + 2q‖A‖K)/n)`.
pub fn theorem_rhs_log(t: f64, h0: f64, n: usize, bp: &BoundParams) -> f64 {
    t / bp.q + (h0 + bp.numerator() / n as f64).ln()
}

/// `log h`, with `-∞` for `h ≤ 0`.
pub fn log_entropy(h: f64) -> f64 {
    if h > 0.0 {
        h.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// `2k · h_n`.
pub fn marginal_bound(h_n: f64, k: usize) -> f64 {
    2.0 * k as f64 * h_n
}

/// `N/⌊N/k⌋ · h_n`, the sharper intermediate form.
pub fn marginal_bound_sharp(h_n: f64, n: usize, k: usize) -> f64 {
    n as f64 / (n / k) as f64 * h_n
}

/// `λ_min(m_0) e^{-‖L‖² t}`.
pub fn faithfulness_floor(t: f64, lambda_min_m0: f64, l_norm: f64) -> f64 {
    lambda_min_m0 * (-l_norm * l_norm * t).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn k_examples() {
        assert_eq!(k_constant(1.0, 0.0, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(k_constant(0.3, 1.0, 1.0).unwrap(), 2.203973, epsilon = 1e-6);
        assert_abs_diff_eq!(k_constant(0.5, 0.0, 5.0).unwrap(), 0.693147, epsilon = 1e-6);
        assert!(k_constant(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn constants_at_half_q_max() {
        let k = k_constant(0.3, 1.0, 1.0).unwrap();
        let bp = BoundParams::with_default_q(1.0, k).unwrap();
        assert_abs_diff_eq!(bp.x, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(bp.y, 1.0 / E, epsilon = 1e-12);
        assert_abs_diff_eq!(bp.c_tq, 3.581977, epsilon = 1e-6);
        assert_abs_diff_eq!(bp.q, (-2.0f64).exp() / (16.0 * k), epsilon = 1e-15);
        assert_abs_diff_eq!(bp.q, 0.0038378, epsilon = 1e-7);
        assert!(bound_constants(bp.q_max, 1.0, k).is_err());
    }

    #[test]
    fn admissibility_is_monotone_and_c_tends_to_one() {
        let qm = q_max(1.0, 2.0);
        let mut prev = f64::INFINITY;
        for j in 2..=6 {
            let c = bound_constants(qm * 10f64.powi(-j), 1.0, 2.0).unwrap().c_tq;
            assert!(c >= 1.0 && c < prev);
            prev = c;
        }
        assert!(prev - 1.0 < 1e-4);
    }

    #[test]
    fn no_interaction_gives_infinite_q_max() {
        let bp = BoundParams::with_default_q(0.0, 1.0).unwrap();
        assert!(bp.q_max.is_infinite());
        assert_eq!((bp.q, bp.x, bp.y, bp.c_tq), (1.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn rhs_examples() {
        let bp = BoundParams::with_default_q(1.0, 2.203973).unwrap();
        let base = theorem_rhs_log(0.0, 0.0, 4, &bp);
        assert_abs_diff_eq!(base, (bp.numerator() / 4.0).ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(base - theorem_rhs_log(0.0, 0.0, 40, &bp), 10f64.ln(), epsilon = 1e-12);
        let rhs = theorem_rhs_log(0.5, 0.0, 4, &bp);
        assert_abs_diff_eq!(0.5 / bp.q, 130.28, epsilon = 0.01);
        assert_abs_diff_eq!(rhs, 0.5 / bp.q + 0.323208f64.ln(), epsilon = 1e-5);
    }

    #[test]
    fn floor_and_marginal() {
        assert_eq!(faithfulness_floor(0.0, 0.3, 1.0), 0.3);
        assert_eq!(faithfulness_floor(4.0, 0.3, 0.0), 0.3);
        assert_abs_diff_eq!(faithfulness_floor(1.0, 0.3, 1.0), 0.110364, epsilon = 1e-6);
        assert_eq!(marginal_bound(0.0, 3), 0.0);
        assert_abs_diff_eq!(marginal_bound(0.01, 1), 0.02, epsilon = 1e-16);
        assert!(marginal_bound_sharp(0.01, 5, 2) <= marginal_bound(0.01, 2));
    }
}
