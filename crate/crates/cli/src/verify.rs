//! Property suites over seeded random instances.
//!
//! Every check reports the largest residual it saw and passes when that
//! residual is at most its threshold. Checks draw from their own seed stream,
//! derived from the suite seed and the check name, so the report does not
//! depend on scheduling.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use rayon::prelude::*;

use qpoc_core::bounds::{
    bound_constants, faithfulness_floor, k_constant, log_entropy, marginal_bound, q_max, theorem_rhs_log,
    BoundParams,
};
use qpoc_core::combinatorics::{
    all_edge_tuples, center_two_body, centering_residual, counting_bound_check, enumerate_admissible,
    isolated_vertex_trace, random_centered_h, EdgeTuple,
};
use qpoc_core::dynamics::{
    a_sigma, defect_identity_residual, duhamel_decompose, integrate, integrate_with, lindblad_rhs_n,
    meanfield_rhs, meanfield_rhs_partial_trace, IntegrateOptions, MeanFieldGenerator, NBodyGenerator,
};
use qpoc_core::entropy::{
    golden_thompson_gap, marginal_entropy, marginal_trace_distance, monotonicity_profile, normalized_entropy,
    partial_trace_pair, pinsker_gap, relative_entropy, superadditivity_gap, variational_gap,
};
use qpoc_core::meanfield::{build_w, exchangeability_bridge, exp_moment, interaction_observables, moment_term};
use qpoc_core::random::{random_hermitian, random_model, random_state};
use qpoc_core::symmetry::{exchangeability_residual, symmetrize};
use qpoc_core::tensor::operators::{lowering, pauli_x, pauli_y, pauli_z};
use qpoc_core::tensor::{
    embed, frechet_log, herm_eig, herm_exp, herm_log, kron, lambda_min, op_norm, partial_trace, permute_sites,
    spectral_functionals, swap_operator, tensor_power, DensityMatrix, QMatrix,
};
use qpoc_core::{ModelParams, Result, Tolerances, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Preliminaries,
    Dynamics,
    Meanfield,
    Bounds,
    Combinatorics,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Preliminaries => "preliminaries",
            Suite::Dynamics => "dynamics",
            Suite::Meanfield => "meanfield",
            Suite::Bounds => "bounds",
            Suite::Combinatorics => "combinatorics",
        }
    }
}

/// A suite selector: one suite or all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    All,
    One(Suite),
}

impl std::str::FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "all" => Selection::All,
            "preliminaries" => Selection::One(Suite::Preliminaries),
            "dynamics" => Selection::One(Suite::Dynamics),
            "meanfield" => Selection::One(Suite::Meanfield),
            "bounds" => Selection::One(Suite::Bounds),
            "combinatorics" => Selection::One(Suite::Combinatorics),
            other => return Err(format!("unknown suite '{other}'")),
        })
    }
}

struct Check {
    suite: Suite,
    name: &'static str,
    anchor: &'static str,
    threshold: f64,
    run: fn(u64) -> Result<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub suite: Suite,
    pub name: &'static str,
    pub anchor: &'static str,
    pub residual: f64,
    pub threshold: f64,
    pub error: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.residual <= self.threshold
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub selection: Selection,
    pub seed: u64,
    pub outcomes: Vec<Outcome>,
    /// Manifest anchors with no check in this run; only populated for `all`.
    pub uncovered: Vec<&'static str>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.uncovered.is_empty() && self.outcomes.iter().all(Outcome::passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "verify seed={} checks={}", self.seed, self.outcomes.len());
        for o in &self.outcomes {
            let status = if o.passed() { "PASS" } else { "FAIL" };
            let _ = write!(
                s,
                "{status} {:<13} {:<34} max_residual={:<10} threshold={:.0e} [{}]",
                o.suite.name(),
                o.name,
                format!("{:.3e}", o.residual),
                o.threshold,
                o.anchor
            );
            if let Some(e) = &o.error {
                let _ = write!(s, " error: {e}");
            }
            s.push('\n');
        }
        if self.selection == Selection::All {
            let covered = MANIFEST.len() - self.uncovered.len();
            let _ = writeln!(s, "coverage {covered}/{} anchors", MANIFEST.len());
            for a in &self.uncovered {
                let _ = writeln!(s, "UNCOVERED {a}");
            }
        }
        let failed = self.outcomes.iter().filter(|o| !o.passed()).count();
        let _ = writeln!(s, "summary passed={} failed={}", self.outcomes.len() - failed, failed);
        s
    }
}

/// Every anchor the full run must touch.
pub const MANIFEST: &[&str] = &[
    A_TENSOR, A_EMBED, A_PTRACE, A_SWAP, A_LOG, A_T_ID, A_T_COMM, A_T_SELF, A_T_TRACE, A_NORMS, A_RELENT,
    A_HN, A_PINSKER, A_GT, A_VAR, A_SUPER, A_MONO_PT, A_MONO_SG, A_NBODY, A_MF, A_ASIGMA, A_MF_ID,
    A_EXCH_FLOW, A_FAITHFUL, A_DUHAMEL, A_OBS, A_B_ID, A_CENTER, A_W, A_EXPMOM, A_MOMENT, A_DEFECT,
    A_BRIDGE, A_K, A_CTQ, A_MAIN, A_COR, A_COR_TN, A_ISOLATED, A_COUNT, A_CENTER_ASSUMPTION, A_STATES,
];

const A_TENSOR: &str = "tensor product of Hilbert spaces";
const A_EMBED: &str = "operator acting on the l-th factor";
const A_PTRACE: &str = "partial trace defining property";
const A_SWAP: &str = "flip operator and swap symmetry";
const A_LOG: &str = "functional calculus for log";
const A_T_ID: &str = "derivative of log: T_s(s) = 1";
const A_T_COMM: &str = "derivative of log: commutators";
const A_T_SELF: &str = "derivative of log: self-adjointness";
const A_T_TRACE: &str = "derivative of log: trace identity";
const A_NORMS: &str = "trace norm, operator norm, lambda_min";
const A_RELENT: &str = "quantum relative entropy";
const A_HN: &str = "normalized relative entropy";
const A_PINSKER: &str = "quantum Pinsker inequality";
const A_GT: &str = "Golden-Thompson inequality";
const A_VAR: &str = "variational formula with Golden-Thompson";
const A_SUPER: &str = "superadditivity over tensorized references";
const A_MONO_PT: &str = "monotonicity under partial trace";
const A_MONO_SG: &str = "monotonicity along a CPTP semigroup";
const A_NBODY: &str = "N-body Hamiltonian and Lindblad equation";
const A_MF: &str = "mean-field Lindblad equation";
const A_ASIGMA: &str = "average potential A^sigma";
const A_MF_ID: &str = "mean-field identity tr2[A, s x s] = [A^s, s]";
const A_EXCH_FLOW: &str = "exchangeability preserved by the flow";
const A_FAITHFUL: &str = "lower bound on lambda_min(m_t)";
const A_DUHAMEL: &str = "Duhamel representation of m_t";
const A_OBS: &str = "observables a_t, b_t, centered a_t";
const A_B_ID: &str = "identification b_t = -i[A^m, log m]";
const A_CENTER: &str = "centering of the two-body observable";
const A_W: &str = "averaged operators U and W";
const A_EXPMOM: &str = "exponential moment bound";
const A_MOMENT: &str = "moment bound through admissible tuples";
const A_DEFECT: &str = "defect operator identity";
const A_BRIDGE: &str = "exchangeability reduction to pair marginal";
const A_K: &str = "constant K";
const A_CTQ: &str = "constants x, y, C and admissible q";
const A_MAIN: &str = "quantitative entropy estimate";
const A_COR: &str = "marginal entropy corollary";
const A_COR_TN: &str = "trace-norm chaos corollary";
const A_ISOLATED: &str = "isolated-vertex vanishing lemma";
const A_COUNT: &str = "admissible tuple counting lemma";
const A_CENTER_ASSUMPTION: &str = "centering assumption";
const A_STATES: &str = "density operators";

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Amount by which `gap ≥ 0` is violated.
fn violation(gap: f64) -> f64 {
    (-gap).max(0.0)
}

/// Largest residual over `count` instances `f(seed + i)`.
fn max_over(seed: u64, count: u64, f: impl Fn(u64) -> Result<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let r = f(seed.wrapping_add(i.wrapping_mul(0x9E37_79B9)))?;
        worst = if r.is_nan() { f64::INFINITY } else { worst.max(r) };
    }
    Ok(worst)
}

fn qubit_model() -> ModelParams {
    ModelParams::new(2, pauli_z(), kron(&pauli_x(), &pauli_x()), lowering().scale_real(0.5), &tol())
        .expect("valid model")
}

fn qubit_m0() -> DensityMatrix {
    DensityMatrix::diagonal(&[0.7, 0.3], &tol()).expect("valid state")
}

fn stream(seed: u64, name: &str) -> u64 {
    // FNV-1a over the check name, mixed with the suite seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn checks() -> Vec<Check> {
    use Suite::*;
    vec![
        // preliminaries
        Check { suite: Preliminaries, name: "kron_mixed_product", anchor: A_TENSOR, threshold: 1e-12, run: |s| {
            max_over(s, 20, |s| {
                let (a, b, c, d) = (random_hermitian(2, s), random_hermitian(3, s + 1), random_hermitian(2, s + 2), random_hermitian(3, s + 3));
                Ok(kron(&a, &b).matmul(&kron(&c, &d)).max_abs_diff(&kron(&a.matmul(&c), &b.matmul(&d))))
            })
        }},
        Check { suite: Preliminaries, name: "embed_products", anchor: A_EMBED, threshold: 1e-12, run: |s| {
            max_over(s, 20, |s| {
                let (o1, o2) = (random_hermitian(4, s), random_hermitian(4, s + 1));
                let lhs = embed(&o1, &[2, 3], 3, 2)?.matmul(&embed(&o2, &[2, 3], 3, 2)?);
                let zz = embed(&kron(&pauli_z(), &pauli_z()), &[2, 3], 3, 2)?;
                let chain = kron(&QMatrix::identity(2), &kron(&pauli_z(), &pauli_z()));
                Ok(lhs.max_abs_diff(&embed(&o1.matmul(&o2), &[2, 3], 3, 2)?).max(zz.max_abs_diff(&chain)))
            })
        }},
        Check { suite: Preliminaries, name: "partial_trace", anchor: A_PTRACE, threshold: 1e-13, run: |s| {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let z = C64::new(0.0, 0.0);
            let bell = DensityMatrix::pure(&[C64::new(h, 0.0), z, z, C64::new(h, 0.0)])?;
            let half = partial_trace(bell.as_matrix(), &[1], 2, 2)?.max_abs_diff(&QMatrix::identity(2).scale_real(0.5));
            let r = max_over(s, 20, |s| {
                let rho = random_state(2, s);
                let both = kron(rho.as_matrix(), random_state(2, s + 2).as_matrix());
                let kept = partial_trace(&both, &[1], 2, 2)?;
                Ok(kept.max_abs_diff(rho.as_matrix()).max(partial_trace(&both, &[1, 2], 2, 2)?.max_abs_diff(&both)))
            })?;
            Ok(half.max(r))
        }},
        Check { suite: Preliminaries, name: "swap_operator", anchor: A_SWAP, threshold: 1e-14, run: |_| {
            let mut worst: f64 = 0.0;
            for d in 1..=4 {
                let sw = swap_operator(d);
                worst = worst.max(sw.matmul(&sw).max_abs_diff(&QMatrix::identity(d * d)));
                worst = worst.max(sw.hermitian_residual());
            }
            let sw = swap_operator(2);
            let conj = sw.matmul(&kron(&pauli_z(), &pauli_x())).matmul(&sw);
            Ok(worst.max(conj.max_abs_diff(&kron(&pauli_x(), &pauli_z()))))
        }},
        Check { suite: Preliminaries, name: "herm_eig_and_log", anchor: A_LOG, threshold: 1e-10, run: |s| {
            let recon = max_over(s, 50, |s| {
                let m = random_hermitian(8, s);
                Ok(herm_eig(&m, 1e-10)?.reconstruct().max_abs_diff(&m))
            })?;
            let roundtrip = max_over(s ^ 1, 20, |s| {
                let h = random_hermitian(5, s);
                Ok(herm_log(&herm_exp(&h, 1e-10)?, 1e-300, 1e-6)?.max_abs_diff(&h))
            })?;
            let l = herm_log(&QMatrix::from_diag(&[0.7, 0.3]), 1e-14, 1e-10)?;
            let closed = (l[(0, 0)].re - 0.7f64.ln()).abs().max((l[(1, 1)].re - 0.3f64.ln()).abs());
            Ok(recon.max(roundtrip).max(closed))
        }},
        Check { suite: Preliminaries, name: "frechet_sigma_identity", anchor: A_T_ID, threshold: 1e-10, run: |s| {
            max_over(s, 50, |s| {
                let sigma = random_state(3, s);
                Ok(frechet_log(&sigma, sigma.as_matrix(), &tol())?.max_abs_diff(&QMatrix::identity(3)))
            })
        }},
        Check { suite: Preliminaries, name: "frechet_commutator", anchor: A_T_COMM, threshold: 1e-10, run: |s| {
            max_over(s, 50, |s| {
                let sigma = random_state(3, s);
                let x = random_hermitian(3, s + 1);
                let log_s = herm_log(sigma.as_matrix(), 1e-14, 1e-10)?;
                let lhs = frechet_log(&sigma, &x.commutator(sigma.as_matrix()), &tol())?;
                Ok(lhs.max_abs_diff(&x.commutator(&log_s)))
            })
        }},
        Check { suite: Preliminaries, name: "frechet_self_adjoint", anchor: A_T_SELF, threshold: 1e-10, run: |s| {
            max_over(s, 50, |s| {
                let sigma = random_state(3, s);
                let (x, y) = (random_hermitian(3, s + 1), random_hermitian(3, s + 2));
                let tx = frechet_log(&sigma, &x, &tol())?;
                let ty = frechet_log(&sigma, &y, &tol())?;
                Ok((y.trace_product(&tx) - ty.trace_product(&x)).norm())
            })
        }},
        Check { suite: Preliminaries, name: "frechet_trace", anchor: A_T_TRACE, threshold: 1e-10, run: |s| {
            max_over(s, 50, |s| {
                let sigma = random_state(3, s);
                let x = random_hermitian(3, s + 1);
                let tx = frechet_log(&sigma, &x, &tol())?;
                Ok((sigma.as_matrix().trace_product(&tx) - x.trace()).norm())
            })
        }},
        Check { suite: Preliminaries, name: "spectral_functionals", anchor: A_NORMS, threshold: 1e-13, run: |_| {
            let f = spectral_functionals(&QMatrix::from_diag(&[1.0, -3.0]), 1e-10)?;
            let a = (f.trace_norm - 4.0).abs().max((f.op_norm - 3.0).abs()).max((f.lambda_min.unwrap_or(0.0) + 3.0).abs());
            let m = &kron(&pauli_x(), &pauli_z()) + &kron(&pauli_z(), &pauli_x());
            let sq = &QMatrix::identity(4).scale_real(2.0) + &kron(&pauli_y(), &pauli_y()).scale_real(2.0);
            Ok(a.max((op_norm(&m)? - 2.0).abs()).max(m.matmul(&m).max_abs_diff(&sq)))
        }},
        Check { suite: Preliminaries, name: "relative_entropy_cases", anchor: A_RELENT, threshold: 1e-12, run: |s| {
            let d = |p: &[f64]| DensityMatrix::new_unchecked(QMatrix::from_diag(p));
            let kl = (relative_entropy(&d(&[1.0, 0.0]), &d(&[0.5, 0.5]), &tol())?.value() - LN_2).abs();
            let inf = relative_entropy(&d(&[0.5, 0.5]), &d(&[1.0, 0.0]), &tol())?;
            let sentinel = if inf.support_violation() { 0.0 } else { 1.0 };
            let selfe = max_over(s, 20, |s| {
                let r = random_state(4, s);
                let t = random_state(4, s + 1);
                let v = relative_entropy(&r, &t, &tol())?.value();
                Ok(relative_entropy(&r, &r, &tol())?.value().abs().max(violation(v)))
            })?;
            Ok(kl.max(sentinel).max(selfe))
        }},
        Check { suite: Preliminaries, name: "normalized_entropy", anchor: A_HN, threshold: 1e-12, run: |s| {
            max_over(s, 20, |s| {
                let rho = random_state(8, s);
                let m = random_state(2, s + 1);
                let mm = DensityMatrix::new_unchecked(tensor_power(m.as_matrix(), 3));
                let direct = relative_entropy(&rho, &mm, &tol())?.value() / 3.0;
                Ok((normalized_entropy(&rho, &m, 3, &tol())? - direct).abs())
            })
        }},
        Check { suite: Preliminaries, name: "pinsker", anchor: A_PINSKER, threshold: 1e-10, run: |s| {
            max_over(s, 100, |s| Ok(violation(pinsker_gap(&random_state(2, s), &random_state(2, s + 1), &tol())?)))
        }},
        Check { suite: Preliminaries, name: "golden_thompson", anchor: A_GT, threshold: 1e-10, run: |s| {
            max_over(s, 100, |s| Ok(violation(golden_thompson_gap(&random_hermitian(4, s), &random_hermitian(4, s + 1), &tol())?)))
        }},
        Check { suite: Preliminaries, name: "variational", anchor: A_VAR, threshold: 1e-10, run: |s| {
            max_over(s, 100, |s| {
                let lambda = 0.1 + (s % 37) as f64 / 10.0;
                let g = variational_gap(&random_state(2, s), &random_state(2, s + 1), &random_hermitian(2, s + 2), lambda, &tol())?;
                Ok(violation(g))
            })
        }},
        Check { suite: Preliminaries, name: "superadditivity", anchor: A_SUPER, threshold: 1e-9, run: |s| {
            max_over(s, 100, |s| {
                let rho = symmetrize(&random_state(16, s), 4, 2)?;
                Ok(violation(superadditivity_gap(&rho, &random_state(2, s + 1), 2, &tol())?))
            })
        }},
        Check { suite: Preliminaries, name: "monotonicity_partial_trace", anchor: A_MONO_PT, threshold: 1e-10, run: |s| {
            max_over(s, 100, |s| {
                let (reduced, full) = partial_trace_pair(&random_state(4, s), &random_state(4, s + 1), &[1], 2, 2, &tol())?;
                Ok(violation(full.value() - reduced.value()))
            })
        }},
        Check { suite: Preliminaries, name: "monotonicity_semigroup", anchor: A_MONO_SG, threshold: 1e-8, run: |s| {
            let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
            max_over(s, 100, |s| {
                let p = random_model(2, s, 1.0);
                let gen = NBodyGenerator::new(&p, 1)?;
                let prof = monotonicity_profile(&random_state(2, s + 1), &random_state(2, s + 2), |y| gen.apply(y), &grid, &tol())?;
                Ok(prof.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max))
            })
        }},
        Check { suite: Preliminaries, name: "density_matrix_checks", anchor: A_STATES, threshold: 0.0, run: |s| {
            let accepted = max_over(s, 20, |s| Ok(if DensityMatrix::new(random_state(3, s).into_matrix(), &tol()).is_ok() { 0.0 } else { 1.0 }))?;
            let rejected = if DensityMatrix::diagonal(&[1.1, -0.1], &tol()).is_err() { 0.0 } else { 1.0 };
            Ok(accepted.max(rejected))
        }},
        // dynamics
        Check { suite: Dynamics, name: "a_sigma", anchor: A_ASIGMA, threshold: 1e-13, run: |s| {
            let m = QMatrix::from_diag(&[0.7, 0.3]);
            let ex = a_sigma(&kron(&pauli_z(), &pauli_z()), &m)?.max_abs_diff(&pauli_z().scale_real(0.4));
            let r = max_over(s, 50, |s| {
                let p = random_model(3, s, 1.0);
                let sigma = random_state(3, s + 1);
                let route = partial_trace(&kron(&QMatrix::identity(3), sigma.as_matrix()).matmul(p.a_int()), &[1], 2, 3)?;
                let am = a_sigma(p.a_int(), sigma.as_matrix())?;
                Ok(am.max_abs_diff(&route).max(violation(op_norm(p.a_int())? - op_norm(&am)? + 1e-14)))
            })?;
            Ok(ex.max(r))
        }},
        Check { suite: Dynamics, name: "n_body_generator", anchor: A_NBODY, threshold: 1e-12, run: |s| {
            let p = ModelParams::new_unchecked(2, QMatrix::zeros(2), kron(&pauli_z(), &pauli_z()), lowering());
            let decay = lindblad_rhs_n(&QMatrix::from_diag(&[0.0, 1.0]), &p, 1)?.max_abs_diff(&QMatrix::from_diag(&[1.0, -1.0]));
            let r = max_over(s, 10, |s| {
                let p = random_model(2, s, 1.0);
                let out = lindblad_rhs_n(random_state(8, s + 1).as_matrix(), &p, 3)?;
                Ok(out.trace().norm().max(out.hermitian_residual()))
            })?;
            Ok(decay.max(r))
        }},
        Check { suite: Dynamics, name: "permutation_covariance", anchor: A_EXCH_FLOW, threshold: 1e-10, run: |s| {
            max_over(s, 10, |s| {
                let p = random_model(2, s, 1.0);
                let rho = random_state(8, s + 1);
                let gen = NBodyGenerator::new(&p, 3)?;
                let perm = [2, 3, 1];
                let a = gen.apply(&permute_sites(rho.as_matrix(), &perm, 3, 2)?);
                Ok(a.max_abs_diff(&permute_sites(&gen.apply(rho.as_matrix()), &perm, 3, 2)?))
            })
        }},
        Check { suite: Dynamics, name: "meanfield_forms", anchor: A_MF_ID, threshold: 1e-12, run: |s| {
            max_over(s, 50, |s| {
                let p = random_model(2 + (s % 2) as usize, s, 1.0);
                let m = random_state(p.d(), s + 1);
                let a = meanfield_rhs(m.as_matrix(), &p)?;
                Ok(a.max_abs_diff(&meanfield_rhs_partial_trace(m.as_matrix(), &p)?).max(a.trace().norm()))
            })
        }},
        Check { suite: Dynamics, name: "meanfield_examples", anchor: A_MF, threshold: 1e-15, run: |_| {
            let dark = ModelParams::new_unchecked(2, QMatrix::zeros(2), QMatrix::zeros(4), lowering());
            let a = meanfield_rhs(&QMatrix::from_diag(&[1.0, 0.0]), &dark)?.max_abs();
            let zz = ModelParams::new_unchecked(2, QMatrix::zeros(2), kron(&pauli_z(), &pauli_z()), QMatrix::zeros(2));
            Ok(a.max(meanfield_rhs(&QMatrix::from_diag(&[0.6, 0.4]), &zz)?.max_abs()))
        }},
        Check { suite: Dynamics, name: "defect_identity", anchor: A_DEFECT, threshold: 1e-9, run: |s| {
            max_over(s, 50, |s| {
                let p = random_model(2, s, 1.0);
                let m = random_state(2, s + 1);
                let mut worst: f64 = 0.0;
                for n in 1..=3 {
                    worst = worst.max(defect_identity_residual(m.as_matrix(), &p, n)?);
                }
                Ok(worst)
            })
        }},
        Check { suite: Dynamics, name: "rk4_unitary_flow", anchor: A_NBODY, threshold: 1e-8, run: |s| {
            let rho = random_state(2, s);
            let z = pauli_z();
            let traj = integrate(|y| z.commutator(y).scale(C64::new(0.0, -1.0)), &rho, 1.0, 1e-3)?;
            let zd = [1.0, -1.0];
            let exact = QMatrix::from_fn(2, |i, j| rho.as_matrix()[(i, j)] * C64::from_polar(1.0, -(zd[i] - zd[j])));
            Ok(traj.final_state().as_matrix().max_abs_diff(&exact))
        }},
        Check { suite: Dynamics, name: "faithfulness_floor", anchor: A_FAITHFUL, threshold: 1e-8, run: |s| {
            let mut models = vec![(qubit_model(), qubit_m0())];
            for i in 0..20u64 {
                let d = 2 + (i % 2) as usize;
                models.push((random_model(d, s.wrapping_add(i), 1.0), random_state(d, s.wrapping_add(100 + i))));
            }
            let mut worst: f64 = 0.0;
            for (p, m0) in models {
                let gen = MeanFieldGenerator::new(&p);
                let l0 = lambda_min(m0.as_matrix(), 1e-10)?;
                let traj = integrate(|m| gen.apply(m), &m0, 0.5, 1e-3)?;
                for (t, st) in traj.times.iter().zip(&traj.states) {
                    let floor = faithfulness_floor(*t, l0, p.l_norm());
                    worst = worst.max(floor - lambda_min(st.as_matrix(), 1e-10)?);
                }
            }
            Ok(worst)
        }},
        Check { suite: Dynamics, name: "duhamel_reconstruction", anchor: A_DUHAMEL, threshold: 1e-5, run: |_| {
            let p = qubit_model();
            let dh = duhamel_decompose(&p, &qubit_m0(), 0.5, 1e-3, &tol())?;
            let gen = MeanFieldGenerator::new(&p);
            let traj = integrate(|m| gen.apply(m), &qubit_m0(), 0.5, 1e-3)?;
            let mut worst: f64 = 0.0;
            for t in [0.1, 0.3, 0.5] {
                let k = dh.index_of(t);
                worst = worst.max(dh.residual_against(k, traj.states[k].as_matrix()));
            }
            Ok(worst)
        }},
        Check { suite: Dynamics, name: "duhamel_integral_positivity", anchor: A_DUHAMEL, threshold: 1e-9, run: |_| {
            let dh = duhamel_decompose(&qubit_model(), &qubit_m0(), 0.5, 1e-3, &tol())?;
            let mut worst: f64 = 0.0;
            for t in [0.1, 0.3, 0.5] {
                worst = worst.max(-lambda_min(&dh.integral[dh.index_of(t)], 1e-10)?);
            }
            Ok(worst)
        }},
        Check { suite: Dynamics, name: "n_body_trajectory", anchor: A_EXCH_FLOW, threshold: 1e-8, run: |_| {
            let p = qubit_model();
            let gen = NBodyGenerator::new(&p, 3)?;
            let start = DensityMatrix::new_unchecked(tensor_power(qubit_m0().as_matrix(), 3));
            let mut opts = IntegrateOptions::new(0.2, 1e-3);
            opts.track_lambda_min = true;
            opts.record_stride = 20;
            let traj = integrate_with(|r| gen.apply_hermitian(r), &start, &opts)?;
            let mut worst = traj.report.max_trace_drift.max(violation(traj.report.min_eigenvalue.unwrap_or(0.0)));
            for st in &traj.states {
                worst = worst.max(exchangeability_residual(st.as_matrix(), 3, 2)?);
            }
            Ok(worst)
        }},
        // meanfield
        Check { suite: Meanfield, name: "b_identification", anchor: A_B_ID, threshold: 1e-10, run: |s| {
            max_over(s, 50, |s| {
                let p = random_model(2 + (s % 2) as usize, s, 1.0);
                let m = random_state(p.d(), s + 1);
                Ok(interaction_observables(p.a_int(), &m, &tol())?.residuals(p.a_int(), &m)?.b_identification)
            })
        }},
        Check { suite: Meanfield, name: "centering", anchor: A_CENTER, threshold: 1e-10, run: |s| {
            max_over(s, 50, |s| {
                let p = random_model(2 + (s % 2) as usize, s, 1.0);
                let m = random_state(p.d(), s + 1);
                let r = interaction_observables(p.a_int(), &m, &tol())?.residuals(p.a_int(), &m)?;
                Ok(r.centering_first.max(r.centering_second).max(r.trace_mb))
            })
        }},
        Check { suite: Meanfield, name: "observables", anchor: A_OBS, threshold: 1e-12, run: |s| {
            let a = &kron(&pauli_x(), &pauli_z()) + &kron(&pauli_z(), &pauli_x());
            let obs = interaction_observables(&a, &qubit_m0(), &tol())?;
            let c = 0.4 * (0.3f64.ln() - 0.7f64.ln());
            let closed = (obs.b[(0, 1)] - C64::new(0.0, -c)).norm().max((obs.b[(1, 0)] - C64::new(0.0, c)).norm());
            let r = max_over(s, 50, |s| {
                let p = random_model(2, s, 1.0);
                let m = random_state(2, s + 1);
                let obs = interaction_observables(p.a_int(), &m, &tol())?;
                let r = obs.residuals(p.a_int(), &m)?;
                let b_bound = op_norm(&obs.b)? - 2.0 * p.a_norm() * op_norm(&obs.lambda)?;
                Ok(r.hermiticity.max(r.norm_excess.max(0.0)).max(b_bound.max(0.0)))
            })?;
            Ok(closed.max(r))
        }},
        Check { suite: Meanfield, name: "build_w", anchor: A_W, threshold: 1e-13, run: |s| {
            max_over(s, 10, |s| {
                let h = random_centered_h(&random_state(2, s), s + 1);
                let w3 = build_w(&h, 3, 2)?;
                let mut sum = QMatrix::zeros(8);
                for e in [[1, 2], [1, 3], [2, 3]] {
                    sum += &embed(&h, &e, 3, 2)?;
                }
                let w2 = build_w(&h, 2, 2)?;
                Ok(w3.max_abs_diff(&sum.scale_real(1.0 / 3.0)).max(w2.max_abs_diff(&h.scale_real(0.5))))
            })
        }},
        Check { suite: Meanfield, name: "exp_moment_small_q", anchor: A_EXPMOM, threshold: 1e-5, run: |s| {
            max_over(s, 10, |s| {
                let p = random_model(2, s, 1.0);
                let m = random_state(2, s + 1);
                let obs = interaction_observables(p.a_int(), &m, &tol())?;
                let at0 = (exp_moment(&m, &obs.a_hat, 3, 0.0, &tol())? - 1.0).abs();
                let h = 1e-6;
                let fd = (exp_moment(&m, &obs.a_hat, 3, h, &tol())? - 1.0) / h;
                Ok(at0.max(fd.abs()))
            })
        }},
        Check { suite: Meanfield, name: "exp_moment_bound", anchor: A_EXPMOM, threshold: 0.0, run: |_| {
            let p = qubit_model();
            let k = k_constant(0.3, p.l_norm(), 0.5)?;
            let bp = BoundParams::with_default_q(p.a_norm(), k)?;
            let gen = MeanFieldGenerator::new(&p);
            let traj = integrate(|m| gen.apply(m), &qubit_m0(), 0.5, 1e-3)?;
            let mut worst = f64::NEG_INFINITY;
            for t in [0.0, 0.25, 0.5] {
                let m = &traj.states[(t / 1e-3_f64).round() as usize];
                let obs = interaction_observables(p.a_int(), m, &tol())?;
                for n in 2..=4 {
                    worst = worst.max(exp_moment(m, &obs.a_hat, n, bp.q, &tol())? - bp.c_tq);
                }
            }
            Ok(worst.max(0.0))
        }},
        Check { suite: Meanfield, name: "moment_terms", anchor: A_MOMENT, threshold: 1e-10, run: |s| {
            let count = enumerate_admissible(3, 2)?.count as f64;
            max_over(s, 20, |s| {
                let rho = random_state(2, s);
                let h = random_centered_h(&rho, s + 1);
                let k0 = (moment_term(&rho, &h, 3, 0)? - 1.0).abs();
                let k1 = moment_term(&rho, &h, 3, 1)?.abs();
                let k2 = moment_term(&rho, &h, 3, 2)?.abs() - count / 9.0 * op_norm(&h)?.powi(2);
                Ok(k0.max(k1).max(k2.max(0.0)))
            })
        }},
        Check { suite: Meanfield, name: "exchangeability_bridge", anchor: A_BRIDGE, threshold: 1e-10, run: |s| {
            max_over(s, 10, |s| {
                let mut worst: f64 = 0.0;
                for n in 2..=4usize {
                    let h = random_centered_h(&random_state(2, s), s + 1);
                    let rho = symmetrize(&random_state(1 << n, s + 2), n, 2)?;
                    let (lhs, rhs) = exchangeability_bridge(&rho, &h, n, 2)?;
                    worst = worst.max((lhs - rhs).abs());
                }
                Ok(worst)
            })
        }},
        // bounds
        Check { suite: Bounds, name: "k_constant", anchor: A_K, threshold: 1e-6, run: |_| {
            let a = (k_constant(0.3, 1.0, 1.0)? - 2.203973).abs();
            let b = (k_constant(0.5, 0.0, 5.0)? - LN_2).abs();
            Ok(a.max(b).max(k_constant(1.0, 0.0, 1.0)?.abs()))
        }},
        Check { suite: Bounds, name: "bound_constants", anchor: A_CTQ, threshold: 1e-9, run: |_| {
            let k = k_constant(0.3, 1.0, 1.0)?;
            let bp = BoundParams::with_default_q(1.0, k)?;
            let x = (bp.x - 0.5).abs();
            let c = ((bp.c_tq - 3.581977).abs() - 5e-7).max(0.0);
            let edge = if bound_constants(q_max(1.0, k), 1.0, k).is_err() { 0.0 } else { 1.0 };
            let mut prev = f64::INFINITY;
            let mut mono: f64 = 0.0;
            for j in 2..=6 {
                let cj = bound_constants(bp.q_max * 10f64.powi(-j), 1.0, k)?.c_tq;
                mono = mono.max(cj - prev).max(1.0 - cj);
                prev = cj;
            }
            Ok(x.max(c).max(edge).max(mono.max(0.0)))
        }},
        Check { suite: Bounds, name: "entropy_estimate", anchor: A_MAIN, threshold: 0.0, run: |_| {
            let p = qubit_model();
            let k = k_constant(0.3, p.l_norm(), 0.5)?;
            let bp = BoundParams::with_default_q(p.a_norm(), k)?;
            let mut worst = f64::NEG_INFINITY;
            for (n, (t, rho, m)) in short_runs(&p, &[2, 3], 0.5)? {
                worst = worst.max(log_entropy(normalized_entropy(&rho, &m, n, &tol())?) - theorem_rhs_log(t, 0.0, n, &bp));
            }
            Ok(worst.max(0.0))
        }},
        Check { suite: Bounds, name: "marginal_corollary", anchor: A_COR, threshold: 1e-9, run: |_| {
            let p = qubit_model();
            let mut worst: f64 = 0.0;
            for (n, (_, rho, m)) in short_runs(&p, &[4], 0.5)? {
                let h = normalized_entropy(&rho, &m, n, &tol())?;
                for k in 1..=2 {
                    worst = worst.max(marginal_entropy(&rho, &m, n, k, &tol())? - marginal_bound(h, k));
                }
            }
            Ok(worst)
        }},
        Check { suite: Bounds, name: "trace_norm_corollary", anchor: A_COR_TN, threshold: 1e-9, run: |_| {
            let p = qubit_model();
            let mut worst: f64 = 0.0;
            for (n, (_, rho, m)) in short_runs(&p, &[4], 0.5)? {
                let h = normalized_entropy(&rho, &m, n, &tol())?;
                for k in 1..=2 {
                    let tn = marginal_trace_distance(rho.as_matrix(), m.as_matrix(), n, k)?;
                    worst = worst.max(tn * tn - 4.0 * k as f64 * h);
                }
            }
            Ok(worst)
        }},
        Check { suite: Bounds, name: "faithfulness_floor_arithmetic", anchor: A_FAITHFUL, threshold: 1e-6, run: |_| {
            Ok((faithfulness_floor(1.0, 0.3, 1.0) - 0.110364).abs().max((faithfulness_floor(0.0, 0.3, 1.0) - 0.3).abs()))
        }},
        // combinatorics
        Check { suite: Combinatorics, name: "admissible_counts", anchor: A_COUNT, threshold: 0.0, run: |_| {
            let got = [enumerate_admissible(3, 1)?.count, enumerate_admissible(2, 2)?.count, enumerate_admissible(4, 2)?.count];
            Ok(got.iter().zip([3u64, 8, 40]).filter(|(a, b)| **a != *b).count() as f64)
        }},
        Check { suite: Combinatorics, name: "counting_bound", anchor: A_COUNT, threshold: 0.0, run: |_| {
            let mut worst: f64 = 0.0;
            for n in 1..=8 {
                for k in 1..=4 {
                    let c = counting_bound_check(n, k)?;
                    worst = worst.max(c.count as f64 - c.bound).max(c.count as f64 - c.intermediate);
                }
            }
            Ok(worst)
        }},
        Check { suite: Combinatorics, name: "isolated_vertex", anchor: A_ISOLATED, threshold: 1e-9, run: |s| {
            max_over(s, 20, |s| {
                let rho = random_state(2, s);
                let h = random_centered_h(&rho, s + 1);
                let mut worst: f64 = 0.0;
                for n in 3..=4 {
                    for k in 1..=3 {
                        for e in all_edge_tuples(n, k).iter().filter(|e| e.has_isolated_endpoint()) {
                            worst = worst.max(isolated_vertex_trace(&h, &rho, e, n)?.norm());
                        }
                    }
                }
                Ok(worst)
            })
        }},
        Check { suite: Combinatorics, name: "non_vacuity_witness", anchor: A_ISOLATED, threshold: 0.0, run: |_| {
            let e = EdgeTuple::new(vec![(1, 2), (1, 2)], 3)?;
            let v = isolated_vertex_trace(&kron(&pauli_z(), &pauli_z()), &DensityMatrix::maximally_mixed(2), &e, 3)?;
            Ok(if v.norm() > 1e-3 { 0.0 } else { 1e-3 - v.norm() })
        }},
        Check { suite: Combinatorics, name: "centered_construction", anchor: A_CENTER_ASSUMPTION, threshold: 1e-12, run: |s| {
            let zz = kron(&pauli_z(), &pauli_z());
            let fixed = center_two_body(&zz, DensityMatrix::maximally_mixed(2).as_matrix())?.max_abs_diff(&zz);
            let r = max_over(s, 50, |s| {
                let rho = random_state(2 + (s % 2) as usize, s);
                let h = random_centered_h(&rho, s + 1);
                let again = center_two_body(&h, rho.as_matrix())?.max_abs_diff(&h);
                Ok(centering_residual(&h, rho.as_matrix())?.max(again).max(h.hermitian_residual()))
            })?;
            Ok(fixed.max(r))
        }},
        Check { suite: Combinatorics, name: "moment_expansion", anchor: A_MOMENT, threshold: 1e-9, run: |s| {
            max_over(s, 5, |s| {
                let rho = random_state(2, s);
                let h = random_centered_h(&rho, s + 1);
                let mut total = 0.0;
                for e in all_edge_tuples(3, 2) {
                    total += isolated_vertex_trace(&h, &rho, &e, 3)?.re;
                }
                Ok((total / 9.0 - moment_term(&rho, &h, 3, 2)?).abs())
            })
        }},
    ]
}

/// N-body and mean-field states of the qubit model at every 50th step.
fn short_runs(p: &ModelParams, ns: &[usize], t_end: f64) -> Result<Vec<(usize, (f64, DensityMatrix, DensityMatrix))>> {
    let mut opts = IntegrateOptions::new(t_end, 1e-3);
    opts.record_stride = 50;
    let mf = MeanFieldGenerator::new(p);
    let meanfield = integrate_with(|m| mf.apply(m), &qubit_m0(), &opts)?;
    let mut out = Vec::new();
    for &n in ns {
        let gen = NBodyGenerator::new(p, n)?;
        let start = DensityMatrix::new_unchecked(tensor_power(qubit_m0().as_matrix(), n));
        let traj = integrate_with(|r| gen.apply_hermitian(r), &start, &opts)?;
        for (i, (t, st)) in traj.times.iter().zip(traj.states).enumerate() {
            out.push((n, (*t, st, meanfield.states[i].clone())));
        }
    }
    Ok(out)
}

/// Runs the selected suites with the given seed.
pub fn run_verify(selection: Selection, seed: u64) -> Report {
    let selected: Vec<Check> = checks()
        .into_iter()
        .filter(|c| selection == Selection::All || selection == Selection::One(c.suite))
        .collect();
    let outcomes: Vec<Outcome> = selected
        .par_iter()
        .map(|c| {
            let (residual, error) = match (c.run)(stream(seed, c.name)) {
                Ok(r) => (if r.is_nan() { f64::INFINITY } else if r == 0.0 { 0.0 } else { r }, None),
                Err(e) => (f64::INFINITY, Some(e.to_string())),
            };
            Outcome { suite: c.suite, name: c.name, anchor: c.anchor, residual, threshold: c.threshold, error }
        })
        .collect();
    let uncovered = if selection == Selection::All {
        MANIFEST.iter().copied().filter(|a| !outcomes.iter().any(|o| o.anchor == *a)).collect()
    } else {
        Vec::new()
    };
    Report { selection, seed, outcomes, uncovered }
}
