//! Parameter tuples for the splitting engine and their admissibility checks.
//!
//! A configuration fixes the target J_{ω(A+B)}(r) through (ω, r) and the
//! freedom the iteration leaves open through (θ, q, σ, τ, r_A, r_B, γ, κ).
//! The identities σ + τ = θ/ω and r_A + r_B = (q + r)/ω tie the two halves
//! together; the sign conditions θα + σ > 0 and θβ + τ ≥ 0 (against the
//! operators' moduli α, β) are what buy strong convergence of the shadow
//! sequence.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Vector;

pub const DEFAULT_GAMMA: f64 = 1.0;
/// Douglas–Rachford averaging.
pub const DEFAULT_KAPPA: f64 = 0.5;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Iterations discarded before fitting a convergence rate.
pub const DEFAULT_BURN_IN: usize = 20;

/// Relative tolerance for the linear parameter identities.
const IDENTITY_TOL: f64 = 1e-12;

/// Full parameter tuple for one engine run. Fields are public; use
/// [`balanced_config`] or [`aamr_params`] to obtain valid instances, or
/// [`validate_config`] to audit hand-rolled ones.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitConfig {
    /// Scale of the summed operator in J_{ω(A+B)}(r).
    pub omega: f64,
    /// Evaluation point of the resolvent.
    pub r: Vector,
    pub theta: f64,
    pub q: Vector,
    pub sigma: f64,
    pub tau: f64,
    pub r_a: Vector,
    pub r_b: Vector,
    /// Resolvent parameter of the iteration.
    pub gamma: f64,
    /// Relaxation in (0, 1]: 1/2 is Douglas–Rachford, 1 is Peaceman–Rachford.
    pub kappa: f64,
    pub tol: f64,
    pub max_iter: usize,
}

/// Named admissibility constraints a configuration can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// σ + τ = θ/ω
    SigmaTauSum,
    /// r_A + r_B = (q + r)/ω
    ShiftSum,
    /// θα + σ > 0
    StrongMonotonicityA,
    /// θβ + τ ≥ 0
    NonnegativeMonotonicityB,
    /// 1 + γσ > 0
    SigmaDenominator,
    /// 1 + γτ > 0
    TauDenominator,
    /// α + β > −1/ω
    ModulusSum,
    /// ω > 0
    PositiveOmega,
    /// θ > 0
    PositiveTheta,
    /// γ > 0
    PositiveGamma,
    /// tol > 0
    PositiveTol,
    /// κ ∈ (0, 1]
    KappaRange,
    /// max_iter ≥ 1
    PositiveMaxIter,
    /// r, q, r_A, r_B share one dimension
    DimensionConsistency,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Constraint::SigmaTauSum => "sigma + tau = theta/omega",
            Constraint::ShiftSum => "r_A + r_B = (q + r)/omega",
            Constraint::StrongMonotonicityA => "theta*alpha + sigma > 0",
            Constraint::NonnegativeMonotonicityB => "theta*beta + tau >= 0",
            Constraint::SigmaDenominator => "1 + gamma*sigma > 0",
            Constraint::TauDenominator => "1 + gamma*tau > 0",
            Constraint::ModulusSum => "alpha + beta > -1/omega",
            Constraint::PositiveOmega => "omega > 0",
            Constraint::PositiveTheta => "theta > 0",
            Constraint::PositiveGamma => "gamma > 0",
            Constraint::PositiveTol => "tol > 0",
            Constraint::KappaRange => "kappa in (0, 1]",
            Constraint::PositiveMaxIter => "max_iter >= 1",
            Constraint::DimensionConsistency => "r, q, r_A, r_B share one dimension",
        };
        f.write_str(text)
    }
}

/// One failed constraint together with the measured value of its defining
/// expression (mismatch magnitude for equalities, the signed margin for
/// inequalities).
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub constraint: Constraint,
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (residual {:.6e})", self.constraint, self.residual)
    }
}

/// A list of violations, printable one per line.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Audits a configuration against the moduli (α, β) of the two operators.
/// Returns an empty list exactly when every invariant holds. Diagnostic:
/// never fails.
pub fn validate_config(c: &SplitConfig, alpha: f64, beta: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |constraint, residual| out.push(Violation { constraint, residual });

    let dim = c.r.dim();
    if c.q.dim() != dim || c.r_a.dim() != dim || c.r_b.dim() != dim {
        push(
            Constraint::DimensionConsistency,
            (c.q.dim().max(c.r_a.dim()).max(c.r_b.dim()) as f64) - dim as f64,
        );
        return out;
    }

    let mut basics_ok = true;
    // NaN must trip these checks, hence the negated comparisons
    if !(c.omega > 0.0 && c.omega.is_finite()) {
        push(Constraint::PositiveOmega, c.omega);
        basics_ok = false;
    }
    if !(c.theta > 0.0 && c.theta.is_finite()) {
        push(Constraint::PositiveTheta, c.theta);
        basics_ok = false;
    }
    if !(c.gamma > 0.0 && c.gamma.is_finite()) {
        push(Constraint::PositiveGamma, c.gamma);
        basics_ok = false;
    }
    if !(c.tol > 0.0) {
        push(Constraint::PositiveTol, c.tol);
    }
    if !(c.kappa > 0.0 && c.kappa <= 1.0) {
        push(Constraint::KappaRange, c.kappa);
    }
    if c.max_iter == 0 {
        push(Constraint::PositiveMaxIter, 0.0);
    }
    if !basics_ok {
        return out;
    }

    let target_sum = c.theta / c.omega;
    let sum_defect = (c.sigma + c.tau - target_sum).abs();
    if !(sum_defect <= IDENTITY_TOL * (1.0 + target_sum.abs())) {
        push(Constraint::SigmaTauSum, sum_defect);
    }

    let target_shift = (&c.q + &c.r).scale(1.0 / c.omega);
    let shift_defect = (&c.r_a + &c.r_b).dist(&target_shift);
    if !(shift_defect <= IDENTITY_TOL * (1.0 + target_shift.norm())) {
        push(Constraint::ShiftSum, shift_defect);
    }

    let strong_a = c.theta * alpha + c.sigma;
    if !(strong_a > 0.0) {
        push(Constraint::StrongMonotonicityA, strong_a);
    }
    let nonneg_b = c.theta * beta + c.tau;
    if !(nonneg_b >= 0.0) {
        push(Constraint::NonnegativeMonotonicityB, nonneg_b);
    }

    let sigma_denom = 1.0 + c.gamma * c.sigma;
    if !(sigma_denom > 0.0) {
        push(Constraint::SigmaDenominator, sigma_denom);
    }
    let tau_denom = 1.0 + c.gamma * c.tau;
    if !(tau_denom > 0.0) {
        push(Constraint::TauDenominator, tau_denom);
    }

    let modulus_margin = alpha + beta + 1.0 / c.omega;
    if !(modulus_margin > 0.0) {
        push(Constraint::ModulusSum, modulus_margin);
    }

    out
}

/// Builds a configuration with the σ/τ split balanced against the moduli:
///
/// σ = θ/(2ω) + θ(β−α)/2,  τ = θ/ω − σ,  r_A = r_B = (q + r)/(2ω).
///
/// This makes both monotonicity margins equal to θ(α + β + 1/ω)/2 > 0, the
/// symmetric maximum.
#[allow(clippy::too_many_arguments)]
pub fn balanced_config(
    omega: f64,
    r: &Vector,
    alpha: f64,
    beta: f64,
    theta: f64,
    q: &Vector,
    gamma: f64,
    kappa: f64,
    tol: f64,
    max_iter: usize,
) -> Result<SplitConfig> {
    require_positive("omega", omega)?;
    require_positive("theta", theta)?;
    require_positive("gamma", gamma)?;
    require_positive("tol", tol)?;
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            value: kappa,
            requirement: "a value in (0, 1]",
        });
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter {
            name: "max_iter",
            value: 0.0,
            requirement: "at least one iteration",
        });
    }
    if q.dim() != r.dim() {
        return Err(Error::DimensionMismatch {
            expected: r.dim(),
            found: q.dim(),
        });
    }
    let sum = alpha + beta;
    if !(sum > -1.0 / omega) {
        return Err(Error::InfeasibleModuli {
            sum,
            bound: -1.0 / omega,
        });
    }

    let sigma = theta / (2.0 * omega) + theta * (beta - alpha) / 2.0;
    // complement instead of the mirrored formula so the sum identity is exact
    let tau = theta / omega - sigma;
    if 1.0 + gamma * sigma <= 0.0 || 1.0 + gamma * tau <= 0.0 {
        let mut bound = f64::INFINITY;
        for s in [sigma, tau] {
            if s < 0.0 {
                bound = bound.min(-1.0 / s);
            }
        }
        return Err(Error::GammaIncompatible { gamma, bound });
    }

    let half_shift = (q + r).scale(1.0 / (2.0 * omega));
    Ok(SplitConfig {
        omega,
        r: r.clone(),
        theta,
        q: q.clone(),
        sigma,
        tau,
        r_a: half_shift.clone(),
        r_b: half_shift,
        gamma,
        kappa,
        tol,
        max_iter,
    })
}

/// Configuration realizing the modified-reflection iteration built from
/// q = −r and zero shifts:
///
/// ω = γ/(2(1−η)),  θ = 1/η,  σ = τ = (1−η)/(γη),  r_A = r_B = 0.
///
/// Running [`solve_resolvent`](crate::splitting::solve_resolvent) with the
/// result reproduces the η-scaled reflector recurrence
/// 2η·J_{γA}(Id + r) − 2ηr − Id step for step.
pub fn aamr_params(gamma: f64, eta: f64, r: &Vector) -> Result<SplitConfig> {
    require_positive("gamma", gamma)?;
    require_unit_open("eta", eta)?;
    let omega = gamma / (2.0 * (1.0 - eta));
    let theta = 1.0 / eta;
    let sigma = (1.0 - eta) / (gamma * eta);
    Ok(SplitConfig {
        omega,
        r: r.clone(),
        theta,
        q: -r,
        sigma,
        tau: sigma,
        r_a: Vector::zeros(r.dim()),
        r_b: Vector::zeros(r.dim()),
        gamma,
        kappa: DEFAULT_KAPPA,
        tol: DEFAULT_TOL,
        max_iter: DEFAULT_MAX_ITER,
    })
}

/// Invocation parameters for [`maxmono_resolvent`](crate::splitting::maxmono_resolvent).
#[derive(Debug, Clone, PartialEq)]
pub struct MaxMonoParams {
    pub omega: f64,
    pub theta: f64,
    pub q: Vector,
}

/// Parameters realizing the resolvent-average-style recurrence
/// 2η·J_B + 2(1−η)·r − Id:
///
/// ω = 1/(2(1−η)),  θ = 1/η,  q = ((1−η)/η)·r.
///
/// Feed the result to [`maxmono_resolvent`](crate::splitting::maxmono_resolvent);
/// the range condition on r is waived when A + B is itself maximally
/// monotone.
pub fn avg_variant_params(eta: f64, r: &Vector) -> Result<MaxMonoParams> {
    require_unit_open("eta", eta)?;
    Ok(MaxMonoParams {
        omega: 1.0 / (2.0 * (1.0 - eta)),
        theta: 1.0 / eta,
        q: r.scale((1.0 - eta) / eta),
    })
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            requirement: "a positive real",
        })
    }
}

fn require_unit_open(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            requirement: "a value in (0, 1)",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec())
    }

    fn default_balanced(omega: f64, alpha: f64, beta: f64) -> Result<SplitConfig> {
        balanced_config(
            omega,
            &v(&[1.0, 2.0]),
            alpha,
            beta,
            1.0,
            &Vector::zeros(2),
            DEFAULT_GAMMA,
            DEFAULT_KAPPA,
            DEFAULT_TOL,
            DEFAULT_MAX_ITER,
        )
    }

    #[test]
    fn balanced_monotone_case_splits_evenly() {
        let c = default_balanced(1.0, 0.0, 0.0).unwrap();
        assert_eq!(c.sigma, 0.5);
        assert_eq!(c.tau, 0.5);
        assert_eq!(c.r_a, v(&[0.5, 1.0]));
        assert_eq!(c.r_b, v(&[0.5, 1.0]));
        assert!(validate_config(&c, 0.0, 0.0).is_empty());
    }

    #[test]
    fn balanced_weakly_monotone_case() {
        let c = default_balanced(1.0, -0.2, 0.1).unwrap();
        assert!((c.sigma - 0.65).abs() < 1e-15);
        assert!((c.tau - 0.35).abs() < 1e-15);
        assert!((1.0 * (-0.2) + c.sigma - 0.45).abs() < 1e-15);
        assert!((1.0 * 0.1 + c.tau - 0.45).abs() < 1e-15);
        assert!(validate_config(&c, -0.2, 0.1).is_empty());
    }

    #[test]
    fn balanced_rejects_infeasible_moduli() {
        assert!(matches!(
            default_balanced(1.0, -1.0, -1.0),
            Err(Error::InfeasibleModuli { .. })
        ));
    }

    #[test]
    fn balanced_reports_gamma_bound() {
        // strongly asymmetric moduli make tau very negative
        let err = balanced_config(
            1.0,
            &v(&[0.0]),
            -0.5,
            3.0,
            1.0,
            &Vector::zeros(1),
            2.0,
            0.5,
            1e-8,
            100,
        )
        .unwrap_err();
        match err {
            Error::GammaIncompatible { bound, .. } => {
                // tau = 1 - sigma = 1 - (0.5 + 1.75) = -1.25, so gamma < 0.8
                assert!((bound - 0.8).abs() < 1e-12);
            }
            other => panic!("expected GammaIncompatible, got {other:?}"),
        }
    }

    #[test]
    fn validate_flags_injected_sum_defect() {
        let mut c = default_balanced(1.0, 0.0, 0.0).unwrap();
        c.sigma += 0.1;
        let violations = validate_config(&c, 0.0, 0.0);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].constraint, Constraint::SigmaTauSum);
        assert!((violations[0].residual - 0.1).abs() < 1e-12);
    }

    #[test]
    fn validate_flags_boundary_strong_monotonicity() {
        let mut c = default_balanced(1.0, 0.0, 0.0).unwrap();
        c.sigma = 0.0;
        c.tau = 1.0;
        let violations = validate_config(&c, 0.0, 0.0);
        assert!(violations
            .iter()
            .any(|v| v.constraint == Constraint::StrongMonotonicityA));
    }

    #[test]
    fn validate_flags_shift_defect() {
        let mut c = default_balanced(1.0, 0.0, 0.0).unwrap();
        c.r_a = v(&[0.6, 1.0]);
        let violations = validate_config(&c, 0.0, 0.0);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].constraint, Constraint::ShiftSum);
    }

    #[test]
    fn validate_flags_nan_parameters() {
        let mut c = default_balanced(1.0, 0.0, 0.0).unwrap();
        c.gamma = f64::NAN;
        let violations = validate_config(&c, 0.0, 0.0);
        assert!(violations
            .iter()
            .any(|v| v.constraint == Constraint::PositiveGamma));
    }

    #[test]
    fn aamr_parameter_identities() {
        let r = v(&[1.0, -2.0]);
        let c = aamr_params(1.0, 0.5, &r).unwrap();
        assert_eq!(c.omega, 1.0);
        assert_eq!(c.theta, 2.0);
        assert_eq!(c.sigma, 1.0);
        assert_eq!(c.tau, 1.0);
        assert_eq!(c.q, -&r);
        assert_eq!(&c.r_a + &c.r_b, Vector::zeros(2));
        assert!(validate_config(&c, 0.0, 0.0).is_empty());

        // identity sigma + tau = theta/omega across a parameter sweep
        for (gamma, eta) in [(0.5, 0.25), (2.0, 0.8), (1.3, 0.5)] {
            let c = aamr_params(gamma, eta, &r).unwrap();
            let lhs = c.sigma + c.tau;
            let rhs = c.theta / c.omega;
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
            assert!(validate_config(&c, 0.0, 0.0).is_empty());
        }
    }

    #[test]
    fn aamr_rejects_bad_eta() {
        let r = v(&[0.0]);
        assert!(aamr_params(1.0, 0.0, &r).is_err());
        assert!(aamr_params(1.0, 1.0, &r).is_err());
        assert!(aamr_params(1.0, -0.3, &r).is_err());
    }

    #[test]
    fn avg_variant_substitution() {
        let r = v(&[3.0, 1.0]);
        let p = avg_variant_params(0.5, &r).unwrap();
        assert_eq!(p.omega, 1.0);
        assert_eq!(p.theta, 2.0);
        assert_eq!(p.q, r);
        assert!(avg_variant_params(1.0, &r).is_err());
    }
}
