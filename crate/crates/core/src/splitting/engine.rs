//! The iteration itself: reflect, reflect, relax, watch the shadow.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{AffineMap, Vector};
use crate::operator::{reflected_resolvent, resolvent, Operator, TransformedOperator};
use crate::splitting::config::{validate_config, SplitConfig, Violations, DEFAULT_BURN_IN};
use crate::splitting::rate::estimate_rate;

/// One row of the iteration history. `fp_residual` is the governing step
/// ‖x_n − x_{n−1}‖ and `shadow_residual` is ‖p_n − p_{n−1}‖; both are the
/// +∞ sentinel at n = 0 (serialized as null in JSON lines).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub n: usize,
    pub x: Vector,
    pub p: Vector,
    pub fp_residual: f64,
    pub shadow_residual: f64,
}

/// Per-iteration history of one solve.
#[derive(Debug, Clone, Default)]
pub struct IterationTrace {
    pub records: Vec<TraceRecord>,
}

impl IterationTrace {
    /// Residual summary: `n,fp_residual,shadow_residual` rows.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "n,fp_residual,shadow_residual")?;
        for rec in &self.records {
            writeln!(w, "{},{:e},{:e}", rec.n, rec.fp_residual, rec.shadow_residual)?;
        }
        Ok(())
    }

    /// Full records, one JSON object per line (governing and shadow vectors
    /// included).
    pub fn write_jsonl<W: Write>(&self, w: &mut W) -> Result<()> {
        for rec in &self.records {
            serde_json::to_writer(&mut *w, rec)?;
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Outcome of a solve. Non-convergence within `max_iter` is reported here,
/// not raised: whether r lies in the required range is undecidable up front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Final shadow point, the approximation of J_{ω(A+B)}(r).
    pub solution: Vector,
    /// Final governing point, the approximation of the fixed point driving
    /// the shadow.
    pub governing: Vector,
    pub iterations: usize,
    pub converged: bool,
    /// Empirical linear rate from the residual tail, when one fits.
    pub rate_estimate: Option<f64>,
}

impl SolveResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// J_{γA_σ}(x): checked resolvent of the shifted/scaled A-side operator.
pub fn resolvent_a_sigma(c: &SplitConfig, a: &dyn Operator, x: &Vector) -> Result<Vector> {
    let t = TransformedOperator::new(a, c.theta, c.q.clone(), c.sigma, c.r_a.clone())?;
    resolvent(&t, c.gamma, x)
}

/// J_{γB_τ}(x): mirror of [`resolvent_a_sigma`] for the B side.
pub fn resolvent_b_tau(c: &SplitConfig, b: &dyn Operator, x: &Vector) -> Result<Vector> {
    let t = TransformedOperator::new(b, c.theta, c.q.clone(), c.tau, c.r_b.clone())?;
    resolvent(&t, c.gamma, x)
}

/// One relaxed double-reflection step:
/// (1−κ)·x + κ·(2J_{γB_τ} − Id)(2J_{γA_σ} − Id)(x).
/// Costs exactly one A-resolvent and one B-resolvent.
pub fn dr_step(
    c: &SplitConfig,
    a: &dyn Operator,
    b: &dyn Operator,
    x: &Vector,
) -> Result<Vector> {
    let ta = TransformedOperator::new(a, c.theta, c.q.clone(), c.sigma, c.r_a.clone())?;
    let tb = TransformedOperator::new(b, c.theta, c.q.clone(), c.tau, c.r_b.clone())?;
    let y = reflected_resolvent(&ta, c.gamma, x)?;
    let z = reflected_resolvent(&tb, c.gamma, &y)?;
    Ok(Vector::lincomb(1.0 - c.kappa, x, c.kappa, &z))
}

/// Shared fixed-point loop. `a_inner` and `b_inner` evaluate the *inner*
/// resolvent values θ·J_{γA_σ}(x) − q and θ·J_{γB_τ}(x) − q; the A-side
/// value doubles as the shadow point, so each iteration costs one evaluation
/// per side.
fn run_loop<FA, FB>(
    a_inner: FA,
    b_inner: FB,
    theta: f64,
    q: &Vector,
    kappa: f64,
    tol: f64,
    max_iter: usize,
    x0: &Vector,
) -> Result<(SolveResult, IterationTrace)>
where
    FA: Fn(&Vector) -> Result<Vector>,
    FB: Fn(&Vector) -> Result<Vector>,
{
    let mut trace = IterationTrace::default();
    let mut x = x0.clone();
    let mut prev_shadow: Option<Vector> = None;
    let mut fp_residual = f64::INFINITY;
    let mut converged = false;

    for n in 0..=max_iter {
        let p = a_inner(&x)?;
        let shadow_residual = match &prev_shadow {
            Some(prev) => p.dist(prev),
            None => f64::INFINITY,
        };
        trace.records.push(TraceRecord {
            n,
            x: x.clone(),
            p: p.clone(),
            fp_residual,
            shadow_residual,
        });
        if n >= 1 && shadow_residual <= tol && fp_residual <= tol * (1.0 + x.norm()) {
            converged = true;
            break;
        }
        if n == max_iter {
            break;
        }

        let ja = Vector::lincomb(1.0 / theta, &p, 1.0 / theta, q);
        let y = Vector::lincomb(2.0, &ja, -1.0, &x);
        let jb = Vector::lincomb(1.0 / theta, &b_inner(&y)?, 1.0 / theta, q);
        let z = Vector::lincomb(2.0, &jb, -1.0, &y);
        let x_next = Vector::lincomb(1.0 - kappa, &x, kappa, &z);
        fp_residual = x_next.dist(&x);
        x = x_next;
        prev_shadow = Some(p);
    }

    let last = trace.records.last().expect("at least the starting record");
    let result = SolveResult {
        solution: last.p.clone(),
        governing: last.x.clone(),
        iterations: last.n,
        converged,
        rate_estimate: estimate_rate(&trace, DEFAULT_BURN_IN),
    };
    Ok((result, trace))
}

/// Approximates J_{ω(A+B)}(r) by iterating [`dr_step`] from `x0` and
/// extracting the shadow sequence p_n = J_{γ'A}(scale·x_n + γ'·r_A − q)
/// with γ' = γθ/(1+γσ).
///
/// The configuration is validated against the declared moduli before any
/// iteration; a configuration that merely fails to converge yields
/// `converged = false` rather than an error.
pub fn solve_resolvent(
    a: &dyn Operator,
    b: &dyn Operator,
    c: &SplitConfig,
    x0: &Vector,
) -> Result<(SolveResult, IterationTrace)> {
    let violations = validate_config(c, a.modulus(), b.modulus());
    if !violations.is_empty() {
        return Err(Error::InvalidConfig(Violations(violations)));
    }
    if x0.dim() != c.r.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.r.dim(),
            found: x0.dim(),
        });
    }

    let ta = TransformedOperator::new(a, c.theta, c.q.clone(), c.sigma, c.r_a.clone())?;
    let tb = TransformedOperator::new(b, c.theta, c.q.clone(), c.tau, c.r_b.clone())?;
    let (gamma_a, map_a) = ta.inner_parts(c.gamma)?;
    let (gamma_b, map_b) = tb.inner_parts(c.gamma)?;

    run_loop(
        |x| a.resolvent_raw(gamma_a, &map_a.apply(x)),
        |x| b.resolvent_raw(gamma_b, &map_b.apply(x)),
        c.theta,
        &c.q,
        c.kappa,
        c.tol,
        c.max_iter,
        x0,
    )
}

/// Dedicated path for two maximal monotone operators (declared modulus 0)
/// and ω > 1/2. Implicitly runs the configuration σ = τ = θ/(2ω),
/// r_A = r_B = (q+r)/(2ω), γ = 2ω/(θ(2ω−1)), but every iteration calls only
/// the plain resolvents J_A, J_B (parameter 1) through the affine map
/// (1 − 1/(2ω))(θ·Id − q) + r/(2ω).
///
/// ω < 1/2 would flip that γ negative and is served by [`solve_resolvent`]
/// with an explicit configuration instead; ω = 1/2 has no equivalent γ at
/// all.
#[allow(clippy::too_many_arguments)]
pub fn maxmono_resolvent(
    a: &dyn Operator,
    b: &dyn Operator,
    omega: f64,
    r: &Vector,
    theta: f64,
    q: &Vector,
    kappa: f64,
    tol: f64,
    max_iter: usize,
    x0: &Vector,
) -> Result<(SolveResult, IterationTrace)> {
    if !a.maximal() || !b.maximal() {
        return Err(Error::NotMaximal);
    }
    for modulus in [a.modulus(), b.modulus()] {
        if modulus != 0.0 {
            return Err(Error::NonZeroModulus { modulus });
        }
    }
    if !(omega > 0.5 && omega.is_finite()) {
        return Err(Error::UnsupportedOmega { omega });
    }
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "theta",
            value: theta,
            requirement: "a positive real",
        });
    }
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            value: kappa,
            requirement: "a value in (0, 1]",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            requirement: "a positive real",
        });
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter {
            name: "max_iter",
            value: 0.0,
            requirement: "at least one iteration",
        });
    }
    let dim = r.dim();
    if q.dim() != dim || x0.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: q.dim().max(x0.dim()),
        });
    }

    // x ↦ (1 − 1/(2ω))(θx − q) + r/(2ω)
    let contraction = 1.0 - 1.0 / (2.0 * omega);
    let shift = Vector::lincomb(1.0 / (2.0 * omega), r, -contraction, q);
    let map = AffineMap::new(contraction * theta, shift);

    run_loop(
        |x| a.resolvent_raw(1.0, &map.apply(x)),
        |x| b.resolvent_raw(1.0, &map.apply(x)),
        theta,
        q,
        kappa,
        tol,
        max_iter,
        x0,
    )
}
