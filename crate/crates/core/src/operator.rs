//! Operators exposed through their resolvents.
//!
//! The iteration never touches an operator's graph: every access goes through
//! the resolvent J_{γA} = (Id + γA)⁻¹. Each concrete operator therefore
//! implements the closed form of its resolvent together with declared
//! monotonicity metadata. Moduli are user-declared and validated by sampling
//! in tests, not proved.

use crate::error::{Error, Result};
use crate::linalg::{solve_spd, sym_eigenvalues, AffineMap, Matrix, Vector};

/// Relative threshold below which a computed smallest eigenvalue is treated
/// as exactly zero when declaring moduli. Absorbs Jacobi rounding noise so
/// that plain monotone operators report modulus 0.
const MODULUS_SNAP: f64 = 1e-12;

/// A set-valued operator A on Rⁿ, accessed only through J_{γA}.
pub trait Operator: Send + Sync {
    /// Evaluates J_{γA}(x) = (Id + γA)⁻¹(x) using this operator's closed
    /// form.
    ///
    /// No admissibility checks happen here; implementations accept any
    /// `gamma` for which the closed form stays single-valued (transforms
    /// with 1 + γσ < 0 produce negative inner parameters). Use [`resolvent`]
    /// for the checked entry point.
    fn resolvent_raw(&self, gamma: f64, x: &Vector) -> Result<Vector>;

    /// Declared monotonicity modulus α: ⟨x−y, Ax−Ay⟩ ≥ α‖x−y‖² on the
    /// domain. Negative values declare weak monotonicity.
    fn modulus(&self) -> f64;

    /// Lipschitz constant, present only when the operator is single-valued
    /// and Lipschitz.
    fn lipschitz(&self) -> Option<f64> {
        None
    }

    /// Whether maximal α-monotonicity is asserted for this operator.
    fn maximal(&self) -> bool {
        true
    }

    /// Direct evaluation A(x) where the operator is single-valued; `None`
    /// for genuinely set-valued operators.
    fn apply(&self, x: &Vector) -> Option<Vector> {
        let _ = x;
        None
    }
}

/// Checked resolvent evaluation J_{γA}(x).
///
/// Requires γ > 0, and 1 + γα > 0 when the operator asserts maximality
/// (which guarantees a single-valued, full-domain resolvent).
pub fn resolvent(op: &dyn Operator, gamma: f64, x: &Vector) -> Result<Vector> {
    if gamma <= 0.0 || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            requirement: "a positive real",
        });
    }
    if op.maximal() && 1.0 + gamma * op.modulus() <= 0.0 {
        return Err(Error::IllPosedResolvent {
            gamma,
            modulus: op.modulus(),
        });
    }
    op.resolvent_raw(gamma, x)
}

/// Reflected resolvent R_{γA}(x) = 2·J_{γA}(x) − x.
pub fn reflected_resolvent(op: &dyn Operator, gamma: f64, x: &Vector) -> Result<Vector> {
    Ok(Vector::lincomb(2.0, &resolvent(op, gamma, x)?, -1.0, x))
}

/// Modulus of A∘(θId−q) + σId − r: a θα + σ shift of the base modulus.
pub fn transformed_modulus(alpha: f64, theta: f64, sigma: f64) -> f64 {
    assert!(theta > 0.0, "theta must be positive");
    theta * alpha + sigma
}

/// The zero operator; its resolvent is the identity.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroOperator;

impl Operator for ZeroOperator {
    fn resolvent_raw(&self, _gamma: f64, x: &Vector) -> Result<Vector> {
        Ok(x.clone())
    }

    fn modulus(&self) -> f64 {
        0.0
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(0.0)
    }

    fn apply(&self, x: &Vector) -> Option<Vector> {
        Some(Vector::zeros(x.dim()))
    }
}

/// A = λ·Id with J_{γA}(x) = x / (1 + γλ).
#[derive(Debug, Clone, Copy)]
pub struct ScaledIdentity {
    lambda: f64,
}

impl ScaledIdentity {
    pub fn new(lambda: f64) -> Self {
        ScaledIdentity { lambda }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl Operator for ScaledIdentity {
    fn resolvent_raw(&self, gamma: f64, x: &Vector) -> Result<Vector> {
        let denom = 1.0 + gamma * self.lambda;
        if denom == 0.0 {
            return Err(Error::SingularScaling { denom });
        }
        Ok(x.scale(1.0 / denom))
    }

    fn modulus(&self) -> f64 {
        self.lambda
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.lambda.abs())
    }

    fn apply(&self, x: &Vector) -> Option<Vector> {
        Some(x.scale(self.lambda))
    }
}

/// A(x) = M·x + b with symmetric M.
///
/// The modulus is the smallest eigenvalue of M and the Lipschitz constant
/// the largest eigenvalue magnitude, both computed at construction.
#[derive(Debug, Clone)]
pub struct AffineQuadratic {
    m: Matrix,
    b: Vector,
    modulus: f64,
    lipschitz: f64,
}

impl AffineQuadratic {
    pub fn new(m: Matrix, b: Vector) -> Result<Self> {
        if m.rows() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                found: b.dim(),
            });
        }
        let eigs = sym_eigenvalues(&m)?;
        let lambda_min = eigs.first().copied().unwrap_or(0.0);
        let lambda_max_abs = eigs
            .iter()
            .fold(0.0f64, |acc, &e| acc.max(e.abs()));
        let modulus = if lambda_min.abs() <= MODULUS_SNAP * (1.0 + lambda_max_abs) {
            0.0
        } else {
            lambda_min
        };
        Ok(AffineQuadratic {
            m,
            b,
            modulus,
            lipschitz: lambda_max_abs,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn offset(&self) -> &Vector {
        &self.b
    }
}

impl Operator for AffineQuadratic {
    /// Solves (Id + γM)p = x − γb directly.
    fn resolvent_raw(&self, gamma: f64, x: &Vector) -> Result<Vector> {
        let system = self.m.scale(gamma).add_scaled_identity(1.0);
        let rhs = Vector::lincomb(1.0, x, -gamma, &self.b);
        solve_spd(&system, &rhs)
    }

    fn modulus(&self) -> f64 {
        self.modulus
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.lipschitz)
    }

    fn apply(&self, x: &Vector) -> Option<Vector> {
        Some(&self.m.matvec(x) + &self.b)
    }
}

/// The composition Ā = A∘(θId − q) + σId − r, with its resolvent evaluated
/// through the base operator's resolvent:
///
/// J_{γĀ}(x) = (1/θ)·( J_{γ'A}( (θ/(1+γσ))·x + γ'·r − q ) + q ),
/// where γ' = γθ/(1+γσ).
///
/// The formula is applied as written for any 1 + γσ ≠ 0, including the
/// negative range; the stock configuration builders never produce that case.
pub struct TransformedOperator<'a> {
    base: &'a dyn Operator,
    theta: f64,
    q: Vector,
    sigma: f64,
    r_shift: Vector,
}

impl<'a> TransformedOperator<'a> {
    pub fn new(
        base: &'a dyn Operator,
        theta: f64,
        q: Vector,
        sigma: f64,
        r_shift: Vector,
    ) -> Result<Self> {
        if theta <= 0.0 || !theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                requirement: "a positive real",
            });
        }
        if q.dim() != r_shift.dim() {
            return Err(Error::DimensionMismatch {
                expected: q.dim(),
                found: r_shift.dim(),
            });
        }
        Ok(TransformedOperator {
            base,
            theta,
            q,
            sigma,
            r_shift,
        })
    }

    /// Inner affine map and resolvent parameter for a given γ.
    pub(crate) fn inner_parts(&self, gamma: f64) -> Result<(f64, AffineMap)> {
        let denom = 1.0 + gamma * self.sigma;
        if denom == 0.0 {
            return Err(Error::SingularScaling { denom });
        }
        let inner_gamma = gamma * self.theta / denom;
        let shift = Vector::lincomb(inner_gamma, &self.r_shift, -1.0, &self.q);
        Ok((inner_gamma, AffineMap::new(self.theta / denom, shift)))
    }

    /// θ·J_{γĀ}(x) − q, i.e. the bare inner resolvent value. This is the
    /// quantity the engine records as the shadow point.
    pub(crate) fn inner_resolvent(&self, gamma: f64, x: &Vector) -> Result<Vector> {
        let (inner_gamma, map) = self.inner_parts(gamma)?;
        self.base.resolvent_raw(inner_gamma, &map.apply(x))
    }
}

impl Operator for TransformedOperator<'_> {
    fn resolvent_raw(&self, gamma: f64, x: &Vector) -> Result<Vector> {
        let inner = self.inner_resolvent(gamma, x)?;
        Ok((&inner + &self.q).scale(1.0 / self.theta))
    }

    fn modulus(&self) -> f64 {
        transformed_modulus(self.base.modulus(), self.theta, self.sigma)
    }

    fn lipschitz(&self) -> Option<f64> {
        self.base
            .lipschitz()
            .map(|l| self.theta * l + self.sigma.abs())
    }

    fn maximal(&self) -> bool {
        self.base.maximal()
    }

    fn apply(&self, x: &Vector) -> Option<Vector> {
        let arg = Vector::lincomb(self.theta, x, -1.0, &self.q);
        let base = self.base.apply(&arg)?;
        let shifted = Vector::lincomb(1.0, &base, self.sigma, x);
        Some(&shifted - &self.r_shift)
    }
}
