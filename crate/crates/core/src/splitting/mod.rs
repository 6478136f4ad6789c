//! The relaxed double-reflection splitting engine.
//!
//! Given operators A and B with declared moduli and a validated parameter
//! tuple, the engine iterates
//!
//! x_{n+1} = (1−κ)·x_n + κ·(2J_{γB_τ} − Id)(2J_{γA_σ} − Id)(x_n)
//!
//! where A_σ and B_τ are shifted/scaled copies of A and B whose resolvents
//! reduce to single evaluations of J_A and J_B. The shadow sequence of inner
//! A-resolvent values converges strongly to J_{ω(A+B)}(r); the governing
//! sequence (x_n) is only there to drive it.

mod config;
mod engine;
mod rate;

pub use config::{
    aamr_params, avg_variant_params, balanced_config, validate_config, Constraint, MaxMonoParams,
    SplitConfig, Violation, Violations, DEFAULT_BURN_IN, DEFAULT_GAMMA, DEFAULT_KAPPA,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
pub use engine::{
    dr_step, maxmono_resolvent, resolvent_a_sigma, resolvent_b_tau, solve_resolvent,
    IterationTrace, SolveResult, TraceRecord,
};
pub use rate::{estimate_rate, log_linear_fit, RateFit};
