//! Empirical linear-rate estimation from residual traces.
//!
//! Lipschitz continuity of A makes the iteration converge linearly, but no
//! closed-form rate constant comes with that guarantee. A log-linear
//! least-squares fit of the governing residuals is the honest desk-scale
//! check.

use crate::splitting::engine::IterationTrace;

/// Result of fitting log(fp_residual) against the iteration index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// exp(slope): the geometric factor implied by the fit.
    pub rate: f64,
    /// Coefficient of determination of the log-linear fit.
    pub r_squared: f64,
    /// Number of points entering the fit.
    pub points: usize,
}

/// Least-squares fit of log(fp_residual_n) vs n over the records with
/// n > `burn_in`. Requires at least `burn_in` + 10 records with positive
/// finite residual; returns `None` otherwise.
pub fn log_linear_fit(trace: &IterationTrace, burn_in: usize) -> Option<RateFit> {
    let usable: Vec<(f64, f64)> = trace
        .records
        .iter()
        .filter(|rec| rec.fp_residual.is_finite() && rec.fp_residual > 0.0)
        .map(|rec| (rec.n as f64, rec.fp_residual.ln()))
        .collect();
    if usable.len() < burn_in + 10 {
        return None;
    }
    let pts: Vec<(f64, f64)> = usable
        .into_iter()
        .filter(|(n, _)| *n > burn_in as f64)
        .collect();
    if pts.len() < 2 {
        return None;
    }

    let count = pts.len() as f64;
    let mean_n = pts.iter().map(|(n, _)| n).sum::<f64>() / count;
    let mean_y = pts.iter().map(|(_, y)| y).sum::<f64>() / count;
    let mut cov = 0.0;
    let mut var_n = 0.0;
    for (n, y) in &pts {
        cov += (n - mean_n) * (y - mean_y);
        var_n += (n - mean_n) * (n - mean_n);
    }
    if var_n == 0.0 {
        return None;
    }
    let slope = cov / var_n;
    let intercept = mean_y - slope * mean_n;

    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (n, y) in &pts {
        let fit = slope * n + intercept;
        ss_res += (y - fit) * (y - fit);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    // constant data is fit exactly by a flat line
    let r_squared = if ss_tot <= 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };

    Some(RateFit {
        rate: slope.exp(),
        r_squared,
        points: pts.len(),
    })
}

/// The fitted geometric factor, reported only when it certifies decay
/// (exp(slope) < 1).
pub fn estimate_rate(trace: &IterationTrace, burn_in: usize) -> Option<f64> {
    log_linear_fit(trace, burn_in).and_then(|fit| (fit.rate < 1.0).then_some(fit.rate))
}
