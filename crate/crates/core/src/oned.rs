//! One-dimensional problem on `(−R, R)`.

use serde::Serialize;

use crate::error::{Error, Result};
pub use crate::radial_disk::Branch;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OneDSolution {
    pub lambda: f64,
    pub r: f64,
    pub alpha_c: f64,
    pub beta: f64,
    pub branch: Branch,
}

/// `(g(t), g**(t))`.
pub fn g_and_gss(t: f64) -> (f64, f64) {
    let g = if t <= 0.0 {
        -t
    } else if t < 1.0 {
        0.0
    } else {
        -1.0
    };
    (g, -t.min(1.0))
}

/// `f(α) = 2(√(1 + α²) + (1 − λ)(R − α))`.
pub fn f(alpha: f64, lambda: f64, r: f64) -> f64 {
    2.0 * ((1.0 + alpha * alpha).sqrt() + (1.0 - lambda) * (r - alpha))
}

pub fn beta_1d(lambda: f64, r: f64) -> Result<OneDSolution> {
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("R must be positive, got {r}")));
    }
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda must be finite and non-negative, got {lambda}"
        )));
    }
    let alpha_c = if lambda >= 1.0 {
        0.0
    } else {
        let t = 1.0 - lambda;
        r.min(t / (1.0 - t * t).sqrt())
    };
    let fc = f(alpha_c, lambda, r);
    let zero = 2.0 * r;
    let (beta, branch) = if zero <= fc {
        (zero, Branch::AllZero)
    } else if alpha_c == 0.0 {
        (fc, Branch::AllOne)
    } else {
        (fc, Branch::Profile)
    };
    Ok(OneDSolution {
        lambda,
        r,
        alpha_c,
        beta,
        branch,
    })
}

/// `λ0 = 1/R` or `2/(1 + R²)`, `λ1 = 1/R` or `1`, switching at `R = 1`.
pub fn criticals_1d(r: f64) -> Result<(f64, f64)> {
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("R must be positive, got {r}")));
    }
    Ok(if r <= 1.0 {
        (1.0 / r, 1.0 / r)
    } else {
        (2.0 / (1.0 + r * r), 1.0)
    })
}

/// `β0(λ) = 2R − 2(λR − 1)₊`.
pub fn beta0_1d(lambda: f64, r: f64) -> f64 {
    2.0 * r - 2.0 * (lambda * r - 1.0).max(0.0)
}
