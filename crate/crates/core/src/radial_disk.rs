//! Radial free-boundary problem `β(λ)` on a disk of radius `R`: a plateau
//! `u = 1` on `|x| < ρR`, a catenoid-type profile outside, and possibly a
//! jump at the plateau edge.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};

const GRID_NODES: usize = 1001;
const GOLDEN_TOL: f64 = 1e-10;
const CRITICAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    AllZero,
    Profile,
    AllOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialSolution {
    pub lambda: f64,
    pub r: f64,
    pub rho_bar: f64,
    pub mu_bar: f64,
    pub jump: f64,
    pub beta: f64,
    pub branch: Branch,
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("radius must be positive, got {r}")))
    }
}

/// `K(μ, t) = μR log((1 + √(1 − μ²))/(t + √(t² − μ²)))`.
pub fn k(mu: f64, t: f64, r: f64) -> Result<f64> {
    check_radius(r)?;
    if !(0.0..=1.0).contains(&t) || mu.is_nan() || mu < 0.0 || mu > t {
        return Err(Error::OutOfRange {
            name: "mu",
            value: mu,
            range: format!("[0, t] with t = {t} in [0, 1]"),
        });
    }
    Ok(k_unchecked(mu, t, r))
}

fn k_unchecked(mu: f64, t: f64, r: f64) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let mu2 = mu * mu;
    mu * r * ((1.0 + (1.0 - mu2).max(0.0).sqrt()) / (t + (t * t - mu2).max(0.0).sqrt())).ln()
}

/// `μ̄(ρ) = sup{μ ∈ [0, ρ] : K(μ, ρ) ≤ 1}`, with `μ̄(0) = 0`.
pub fn mu_bar(rho: f64, r: f64) -> Result<f64> {
    check_radius(r)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::OutOfRange {
            name: "rho",
            value: rho,
            range: "[0, 1]".into(),
        });
    }
    Ok(mu_bar_unchecked(rho, r))
}

fn mu_bar_unchecked(rho: f64, r: f64) -> f64 {
    if rho == 0.0 || k_unchecked(rho, rho, r) <= 1.0 {
        return rho;
    }
    let (mut lo, mut hi) = (0.0, rho);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if k_unchecked(mid, rho, r) <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Energy of the best radial configuration with plateau `|x| < ρR`.
pub fn energy(rho: f64, lambda: f64, r: f64) -> Result<f64> {
    mu_bar(rho, r)?;
    Ok(energy_unchecked(rho, lambda, r))
}

fn energy_unchecked(rho: f64, lambda: f64, r: f64) -> f64 {
    let mu = mu_bar_unchecked(rho, r);
    let mu2 = mu * mu;
    let a = (1.0 - mu2).max(0.0).sqrt();
    let b = (rho * rho - mu2).max(0.0).sqrt();
    let log_term = if mu == 0.0 {
        0.0
    } else {
        mu2 * ((1.0 + a) / (rho + b)).ln()
    };
    let jump = 1.0 - k_unchecked(mu, rho, r);
    PI * r * r * (a - rho * b + log_term + 2.0 * rho * jump / r + (1.0 - lambda) * rho * rho)
}

/// `β0(λ)`: `πR²` up to `2/R`, then `2πR + (1 − λ)πR²`.
pub fn beta0_disk(lambda: f64, r: f64) -> f64 {
    if lambda <= 2.0 / r {
        PI * r * r
    } else {
        2.0 * PI * r + (1.0 - lambda) * PI * r * r
    }
}

/// Global minimum of `E` on `[0, 1]`.
pub fn solve_beta_disk(lambda: f64, r: f64) -> Result<RadialSolution> {
    check_radius(r)?;
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda must be finite and non-negative, got {lambda}"
        )));
    }
    let e = |rho: f64| energy_unchecked(rho, lambda, r);
    let step = 1.0 / (GRID_NODES - 1) as f64;
    let (best_i, _) = (0..GRID_NODES)
        .map(|i| (i, e(i as f64 * step)))
        .fold((0, f64::INFINITY), |b, (i, v)| if v < b.1 { (i, v) } else { b });
    let lo = best_i.saturating_sub(1) as f64 * step;
    let hi = ((best_i + 1).min(GRID_NODES - 1)) as f64 * step;
    let interior = golden_section(e, lo, hi, GOLDEN_TOL);

    let e0 = e(0.0);
    let e1 = e(1.0);
    let ei = e(interior);
    let tie = 1e-12 * PI * r * r;
    let best = e0.min(e1).min(ei);
    let (rho_bar, branch) = if e0 <= best + tie {
        (0.0, Branch::AllZero)
    } else if e1 <= best + tie {
        (1.0, Branch::AllOne)
    } else {
        (interior, Branch::Profile)
    };
    let mu = mu_bar_unchecked(rho_bar, r);
    let jump = match branch {
        Branch::AllZero => 0.0,
        _ => 1.0 - k_unchecked(mu, rho_bar, r),
    };
    Ok(RadialSolution {
        lambda,
        r,
        rho_bar,
        mu_bar: mu,
        jump,
        beta: e(rho_bar),
        branch,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `(λ0, λ1)`: last `λ` with `u ≡ 0` optimal and first with `u ≡ 1` optimal.
pub fn critical_lambdas_disk(r: f64) -> Result<(f64, f64)> {
    check_radius(r)?;
    let branch = |l: f64| solve_beta_disk(l, r).map(|s| s.branch);
    let h = 2.0 / r;

    let (mut lo, mut hi) = (0.0, h + 1.0);
    while hi - lo > CRITICAL_TOL {
        let mid = 0.5 * (lo + hi);
        if branch(mid)? == Branch::AllZero {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda0 = 0.5 * (lo + hi);

    let mut hi = h + 2.0;
    while branch(hi)? != Branch::AllOne {
        hi *= 2.0;
    }
    let mut lo = lambda0.min(hi);
    while hi - lo > CRITICAL_TOL {
        let mid = 0.5 * (lo + hi);
        if branch(mid)? == Branch::AllOne {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lambda0, 0.5 * (lo + hi)))
}

/// `solve_beta_disk` at each of `lambdas`.
pub fn sweep(r: f64, lambdas: &[f64], mode: ExecMode) -> Result<Vec<RadialSolution>> {
    map_indexed(mode, lambdas.len(), |i| solve_beta_disk(lambdas[i], r))
        .into_iter()
        .collect()
}

/// `n + 1` evenly spaced values from `a` to `b`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![a];
    }
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}
