//! Cheeger constant and set, the optimal sets `Ω_λ` of `P(Ω) − λ|Ω|`, and
//! the calibrability constants built from them.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom2d::{dilate, ArcRegion, ConvexPolygon, DilationCore, Disk, Domain};

pub const DELTA_TOL: f64 = 1e-12;
pub const MAX_BISECTION_ITERS: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct CheegerResult {
    pub delta_star: f64,
    pub h: f64,
    pub cheeger_set: ArcRegion,
    pub lambda_d: f64,
    /// `f64::INFINITY` for domains with corners.
    pub theta_d: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MReport {
    pub lambda: f64,
    pub value: f64,
    pub optimal_set: Option<ArcRegion>,
    pub lambda_ratio: Option<f64>,
}

/// Solves `|D^δ| = πδ²` by bisection; `h_D = 1/δ*`.
pub fn solve_cheeger(domain: &Domain) -> Result<CheegerResult> {
    let (inradius, _) = domain.inradius_highridge();
    let gap = |d: f64| domain.eroded_area(d).map(|a| a - PI * d * d);
    let (mut lo, mut hi) = (0.0, inradius);
    for _ in 0..MAX_BISECTION_ITERS {
        if hi - lo <= DELTA_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if gap(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let delta_star = 0.5 * (lo + hi);
    Ok(CheegerResult {
        delta_star,
        h: 1.0 / delta_star,
        cheeger_set: domain.open_by(delta_star)?,
        lambda_d: domain.lambda_ratio(),
        theta_d: domain.theta_constant(),
    })
}

/// Union of the balls of radius `1/λ` inside `D`.
pub fn omega_lambda(domain: &Domain, lambda: f64) -> Result<ArcRegion> {
    let (inradius, ridge) = domain.inradius_highridge();
    if !lambda.is_finite() || lambda * inradius < 1.0 - 1e-12 {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            range: format!("[{}, ∞)", 1.0 / inradius),
        });
    }
    let delta = 1.0 / lambda;
    if delta >= inradius - 1e-12 {
        return dilate(DilationCore::from(ridge), inradius);
    }
    domain.open_by(delta)
}

/// `m(λ, D) = min{P(Ω) − λ|Ω| : Ω ⊂ D}`.
pub fn m_lambda(domain: &Domain, lambda: f64) -> Result<MReport> {
    let cheeger = solve_cheeger(domain)?;
    m_lambda_with(domain, &cheeger, lambda)
}

/// As [`m_lambda`], reusing a Cheeger solution of the same domain.
pub fn m_lambda_with(domain: &Domain, cheeger: &CheegerResult, lambda: f64) -> Result<MReport> {
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda must be finite and non-negative, got {lambda}"
        )));
    }
    let h = cheeger.h;
    if lambda < h && h - lambda > 1e-12 * h {
        return Ok(MReport {
            lambda,
            value: 0.0,
            optimal_set: None,
            lambda_ratio: None,
        });
    }
    let set = if lambda <= h {
        cheeger.cheeger_set.clone()
    } else {
        omega_lambda(domain, lambda)?
    };
    let (area, perimeter) = set.area_perimeter();
    let value = if lambda <= h {
        0.0
    } else {
        perimeter - lambda * area
    };
    Ok(MReport {
        lambda,
        value,
        optimal_set: Some(set),
        lambda_ratio: Some(perimeter / area),
    })
}

/// `θ_Ω = max{1, κ_∞/λ_Ω}` for convex `C^{1,1}` sets; infinite with corners.
pub trait ThetaConstant {
    fn theta_constant(&self) -> f64;
}

impl ThetaConstant for ArcRegion {
    fn theta_constant(&self) -> f64 {
        if self.has_corner() {
            f64::INFINITY
        } else {
            (self.kappa_inf() / self.lambda_ratio()).max(1.0)
        }
    }
}

impl ThetaConstant for ConvexPolygon {
    fn theta_constant(&self) -> f64 {
        f64::INFINITY
    }
}

impl ThetaConstant for Disk {
    fn theta_constant(&self) -> f64 {
        // κ∞ = 1/R and λ_D = 2/R
        1.0
    }
}

impl ThetaConstant for Domain {
    fn theta_constant(&self) -> f64 {
        match self {
            Domain::Polygon(p) => p.theta_constant(),
            Domain::Disk(d) => d.theta_constant(),
        }
    }
}

pub fn theta_constant<T: ThetaConstant + ?Sized>(region: &T) -> f64 {
    region.theta_constant()
}

/// Lower bound `λ0*` on the first critical value in terms of `h = h_D`.
pub fn lambda0_lower_bound(h: f64) -> f64 {
    if h <= FRAC_PI_2 {
        1.0 - h.cos()
    } else {
        1.0 + h - FRAC_PI_2
    }
}

/// `(θλ_D, θλ_D + 1)`.
pub fn lambda1_bounds(theta_d: f64, lambda_d: f64) -> (f64, f64) {
    let lo = theta_d * lambda_d;
    (lo, lo + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::Vec2;

    #[test]
    fn square_cheeger_constant() {
        let c = solve_cheeger(&Domain::unit_square()).unwrap();
        assert!((c.h - (2.0 + PI.sqrt())).abs() < 1e-9);
        assert!((c.h * c.delta_star - 1.0).abs() < 1e-15);
        assert!((c.cheeger_set.lambda_ratio() / c.h - 1.0).abs() < 1e-8);
        assert!(c.h <= c.lambda_d);
        assert_eq!(c.theta_d, f64::INFINITY);
    }

    #[test]
    fn disk_is_self_cheeger() {
        let d = Domain::Disk(Disk::new(Vec2::new(1.0, -2.0), 1.5).unwrap());
        let c = solve_cheeger(&d).unwrap();
        assert!((c.h - 2.0 / 1.5).abs() < 1e-10);
        assert!((c.cheeger_set.area() - d.area()).abs() < 1e-12);
        assert_eq!(c.theta_d, 1.0);
    }

    #[test]
    fn rectangle_matches_quadratic_root() {
        let d = Domain::Polygon(ConvexPolygon::rectangle(-1.0, -0.5, 1.0, 0.5).unwrap());
        let c = solve_cheeger(&d).unwrap();
        // (2 − 2δ)(1 − 2δ) = πδ²  ⇔  (4 − π)δ² − 6δ + 2 = 0
        let expect = (6.0 - (4.0 + 8.0 * PI).sqrt()) / (2.0 * (4.0 - PI));
        assert!((c.delta_star - expect).abs() < 1e-11);
    }

    #[test]
    fn omega_examples() {
        let sq = Domain::unit_square();
        let o = omega_lambda(&sq, 4.0).unwrap();
        assert!((o.area() - (0.75 + PI / 16.0)).abs() < 1e-14);
        let u = omega_lambda(&sq, 2.0).unwrap();
        assert!((u.area() - PI / 4.0).abs() < 1e-14);
        assert!(u.contains(Vec2::new(0.0, 0.49), 0.0));
        assert!(matches!(omega_lambda(&sq, 1.5), Err(Error::OutOfRange { .. })));

        let disk = Domain::Disk(Disk::new(Vec2::ZERO, 2.0).unwrap());
        for lam in [0.5, 1.0, 7.0] {
            assert!((omega_lambda(&disk, lam).unwrap().area() - 4.0 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn m_examples() {
        let sq = Domain::unit_square();
        let c = solve_cheeger(&sq).unwrap();
        let below = m_lambda_with(&sq, &c, c.h / 2.0).unwrap();
        assert_eq!(below.value, 0.0);
        assert!(below.optimal_set.is_none());

        let at = m_lambda_with(&sq, &c, c.h).unwrap();
        assert_eq!(at.value, 0.0);
        assert!(at.optimal_set.is_some());

        let m4 = m_lambda_with(&sq, &c, 4.0).unwrap();
        assert!((m4.value - (PI / 4.0 - 1.0)).abs() < 1e-13);
        assert!(m4.lambda_ratio.unwrap() < 4.0);

        let disk = Domain::Disk(Disk::new(Vec2::ZERO, 1.0).unwrap());
        let md = m_lambda(&disk, 4.0).unwrap();
        assert!((md.value + 2.0 * PI).abs() < 1e-12);
        assert!(m_lambda(&disk, -1.0).is_err());
    }

    #[test]
    fn theta_examples() {
        let o4 = omega_lambda(&Domain::unit_square(), 4.0).unwrap();
        let exact = 4.0 * (0.75 + PI / 16.0) / (2.0 + PI / 2.0);
        assert!((theta_constant(&o4) - exact).abs() < 1e-13);
        let sq = ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(theta_constant(&sq), f64::INFINITY);
        let disk = ArcRegion::disk(Vec2::ZERO, 3.0).unwrap();
        assert_eq!(theta_constant(&disk), 1.0);
    }

    #[test]
    fn critical_value_bounds() {
        assert!((lambda0_lower_bound(FRAC_PI_2) - 1.0).abs() < 1e-15);
        assert!((lambda0_lower_bound(1.0) - (1.0 - 1.0_f64.cos())).abs() < 1e-15);
        assert!((lambda0_lower_bound(2.0) - (3.0 - FRAC_PI_2)).abs() < 1e-15);
        assert!((lambda0_lower_bound(PI) - (1.0 + FRAC_PI_2)).abs() < 1e-15);
        assert_eq!(lambda1_bounds(1.0, 2.0), (2.0, 3.0));
        assert_eq!(lambda1_bounds(f64::INFINITY, 4.0), (f64::INFINITY, f64::INFINITY));
        assert_eq!(lambda1_bounds(1.0, 0.5), (0.5, 1.5));
    }
}
