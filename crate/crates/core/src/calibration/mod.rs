//! Piecewise calibration field for `Ω_λ`: the gradient field of `ρ` on the
//! annulus `Ω_λ \ Ω_{h_D}` and explicit kite fields on `D \ Ω_λ`.

mod verify;

use std::fmt;

use serde::Serialize;

pub use verify::{convex_hull, random_competitor, verify, Check, VerificationReport, VerifyOptions};

use crate::cheeger::{omega_lambda, solve_cheeger, CheegerResult};
use crate::cutlocus::{grid_point, CutLocusSolver, DOMAIN_TOL};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::geom2d::{ArcRegion, Domain, Point, Vec2, VertexFan};

/// Slack of the kite membership tests.
pub const KITE_TOL: f64 = 1e-9;

/// The part of `D \ Ω_λ` attached to one vertex `x_j` of `D^δ`, `δ = 1/λ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KiteCell {
    pub fan: VertexFan,
    pub delta: f64,
}

impl KiteCell {
    /// Membership in `x_j + {p ∈ N(x_j) : ⟨p, ν±⟩ ≤ δ}`.
    pub fn in_normal_region(&self, x: Point, tol: f64) -> bool {
        let p = x - self.fan.vertex;
        self.fan.cone_contains(x, tol)
            && p.dot(self.fan.nu_plus) <= self.delta + tol
            && p.dot(self.fan.nu_minus) <= self.delta + tol
    }

    /// Membership in the normal region outside the arc `|p| = δ`.
    pub fn contains(&self, x: Point, tol: f64) -> bool {
        self.in_normal_region(x, tol) && x.dist(self.fan.vertex) > self.delta
    }

    /// `1 − ⟨λp, ν_j^⊥⟩²`, the radicand of the kite field.
    pub fn radicand(&self, x: Point) -> f64 {
        let t = (x - self.fan.vertex).dot(self.fan.bisector.perp()) / self.delta;
        1.0 - t * t
    }

    /// `p − a ν_j` with `p = λ(x − x_j)` and `a = ⟨p, ν_j⟩ − √(1 − ⟨p, ν_j^⊥⟩²)`.
    pub fn field(&self, x: Point) -> Vec2 {
        let nu = self.fan.bisector;
        let p = (x - self.fan.vertex) / self.delta;
        let s = p.dot(nu);
        let t = p.dot(nu.perp());
        let a = s - (1.0 - t * t).max(0.0).sqrt();
        p - nu * a
    }

    /// The two cone rays bounding the cell, from `x_j` to `∂D`.
    pub fn rays(&self) -> [(Point, Point); 2] {
        let v = self.fan.vertex;
        [
            (v, v + self.fan.nu_minus * self.delta),
            (v, v + self.fan.nu_plus * self.delta),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "region", content = "kite", rename_all = "lowercase")]
pub enum RegionTag {
    CheegerCore,
    Annulus,
    Kite(usize),
    Exterior,
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionTag::CheegerCore => f.write_str("CheegerCore"),
            RegionTag::Annulus => f.write_str("Annulus"),
            RegionTag::Kite(_) => f.write_str("Kite"),
            RegionTag::Exterior => f.write_str("Exterior"),
        }
    }
}

/// The calibration `q̄` of `Ω_λ` in `D`, for `λ > h_D`.
#[derive(Debug)]
pub struct CalibrationField {
    lambda: f64,
    cheeger: CheegerResult,
    omega: ArcRegion,
    kites: Vec<KiteCell>,
    solver: CutLocusSolver,
}

impl CalibrationField {
    pub fn new(domain: Domain, lambda: f64) -> Result<Self> {
        let cheeger = solve_cheeger(&domain)?;
        Self::with_cheeger(domain, cheeger, lambda, crate::cutlocus::DEFAULT_TOLERANCE)
    }

    pub fn with_cheeger(domain: Domain, cheeger: CheegerResult, lambda: f64, bisection_tol: f64) -> Result<Self> {
        if lambda <= cheeger.h || !lambda.is_finite() {
            return Err(Error::NothingToVerify { lambda, h: cheeger.h });
        }
        let omega = omega_lambda(&domain, lambda)?;
        let delta = 1.0 / lambda;
        let kites = match &domain {
            Domain::Polygon(p) => p
                .erode(delta)?
                .vertex_fans()
                .into_iter()
                .map(|fan| KiteCell { fan, delta })
                .collect(),
            Domain::Disk(_) => Vec::new(),
        };
        Ok(Self {
            lambda,
            cheeger,
            omega,
            kites,
            solver: CutLocusSolver::with_tolerance(domain, bisection_tol),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn h(&self) -> f64 {
        self.cheeger.h
    }

    pub fn cheeger(&self) -> &CheegerResult {
        &self.cheeger
    }

    pub fn domain(&self) -> &Domain {
        self.solver.domain()
    }

    pub fn omega(&self) -> &ArcRegion {
        &self.omega
    }

    pub fn cheeger_set(&self) -> &ArcRegion {
        &self.cheeger.cheeger_set
    }

    pub fn kites(&self) -> &[KiteCell] {
        &self.kites
    }

    pub fn solver(&self) -> &CutLocusSolver {
        &self.solver
    }

    pub fn classify(&self, x: Point) -> Result<RegionTag> {
        if !self.domain().contains(x, DOMAIN_TOL) {
            return Err(Error::OutsideDomain { x: x.x, y: x.y });
        }
        if self.solver.reaches(x, 1.0 / self.cheeger.h) {
            return Ok(RegionTag::CheegerCore);
        }
        if self.solver.reaches(x, 1.0 / self.lambda) {
            return Ok(RegionTag::Annulus);
        }
        Ok(self
            .kites
            .iter()
            .position(|k| k.contains(x, KITE_TOL))
            .map_or(RegionTag::Exterior, RegionTag::Kite))
    }

    /// `clamp(1/ρ, h_D, λ)`.
    pub fn div_value(&self, x: Point) -> Result<f64> {
        match self.classify(x)? {
            RegionTag::CheegerCore => Ok(self.cheeger.h),
            RegionTag::Annulus => Ok((1.0 / self.solver.rho(x)?).clamp(self.cheeger.h, self.lambda)),
            RegionTag::Kite(_) | RegionTag::Exterior => Ok(self.lambda),
        }
    }

    pub fn eval_field(&self, x: Point) -> Result<Vec2> {
        self.eval_tagged(x, self.classify(x)?)
    }

    fn eval_tagged(&self, x: Point, tag: RegionTag) -> Result<Vec2> {
        match tag {
            RegionTag::CheegerCore => Err(Error::UndefinedField {
                x: x.x,
                y: x.y,
                reason: "the field inside the Cheeger set is not constructed",
            }),
            RegionTag::Annulus => self.solver.q_rho(x),
            RegionTag::Kite(j) => Ok(self.kites[j].field(x)),
            RegionTag::Exterior => Err(Error::UndefinedField {
                x: x.x,
                y: x.y,
                reason: "boundary band between field pieces",
            }),
        }
    }

    /// Distance from `x` to the nearest interface: `∂D`, `∂Ω_λ` or `∂Ω_{h_D}`.
    pub fn interface_distance(&self, x: Point) -> f64 {
        self.domain()
            .distance_to_boundary(x)
            .min(self.omega.distance_to_boundary(x))
            .min(self.cheeger.cheeger_set.distance_to_boundary(x))
    }

    /// Integral curves of `q̄` started on `∂Ω_{h_D}`, followed until they leave `D`.
    pub fn streamlines(&self, seeds: usize, step: f64) -> Vec<Vec<Point>> {
        let core = &self.cheeger.cheeger_set;
        let starts = core.sample_boundary(core.perimeter() / seeds.max(1) as f64);
        let velocity = |x: Point| -> Option<Vec2> {
            match self.classify(x).ok()? {
                RegionTag::CheegerCore => self.solver.q_rho(x).ok(),
                tag => self.eval_tagged(x, tag).ok(),
            }
        };
        let max_steps = (4.0 * self.domain().bbox().diagonal() / step).ceil() as usize;
        starts
            .into_iter()
            .map(|s| {
                let mut line = vec![s];
                let mut x = s;
                for _ in 0..max_steps {
                    let Some(k1) = velocity(x) else { break };
                    let k2 = velocity(x + k1 * (0.5 * step)).unwrap_or(k1);
                    let k3 = velocity(x + k2 * (0.5 * step)).unwrap_or(k2);
                    let k4 = velocity(x + k3 * step).unwrap_or(k3);
                    let next = x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (step / 6.0);
                    if !self.domain().contains(next, 0.0) {
                        line.push(self.exit_point(x, next));
                        return line;
                    }
                    x = next;
                    line.push(x);
                }
                line
            })
            .collect()
    }

    /// Crossing of `∂D` on the segment from an inside point to an outside point.
    fn exit_point(&self, inside: Point, outside: Point) -> Point {
        let (mut a, mut b) = (inside, outside);
        for _ in 0..60 {
            let m = a.lerp(b, 0.5);
            if self.domain().contains(m, 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        a
    }
}

/// One row of [`export_field_samples`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldSample {
    pub x: Point,
    pub q: Option<Vec2>,
    pub div: f64,
    pub region: RegionTag,
}

/// Field samples on the inclusive `n × n` lattice over the bounding box of `D`.
pub fn export_field_samples(field: &CalibrationField, n: usize, mode: ExecMode) -> Result<Vec<FieldSample>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("grid size must be at least 2, got {n}")));
    }
    let bbox = field.domain().bbox();
    let rows = map_indexed(mode, n * n, |k| {
        let x = grid_point(&bbox, n, k % n, k / n);
        if !field.domain().contains(x, 1e-12) {
            return None;
        }
        let region = field.classify(x).ok()?;
        let div = match region {
            RegionTag::Annulus => field.div_value(x).ok()?,
            RegionTag::CheegerCore => field.h(),
            _ => field.lambda(),
        };
        Some(FieldSample {
            x,
            q: field.eval_tagged(x, region).ok(),
            div,
            region,
        })
    });
    Ok(rows.into_iter().flatten().collect())
}
