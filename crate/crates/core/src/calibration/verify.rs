use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{CalibrationField, RegionTag};
use crate::cheeger::m_lambda_with;
use crate::config::{CheckTolerances, Config};
use crate::error::Result;
use crate::exec::{map_indexed, pairwise_sum, ExecMode};
use crate::geom2d::{ConvexPolygon, Domain, Point, Vec2};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub grid_n: usize,
    pub competitors: usize,
    pub seed: u64,
    pub band: f64,
    pub fd_step: f64,
    pub arc_samples: usize,
    pub edge_samples: usize,
    pub mode: ExecMode,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self::from(&Config::default())
    }
}

impl From<&Config> for VerifyOptions {
    fn from(c: &Config) -> Self {
        Self {
            grid_n: c.grid,
            competitors: c.competitors,
            seed: c.seed,
            band: c.band,
            fd_step: c.fd_step,
            arc_samples: 64,
            edge_samples: 200,
            mode: c.exec,
        }
    }
}

/// Numerical certificate that `Ω_λ` solves `m(λ, D)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub lambda: f64,
    pub h: f64,
    pub grid_n: usize,
    pub m_lambda: f64,
    /// max `||q| − 1|` over annulus and kite samples.
    pub unit_norm_error: f64,
    pub unit_norm_samples: usize,
    /// max `|div_h q − div_value|` away from interfaces.
    pub divergence_error: f64,
    pub divergence_samples: usize,
    /// max `|q_kite − q_ρ|` on the arcs `∂Ω_λ ∩ D`.
    pub arc_trace_mismatch: f64,
    pub arc_trace_samples: usize,
    /// max `|q_ρ·ν_D − 1|` on `∂D` outside the incircle union.
    pub normal_trace_error: f64,
    pub normal_trace_samples: usize,
    /// Midpoint rule for `∫_D (div_value − λ)`.
    pub duality_quadrature: f64,
    pub duality_gap: f64,
    /// min over competitors of `P(F) − λ|F| − m(λ, D)`.
    pub competitor_min_excess: f64,
    pub competitors: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn checks(&self, tol: &CheckTolerances) -> Vec<Check> {
        let upper = |name: &str, value: f64, tolerance: f64| Check {
            name: name.to_string(),
            value,
            tolerance,
            pass: value <= tolerance,
        };
        vec![
            upper("unit_norm", self.unit_norm_error, tol.unit_norm),
            upper("divergence", self.divergence_error, tol.divergence),
            upper("arc_trace", self.arc_trace_mismatch, tol.arc_trace),
            upper("normal_trace", self.normal_trace_error, tol.normal_trace),
            upper(
                "duality",
                self.duality_gap,
                tol.duality_constant / self.grid_n as f64,
            ),
            Check {
                name: "primal".into(),
                value: self.competitor_min_excess,
                tolerance: tol.primal,
                pass: self.competitor_min_excess >= -tol.primal,
            },
        ]
    }

    pub fn passes(&self, tol: &CheckTolerances) -> bool {
        self.checks(tol).iter().all(|c| c.pass)
    }
}

#[derive(Default)]
struct CellStats {
    integrand: f64,
    norm_err: Option<f64>,
    div_err: Option<f64>,
}

fn max_of(xs: impl Iterator<Item = f64>) -> (f64, usize) {
    xs.fold((0.0, 0), |(m, n), v| (m.max(v), n + 1))
}

/// Runs checks (a)–(f) against `field`.
pub fn verify(field: &CalibrationField, opts: &VerifyOptions) -> Result<VerificationReport> {
    let lambda = field.lambda();
    let domain = field.domain();
    let m = m_lambda_with(domain, field.cheeger(), lambda)?.value;

    let n = opts.grid_n.max(1);
    let bbox = domain.bbox();
    let (dx, dy) = (bbox.width() / n as f64, bbox.height() / n as f64);
    let cells = map_indexed(opts.mode, n * n, |k| {
        let x = Vec2::new(
            bbox.min.x + (k % n) as f64 * dx + 0.5 * dx,
            bbox.min.y + (k / n) as f64 * dy + 0.5 * dy,
        );
        cell_stats(field, x, opts)
    });
    let integrand: Vec<f64> = cells.iter().map(|c| c.integrand).collect();
    let duality_quadrature = pairwise_sum(&integrand) * dx * dy;
    let (unit_norm_error, unit_norm_samples) = max_of(cells.iter().filter_map(|c| c.norm_err));
    let (divergence_error, divergence_samples) = max_of(cells.iter().filter_map(|c| c.div_err));

    let arc_points: Vec<(usize, Point)> = field
        .kites()
        .iter()
        .enumerate()
        .flat_map(|(j, k)| {
            let fan = &k.fan;
            let start = fan.nu_minus.angle();
            let span = 2.0 * fan.half_angle;
            let s = opts.arc_samples.max(2);
            (0..s).map(move |i| {
                let a = start + span * i as f64 / (s - 1) as f64;
                (j, fan.vertex + Vec2::from_angle(a) * k.delta)
            })
        })
        .collect();
    let arc_errs = map_indexed(opts.mode, arc_points.len(), |i| {
        let (j, x) = arc_points[i];
        field
            .solver()
            .q_rho(x)
            .ok()
            .map(|q| q.dist(field.kites()[j].field(x)))
    });
    let (arc_trace_mismatch, arc_trace_samples) = max_of(arc_errs.into_iter().flatten());

    let edge_points = normal_trace_points(field, opts);
    let trace_errs = map_indexed(opts.mode, edge_points.len(), |i| {
        let (x, nu) = edge_points[i];
        field.solver().q_rho(x).ok().map(|q| (q.dot(nu) - 1.0).abs())
    });
    let (normal_trace_error, normal_trace_samples) = max_of(trace_errs.into_iter().flatten());

    let excess = map_indexed(opts.mode, opts.competitors, |i| {
        let f = random_competitor(domain, opts.seed, i as u64);
        f.perimeter() - lambda * f.area() - m
    });
    let competitor_min_excess = excess.into_iter().fold(f64::INFINITY, f64::min);

    Ok(VerificationReport {
        lambda,
        h: field.h(),
        grid_n: n,
        m_lambda: m,
        unit_norm_error,
        unit_norm_samples,
        divergence_error,
        divergence_samples,
        arc_trace_mismatch,
        arc_trace_samples,
        normal_trace_error,
        normal_trace_samples,
        duality_quadrature,
        duality_gap: (duality_quadrature - m).abs(),
        competitor_min_excess,
        competitors: opts.competitors,
        seed: opts.seed,
    })
}

fn cell_stats(field: &CalibrationField, x: Point, opts: &VerifyOptions) -> CellStats {
    if !field.domain().contains(x, 0.0) {
        return CellStats::default();
    }
    let Ok(tag) = field.classify(x) else {
        return CellStats::default();
    };
    let lambda = field.lambda();
    let div = match tag {
        RegionTag::CheegerCore => field.h(),
        RegionTag::Annulus => field.div_value(x).unwrap_or(lambda),
        RegionTag::Kite(_) | RegionTag::Exterior => lambda,
    };
    let mut stats = CellStats {
        integrand: div - lambda,
        ..CellStats::default()
    };
    if !matches!(tag, RegionTag::Annulus | RegionTag::Kite(_)) {
        return stats;
    }
    let q = match tag {
        RegionTag::Kite(j) => field.kites()[j].field(x),
        _ => match field.solver().q_rho(x) {
            Ok(q) => q,
            Err(_) => return stats,
        },
    };
    stats.norm_err = Some((q.norm() - 1.0).abs());
    if field.interface_distance(x) >= opts.band {
        let h = opts.fd_step;
        let eval = |p: Point| -> Option<Vec2> {
            match tag {
                RegionTag::Kite(j) => Some(field.kites()[j].field(p)),
                _ => field.solver().q_rho(p).ok(),
            }
        };
        let (ex, ey) = (Vec2::new(h, 0.0), Vec2::new(0.0, h));
        if let (Some(xp), Some(xm), Some(yp), Some(ym)) =
            (eval(x + ex), eval(x - ex), eval(x + ey), eval(x - ey))
        {
            let fd = (xp.x - xm.x + yp.y - ym.y) / (2.0 * h);
            stats.div_err = Some((fd - div).abs());
        }
    }
    stats
}

/// Edge samples of `∂D` away from vertices and outside the closed incircle union,
/// with the outward normal of their edge.
fn normal_trace_points(field: &CalibrationField, opts: &VerifyOptions) -> Vec<(Point, Vec2)> {
    let Domain::Polygon(poly) = field.domain() else {
        return Vec::new();
    };
    let solver = field.solver();
    let (r, ridge) = (solver.inradius(), solver.ridge());
    let s = opts.edge_samples.max(1);
    (0..poly.len())
        .flat_map(|i| {
            let (a, b) = poly.edge(i);
            let nu = poly.normals()[i];
            (1..s).map(move |t| (a.lerp(b, t as f64 / s as f64), nu, a, b))
        })
        .filter(|&(x, _, a, b)| {
            x.dist(a) >= opts.band && x.dist(b) >= opts.band && ridge.distance(x) > r + 1e-9
        })
        .map(|(x, nu, _, _)| (x, nu))
        .collect()
}

/// Convex hull of `k ∈ [3, 12]` uniform points of `D`, resampled until strictly convex.
/// Competitor `i` depends only on `(seed, i)`.
pub fn random_competitor(domain: &Domain, seed: u64, i: u64) -> ConvexPolygon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    let bbox = domain.bbox();
    loop {
        let k = rng.gen_range(3..=12);
        let mut pts = Vec::with_capacity(k);
        while pts.len() < k {
            let x = Vec2::new(
                rng.gen_range(bbox.min.x..=bbox.max.x),
                rng.gen_range(bbox.min.y..=bbox.max.y),
            );
            if domain.contains(x, 0.0) {
                pts.push(x);
            }
        }
        if let Ok(p) = ConvexPolygon::new(convex_hull(pts)) {
            return p;
        }
    }
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
pub fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if (b - a).cross(p - a) > 0.0 {
                    break;
                }
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}
