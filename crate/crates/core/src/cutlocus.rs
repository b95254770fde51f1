//! The cut-locus potential `ρ`, its boundary trace `τ` and the field `q_ρ`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::geom2d::{BoundaryElement, BoundingBox, ConvexPolygon, Domain, Point, Ridge, Vec2, VertexFan};

pub const DEFAULT_TOLERANCE: f64 = 1e-11;
/// Slack for "x lies in the closed domain".
pub const DOMAIN_TOL: f64 = 1e-9;
const ALPHA_THRESHOLD: f64 = 1e-12;
const CACHE_QUANTUM: f64 = 1e-13;
const CACHE_CAPACITY: usize = 4096;

/// Evaluator for `ρ` on a fixed domain, with memoized erosions.
pub struct CutLocusSolver {
    domain: Domain,
    inradius: f64,
    ridge: Ridge,
    tolerance: f64,
    cache: RwLock<HashMap<i64, Arc<ConvexPolygon>>>,
}

impl fmt::Debug for CutLocusSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CutLocusSolver")
            .field("domain", &self.domain)
            .field("inradius", &self.inradius)
            .field("ridge", &self.ridge)
            .field("tolerance", &self.tolerance)
            .field("cached_erosions", &self.cache.read().len())
            .finish()
    }
}

impl Clone for CutLocusSolver {
    fn clone(&self) -> Self {
        Self::with_tolerance(self.domain.clone(), self.tolerance)
    }
}

/// `ρ` sampled on an `n × n` grid over the bounding box, row-major with `y` as the slow index.
#[derive(Clone, Debug, Serialize)]
pub struct RhoGrid {
    pub n: usize,
    pub bbox: BoundingBox,
    pub values: Vec<Option<f64>>,
}

impl RhoGrid {
    pub fn point(&self, i: usize, j: usize) -> Point {
        grid_point(&self.bbox, self.n, i, j)
    }

    /// `(x, y, ρ)` for samples inside the domain, in grid order.
    pub fn samples(&self) -> impl Iterator<Item = (Point, f64)> + '_ {
        self.values.iter().enumerate().filter_map(move |(k, v)| {
            v.map(|r| (self.point(k % self.n, k / self.n), r))
        })
    }
}

/// Node `(i, j)` of the inclusive `n × n` lattice over `bbox`.
pub fn grid_point(bbox: &BoundingBox, n: usize, i: usize, j: usize) -> Point {
    let s = (n - 1) as f64;
    Vec2::new(
        bbox.min.x + bbox.width() * i as f64 / s,
        bbox.min.y + bbox.height() * j as f64 / s,
    )
}

impl CutLocusSolver {
    pub fn new(domain: Domain) -> Self {
        Self::with_tolerance(domain, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(domain: Domain, tolerance: f64) -> Self {
        let (inradius, ridge) = domain.inradius_highridge();
        Self {
            domain,
            inradius,
            ridge,
            tolerance,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn ridge(&self) -> Ridge {
        self.ridge
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Whether `x` lies in the closure of `U_D`, the union of the incircles.
    pub fn in_incircle_union(&self, x: Point) -> bool {
        match &self.domain {
            Domain::Disk(_) => true,
            Domain::Polygon(_) => self.ridge.distance(x) <= self.inradius - 1e-12,
        }
    }

    fn check_inside(&self, x: Point) -> Result<()> {
        if self.domain.contains(x, DOMAIN_TOL) {
            Ok(())
        } else {
            Err(Error::OutsideDomain { x: x.x, y: x.y })
        }
    }

    /// `erode(D, δ)` through the cache; `δ` is snapped to the cache quantum.
    pub fn eroded(&self, poly: &ConvexPolygon, delta: f64) -> Result<Arc<ConvexPolygon>> {
        let key = (delta / CACHE_QUANTUM).round() as i64;
        if let Some(p) = self.cache.read().get(&key) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(poly.erode(key as f64 * CACHE_QUANTUM)?);
        let mut cache = self.cache.write();
        if cache.len() >= CACHE_CAPACITY {
            cache.clear();
        }
        Ok(Arc::clone(cache.entry(key).or_insert(p)))
    }

    /// `d(x, D^δ) − δ`, extended to `δ = R_D` by the high ridge.
    fn alpha_raw(&self, x: Point, delta: f64) -> f64 {
        match &self.domain {
            Domain::Disk(d) => (x.dist(d.center()) - (d.radius() - delta)).max(0.0) - delta,
            Domain::Polygon(poly) => {
                if delta >= self.inradius {
                    return self.ridge.distance(x) - delta;
                }
                match self.eroded(poly, delta) {
                    Ok(e) => e.dist_project(x).0 - delta,
                    Err(_) => self.ridge.distance(x) - delta,
                }
            }
        }
    }

    pub fn alpha(&self, x: Point, delta: f64) -> Result<f64> {
        self.check_inside(x)?;
        if !(delta >= 0.0 && delta < self.inradius) {
            return Err(Error::OutOfRange {
                name: "delta",
                value: delta,
                range: format!("[0, {})", self.inradius),
            });
        }
        Ok(self.alpha_raw(x, delta))
    }

    /// `ρ(x) ≥ δ`, decided without computing `ρ`.
    pub fn reaches(&self, x: Point, delta: f64) -> bool {
        if delta <= 0.0 {
            return true;
        }
        if delta >= self.inradius {
            return delta <= self.inradius + 1e-12 && self.ridge.distance(x) <= self.inradius + 1e-12;
        }
        self.alpha_raw(x, delta) <= ALPHA_THRESHOLD
    }

    /// `ρ(x) = sup{δ ≥ 0 : d(x, D^δ) ≤ δ}`.
    pub fn rho(&self, x: Point) -> Result<f64> {
        self.check_inside(x)?;
        let poly = match &self.domain {
            Domain::Disk(d) => return Ok(d.radius()),
            Domain::Polygon(p) => p,
        };
        if self.ridge.distance(x) <= self.inradius - 1e-12 {
            return Ok(self.inradius);
        }
        if poly.vertex_at(x, 1e-12).is_some() {
            return Ok(0.0);
        }
        if poly.support_excess(x) >= -1e-12 {
            return Ok(self.boundary_trace(poly, x));
        }
        // α ≤ 0 exactly on [0, ρ(x)].
        let (mut lo, mut hi) = (0.0, self.inradius);
        while hi - lo > self.tolerance {
            let mid = 0.5 * (lo + hi);
            if self.alpha_raw(x, mid) > ALPHA_THRESHOLD {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let r = 0.5 * (lo + hi);
        Ok(Self::vertex_root(poly, x, r, hi).unwrap_or(r))
    }

    /// Root of `|x − v(r + s)| = r + s` where `v` is the vertex of `D^r`
    /// nearest `x`, moving linearly in its depth.
    fn vertex_root(poly: &ConvexPolygon, x: Point, r: f64, hi: f64) -> Option<f64> {
        let e = poly.erode(r).ok()?;
        let (_, foot) = e.dist_project(x);
        let j = e.vertex_at(foot, 1e-12)?;
        let fan = e.vertex_fans().swap_remove(j);
        let (n1, n2) = (fan.nu_minus, fan.nu_plus);
        let c = n1.dot(n2);
        let w = -(n1 + n2) / (1.0 + c);
        let d = x - fan.vertex;
        let a = 0.5 * (n1 - n2).norm_sq() / (1.0 + c);
        let b = d.dot(w) + r;
        let q = (d.norm() - r) * (d.norm() + r);
        let disc = b * b - a * q;
        if b >= 0.0 || disc < 0.0 {
            return None;
        }
        // larger root of a s² − 2b s + q
        let s = q / (b - disc.sqrt());
        let rr = r + s;
        if !(rr >= 0.0 && rr <= hi) {
            return None;
        }
        let p = fan.vertex + w * s;
        let feasible = poly
            .normals()
            .iter()
            .zip(poly.offsets())
            .all(|(n, off)| n.dot(p) <= off - rr + 1e-12);
        let dp = x - p;
        let tol = 1e-12 * dp.norm();
        (feasible && n1.cross(dp) >= -tol && dp.cross(n2) >= -tol).then_some(rr)
    }

    /// Largest inscribed ball touching `∂D` at `x`, for `x` on an edge.
    fn boundary_trace(&self, poly: &ConvexPolygon, x: Point) -> f64 {
        let (k, _) = poly
            .normals()
            .iter()
            .zip(poly.offsets())
            .map(|(n, b)| n.dot(x) - b)
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, e)| if e > best.1 { (i, e) } else { best });
        let nk = poly.normals()[k];
        let x = x - nk * (nk.dot(x) - poly.offsets()[k]);
        let mut t = self.inradius;
        for (j, (n, b)) in poly.normals().iter().zip(poly.offsets()).enumerate() {
            let c = 1.0 - n.dot(nk);
            if j != k && c > 0.0 {
                t = t.min(((b - n.dot(x)) / c).max(0.0));
            }
        }
        t
    }

    /// `τ(x)` for `x ∈ ∂D`.
    pub fn tau(&self, x: Point) -> Result<f64> {
        if self.domain.distance_to_boundary(x) > DOMAIN_TOL {
            return Err(Error::OutsideDomain { x: x.x, y: x.y });
        }
        match &self.domain {
            Domain::Disk(d) => Ok(d.radius()),
            Domain::Polygon(p) => {
                if p.vertex_at(x, 1e-12).is_some() {
                    Ok(0.0)
                } else {
                    Ok(self.boundary_trace(p, x))
                }
            }
        }
    }

    /// `(x − Π_{D^ρ}(x))/ρ` before renormalization, together with `ρ(x)`.
    pub fn q_rho_raw(&self, x: Point) -> Result<(Vec2, f64)> {
        if self.in_incircle_union(x) {
            self.check_inside(x)?;
            return Err(Error::UndefinedField {
                x: x.x,
                y: x.y,
                reason: "inside the union of incircles",
            });
        }
        let delta = self.rho(x)?;
        if delta <= 0.0 {
            return Err(Error::UndefinedField {
                x: x.x,
                y: x.y,
                reason: "corner of the domain",
            });
        }
        let poly = match &self.domain {
            Domain::Polygon(p) => p,
            Domain::Disk(_) => unreachable!("the disk is its own incircle union"),
        };
        let foot = if delta >= self.inradius - 1e-12 {
            self.ridge.project(x)
        } else {
            match self.eroded(poly, delta) {
                Ok(e) => e.dist_project(x).1,
                Err(_) => self.ridge.project(x),
            }
        };
        Ok(((x - foot) / delta, delta))
    }

    pub fn q_rho(&self, x: Point) -> Result<Vec2> {
        let (v, _) = self.q_rho_raw(x)?;
        if v.norm() == 0.0 {
            return Err(Error::UndefinedField {
                x: x.x,
                y: x.y,
                reason: "zero projection offset",
            });
        }
        Ok(v.normalized())
    }

    /// The level set `{ρ = δ}` as one arc per vertex of `D^δ`.
    pub fn level_arcs(&self, delta: f64) -> Result<Vec<(VertexFan, BoundaryElement)>> {
        if !(delta > 0.0 && delta < self.inradius) {
            return Err(Error::OutOfRange {
                name: "delta",
                value: delta,
                range: format!("(0, {})", self.inradius),
            });
        }
        let poly = match &self.domain {
            Domain::Disk(_) => return Ok(Vec::new()),
            Domain::Polygon(p) => p,
        };
        Ok(poly
            .erode(delta)?
            .vertex_fans()
            .into_iter()
            .map(|f| {
                let arc = BoundaryElement::arc(f.vertex, delta, f.nu_minus.angle(), 2.0 * f.half_angle);
                (f, arc)
            })
            .collect())
    }

    pub fn sample_rho_grid(&self, n: usize, mode: ExecMode) -> Result<RhoGrid> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("grid size must be at least 2, got {n}")));
        }
        let bbox = self.domain.bbox();
        let values = map_indexed(mode, n * n, |k| {
            let x = grid_point(&bbox, n, k % n, k / n);
            if self.domain.contains(x, 1e-12) {
                self.rho(x).ok()
            } else {
                None
            }
        });
        Ok(RhoGrid { n, bbox, values })
    }
}
