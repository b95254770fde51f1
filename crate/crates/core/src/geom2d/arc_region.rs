use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::polygon::{ConvexPolygon, Ridge};
use super::vec2::{project_on_segment, BoundingBox, Point, Vec2};
use crate::error::{Error, Result};

/// Tolerance for consecutive boundary elements to meet.
pub const CHAIN_TOL: f64 = 1e-10;
const ANGLE_TOL: f64 = 1e-9;

/// Piece of an [`ArcRegion`] boundary, traversed counter-clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundaryElement {
    Segment {
        p0: Point,
        p1: Point,
    },
    /// Counter-clockwise arc; `end_angle > start_angle`.
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
}

impl BoundaryElement {
    pub fn arc(center: Point, radius: f64, start_angle: f64, span: f64) -> Self {
        BoundaryElement::Arc {
            center,
            radius,
            start_angle,
            end_angle: start_angle + span,
        }
    }

    pub fn start(&self) -> Point {
        match *self {
            BoundaryElement::Segment { p0, .. } => p0,
            BoundaryElement::Arc {
                center,
                radius,
                start_angle,
                ..
            } => center + Vec2::from_angle(start_angle) * radius,
        }
    }

    pub fn end(&self) -> Point {
        match *self {
            BoundaryElement::Segment { p1, .. } => p1,
            BoundaryElement::Arc {
                center,
                radius,
                end_angle,
                ..
            } => center + Vec2::from_angle(end_angle) * radius,
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            BoundaryElement::Segment { p0, p1 } => p0.dist(p1),
            BoundaryElement::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => radius * (end_angle - start_angle),
        }
    }

    /// Unit tangent at the start and at the end of the element.
    pub fn tangents(&self) -> (Vec2, Vec2) {
        match *self {
            BoundaryElement::Segment { p0, p1 } => {
                let t = (p1 - p0).normalized();
                (t, t)
            }
            BoundaryElement::Arc {
                start_angle,
                end_angle,
                ..
            } => (
                Vec2::from_angle(start_angle).perp(),
                Vec2::from_angle(end_angle).perp(),
            ),
        }
    }

    /// Distance from `x` to the element and the nearest point on it.
    pub fn dist_project(&self, x: Point) -> (f64, Point) {
        match *self {
            BoundaryElement::Segment { p0, p1 } => {
                let p = project_on_segment(x, p0, p1);
                (x.dist(p), p)
            }
            BoundaryElement::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let v = x - center;
                if v.norm() > 0.0 && angle_in_span(v.angle(), start_angle, end_angle) {
                    let p = center + v.normalized() * radius;
                    return (x.dist(p), p);
                }
                let (a, b) = (self.start(), self.end());
                if x.dist(a) <= x.dist(b) {
                    (x.dist(a), a)
                } else {
                    (x.dist(b), b)
                }
            }
        }
    }

    /// Point at arclength fraction `t ∈ [0, 1]`.
    pub fn point_at(&self, t: f64) -> Point {
        match *self {
            BoundaryElement::Segment { p0, p1 } => p0.lerp(p1, t),
            BoundaryElement::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => center + Vec2::from_angle(start_angle + t * (end_angle - start_angle)) * radius,
        }
    }
}

/// Whether angle `a` lies on the counter-clockwise sweep from `start` to `end`.
pub fn angle_in_span(a: f64, start: f64, end: f64) -> bool {
    (a - start).rem_euclid(TAU) <= end - start + ANGLE_TOL
}

/// Convex region bounded by a closed chain of segments and circular arcs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcRegion {
    elements: Vec<BoundaryElement>,
}

/// Input to [`dilate`].
#[derive(Clone, Copy, Debug)]
pub enum DilationCore<'a> {
    Polygon(&'a ConvexPolygon),
    Point(Point),
    Segment(Point, Point),
}

impl From<Ridge> for DilationCore<'static> {
    fn from(r: Ridge) -> Self {
        match r {
            Ridge::Point { at } => DilationCore::Point(at),
            Ridge::Segment { a, b } => DilationCore::Segment(a, b),
        }
    }
}

impl<'a> From<&'a ConvexPolygon> for DilationCore<'a> {
    fn from(p: &'a ConvexPolygon) -> Self {
        DilationCore::Polygon(p)
    }
}

/// Minkowski sum of `core` with the closed disk of radius `delta`.
pub fn dilate<'a>(core: impl Into<DilationCore<'a>>, delta: f64) -> Result<ArcRegion> {
    if delta <= 0.0 || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "dilation radius must be positive, got {delta}"
        )));
    }
    let elements = match core.into() {
        DilationCore::Point(c) => vec![
            BoundaryElement::arc(c, delta, -FRAC_PI_2, PI),
            BoundaryElement::arc(c, delta, FRAC_PI_2, PI),
        ],
        DilationCore::Segment(a, b) if a.dist(b) < CHAIN_TOL => {
            return dilate(DilationCore::Point(a.lerp(b, 0.5)), delta)
        }
        DilationCore::Segment(a, b) => {
            let d = (b - a).normalized();
            let n = Vec2::new(d.y, -d.x);
            vec![
                BoundaryElement::Segment {
                    p0: a + n * delta,
                    p1: b + n * delta,
                },
                BoundaryElement::arc(b, delta, n.angle(), PI),
                BoundaryElement::Segment {
                    p0: b - n * delta,
                    p1: a - n * delta,
                },
                BoundaryElement::arc(a, delta, (-n).angle(), PI),
            ]
        }
        DilationCore::Polygon(poly) => {
            let fans = poly.vertex_fans();
            let n = poly.len();
            let mut out = Vec::with_capacity(2 * n);
            for (j, fan) in fans.iter().enumerate() {
                out.push(BoundaryElement::arc(
                    fan.vertex,
                    delta,
                    fan.nu_minus.angle(),
                    2.0 * fan.half_angle,
                ));
                let nu = fan.nu_plus;
                out.push(BoundaryElement::Segment {
                    p0: fan.vertex + nu * delta,
                    p1: poly.vertices()[(j + 1) % n] + nu * delta,
                });
            }
            out
        }
    };
    Ok(ArcRegion { elements })
}

impl ArcRegion {
    /// Validates closure, convexity and arc data of a boundary chain.
    pub fn new(elements: Vec<BoundaryElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidRegion("empty boundary".into()));
        }
        let n = elements.len();
        let mut turning = 0.0;
        for (i, e) in elements.iter().enumerate() {
            match *e {
                BoundaryElement::Segment { p0, p1 } => {
                    if !(p0.is_finite() && p1.is_finite()) || p0.dist(p1) < CHAIN_TOL {
                        return Err(Error::InvalidRegion(format!("degenerate segment {i}")));
                    }
                }
                BoundaryElement::Arc {
                    center,
                    radius,
                    start_angle,
                    end_angle,
                } => {
                    let span = end_angle - start_angle;
                    if radius <= 0.0 || !radius.is_finite() || !center.is_finite() {
                        return Err(Error::InvalidRegion(format!("arc {i} has bad radius")));
                    }
                    if !(span > 0.0 && span <= PI + ANGLE_TOL) {
                        return Err(Error::InvalidRegion(format!(
                            "arc {i} spans {span}, outside (0, π]"
                        )));
                    }
                    turning += span;
                }
            }
            let next = &elements[(i + 1) % n];
            if e.end().dist(next.start()) > CHAIN_TOL {
                return Err(Error::InvalidRegion(format!(
                    "element {i} ends at {:?} but element {} starts at {:?}",
                    e.end(),
                    (i + 1) % n,
                    next.start()
                )));
            }
            let (_, t_out) = e.tangents();
            let (t_in, _) = next.tangents();
            let cross = t_out.cross(t_in);
            if cross < -ANGLE_TOL {
                return Err(Error::InvalidRegion(format!(
                    "boundary turns clockwise after element {i}"
                )));
            }
            turning += t_out.angle_to(t_in);
        }
        if (turning - TAU).abs() > 1e-8 {
            return Err(Error::InvalidRegion(format!(
                "total turning {turning} differs from 2π"
            )));
        }
        Ok(Self { elements })
    }

    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        dilate(DilationCore::Point(center), radius)
    }

    pub fn elements(&self) -> &[BoundaryElement] {
        &self.elements
    }

    pub fn arcs(&self) -> impl Iterator<Item = &BoundaryElement> {
        self.elements
            .iter()
            .filter(|e| matches!(e, BoundaryElement::Arc { .. }))
    }

    pub fn area(&self) -> f64 {
        let chord: f64 = self
            .elements
            .iter()
            .map(|e| e.start().cross(e.end()))
            .sum::<f64>()
            * 0.5;
        let caps: f64 = self
            .elements
            .iter()
            .map(|e| match *e {
                BoundaryElement::Arc {
                    radius,
                    start_angle,
                    end_angle,
                    ..
                } => {
                    let t = end_angle - start_angle;
                    0.5 * radius * radius * (t - t.sin())
                }
                BoundaryElement::Segment { .. } => 0.0,
            })
            .sum();
        chord + caps
    }

    pub fn perimeter(&self) -> f64 {
        self.elements.iter().map(BoundaryElement::length).sum()
    }

    pub fn area_perimeter(&self) -> (f64, f64) {
        (self.area(), self.perimeter())
    }

    /// `P/|Ω|`.
    pub fn lambda_ratio(&self) -> f64 {
        self.perimeter() / self.area()
    }

    /// Largest curvature over the arcs.
    pub fn kappa_inf(&self) -> f64 {
        self.arcs()
            .map(|e| match *e {
                BoundaryElement::Arc { radius, .. } => 1.0 / radius,
                BoundaryElement::Segment { .. } => 0.0,
            })
            .fold(0.0, f64::max)
    }

    /// Whether the tangent jumps somewhere along the boundary.
    pub fn has_corner(&self) -> bool {
        let n = self.elements.len();
        (0..n).any(|i| {
            let (_, t_out) = self.elements[i].tangents();
            let (t_in, _) = self.elements[(i + 1) % n].tangents();
            t_out.angle_to(t_in) > 1e-9
        })
    }

    /// Exact membership in the closed region.
    fn contains_exact(&self, x: Point) -> bool {
        // Inside the polygon of element endpoints, or inside a circular cap.
        let chord_inside = self.elements.iter().all(|e| {
            let (a, b) = (e.start(), e.end());
            (b - a).cross(x - a) >= 0.0
        });
        chord_inside
            || self.elements.iter().any(|e| match *e {
                BoundaryElement::Arc { center, radius, .. } => {
                    let (a, b) = (e.start(), e.end());
                    x.dist(center) <= radius && (b - a).cross(x - a) <= 0.0
                }
                BoundaryElement::Segment { .. } => false,
            })
    }

    /// Distance to the boundary curve.
    pub fn distance_to_boundary(&self, x: Point) -> f64 {
        self.elements
            .iter()
            .map(|e| e.dist_project(x).0)
            .fold(f64::INFINITY, f64::min)
    }

    /// Negative inside, positive outside.
    pub fn signed_distance(&self, x: Point) -> f64 {
        let d = self.distance_to_boundary(x);
        if self.contains_exact(x) {
            -d
        } else {
            d
        }
    }

    pub fn contains(&self, x: Point, tol: f64) -> bool {
        self.contains_exact(x) || self.distance_to_boundary(x) <= tol
    }

    pub fn bbox(&self) -> BoundingBox {
        let mut pts = Vec::new();
        for e in &self.elements {
            pts.push(e.start());
            if let BoundaryElement::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } = *e
            {
                for k in 0..4 {
                    let a = k as f64 * FRAC_PI_2;
                    if angle_in_span(a, start_angle, end_angle) {
                        pts.push(center + Vec2::from_angle(a) * radius);
                    }
                }
            }
        }
        BoundingBox::from_points(pts)
    }

    /// Points along the boundary, at most `max_step` apart, closing the loop.
    pub fn sample_boundary(&self, max_step: f64) -> Vec<Point> {
        let mut out = Vec::new();
        for e in &self.elements {
            let k = ((e.length() / max_step).ceil() as usize).max(1);
            out.extend((0..k).map(|i| e.point_at(i as f64 / k as f64)));
        }
        out
    }
}
