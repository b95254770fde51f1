use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::vec2::{project_on_segment, BoundingBox, Point, Vec2};
use crate::error::{Error, Result};

/// Vertices closer than this are treated as repeated.
pub const VERTEX_TOL: f64 = 1e-12;
/// An offset edge shorter than this is dropped from an erosion.
pub const EDGE_DEATH_TOL: f64 = 1e-12;

/// Strictly convex polygon with counter-clockwise vertices.
///
/// Edge `i` runs from `vertices[i]` to `vertices[i + 1]` and lies on the
/// line `⟨normals[i], x⟩ = offsets[i]` with `normals[i]` the outward unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    normals: Vec<Vec2>,
    offsets: Vec<f64>,
}

/// Optimal face of the inradius linear program.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Ridge {
    Point { at: Point },
    Segment { a: Point, b: Point },
}

impl Ridge {
    pub fn distance(&self, x: Point) -> f64 {
        match *self {
            Ridge::Point { at } => x.dist(at),
            Ridge::Segment { a, b } => x.dist(project_on_segment(x, a, b)),
        }
    }

    pub fn project(&self, x: Point) -> Point {
        match *self {
            Ridge::Point { at } => at,
            Ridge::Segment { a, b } => project_on_segment(x, a, b),
        }
    }
}

/// Normal-cone data at a polygon vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexFan {
    pub vertex: Point,
    /// Outward normal of the incoming edge.
    pub nu_minus: Vec2,
    /// Outward normal of the outgoing edge.
    pub nu_plus: Vec2,
    pub bisector: Vec2,
    /// Half of the exterior angle, in `(0, π/2)`.
    pub half_angle: f64,
}

impl VertexFan {
    pub fn new(vertex: Point, nu_minus: Vec2, nu_plus: Vec2) -> Self {
        let bisector = (nu_minus + nu_plus).normalized();
        let half_angle = 0.5 * nu_minus.angle_to(nu_plus);
        Self {
            vertex,
            nu_minus,
            nu_plus,
            bisector,
            half_angle,
        }
    }

    /// `(1 + ν⁺·ν⁻)/2`, which equals `cos² φ`.
    pub fn k_boundary(&self) -> f64 {
        0.5 * (1.0 + self.nu_plus.dot(self.nu_minus))
    }

    /// Whether `x - vertex` lies in the cone spanned by `ν⁻` and `ν⁺`.
    pub fn cone_contains(&self, x: Point, tol: f64) -> bool {
        let p = x - self.vertex;
        self.nu_minus.cross(p) >= -tol && p.cross(self.nu_plus) >= -tol
    }
}

/// A point of a polygon boundary for [`k_boundary`].
#[derive(Clone, Copy, Debug)]
pub enum BoundaryPoint<'a> {
    Vertex(&'a VertexFan),
    EdgeInterior,
}

/// Boundary coefficient `(1 + ν⁺·ν⁻)/2`; 1 at regular points.
pub fn k_boundary(at: BoundaryPoint<'_>) -> f64 {
    match at {
        BoundaryPoint::Vertex(fan) => fan.k_boundary(),
        BoundaryPoint::EdgeInterior => 1.0,
    }
}

fn outward_normal(a: Point, b: Point) -> Vec2 {
    let d = (b - a).normalized();
    Vec2::new(d.y, -d.x)
}

impl ConvexPolygon {
    /// Validates and wraps a counter-clockwise vertex list.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!(
                "need at least 3 vertices, got {n}"
            )));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon(format!("non-finite vertex {p:?}")));
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            if a.dist(b) < VERTEX_TOL {
                return Err(Error::InvalidPolygon(format!(
                    "repeated vertex at index {}",
                    (i + 1) % n
                )));
            }
        }
        let mut turning = 0.0;
        for i in 0..n {
            let a = vertices[(i + n - 1) % n];
            let b = vertices[i];
            let c = vertices[(i + 1) % n];
            let (e0, e1) = (b - a, c - b);
            let cross = e0.cross(e1);
            if cross <= VERTEX_TOL * e0.norm() * e1.norm() {
                return Err(Error::InvalidPolygon(format!(
                    "vertex {i} is not a strict counter-clockwise turn (cross = {cross:e})"
                )));
            }
            turning += e0.angle_to(e1);
        }
        if (turning - TAU).abs() > 1e-9 {
            return Err(Error::InvalidPolygon(format!(
                "boundary winds {:.6} turns; polygon is not simple",
                turning / TAU
            )));
        }
        let normals: Vec<Vec2> = (0..n)
            .map(|i| outward_normal(vertices[i], vertices[(i + 1) % n]))
            .collect();
        let offsets = (0..n).map(|i| normals[i].dot(vertices[i])).collect();
        Ok(Self {
            vertices,
            normals,
            offsets,
        })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new(vec![
            Vec2::new(x0, y0),
            Vec2::new(x1, y0),
            Vec2::new(x1, y1),
            Vec2::new(x0, y1),
        ])
    }

    /// Regular `n`-gon inscribed in the circle of radius `circumradius`.
    pub fn regular(n: usize, center: Point, circumradius: f64, phase: f64) -> Result<Self> {
        let verts = (0..n)
            .map(|k| center + Vec2::from_angle(phase + TAU * k as f64 / n as f64) * circumradius)
            .collect();
        Self::new(verts)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn normals(&self) -> &[Vec2] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn area(&self) -> f64 {
        let n = self.len();
        let twice: f64 = (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum();
        0.5 * twice
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                a.dist(b)
            })
            .sum()
    }

    pub fn bbox(&self) -> BoundingBox {
        BoundingBox::from_points(self.vertices.iter().copied())
    }

    /// Largest violation `⟨n_i, x⟩ − b_i` over all edges; non-positive inside.
    pub fn support_excess(&self, x: Point) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, b)| n.dot(x) - b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Membership in the closed polygon, with absolute slack `tol`.
    pub fn contains(&self, x: Point, tol: f64) -> bool {
        self.support_excess(x) <= tol
    }

    /// `d(x, D^c)` for points inside; 0 outside.
    pub fn dist_to_complement(&self, x: Point) -> f64 {
        (-self.support_excess(x)).max(0.0)
    }

    /// Distance to the boundary curve, for points on either side.
    pub fn distance_to_boundary(&self, x: Point) -> f64 {
        let excess = self.support_excess(x);
        if excess <= 0.0 {
            -excess
        } else {
            self.dist_project(x).0
        }
    }

    /// Distance to the closed polygon and the (unique) nearest point.
    pub fn dist_project(&self, x: Point) -> (f64, Point) {
        if self.support_excess(x) <= 0.0 {
            return (0.0, x);
        }
        let mut best = (f64::INFINITY, x);
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            let p = project_on_segment(x, a, b);
            let d = x.dist(p);
            if d < best.0 {
                best = (d, p);
            }
        }
        best
    }

    /// Index of the edge whose interior is nearest to a boundary point, if
    /// `x` lies on an edge away from its endpoints.
    pub fn edge_through(&self, x: Point, tol: f64) -> Option<usize> {
        (0..self.len()).find(|&i| {
            let (a, b) = self.edge(i);
            (self.normals[i].dot(x) - self.offsets[i]).abs() <= tol
                && x.dist(a) > tol
                && x.dist(b) > tol
                && (x - a).dot(b - a) > 0.0
                && (x - b).dot(a - b) > 0.0
        })
    }

    /// Index of the vertex within `tol` of `x`.
    pub fn vertex_at(&self, x: Point, tol: f64) -> Option<usize> {
        self.vertices.iter().position(|v| v.dist(x) <= tol)
    }

    /// One fan per vertex; vertex `j` joins edges `j − 1` and `j`.
    pub fn vertex_fans(&self) -> Vec<VertexFan> {
        let n = self.len();
        (0..n)
            .map(|j| VertexFan::new(self.vertices[j], self.normals[(j + n - 1) % n], self.normals[j]))
            .collect()
    }

    /// Inner parallel body `{x : d(x, D^c) > δ}` as the intersection of
    /// the inward-shifted edge half-planes.
    pub fn erode(&self, delta: f64) -> Result<ConvexPolygon> {
        if delta < 0.0 || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "erosion depth must be finite and non-negative, got {delta}"
            )));
        }
        if delta == 0.0 {
            return Ok(self.clone());
        }
        let n = self.len();
        // (vertex, index of the source edge starting at that vertex)
        let mut ring: Vec<(Point, usize)> = self.vertices.iter().copied().zip(0..n).collect();
        let mut next = Vec::with_capacity(n + 2);
        for k in 0..n {
            let nk = self.normals[k];
            let bk = self.offsets[k] - delta;
            next.clear();
            let m = ring.len();
            for i in 0..m {
                let (cur, lab) = ring[i];
                let (nxt, _) = ring[(i + 1) % m];
                let sc = nk.dot(cur) - bk;
                let sn = nk.dot(nxt) - bk;
                let cur_in = sc <= 0.0;
                let nxt_in = sn <= 0.0;
                if cur_in {
                    next.push((cur, lab));
                }
                if cur_in != nxt_in {
                    let t = sc / (sc - sn);
                    let hit = cur.lerp(nxt, t);
                    // Leaving: the boundary continues along the clip line.
                    next.push((hit, if cur_in { k } else { lab }));
                }
            }
            std::mem::swap(&mut ring, &mut next);
            if ring.is_empty() {
                break;
            }
        }
        // Drop edges shorter than the edge-death tolerance.
        let mut changed = true;
        while changed && ring.len() >= 3 {
            changed = false;
            let m = ring.len();
            for i in 0..m {
                let j = (i + 1) % m;
                if ring[i].0.dist(ring[j].0) < EDGE_DEATH_TOL {
                    ring[i].1 = ring[j].1;
                    ring.remove(j);
                    changed = true;
                    break;
                }
            }
        }
        if ring.len() < 3 {
            let (inradius, _) = self.inradius_highridge();
            return Err(Error::DegenerateErosion { delta, inradius });
        }
        let vertices: Vec<Point> = ring.iter().map(|r| r.0).collect();
        let normals: Vec<Vec2> = ring.iter().map(|r| self.normals[r.1]).collect();
        let offsets = ring.iter().map(|r| self.offsets[r.1] - delta).collect();
        let eroded = ConvexPolygon {
            vertices,
            normals,
            offsets,
        };
        if eroded.area() <= 0.0 {
            let (inradius, _) = self.inradius_highridge();
            return Err(Error::DegenerateErosion { delta, inradius });
        }
        Ok(eroded)
    }

    /// Inradius `R_D` and the high ridge (set of incircle centres).
    ///
    /// Tracks the inward offset of the edge lines: an edge disappears when
    /// its two neighbours' offset lines meet on it. When fewer than three
    /// edges survive an event the polygon has collapsed onto the ridge.
    pub fn inradius_highridge(&self) -> (f64, Ridge) {
        let mut active: Vec<usize> = (0..self.len()).collect();
        let mut depth = 0.0_f64;
        loop {
            let m = active.len();
            let events: Vec<Option<(f64, Point)>> = (0..m)
                .map(|k| {
                    let p = active[(k + m - 1) % m];
                    let c = active[k];
                    let q = active[(k + 1) % m];
                    self.concurrency(p, c, q).filter(|(d, _)| *d >= depth - 1e-12)
                })
                .collect();
            let dmin = events
                .iter()
                .flatten()
                .map(|e| e.0)
                .fold(f64::INFINITY, f64::min);
            debug_assert!(dmin.is_finite(), "bounded polygon must collapse");
            let tie = 1e-12 * (1.0 + dmin.abs());
            let dying: Vec<usize> = (0..m)
                .filter(|&k| matches!(events[k], Some((d, _)) if d <= dmin + tie))
                .collect();
            if m - dying.len() >= 3 {
                let dead: Vec<usize> = dying.iter().map(|&k| active[k]).collect();
                active.retain(|e| !dead.contains(e));
                depth = dmin;
                continue;
            }
            let pts: Vec<Point> = dying.iter().filter_map(|&k| events[k].map(|e| e.1)).collect();
            return (dmin, ridge_from_points(&pts));
        }
    }

    /// Offset depth and point at which the shifted lines of edges `a`, `b`, `c` concur.
    fn concurrency(&self, a: usize, b: usize, c: usize) -> Option<(f64, Point)> {
        let rows = [a, b, c].map(|i| (self.normals[i], self.offsets[i]));
        // Solve n_i·x + δ = b_i for (x, y, δ) by Cramer's rule.
        let det3 = |m: [[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let mat = rows.map(|(n, _)| [n.x, n.y, 1.0]);
        let det = det3(mat);
        if det.abs() < 1e-14 {
            return None;
        }
        let rhs = rows.map(|(_, b)| b);
        let col = |j: usize| {
            let mut m = mat;
            for i in 0..3 {
                m[i][j] = rhs[i];
            }
            det3(m) / det
        };
        Some((col(2), Vec2::new(col(0), col(1))))
    }
}

fn ridge_from_points(pts: &[Point]) -> Ridge {
    let mut best = (0.0, 0, 0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = pts[i].dist(pts[j]);
            if d > best.0 {
                best = (d, i, j);
            }
        }
    }
    if best.0 < 1e-9 {
        let sum = pts.iter().fold(Vec2::ZERO, |acc, &p| acc + p);
        Ridge::Point {
            at: sum / pts.len() as f64,
        }
    } else {
        Ridge::Segment {
            a: pts[best.1],
            b: pts[best.2],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI, SQRT_2};

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::rectangle(-0.5, -0.5, 0.5, 0.5).unwrap()
    }

    fn triangle() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn area_and_perimeter() {
        let sq = unit_square();
        assert!((sq.area() - 1.0).abs() < 1e-15);
        assert!((sq.perimeter() - 4.0).abs() < 1e-15);
        let t = triangle();
        assert!((t.area() - 0.5).abs() < 1e-15);
        assert!((t.perimeter() - (2.0 + SQRT_2)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let cw = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 0.0),
        ];
        assert!(matches!(ConvexPolygon::new(cw), Err(Error::InvalidPolygon(_))));
        let collinear = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(0.5, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(ConvexPolygon::new(collinear).is_err());
        let repeated = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(ConvexPolygon::new(repeated).is_err());
        assert!(ConvexPolygon::new(vec![Vec2::ZERO, Vec2::new(1.0, 0.0)]).is_err());
        // pentagram: all left turns but winds twice
        let star = (0..5)
            .map(|k| Vec2::from_angle(2.0 * TAU * k as f64 / 5.0))
            .collect();
        assert!(ConvexPolygon::new(star).is_err());
    }

    #[test]
    fn inradius_examples() {
        let (r, ridge) = unit_square().inradius_highridge();
        assert!((r - 0.5).abs() < 1e-14);
        match ridge {
            Ridge::Point { at } => assert!(at.norm() < 1e-14),
            other => panic!("expected point ridge, got {other:?}"),
        }

        let rect = ConvexPolygon::rectangle(-1.0, -0.5, 1.0, 0.5).unwrap();
        let (r, ridge) = rect.inradius_highridge();
        assert!((r - 0.5).abs() < 1e-14);
        match ridge {
            Ridge::Segment { a, b } => {
                let (lo, hi) = if a.x < b.x { (a, b) } else { (b, a) };
                assert!(lo.dist(Vec2::new(-0.5, 0.0)) < 1e-12);
                assert!(hi.dist(Vec2::new(0.5, 0.0)) < 1e-12);
            }
            other => panic!("expected segment ridge, got {other:?}"),
        }

        // incircle oracle r = (a + b − c)/2 for the right triangle
        let expect = (1.0 + 1.0 - SQRT_2) / 2.0;
        let (r, ridge) = triangle().inradius_highridge();
        assert!((r - expect).abs() < 1e-14);
        assert!(ridge.distance(Vec2::new(expect, expect)) < 1e-12);
    }

    #[test]
    fn inradius_of_irregular_polygon_matches_bruteforce_lp() {
        let poly = ConvexPolygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(3.0, -0.4),
            Vec2::new(4.0, 1.0),
            Vec2::new(2.5, 2.2),
            Vec2::new(0.3, 1.7),
        ])
        .unwrap();
        let (r, ridge) = poly.inradius_highridge();
        // grid-search oracle on d(x, D^c)
        let bb = poly.bbox();
        let mut best: f64 = 0.0;
        let n = 800;
        for i in 0..=n {
            for j in 0..=n {
                let x = Vec2::new(
                    bb.min.x + bb.width() * i as f64 / n as f64,
                    bb.min.y + bb.height() * j as f64 / n as f64,
                );
                best = best.max(poly.dist_to_complement(x));
            }
        }
        assert!(r >= best - 1e-12 && r - best < 1e-2, "r = {r}, grid = {best}");
        let centre = ridge.project(bb.center());
        assert!((poly.dist_to_complement(centre) - r).abs() < 1e-10);
    }

    #[test]
    fn erosion_examples() {
        let e = unit_square().erode(0.1).unwrap();
        assert_eq!(e.len(), 4);
        assert!((e.area() - 0.64).abs() < 1e-14);
        assert!(e.bbox().center().norm() < 1e-15);

        assert!(matches!(
            unit_square().erode(0.5),
            Err(Error::DegenerateErosion { .. })
        ));

        // half-plane oracle: x ≥ 0.1, y ≥ 0.1, x + y ≤ 1 − 0.1√2
        let e = triangle().erode(0.1).unwrap();
        assert_eq!(e.len(), 3);
        let c = 1.0 - 0.1 * SQRT_2;
        let expect = [
            Vec2::new(0.1, 0.1),
            Vec2::new(c - 0.1, 0.1),
            Vec2::new(0.1, c - 0.1),
        ];
        for p in expect {
            assert!(e.vertices().iter().any(|v| v.dist(p) < 1e-14), "{p:?}");
        }
    }

    #[test]
    fn erosion_drops_dead_edges() {
        // a short edge cutting one corner dies well before the square collapses
        let poly = ConvexPolygon::new(vec![
            Vec2::new(-0.5, -0.5),
            Vec2::new(0.5, -0.5),
            Vec2::new(0.5, 0.45),
            Vec2::new(0.45, 0.5),
            Vec2::new(-0.5, 0.5),
        ])
        .unwrap();
        assert_eq!(poly.erode(0.01).unwrap().len(), 5);
        let e = poly.erode(0.2).unwrap();
        assert_eq!(e.len(), 4);
        for (v, n) in e.vertices().iter().zip(e.normals()) {
            assert!((n.norm() - 1.0).abs() < 1e-15);
            assert!(v.is_finite());
        }
    }

    #[test]
    fn projection_examples() {
        let sq = unit_square();
        assert_eq!(sq.dist_project(Vec2::ZERO), (0.0, Vec2::ZERO));
        let (d, p) = sq.dist_project(Vec2::new(1.0, 0.0));
        assert!((d - 0.5).abs() < 1e-15 && p.dist(Vec2::new(0.5, 0.0)) < 1e-15);
        let (d, p) = sq.dist_project(Vec2::new(1.0, 1.0));
        assert!((d - FRAC_1_SQRT_2).abs() < 1e-15 && p.dist(Vec2::new(0.5, 0.5)) < 1e-15);
    }

    #[test]
    fn fan_examples() {
        let fans = unit_square().vertex_fans();
        let f = fans
            .iter()
            .find(|f| f.vertex.dist(Vec2::new(0.5, 0.5)) < 1e-15)
            .unwrap();
        assert!(f.nu_minus.dist(Vec2::new(1.0, 0.0)) < 1e-15);
        assert!(f.nu_plus.dist(Vec2::new(0.0, 1.0)) < 1e-15);
        assert!(f.bisector.dist(Vec2::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)) < 1e-15);
        assert!((f.half_angle - FRAC_PI_4).abs() < 1e-15);
        assert!((k_boundary(BoundaryPoint::Vertex(f)) - 0.5).abs() < 1e-15);
        assert_eq!(k_boundary(BoundaryPoint::EdgeInterior), 1.0);

        let hex = ConvexPolygon::regular(6, Vec2::ZERO, 1.0, 0.0).unwrap();
        for f in hex.vertex_fans() {
            assert!((f.half_angle - PI / 6.0).abs() < 1e-14);
            assert!((f.k_boundary() - 0.75).abs() < 1e-14);
        }

        let t = triangle().vertex_fans();
        let f = t
            .iter()
            .find(|f| f.vertex.dist(Vec2::new(1.0, 0.0)) < 1e-15)
            .unwrap();
        assert!(f.nu_minus.dist(Vec2::new(0.0, -1.0)) < 1e-15);
        assert!(f.nu_plus.dist(Vec2::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)) < 1e-15);
        assert!((f.half_angle - 3.0 * PI / 8.0).abs() < 1e-14);
    }
}
