use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::arc_region::{dilate, ArcRegion, DilationCore};
use super::polygon::{ConvexPolygon, Ridge};
use super::vec2::{BoundingBox, Point, Vec2};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    center: Point,
    radius: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() || !center.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "disk radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Input domain for every solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainJson", into = "DomainJson")]
pub enum Domain {
    Polygon(ConvexPolygon),
    Disk(Disk),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum DomainJson {
    Polygon { vertices: Vec<Vec2> },
    Disk { center: Vec2, radius: f64 },
}

impl TryFrom<DomainJson> for Domain {
    type Error = Error;

    fn try_from(raw: DomainJson) -> Result<Self> {
        match raw {
            DomainJson::Polygon { vertices } => ConvexPolygon::new(vertices).map(Domain::Polygon),
            DomainJson::Disk { center, radius } => Disk::new(center, radius).map(Domain::Disk),
        }
    }
}

impl From<Domain> for DomainJson {
    fn from(d: Domain) -> Self {
        match d {
            Domain::Polygon(p) => DomainJson::Polygon {
                vertices: p.vertices().to_vec(),
            },
            Domain::Disk(c) => DomainJson::Disk {
                center: c.center,
                radius: c.radius,
            },
        }
    }
}

impl From<ConvexPolygon> for Domain {
    fn from(p: ConvexPolygon) -> Self {
        Domain::Polygon(p)
    }
}

impl From<Disk> for Domain {
    fn from(d: Disk) -> Self {
        Domain::Disk(d)
    }
}

impl Domain {
    /// The square `[-1/2, 1/2]²`.
    pub fn unit_square() -> Self {
        Domain::Polygon(ConvexPolygon::rectangle(-0.5, -0.5, 0.5, 0.5).expect("valid square"))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain serializes")
    }

    pub fn area(&self) -> f64 {
        match self {
            Domain::Polygon(p) => p.area(),
            Domain::Disk(d) => PI * d.radius * d.radius,
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            Domain::Polygon(p) => p.perimeter(),
            Domain::Disk(d) => 2.0 * PI * d.radius,
        }
    }

    /// `P(D)/|D|`.
    pub fn lambda_ratio(&self) -> f64 {
        self.perimeter() / self.area()
    }

    pub fn bbox(&self) -> BoundingBox {
        match self {
            Domain::Polygon(p) => p.bbox(),
            Domain::Disk(d) => {
                let r = Vec2::new(d.radius, d.radius);
                BoundingBox {
                    min: d.center - r,
                    max: d.center + r,
                }
            }
        }
    }

    pub fn contains(&self, x: Point, tol: f64) -> bool {
        match self {
            Domain::Polygon(p) => p.contains(x, tol),
            Domain::Disk(d) => x.dist(d.center) <= d.radius + tol,
        }
    }

    /// `d(x, D^c)`, zero outside.
    pub fn dist_to_complement(&self, x: Point) -> f64 {
        match self {
            Domain::Polygon(p) => p.dist_to_complement(x),
            Domain::Disk(d) => (d.radius - x.dist(d.center)).max(0.0),
        }
    }

    pub fn distance_to_boundary(&self, x: Point) -> f64 {
        match self {
            Domain::Polygon(p) => p.distance_to_boundary(x),
            Domain::Disk(d) => (d.radius - x.dist(d.center)).abs(),
        }
    }

    pub fn inradius_highridge(&self) -> (f64, Ridge) {
        match self {
            Domain::Polygon(p) => p.inradius_highridge(),
            Domain::Disk(d) => (d.radius, Ridge::Point { at: d.center }),
        }
    }

    /// `|D^δ|`; zero once `δ` reaches the inradius.
    pub fn eroded_area(&self, delta: f64) -> Result<f64> {
        match self {
            Domain::Polygon(p) => match p.erode(delta) {
                Ok(e) => Ok(e.area()),
                Err(Error::DegenerateErosion { .. }) => Ok(0.0),
                Err(e) => Err(e),
            },
            Domain::Disk(d) => {
                let r = (d.radius - delta).max(0.0);
                Ok(PI * r * r)
            }
        }
    }

    /// `D^δ ⊕ B_δ`; for `δ` equal to the inradius, the dilated high ridge.
    pub fn open_by(&self, delta: f64) -> Result<ArcRegion> {
        match self {
            Domain::Polygon(p) => match p.erode(delta) {
                Ok(e) => dilate(&e, delta),
                Err(Error::DegenerateErosion { .. }) => {
                    let (r, ridge) = p.inradius_highridge();
                    if (delta - r).abs() <= 1e-9 * (1.0 + r) {
                        dilate(DilationCore::from(ridge), r)
                    } else {
                        Err(Error::OutOfRange {
                            name: "delta",
                            value: delta,
                            range: format!("(0, {r}]"),
                        })
                    }
                }
                Err(e) => Err(e),
            },
            Domain::Disk(d) => {
                if delta > d.radius * (1.0 + 1e-12) {
                    return Err(Error::OutOfRange {
                        name: "delta",
                        value: delta,
                        range: format!("(0, {}]", d.radius),
                    });
                }
                ArcRegion::disk(d.center, d.radius)
            }
        }
    }

    /// Sample of points along `∂D`, at most `max_step` apart.
    pub fn sample_boundary(&self, max_step: f64) -> Vec<Point> {
        match self {
            Domain::Polygon(p) => (0..p.len())
                .flat_map(|i| {
                    let (a, b) = p.edge(i);
                    let k = ((a.dist(b) / max_step).ceil() as usize).max(1);
                    (0..k).map(move |s| a.lerp(b, s as f64 / k as f64))
                })
                .collect(),
            Domain::Disk(d) => ArcRegion::disk(d.center, d.radius)
                .expect("valid disk")
                .sample_boundary(max_step),
        }
    }
}
