//! Convex planar geometry: polygons, erosions, dilations and projections.

mod arc_region;
mod domain;
mod polygon;
mod vec2;

pub use arc_region::{angle_in_span, dilate, ArcRegion, BoundaryElement, DilationCore, CHAIN_TOL};
pub use domain::{Disk, Domain};
pub use polygon::{k_boundary, BoundaryPoint, ConvexPolygon, Ridge, VertexFan, EDGE_DEATH_TOL, VERTEX_TOL};
pub use vec2::{project_on_segment, BoundingBox, Point, Vec2};

/// Area and perimeter of a polygon or arc region.
pub trait AreaPerimeter {
    fn area_perimeter(&self) -> (f64, f64);
}

impl AreaPerimeter for ConvexPolygon {
    fn area_perimeter(&self) -> (f64, f64) {
        (self.area(), self.perimeter())
    }
}

impl AreaPerimeter for ArcRegion {
    fn area_perimeter(&self) -> (f64, f64) {
        (self.area(), self.perimeter())
    }
}

pub fn area_perimeter<R: AreaPerimeter + ?Sized>(region: &R) -> (f64, f64) {
    region.area_perimeter()
}
