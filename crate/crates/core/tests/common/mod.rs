#![allow(dead_code)]

use proptest::prelude::*;

use cutlocus_core::calibration::random_competitor;
use cutlocus_core::geom2d::{ConvexPolygon, Domain, Point, Vec2};

pub fn box_domain() -> Domain {
    Domain::Polygon(ConvexPolygon::rectangle(-1.0, -1.0, 1.0, 1.0).unwrap())
}

/// Random convex polygons with 3 to 12 vertices and non-negligible area.
pub fn polygon() -> impl Strategy<Value = ConvexPolygon> {
    (any::<u64>(), any::<u64>()).prop_filter_map("small polygon", |(s, i)| {
        let p = random_competitor(&box_domain(), s, i);
        (p.area() > 0.05).then_some(p)
    })
}

/// A point of `p` given barycentric-like weights over its vertices.
pub fn point_in(p: &ConvexPolygon, w: &[f64]) -> Point {
    let total: f64 = w.iter().take(p.len()).sum();
    p.vertices()
        .iter()
        .zip(w)
        .fold(Vec2::ZERO, |acc, (v, wi)| acc + *v * (wi / total))
}

pub fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, 12)
}
