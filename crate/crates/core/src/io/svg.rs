use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::geom2d::{ArcRegion, BoundaryElement, BoundingBox, Domain, Point};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 0.05;

/// Drawing content, rendered in field order.
#[derive(Clone, Debug)]
pub struct Scene {
    pub domain: Domain,
    pub regions: Vec<ArcRegion>,
    pub arcs: Vec<BoundaryElement>,
    pub streamlines: Vec<Vec<Point>>,
}

impl Scene {
    pub fn new(domain: Domain) -> Self {
        Self {
            domain,
            regions: Vec::new(),
            arcs: Vec::new(),
            streamlines: Vec::new(),
        }
    }
}

struct View {
    bbox: BoundingBox,
    scale: f64,
    offset: (f64, f64),
}

impl View {
    fn new(bbox: BoundingBox) -> Self {
        let side = bbox.width().max(bbox.height()) * (1.0 + 2.0 * MARGIN);
        let scale = SIZE / side;
        let offset = (
            0.5 * (SIZE - bbox.width() * scale),
            0.5 * (SIZE - bbox.height() * scale),
        );
        Self { bbox, scale, offset }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            self.offset.0 + (p.x - self.bbox.min.x) * self.scale,
            SIZE - self.offset.1 - (p.y - self.bbox.min.y) * self.scale,
        )
    }

    fn xy(&self, p: Point) -> String {
        let (x, y) = self.map(p);
        format!("{x:.3} {y:.3}")
    }

    fn element(&self, e: &BoundaryElement) -> String {
        match *e {
            BoundaryElement::Segment { p1, .. } => format!("L {}", self.xy(p1)),
            BoundaryElement::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => {
                let r = radius * self.scale;
                let large = u8::from(end_angle - start_angle > std::f64::consts::PI);
                format!("A {r:.3} {r:.3} 0 {large} 0 {}", self.xy(e.end()))
            }
        }
    }

    fn closed_path(&self, elements: &[BoundaryElement]) -> String {
        let mut d = format!("M {}", self.xy(elements[0].start()));
        for e in elements {
            d.push(' ');
            d.push_str(&self.element(e));
        }
        d.push_str(" Z");
        d
    }
}

fn domain_elements(domain: &Domain) -> Vec<BoundaryElement> {
    match domain {
        Domain::Polygon(p) => (0..p.len())
            .map(|i| {
                let (p0, p1) = p.edge(i);
                BoundaryElement::Segment { p0, p1 }
            })
            .collect(),
        Domain::Disk(d) => ArcRegion::disk(d.center(), d.radius())
            .expect("valid disk")
            .elements()
            .to_vec(),
    }
}

/// Standalone SVG 1.1 document for `scene`.
pub fn render_svg(scene: &Scene) -> String {
    let view = View::new(scene.domain.bbox());
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        out,
        r##"<path d="{}" fill="#f4f4f4" stroke="#000000" stroke-width="2"/>"##,
        view.closed_path(&domain_elements(&scene.domain))
    );
    for region in &scene.regions {
        let _ = writeln!(
            out,
            r##"<path d="{}" fill="#9ecae1" fill-opacity="0.5" stroke="#08519c" stroke-width="1.5"/>"##,
            view.closed_path(region.elements())
        );
    }
    for arc in &scene.arcs {
        let _ = writeln!(
            out,
            r##"<path d="M {} {}" fill="none" stroke="#cb181d" stroke-width="1"/>"##,
            view.xy(arc.start()),
            view.element(arc)
        );
    }
    for line in scene.streamlines.iter().filter(|l| l.len() >= 2) {
        let pts: Vec<String> = line
            .iter()
            .map(|&p| {
                let (x, y) = view.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#31a354" stroke-width="0.8"/>"##,
            pts.join(" ")
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_svg(scene: &Scene, path: &Path) -> Result<()> {
    super::write_atomic(path, render_svg(scene).as_bytes())
}
