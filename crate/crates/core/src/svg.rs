//! Minimal SVG rendering of planar scenes, cut trees and majorizing discs.

use crate::jordan::CutTree;
use crate::majorize::MajDisc;
use crate::polygon::PolygonDomain;
use crate::predicates::Point;
use std::fmt::Write;

const VIEW: f64 = 800.0;
const MARGIN: f64 = 0.05;

struct Frame {
    min: Point,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = Point>) -> Frame {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        let pad = span * MARGIN;
        let scale = VIEW / (span + 2.0 * pad);
        Frame {
            min: Point::new(lo.x - pad, lo.y - pad),
            scale,
            height: (hi.y - lo.y + 2.0 * pad) * scale,
        }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        (
            (p.x - self.min.x) * self.scale,
            self.height - (p.y - self.min.y) * self.scale,
        )
    }
}

fn open_svg(frame: &Frame) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {:.2} {:.2}\">\n",
        VIEW, frame.height
    )
}

fn ring_path(frame: &Frame, ring: &[Point]) -> String {
    let mut d = String::new();
    for (i, p) in ring.iter().enumerate() {
        let (x, y) = frame.map(p);
        let _ = write!(d, "{}{:.3} {:.3} ", if i == 0 { "M" } else { "L" }, x, y);
    }
    d.push('Z');
    d
}

fn segment(frame: &Frame, a: &Point, b: &Point, style: &str) -> String {
    let (x1, y1) = frame.map(a);
    let (x2, y2) = frame.map(b);
    format!(
        "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" {style}/>\n"
    )
}

/// Render a polygonal domain; cut segments are drawn in red on top.
pub fn render_domain(domain: &PolygonDomain, cuts: &[(Point, Point)]) -> String {
    let frame = Frame::fit(domain.outer().iter().copied());
    let mut out = open_svg(&frame);
    let mut path = ring_path(&frame, domain.outer());
    for hole in domain.holes() {
        path.push(' ');
        path.push_str(&ring_path(&frame, hole));
    }
    let _ = write!(
        out,
        "<path d=\"{path}\" fill=\"#dce8f5\" fill-rule=\"evenodd\" \
         stroke=\"#1f3a5f\" stroke-width=\"2\"/>\n"
    );
    for (a, b) in cuts {
        out.push_str(&segment(
            &frame,
            a,
            b,
            "stroke=\"#c0392b\" stroke-width=\"1.5\"",
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Render the root curve of a cut tree with every recorded cut overlaid.
pub fn render_cut_tree(tree: &CutTree) -> String {
    let root = &tree.nodes[tree.root].curve;
    let cuts: Vec<(Point, Point)> = tree
        .nodes
        .iter()
        .filter_map(|n| n.cut.as_ref().map(|c| (c.a, c.b)))
        .collect();
    render_domain(root.interior(), &cuts)
}

/// Render the planar image of a majorizing disc: boundary in dark blue,
/// interior triangulation edges in grey.
pub fn render_majorization(disc: &MajDisc) -> String {
    let frame = Frame::fit(disc.images.iter().copied());
    let mut out = open_svg(&frame);
    for tri in disc.disc.triangles() {
        for k in 0..3 {
            let a = disc.images[tri.vertices[k]];
            let b = disc.images[tri.vertices[(k + 1) % 3]];
            out.push_str(&segment(
                &frame,
                &a,
                &b,
                "stroke=\"#95a5a6\" stroke-width=\"0.7\"",
            ));
        }
    }
    let n = disc.boundary.len();
    for i in 0..n {
        let a = disc.images[disc.boundary[i]];
        let b = disc.images[disc.boundary[(i + 1) % n]];
        out.push_str(&segment(
            &frame,
            &a,
            &b,
            "stroke=\"#1f3a5f\" stroke-width=\"2\"",
        ));
    }
    out.push_str("</svg>\n");
    out
}
