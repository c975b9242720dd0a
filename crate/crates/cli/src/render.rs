//! SVG output: the arrangement with its region shaded, boundary poles and
//! corners marked, and the two graphs drawn beside it.

use std::fmt::Write;

use mbc_core::arrangement::boundary_features;
use mbc_core::geom::{Axis, Point, Side};
use mbc_core::sweep::FeatureKind;
use mbc_core::vdigraph::VDigraph;
use mbc_core::{build_graph, Arrangement};

const PANEL: f64 = 320.0;
const PAD: f64 = 20.0;

/// Maps world coordinates into a square panel with y pointing up.
struct View {
    lo: Point,
    scale: f64,
    left: f64,
}

impl View {
    fn fit(arr: &Arrangement, left: f64) -> View {
        let (mut lo, mut hi) = (Point::new(f64::MAX, f64::MAX), Point::new(f64::MIN, f64::MIN));
        for c in &arr.circles {
            lo = Point::new(lo.x.min(c.center.x - c.radius), lo.y.min(c.center.y - c.radius));
            hi = Point::new(hi.x.max(c.center.x + c.radius), hi.y.max(c.center.y + c.radius));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        View {
            lo,
            scale: (PANEL - 2.0 * PAD) / span,
            left,
        }
    }

    fn x(&self, x: f64) -> f64 {
        self.left + PAD + (x - self.lo.x) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        PANEL - PAD - (y - self.lo.y) * self.scale
    }
}

fn geometry(arr: &Arrangement, v: &View, out: &mut String) {
    let _ = writeln!(out, "<defs>");
    let mut clips = Vec::new();
    for (i, c) in arr.circles.iter().enumerate().filter(|(_, c)| c.side == Side::Inside) {
        let _ = writeln!(
            out,
            "<clipPath id=\"in{i}\"><circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\"/></clipPath>",
            v.x(c.center.x),
            v.y(c.center.y),
            c.radius * v.scale
        );
        clips.push(i);
    }
    let _ = writeln!(
        out,
        "<mask id=\"holes\"><rect x=\"{}\" y=\"0\" width=\"{PANEL}\" height=\"{PANEL}\" fill=\"white\"/>",
        v.left
    );
    for c in arr.circles.iter().filter(|c| c.side == Side::Outside) {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"black\"/>",
            v.x(c.center.x),
            v.y(c.center.y),
            c.radius * v.scale
        );
    }
    let _ = writeln!(out, "</mask></defs>");
    // the region is the intersection of the inside disks minus the holes
    for i in &clips {
        let _ = write!(out, "<g clip-path=\"url(#in{i})\">");
    }
    let _ = write!(
        out,
        "<rect x=\"{}\" y=\"0\" width=\"{PANEL}\" height=\"{PANEL}\" fill=\"#cfe3f5\" mask=\"url(#holes)\"/>",
        v.left
    );
    let _ = writeln!(out, "{}", "</g>".repeat(clips.len()));
    for c in &arr.circles {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"><title>{}</title></circle>",
            v.x(c.center.x),
            v.y(c.center.y),
            c.radius * v.scale,
            c.id
        );
    }
    let mut seen: Vec<Point> = Vec::new();
    for a in Axis::BOTH {
        for f in boundary_features(arr, a).unwrap_or_default() {
            if !f.on_region_boundary || seen.iter().any(|q| q.dist(f.point) < 1e-9) {
                continue;
            }
            seen.push(f.point);
            let colour = match f.kind {
                FeatureKind::Corner => "#c0392b",
                _ => "#1f6f3f",
            };
            let _ = writeln!(
                out,
                "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"{colour}\"/>",
                v.x(f.point.x),
                v.y(f.point.y)
            );
        }
    }
    let _ = writeln!(
        out,
        "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2\" fill=\"#000\"><title>seed</title></circle>",
        v.x(arr.seed.x),
        v.y(arr.seed.y)
    );
}

/// Draws a graph over the geometry's coordinates: each vertex sits at the
/// feature that produced it, so the drawing lines up with the region.
fn graph_panel(g: &VDigraph, v: &View, out: &mut String) {
    let pos: Vec<Point> = g
        .vertices
        .iter()
        .map(|vx| match vx.provenance.first() {
            Some(p) => p.point(),
            None => match g.axis {
                Axis::X => Point::new(vx.value, 0.0),
                Axis::Y => Point::new(0.0, vx.value),
            },
        })
        .collect();
    for e in &g.edges {
        let (a, b) = (pos[e.src], pos[e.dst]);
        let _ = writeln!(
            out,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"#555\" marker-end=\"url(#arrow)\"/>",
            v.x(a.x),
            v.y(a.y),
            v.x(b.x),
            v.y(b.y)
        );
    }
    for (vx, p) in g.vertices.iter().zip(&pos) {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3.5\" fill=\"#fff\" stroke=\"#000\"><title>{} = {}</title></circle>",
            v.x(p.x),
            v.y(p.y),
            vx.id,
            vx.value
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"14\" font-size=\"12\" font-family=\"sans-serif\">axis {}</text>",
        v.left + PAD,
        g.axis
    );
}

fn header(width: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{PANEL}\" viewBox=\"0 0 {width} {PANEL}\">\n\
         <defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" \
         orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#555\"/></marker></defs>\n"
    )
}

/// Geometry on the left, the axis-x and axis-y graphs to its right.
pub fn render_svg(arr: &Arrangement) -> String {
    let mut out = header(3.0 * PANEL);
    geometry(arr, &View::fit(arr, 0.0), &mut out);
    for (i, a) in Axis::BOTH.into_iter().enumerate() {
        let v = View::fit(arr, PANEL * (i + 1) as f64);
        match build_graph(arr, a) {
            Ok(g) => graph_panel(&g, &v, &mut out),
            Err(e) => {
                let _ = writeln!(
                    out,
                    "<text x=\"{}\" y=\"30\" font-size=\"12\">no graph: {}</text>",
                    v.left + PAD,
                    escape(&e.to_string())
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// A single graph drawn over faint circles.
pub fn graph_svg(arr: &Arrangement, g: &VDigraph) -> String {
    let mut out = header(PANEL);
    let v = View::fit(arr, 0.0);
    for c in &arr.circles {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"#ccc\"/>",
            v.x(c.center.x),
            v.y(c.center.y),
            c.radius * v.scale
        );
    }
    graph_panel(g, &v, &mut out);
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
