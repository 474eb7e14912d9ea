//! SVG output for integer and real layouts.
//!
//! SVG grows downward, layouts grow upward, so y is mirrored about the top
//! edge of the enclosure. Coordinates are written with three decimals.

use std::fmt::Write;

use crate::layout::{Layout, RealRect};

/// Pixels per layout unit in the `width`/`height` attributes.
const PX_PER_UNIT: f64 = 40.0;

pub fn render_layout(layout: &Layout) -> String {
    let rects: Vec<RealRect> = layout.rects.iter().map(RealRect::from).collect();
    render_rects(&rects)
}

pub fn render_rects(rects: &[RealRect]) -> String {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for r in rects {
        x0 = x0.min(r.x);
        y0 = y0.min(r.y);
        x1 = x1.max(r.right());
        y1 = y1.max(r.top());
    }
    if rects.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 0.0, 0.0);
    }
    let (w, h) = (x1 - x0, y1 - y0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.3}" height="{:.3}" viewBox="{:.3} {:.3} {:.3} {:.3}">"#,
        w * PX_PER_UNIT,
        h * PX_PER_UNIT,
        0.0,
        0.0,
        w,
        h
    );
    for r in rects {
        let (x, y) = (r.x - x0, y1 - r.top());
        let font = 0.35 * r.w.min(r.h);
        let id = escape(r.id.as_str());
        let _ = writeln!(
            out,
            r#"  <rect id="{id}" x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke"/>"#,
            r.w, r.h
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.3}" y="{:.3}" font-size="{font:.3}" text-anchor="middle" dominant-baseline="central">{id}</text>"#,
            x + r.w / 2.0,
            y + r.h / 2.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
