//! Integer rectangle layouts and their JSON form.

use serde::{Deserialize, Serialize};

use crate::graph::VertexId;

/// Axis-aligned rectangle on the integer grid. `(x, y)` is the bottom-left
/// corner; `w` and `h` are positive in a well-formed layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub id: VertexId,
    pub x: i64,
    pub y: i64,
    pub w: i64,
    pub h: i64,
}

impl Rect {
    pub fn new(id: impl Into<VertexId>, x: i64, y: i64, w: i64, h: i64) -> Self {
        Rect { id: id.into(), x, y, w, h }
    }

    pub fn right(&self) -> i64 {
        self.x + self.w
    }

    pub fn top(&self) -> i64 {
        self.y + self.h
    }

    pub fn area(&self) -> i128 {
        self.w as i128 * self.h as i128
    }
}

/// Closed axis-aligned box `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl Bounds {
    pub fn width(&self) -> i64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> i64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> i128 {
        self.width() as i128 * self.height() as i128
    }
}

/// A collection of rectangles, one per vertex. A complete layout partitions
/// its bounding box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub origin: (i64, i64),
    pub rects: Vec<Rect>,
}

impl Layout {
    pub fn new(origin: (i64, i64), rects: Vec<Rect>) -> Self {
        Layout { origin, rects }
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn get(&self, id: &VertexId) -> Option<&Rect> {
        self.rects.iter().find(|r| &r.id == id)
    }

    pub fn bounds(&self) -> Option<Bounds> {
        let first = self.rects.first()?;
        let mut b = Bounds { x0: first.x, y0: first.y, x1: first.right(), y1: first.top() };
        for r in &self.rects[1..] {
            b.x0 = b.x0.min(r.x);
            b.y0 = b.y0.min(r.y);
            b.x1 = b.x1.max(r.right());
            b.y1 = b.y1.max(r.top());
        }
        Some(b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("layout serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Uniformly scales and then translates every rectangle.
    pub fn transformed(&self, scale: i64, dx: i64, dy: i64) -> Layout {
        Layout {
            origin: (self.origin.0 * scale + dx, self.origin.1 * scale + dy),
            rects: self
                .rects
                .iter()
                .map(|r| Rect {
                    id: r.id.clone(),
                    x: r.x * scale + dx,
                    y: r.y * scale + dy,
                    w: r.w * scale,
                    h: r.h * scale,
                })
                .collect(),
        }
    }
}

/// Rectangle with real coordinates, as produced by the area solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealRect {
    pub id: VertexId,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl RealRect {
    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn top(&self) -> f64 {
        self.y + self.h
    }
}

impl From<&Rect> for RealRect {
    fn from(r: &Rect) -> Self {
        RealRect { id: r.id.clone(), x: r.x as f64, y: r.y as f64, w: r.w as f64, h: r.h as f64 }
    }
}
