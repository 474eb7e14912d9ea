//! Realizing target areas on a one-sided layout.
//!
//! The unknowns are the coordinates of the maximal internal segments; the
//! enclosure stays fixed. A sweep visits every segment and moves it to the
//! position where the rectangles on its two sides have the same ratio of
//! achieved to target area, clamped so no rectangle collapses. Because every
//! rectangle side lies on one segment or on the frame, moving segments never
//! changes which rectangles touch, so the result stays weakly equivalent
//! to the input.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::VertexId;
use crate::layout::{Layout, RealRect};
use crate::verifier::{self, Orientation, Segment, VerifyError};

pub const DEFAULT_REL_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITERS: usize = 10_000;
/// Minimum rectangle extent during solving, as a fraction of the enclosure span.
pub const MIN_GAP_FRACTION: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("layout is not area-universal (segment {0:?} is not a full rectangle side)")]
    NotAreaUniversal(Segment),
    #[error(transparent)]
    Invalid(#[from] VerifyError),
    #[error("no target area for {0}")]
    MissingTarget(VertexId),
    #[error("target for {0} is not a positive finite number")]
    BadTarget(VertexId),
    #[error("target given for {0}, which is not in the layout")]
    UnknownTarget(VertexId),
    #[error("relative tolerance must be positive")]
    BadTolerance,
    #[error("not converged after {max_iters} sweeps (best relative error {best_error:.3e})")]
    NotConverged { max_iters: usize, best_error: f64, best: Box<CartogramLayout> },
}

/// Target area per vertex. Only ratios matter; the solver rescales so the
/// total matches the enclosure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaAssignment {
    pub areas: BTreeMap<VertexId, f64>,
}

impl AreaAssignment {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartogramLayout {
    pub rects: Vec<RealRect>,
    /// Max over rectangles of |area - target| / target, after normalization.
    pub achieved_error: f64,
    pub sweeps: usize,
}

impl CartogramLayout {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cartogram serializes")
    }
}

pub fn measure_areas(c: &CartogramLayout) -> BTreeMap<VertexId, f64> {
    c.rects.iter().map(|r| (r.id.clone(), r.w * r.h)).collect()
}

/// Indices into the coordinate vector for each side of a rectangle.
#[derive(Debug, Clone, Copy)]
struct Sides {
    left: usize,
    right: usize,
    bottom: usize,
    top: usize,
}

struct Model {
    coords: Vec<f64>,
    sides: Vec<Sides>,
    targets: Vec<f64>,
    /// (orientation, coordinate index, rects before, rects after)
    segments: Vec<(Orientation, usize, Vec<usize>, Vec<usize>)>,
    gap_x: f64,
    gap_y: f64,
}

const X0: usize = 0;
const X1: usize = 1;
const Y0: usize = 2;
const Y1: usize = 3;

type Span = ((i64, i64), usize);

impl Model {
    fn new(layout: &Layout, segs: &[Segment], targets: Vec<f64>) -> Self {
        let b = layout.bounds().expect("nonempty layout");
        let mut coords = vec![b.x0 as f64, b.x1 as f64, b.y0 as f64, b.y1 as f64];
        // (orientation, level) -> (span, coordinate index) of each segment on that line
        let mut lines: HashMap<(Orientation, i64), Vec<Span>> = HashMap::new();
        for s in segs {
            coords.push(s.level as f64);
            lines.entry((s.orientation, s.level)).or_default().push((s.span, coords.len() - 1));
        }
        let find = |o: Orientation, level: i64, lo: i64, hi: i64| -> usize {
            lines[&(o, level)]
                .iter()
                .find(|((a, c), _)| *a <= lo && hi <= *c)
                .map(|(_, i)| *i)
                .expect("every internal side lies on a maximal segment")
        };
        let mut segments: Vec<(Orientation, usize, Vec<usize>, Vec<usize>)> =
            (0..segs.len()).map(|k| (segs[k].orientation, k + 4, Vec::new(), Vec::new())).collect();
        let mut sides = Vec::with_capacity(layout.len());
        for (i, r) in layout.rects.iter().enumerate() {
            let left = if r.x == b.x0 { X0 } else { find(Orientation::Vertical, r.x, r.y, r.top()) };
            let right = if r.right() == b.x1 { X1 } else { find(Orientation::Vertical, r.right(), r.y, r.top()) };
            let bottom = if r.y == b.y0 { Y0 } else { find(Orientation::Horizontal, r.y, r.x, r.right()) };
            let top = if r.top() == b.y1 { Y1 } else { find(Orientation::Horizontal, r.top(), r.x, r.right()) };
            for (idx, before) in [(left, false), (right, true), (bottom, false), (top, true)] {
                if idx >= 4 {
                    let seg = &mut segments[idx - 4];
                    if before {
                        seg.2.push(i);
                    } else {
                        seg.3.push(i);
                    }
                }
            }
            sides.push(Sides { left, right, bottom, top });
        }
        let gap_x = MIN_GAP_FRACTION * b.width() as f64;
        let gap_y = MIN_GAP_FRACTION * b.height() as f64;
        Model { coords, sides, targets, segments, gap_x, gap_y }
    }

    fn extent(&self, i: usize, o: Orientation) -> f64 {
        let s = self.sides[i];
        match o {
            Orientation::Vertical => self.coords[s.right] - self.coords[s.left],
            Orientation::Horizontal => self.coords[s.top] - self.coords[s.bottom],
        }
    }

    fn area(&self, i: usize) -> f64 {
        self.extent(i, Orientation::Vertical) * self.extent(i, Orientation::Horizontal)
    }

    fn error(&self) -> f64 {
        (0..self.sides.len()).map(|i| (self.area(i) - self.targets[i]).abs() / self.targets[i]).fold(0.0, f64::max)
    }

    fn sweep(&mut self) {
        for k in 0..self.segments.len() {
            let (o, idx) = (self.segments[k].0, self.segments[k].1);
            let (before, after) = (&self.segments[k].2, &self.segments[k].3);
            // a vertical segment moves in x; the perpendicular extent is height
            let across = match o {
                Orientation::Vertical => Orientation::Horizontal,
                Orientation::Horizontal => Orientation::Vertical,
            };
            let far = |i: usize, lower: bool| {
                let s = self.sides[i];
                let j = match (o, lower) {
                    (Orientation::Vertical, true) => s.left,
                    (Orientation::Vertical, false) => s.right,
                    (Orientation::Horizontal, true) => s.bottom,
                    (Orientation::Horizontal, false) => s.top,
                };
                self.coords[j]
            };
            let (mut lo_weight, mut lo_moment, mut lo_target, mut lo_limit) = (0.0, 0.0, 0.0, f64::MIN);
            for &i in before {
                let h = self.extent(i, across);
                let edge = far(i, true);
                lo_weight += h;
                lo_moment += edge * h;
                lo_target += self.targets[i];
                lo_limit = lo_limit.max(edge);
            }
            let (mut hi_weight, mut hi_moment, mut hi_target, mut hi_limit) = (0.0, 0.0, 0.0, f64::MAX);
            for &i in after {
                let h = self.extent(i, across);
                let edge = far(i, false);
                hi_weight += h;
                hi_moment += edge * h;
                hi_target += self.targets[i];
                hi_limit = hi_limit.min(edge);
            }
            let pos = (lo_moment / lo_target + hi_moment / hi_target) / (lo_weight / lo_target + hi_weight / hi_target);
            let gap = match o {
                Orientation::Vertical => self.gap_x,
                Orientation::Horizontal => self.gap_y,
            };
            let (min, max) = (lo_limit + gap, hi_limit - gap);
            if min <= max && pos.is_finite() {
                self.coords[idx] = pos.clamp(min, max);
            }
        }
    }

    fn snapshot(&self, ids: &[VertexId], sweeps: usize) -> CartogramLayout {
        let rects = ids
            .iter()
            .enumerate()
            .map(|(i, id)| {
                let s = self.sides[i];
                RealRect {
                    id: id.clone(),
                    x: self.coords[s.left],
                    y: self.coords[s.bottom],
                    w: self.coords[s.right] - self.coords[s.left],
                    h: self.coords[s.top] - self.coords[s.bottom],
                }
            })
            .collect();
        CartogramLayout { rects, achieved_error: self.error(), sweeps }
    }
}

/// Moves the internal segments of `layout` until every rectangle's area is
/// within `rel_tol` (relative) of its normalized target.
pub fn solve_areas(
    layout: &Layout,
    targets: &AreaAssignment,
    rel_tol: f64,
    max_iters: usize,
) -> Result<CartogramLayout, SolveError> {
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(SolveError::BadTolerance);
    }
    let (universal, witness) = verifier::is_area_universal(layout)?;
    if !universal {
        return Err(SolveError::NotAreaUniversal(witness.expect("witness accompanies a negative verdict")));
    }
    let mut raw = Vec::with_capacity(layout.len());
    for r in &layout.rects {
        let t = *targets.areas.get(&r.id).ok_or_else(|| SolveError::MissingTarget(r.id.clone()))?;
        if !(t.is_finite() && t > 0.0) {
            return Err(SolveError::BadTarget(r.id.clone()));
        }
        raw.push(t);
    }
    if let Some(extra) = targets.areas.keys().find(|k| layout.get(k).is_none()) {
        return Err(SolveError::UnknownTarget(extra.clone()));
    }
    let frame = layout.bounds().expect("valid layout").area() as f64;
    let total: f64 = raw.iter().sum();
    let normalized: Vec<f64> = raw.iter().map(|t| t * frame / total).collect();

    let segs = verifier::extract_maximal_segments(layout)?;
    let ids: Vec<VertexId> = layout.rects.iter().map(|r| r.id.clone()).collect();
    let mut model = Model::new(layout, &segs, normalized);

    let mut best = model.snapshot(&ids, 0);
    let mut sweeps = 0;
    while best.achieved_error > rel_tol {
        if sweeps == max_iters {
            return Err(SolveError::NotConverged { max_iters, best_error: best.achieved_error, best: Box::new(best) });
        }
        model.sweep();
        sweeps += 1;
        let err = model.error();
        if err < best.achieved_error {
            best = model.snapshot(&ids, sweeps);
        }
    }
    best.sweeps = sweeps;
    Ok(best)
}
