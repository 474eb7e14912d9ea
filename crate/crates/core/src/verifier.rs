//! Geometric checks on layouts: partition validity, maximal internal
//! segments, the one-sided (area-universal) test, contact graphs and weak
//! equivalence.
//!
//! All integer checks are exact. This module does not use the builder.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, PlaneGraph, VertexId};
use crate::layout::{Bounds, Layout, RealRect, Rect};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("layout is not a valid partition ({} violations)", .0.violations.len())]
    InvalidPartition(ValidationReport),
    #[error("contact graph: {0}")]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// A maximal internal line segment. `level` is the fixed coordinate
/// (y for horizontal, x for vertical); `span` is the closed interval along
/// the other axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub orientation: Orientation,
    pub level: i64,
    pub span: (i64, i64),
}

impl Segment {
    pub fn len(&self) -> i64 {
        self.span.1 - self.span.0
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Overlap,
    Gap,
    FourJoint,
    DuplicateId,
    NonpositiveExtent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// A representative point, when the violation has one.
    pub location: Option<[f64; 2]>,
    pub ids: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { ok: violations.is_empty(), violations }
    }
}

fn violation(kind: ViolationKind, location: Option<(i64, i64)>, ids: Vec<VertexId>) -> Violation {
    Violation { kind, location: location.map(|(x, y)| [x as f64, y as f64]), ids }
}

/// Checks that the rectangles tile their bounding box with no point shared
/// by the corners of four rectangles.
pub fn validate_partition(layout: &Layout) -> ValidationReport {
    let mut out = Vec::new();
    if layout.is_empty() {
        out.push(violation(ViolationKind::Gap, None, Vec::new()));
        return ValidationReport::from_violations(out);
    }
    let mut ids = HashSet::new();
    for r in &layout.rects {
        if !ids.insert(&r.id) {
            out.push(violation(ViolationKind::DuplicateId, None, vec![r.id.clone()]));
        }
    }
    let good: Vec<&Rect> = layout.rects.iter().filter(|r| r.w > 0 && r.h > 0).collect();
    for r in layout.rects.iter().filter(|r| r.w <= 0 || r.h <= 0) {
        out.push(violation(ViolationKind::NonpositiveExtent, Some((r.x, r.y)), vec![r.id.clone()]));
    }
    if good.is_empty() {
        return ValidationReport::from_violations(out);
    }
    let b = bounds_of(&good);

    let overlaps = find_overlaps(&good);
    let overlap_found = !overlaps.is_empty();
    for (i, j) in overlaps {
        let (a, c) = (good[i], good[j]);
        out.push(violation(
            ViolationKind::Overlap,
            Some((a.x.max(c.x), a.y.max(c.y))),
            vec![a.id.clone(), c.id.clone()],
        ));
    }
    let total: i128 = good.iter().map(|r| r.area()).sum();
    if !overlap_found && total != b.area() {
        out.push(violation(ViolationKind::Gap, Some((b.x0, b.y0)), Vec::new()));
    }

    let mut corners: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, r) in good.iter().enumerate() {
        for p in [(r.x, r.y), (r.right(), r.y), (r.x, r.top()), (r.right(), r.top())] {
            corners.entry(p).or_default().push(i);
        }
    }
    let mut joints: Vec<((i64, i64), Vec<VertexId>)> = corners
        .into_iter()
        .filter(|(p, owners)| owners.len() >= 4 && p.0 > b.x0 && p.0 < b.x1 && p.1 > b.y0 && p.1 < b.y1)
        .map(|(p, owners)| {
            let mut ids: Vec<VertexId> = owners.iter().map(|&i| good[i].id.clone()).collect();
            ids.sort();
            (p, ids)
        })
        .collect();
    joints.sort();
    for (p, ids) in joints {
        out.push(violation(ViolationKind::FourJoint, Some(p), ids));
    }
    ValidationReport::from_violations(out)
}

fn bounds_of(rects: &[&Rect]) -> Bounds {
    let mut b = Bounds { x0: i64::MAX, y0: i64::MAX, x1: i64::MIN, y1: i64::MIN };
    for r in rects {
        b.x0 = b.x0.min(r.x);
        b.y0 = b.y0.min(r.y);
        b.x1 = b.x1.max(r.right());
        b.y1 = b.y1.max(r.top());
    }
    b
}

/// Sweep over x keeping the active y-intervals in an ordered map. Returns
/// overlapping pairs (not necessarily all of them once one is found).
fn find_overlaps(rects: &[&Rect]) -> Vec<(usize, usize)> {
    let mut events: Vec<(i64, bool, usize)> = Vec::with_capacity(rects.len() * 2);
    for (i, r) in rects.iter().enumerate() {
        events.push((r.x, true, i));
        events.push((r.right(), false, i));
    }
    // removals (false) sort before insertions at the same x
    events.sort();
    let mut active: BTreeMap<(i64, usize), i64> = BTreeMap::new();
    let mut found = Vec::new();
    for (_, insert, i) in events {
        let r = rects[i];
        if !insert {
            active.remove(&(r.y, i));
            continue;
        }
        if let Some((&(_, j), &end)) = active.range(..(r.top(), 0)).next_back() {
            if end > r.y {
                found.push((j.min(i), j.max(i)));
            }
        }
        active.insert((r.y, i), r.top());
    }
    found.sort();
    found.dedup();
    found
}

fn require_valid(layout: &Layout) -> Result<Bounds, VerifyError> {
    let report = validate_partition(layout);
    if !report.ok {
        return Err(VerifyError::InvalidPartition(report));
    }
    Ok(layout.bounds().expect("valid layout is nonempty"))
}

/// Merges touching or overlapping closed intervals.
fn merge_intervals(mut spans: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    spans.sort();
    let mut out: Vec<(i64, i64)> = Vec::with_capacity(spans.len());
    for (a, b) in spans {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// All maximal internal segments, sorted.
pub fn extract_maximal_segments(layout: &Layout) -> Result<Vec<Segment>, VerifyError> {
    let b = require_valid(layout)?;
    Ok(segments_unchecked(layout, b))
}

fn segments_unchecked(layout: &Layout, b: Bounds) -> Vec<Segment> {
    let mut horizontal: HashMap<i64, Vec<(i64, i64)>> = HashMap::new();
    let mut vertical: HashMap<i64, Vec<(i64, i64)>> = HashMap::new();
    for r in &layout.rects {
        if r.top() != b.y1 {
            horizontal.entry(r.top()).or_default().push((r.x, r.right()));
        }
        if r.right() != b.x1 {
            vertical.entry(r.right()).or_default().push((r.y, r.top()));
        }
    }
    let mut out = Vec::new();
    for (orientation, lines) in [(Orientation::Horizontal, horizontal), (Orientation::Vertical, vertical)] {
        for (level, spans) in lines {
            out.extend(merge_intervals(spans).into_iter().map(|span| Segment { orientation, level, span }));
        }
    }
    out.sort();
    out
}

fn sides_of(r: &Rect) -> [Segment; 4] {
    use Orientation::*;
    [
        Segment { orientation: Horizontal, level: r.y, span: (r.x, r.right()) },
        Segment { orientation: Horizontal, level: r.top(), span: (r.x, r.right()) },
        Segment { orientation: Vertical, level: r.x, span: (r.y, r.top()) },
        Segment { orientation: Vertical, level: r.right(), span: (r.y, r.top()) },
    ]
}

/// One-sided test: every maximal internal segment must be a full side of
/// some rectangle. On failure returns the first offending segment in
/// (orientation, level, span) order.
pub fn is_area_universal(layout: &Layout) -> Result<(bool, Option<Segment>), VerifyError> {
    let b = require_valid(layout)?;
    let sides: HashSet<Segment> = layout.rects.iter().flat_map(sides_of).collect();
    let witness = segments_unchecked(layout, b).into_iter().find(|s| !sides.contains(s));
    Ok((witness.is_none(), witness))
}

/// How two touching rectangles sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// First rectangle is left of the second.
    LeftOf,
    /// First rectangle is below the second.
    Below,
}

/// Every positive-length contact as (first, second, relation) index triples.
fn contacts(rects: &[Rect]) -> Vec<(usize, usize, Relation)> {
    let mut out = Vec::new();
    // level -> (rects ending at level, rects starting at level), each as (lo, hi, idx)
    type Line = (Vec<(i64, i64, usize)>, Vec<(i64, i64, usize)>);
    let mut vertical: HashMap<i64, Line> = HashMap::new();
    let mut horizontal: HashMap<i64, Line> = HashMap::new();
    for (i, r) in rects.iter().enumerate() {
        vertical.entry(r.right()).or_default().0.push((r.y, r.top(), i));
        vertical.entry(r.x).or_default().1.push((r.y, r.top(), i));
        horizontal.entry(r.top()).or_default().0.push((r.x, r.right(), i));
        horizontal.entry(r.y).or_default().1.push((r.x, r.right(), i));
    }
    for (relation, lines) in [(Relation::LeftOf, vertical), (Relation::Below, horizontal)] {
        for (_, (mut before, mut after)) in lines {
            before.sort();
            after.sort();
            let (mut i, mut j) = (0, 0);
            while i < before.len() && j < after.len() {
                let (a0, a1, ai) = before[i];
                let (b0, b1, bi) = after[j];
                if a0.max(b0) < a1.min(b1) {
                    out.push((ai, bi, relation));
                }
                if a1 <= b1 {
                    i += 1;
                } else {
                    j += 1;
                }
            }
        }
    }
    out.sort();
    out
}

/// Adjacency graph of the layout: one vertex per rectangle, one edge per
/// pair sharing a boundary piece of positive length.
pub fn contact_graph(layout: &Layout) -> Result<PlaneGraph, VerifyError> {
    require_valid(layout)?;
    let vertices: Vec<VertexId> = layout.rects.iter().map(|r| r.id.clone()).collect();
    let edges: Vec<(VertexId, VertexId)> = contacts(&layout.rects)
        .into_iter()
        .map(|(a, b, _)| (layout.rects[a].id.clone(), layout.rects[b].id.clone()))
        .collect();
    Ok(PlaneGraph::new(vertices, &edges)?)
}

fn labeled_contacts(layout: &Layout) -> HashSet<(VertexId, VertexId, Relation)> {
    contacts(&layout.rects)
        .into_iter()
        .map(|(a, b, rel)| (layout.rects[a].id.clone(), layout.rects[b].id.clone(), rel))
        .collect()
}

/// Same rectangles, same contacts, and the same direction for every contact.
pub fn weak_equivalent(a: &Layout, b: &Layout) -> Result<bool, VerifyError> {
    require_valid(a)?;
    require_valid(b)?;
    let ids_a: HashSet<&VertexId> = a.rects.iter().map(|r| &r.id).collect();
    let ids_b: HashSet<&VertexId> = b.rects.iter().map(|r| &r.id).collect();
    Ok(ids_a == ids_b && labeled_contacts(a) == labeled_contacts(b))
}

/// Tolerance-aware partition check for real-valued rectangles. Pairwise,
/// so intended for cartogram-sized inputs.
pub fn validate_real_partition(rects: &[RealRect], tol: f64) -> ValidationReport {
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    for r in rects {
        if !ids.insert(&r.id) {
            out.push(Violation { kind: ViolationKind::DuplicateId, location: None, ids: vec![r.id.clone()] });
        }
        if !(r.w > tol && r.h > tol) {
            out.push(Violation {
                kind: ViolationKind::NonpositiveExtent,
                location: Some([r.x, r.y]),
                ids: vec![r.id.clone()],
            });
        }
    }
    if rects.is_empty() {
        out.push(Violation { kind: ViolationKind::Gap, location: None, ids: Vec::new() });
        return ValidationReport::from_violations(out);
    }
    let (x0, y0, x1, y1) = rects.iter().fold((f64::MAX, f64::MAX, f64::MIN, f64::MIN), |acc, r| {
        (acc.0.min(r.x), acc.1.min(r.y), acc.2.max(r.right()), acc.3.max(r.top()))
    });
    for (i, a) in rects.iter().enumerate() {
        for c in &rects[i + 1..] {
            let ox = a.right().min(c.right()) - a.x.max(c.x);
            let oy = a.top().min(c.top()) - a.y.max(c.y);
            if ox > tol && oy > tol {
                out.push(Violation {
                    kind: ViolationKind::Overlap,
                    location: Some([a.x.max(c.x), a.y.max(c.y)]),
                    ids: vec![a.id.clone(), c.id.clone()],
                });
            }
        }
    }
    let total: f64 = rects.iter().map(|r| r.w * r.h).sum();
    let frame = (x1 - x0) * (y1 - y0);
    if (total - frame).abs() > tol * frame.max(1.0) {
        out.push(Violation { kind: ViolationKind::Gap, location: Some([x0, y0]), ids: Vec::new() });
    }
    let corners: Vec<(f64, f64, usize)> = rects
        .iter()
        .enumerate()
        .flat_map(|(i, r)| [(r.x, r.y, i), (r.right(), r.y, i), (r.x, r.top(), i), (r.right(), r.top(), i)])
        .collect();
    let mut reported: Vec<(f64, f64)> = Vec::new();
    for &(px, py, _) in &corners {
        if px <= x0 + tol || px >= x1 - tol || py <= y0 + tol || py >= y1 - tol {
            continue;
        }
        let owners: HashSet<usize> = corners
            .iter()
            .filter(|(qx, qy, _)| (qx - px).abs() <= tol && (qy - py).abs() <= tol)
            .map(|c| c.2)
            .collect();
        if owners.len() >= 4 && !reported.iter().any(|(rx, ry)| (rx - px).abs() <= tol && (ry - py).abs() <= tol) {
            reported.push((px, py));
            let mut ids: Vec<VertexId> = owners.into_iter().map(|i| rects[i].id.clone()).collect();
            ids.sort();
            out.push(Violation { kind: ViolationKind::FourJoint, location: Some([px, py]), ids });
        }
    }
    ValidationReport::from_violations(out)
}

/// Weak equivalence between an integer layout and a real-valued one, with
/// contacts detected up to `tol`.
pub fn weak_equivalent_real(source: &Layout, rects: &[RealRect], tol: f64) -> Result<bool, VerifyError> {
    require_valid(source)?;
    let ids_a: HashSet<&VertexId> = source.rects.iter().map(|r| &r.id).collect();
    let ids_b: HashSet<&VertexId> = rects.iter().map(|r| &r.id).collect();
    if ids_a != ids_b || rects.len() != source.len() {
        return Ok(false);
    }
    let mut real = HashSet::new();
    for a in rects {
        for c in rects {
            if a.id == c.id {
                continue;
            }
            let oy = a.top().min(c.top()) - a.y.max(c.y);
            let ox = a.right().min(c.right()) - a.x.max(c.x);
            if (a.right() - c.x).abs() <= tol && oy > tol {
                real.insert((a.id.clone(), c.id.clone(), Relation::LeftOf));
            }
            if (a.top() - c.y).abs() <= tol && ox > tol {
                real.insert((a.id.clone(), c.id.clone(), Relation::Below));
            }
        }
    }
    Ok(real == labeled_contacts(source))
}
