//! Construction of area-universal rectangular duals.
//!
//! Construction starts from a row of unit squares for the degree-4 path and
//! then attaches one rectangle per certificate step. Every attached
//! rectangle is a strip of thickness 1 covering a full side of the current
//! enclosure, so the union stays a rectangle and the old enclosure side
//! becomes a new internal segment that is a full side of the strip.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::detector::{
    check_membership, classify, enumerate_degree4_paths, ClassCResult, Degree4Path, DetectorError,
    MembershipCertificate,
};
use crate::graph::{PlaneGraph, VertexId};
use crate::layout::{Bounds, Layout, Rect};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("path has {0} vertices; at least 2 are required")]
    PathTooShort(usize),
    #[error("certificate does not match the graph: {0}")]
    InvalidCertificate(String),
    #[error("{0} is not a vertex of the graph")]
    UnknownVertex(VertexId),
    #[error("{0} is already placed")]
    AlreadyPlaced(VertexId),
    #[error("{0} has no placed neighbor")]
    NoPlacedNeighbor(VertexId),
    #[error("no side of the enclosure is lined exactly by the placed neighbors of {vertex}")]
    NoValidPlacement { vertex: VertexId, placed_neighbors: Vec<VertexId> },
    #[error("{0} has no rectangle in the layout")]
    MissingRect(VertexId),
    #[error("{0} does not touch the enclosure boundary")]
    NotExterior(VertexId),
    #[error("cannot repair the hole left by {vertex}: {reason}")]
    NotRepairable { vertex: VertexId, reason: String },
    #[error("layout does not tile its bounding box")]
    IncompleteLayout,
}

/// Enclosure sides, in the order used for fallback placement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Below,
    Left,
    Right,
    Above,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Below, Side::Left, Side::Right, Side::Above];

    fn slot(self) -> usize {
        self as usize
    }
}

/// Seeds a layout with one unit square per path vertex, left to right.
pub fn init_path_row(path: &Degree4Path, origin: (i64, i64)) -> Result<Layout, BuildError> {
    if path.len() < 2 {
        return Err(BuildError::PathTooShort(path.len()));
    }
    let rects = path
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| Rect { id: v.clone(), x: origin.0 + i as i64, y: origin.1, w: 1, h: 1 })
        .collect();
    Ok(Layout::new(origin, rects))
}

/// The rectangle prescribed for `v` by the four-way case analysis on the
/// placed neighbors' corners.
///
/// * all bottoms level: a strip below them, as wide as their widths combined;
/// * all left edges level: a strip to their left, as tall as their heights combined;
/// * otherwise: a strip to the right of the rightmost neighbor, starting
///   at the lowest neighbor bottom.
///
/// The fourth (above) placement is reachable only through the fallback in
/// [`insert_vertex`]. The returned rectangle is not validated here.
pub fn placement_for(v: &VertexId, placed: &[Rect]) -> Rect {
    let [x, y, w, h] = primary_case(placed.iter()).1;
    Rect { id: v.clone(), x, y, w, h }
}

/// Side and `[x, y, w, h]` of the primary placement.
fn primary_case<'a>(placed: impl Iterator<Item = &'a Rect> + Clone) -> (Side, [i64; 4]) {
    let first = placed.clone().next().expect("at least one placed neighbor");
    let min_x = placed.clone().map(|r| r.x).min().unwrap_or(first.x);
    let min_y = placed.clone().map(|r| r.y).min().unwrap_or(first.y);
    let sum_w: i64 = placed.clone().map(|r| r.w).sum();
    let sum_h: i64 = placed.clone().map(|r| r.h).sum();
    if placed.clone().all(|r| r.y == first.y) {
        (Side::Below, [min_x, first.y - 1, sum_w, 1])
    } else if placed.clone().all(|r| r.x == first.x) {
        (Side::Left, [first.x - 1, min_y, 1, sum_h])
    } else {
        let right = placed.map(|r| r.right()).max().unwrap_or(first.right());
        (Side::Right, [right, min_y, 1, sum_h])
    }
}

/// Incremental construction state: the layout plus, for each enclosure
/// side, the rectangles lining it in coordinate order.
#[derive(Debug, Clone)]
pub struct DualBuilder {
    layout: Layout,
    /// Id index over `layout.rects[..indexed]`; the tail is indexed on demand.
    pos: HashMap<VertexId, usize>,
    indexed: usize,
    bounds: Bounds,
    sides: [VecDeque<usize>; 4],
}

impl DualBuilder {
    pub fn from_path(path: &Degree4Path, origin: (i64, i64)) -> Result<Self, BuildError> {
        Ok(Self::from_layout(init_path_row(path, origin)?).expect("row is a complete layout"))
    }

    /// Recovers side bookkeeping from a complete layout.
    pub fn from_layout(layout: Layout) -> Result<Self, BuildError> {
        let bounds = layout.bounds().ok_or(BuildError::IncompleteLayout)?;
        let total: i128 = layout.rects.iter().map(Rect::area).sum();
        if total != bounds.area() {
            return Err(BuildError::IncompleteLayout);
        }
        let mut pos = HashMap::with_capacity(layout.len());
        for (i, r) in layout.rects.iter().enumerate() {
            if pos.insert(r.id.clone(), i).is_some() {
                return Err(BuildError::AlreadyPlaced(r.id.clone()));
            }
        }
        let rects = &layout.rects;
        let collect = |pred: &dyn Fn(&Rect) -> bool, key: &dyn Fn(&Rect) -> i64| {
            let mut v: Vec<usize> = (0..rects.len()).filter(|&i| pred(&rects[i])).collect();
            v.sort_by_key(|&i| key(&rects[i]));
            VecDeque::from(v)
        };
        let sides = [
            collect(&|r| r.y == bounds.y0, &|r| r.x),
            collect(&|r| r.x == bounds.x0, &|r| r.y),
            collect(&|r| r.right() == bounds.x1, &|r| r.y),
            collect(&|r| r.top() == bounds.y1, &|r| r.x),
        ];
        let indexed = layout.len();
        Ok(DualBuilder { layout, pos, bounds, sides, indexed })
    }

    /// Reserves room for `additional` more rectangles.
    pub fn reserve(&mut self, additional: usize) {
        self.layout.rects.reserve(additional);
    }

    fn sync_index(&mut self) {
        for (i, r) in self.layout.rects.iter().enumerate().skip(self.indexed) {
            self.pos.insert(r.id.clone(), i);
        }
        self.indexed = self.layout.len();
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn into_layout(self) -> Layout {
        self.layout
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn is_placed(&self, v: &VertexId) -> bool {
        self.pos.contains_key(v) || self.layout.rects[self.indexed..].iter().any(|r| &r.id == v)
    }

    /// Rectangles lining `side`, in increasing coordinate order.
    pub fn side_ids(&self, side: Side) -> Vec<VertexId> {
        self.sides[side.slot()].iter().map(|&i| self.layout.rects[i].id.clone()).collect()
    }

    /// `[x, y, w, h]` of the full strip along `side`.
    fn strip(&self, side: Side) -> [i64; 4] {
        let b = self.bounds;
        match side {
            Side::Below => [b.x0, b.y0 - 1, b.width(), 1],
            Side::Above => [b.x0, b.y1, b.width(), 1],
            Side::Left => [b.x0 - 1, b.y0, 1, b.height()],
            Side::Right => [b.x1, b.y0, 1, b.height()],
        }
    }

    /// `placed` must be sorted.
    fn side_matches(&self, side: Side, placed: &[usize]) -> bool {
        let lining = &self.sides[side.slot()];
        lining.len() == placed.len() && lining.iter().all(|i| placed.binary_search(i).is_ok())
    }

    /// Adds `v`, whose placed neighbors are read from `g`.
    ///
    /// The primary case from [`placement_for`] is accepted only when it is
    /// exactly the full strip along a side lined by precisely the placed
    /// neighbors. Otherwise the sides are tried in the order below, left,
    /// right, above.
    pub fn insert(&mut self, v: &VertexId, g: &PlaneGraph) -> Result<Side, BuildError> {
        self.sync_index();
        if self.pos.contains_key(v) {
            return Err(BuildError::AlreadyPlaced(v.clone()));
        }
        let nbrs = g.neighborhood(v).map_err(|_| BuildError::UnknownVertex(v.clone()))?;
        let mut placed: Vec<usize> = nbrs.iter().filter_map(|n| self.pos.get(n).copied()).collect();
        self.place(v, &mut placed)
    }

    /// Core of [`DualBuilder::insert`], given the layout indices of the
    /// placed neighbors.
    fn place(&mut self, v: &VertexId, placed: &mut [usize]) -> Result<Side, BuildError> {
        if placed.is_empty() {
            return Err(BuildError::NoPlacedNeighbor(v.clone()));
        }
        placed.sort_unstable();
        let rects = &self.layout.rects;
        let (primary_side, candidate) = primary_case(placed.iter().map(|&i| &rects[i]));

        let order = std::iter::once(primary_side).chain(Side::ALL.into_iter().filter(|&s| s != primary_side));
        for side in order {
            let strip = self.strip(side);
            if side == primary_side && candidate != strip {
                continue;
            }
            if self.side_matches(side, placed) {
                let [x, y, w, h] = strip;
                self.attach(side, Rect { id: v.clone(), x, y, w, h });
                return Ok(side);
            }
        }
        let mut placed_neighbors: Vec<VertexId> = placed.iter().map(|&i| self.layout.rects[i].id.clone()).collect();
        placed_neighbors.sort();
        Err(BuildError::NoValidPlacement { vertex: v.clone(), placed_neighbors })
    }

    /// Attaches `v` as a full strip along `side` without consulting any
    /// graph, returning the rectangles it touches.
    pub fn attach_side(&mut self, v: &VertexId, side: Side) -> Result<Vec<VertexId>, BuildError> {
        self.sync_index();
        if self.pos.contains_key(v) {
            return Err(BuildError::AlreadyPlaced(v.clone()));
        }
        let touched = self.side_ids(side);
        let [x, y, w, h] = self.strip(side);
        self.attach(side, Rect { id: v.clone(), x, y, w, h });
        Ok(touched)
    }

    fn attach(&mut self, side: Side, rect: Rect) {
        let idx = self.layout.rects.len();
        let b = &mut self.bounds;
        match side {
            Side::Below => b.y0 -= 1,
            Side::Above => b.y1 += 1,
            Side::Left => b.x0 -= 1,
            Side::Right => b.x1 += 1,
        }
        let [below, left, right, above] = &mut self.sides;
        match side {
            Side::Below => {
                below.clear();
                below.push_back(idx);
                left.push_front(idx);
                right.push_front(idx);
            }
            Side::Above => {
                above.clear();
                above.push_back(idx);
                left.push_back(idx);
                right.push_back(idx);
            }
            Side::Left => {
                left.clear();
                left.push_back(idx);
                below.push_front(idx);
                above.push_front(idx);
            }
            Side::Right => {
                right.clear();
                right.push_back(idx);
                below.push_back(idx);
                above.push_back(idx);
            }
        }
        self.layout.rects.push(rect);
    }
}

/// Adds one vertex to a complete layout. See [`DualBuilder::insert`].
pub fn insert_vertex(layout: &Layout, v: &VertexId, g: &PlaneGraph) -> Result<Layout, BuildError> {
    let mut b = DualBuilder::from_layout(layout.clone())?;
    b.insert(v, g)?;
    Ok(b.into_layout())
}

/// Builds the full dual for `g` by replaying `cert` from `origin`.
pub fn build_dual(g: &PlaneGraph, cert: &MembershipCertificate, origin: (i64, i64)) -> Result<Layout, BuildError> {
    let order = cert.resolve(g).map_err(BuildError::InvalidCertificate)?;
    let mut b = DualBuilder::from_path(&cert.path, origin)?;
    b.reserve(cert.insertions.len());
    // graph index -> layout index; layout index equals position in `order`
    let mut slot = vec![usize::MAX; g.vertex_count()];
    for (k, &gi) in order[..cert.path.len()].iter().enumerate() {
        slot[gi] = k;
    }
    let mut placed = Vec::new();
    for (ins, &gi) in cert.insertions.iter().zip(&order[cert.path.len()..]) {
        placed.clear();
        placed.extend(g.neighbors_idx(gi).iter().map(|&j| slot[j]).filter(|&k| k != usize::MAX));
        b.place(&ins.vertex, &mut placed)?;
        slot[gi] = b.layout.len() - 1;
    }
    Ok(b.into_layout())
}

/// Result of running detection and construction on a bare graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pipeline {
    Built {
        certificate: MembershipCertificate,
        layout: Layout,
    },
    Inconclusive(ClassCResult),
    /// The graph is a member but no tried certificate could be laid out.
    Infeasible {
        result: ClassCResult,
        error: BuildError,
    },
}

/// Classifies `g` and builds its dual.
///
/// The certificate from [`classify`] is tried first. A fixpoint order can
/// be valid for the class condition yet impossible to lay out from the
/// chosen row; in that case the contiguous sub-paths of every enumerated
/// path are tried, longest first, until one builds.
pub fn classify_and_build(g: &PlaneGraph, origin: (i64, i64)) -> Result<Pipeline, DetectorError> {
    let result = classify(g)?;
    let Some(cert) = result.certificate() else {
        return Ok(Pipeline::Inconclusive(result));
    };
    let first_error = match build_dual(g, cert, origin) {
        Ok(layout) => return Ok(Pipeline::Built { certificate: cert.clone(), layout }),
        Err(e) => e,
    };
    let mut seen: HashSet<Vec<VertexId>> = HashSet::from([cert.path.vertices().to_vec()]);
    for path in enumerate_degree4_paths(g) {
        let v = path.vertices();
        for len in (2..=v.len()).rev() {
            for start in 0..=v.len() - len {
                let sub = v[start..start + len].to_vec();
                if !seen.insert(sub.clone()) {
                    continue;
                }
                let sub = Degree4Path::new(g, sub)?;
                if let Some(c) = check_membership(g, &sub)? {
                    if let Ok(layout) = build_dual(g, &c, origin) {
                        return Ok(Pipeline::Built { certificate: c, layout });
                    }
                }
            }
        }
    }
    Ok(Pipeline::Infeasible { result, error: first_error })
}

/// Removes the rectangle of an exterior vertex and repairs the hole.
///
/// A rectangle spanning a full enclosure side is simply dropped. Otherwise
/// the rectangles lining the side of the hole opposite a boundary side are
/// stretched across it, provided they line that side exactly and gain no
/// contact they did not already have. A single such rectangle is tried
/// before groups.
pub fn delete_exterior_rect(layout: &Layout, v: &VertexId) -> Result<Layout, BuildError> {
    let t_idx = layout.rects.iter().position(|r| &r.id == v).ok_or_else(|| BuildError::MissingRect(v.clone()))?;
    let b = layout.bounds().ok_or(BuildError::IncompleteLayout)?;
    let total: i128 = layout.rects.iter().map(Rect::area).sum();
    if total != b.area() {
        return Err(BuildError::IncompleteLayout);
    }
    let t = &layout.rects[t_idx];
    let on_below = t.y == b.y0;
    let on_above = t.top() == b.y1;
    let on_left = t.x == b.x0;
    let on_right = t.right() == b.x1;
    if !(on_below || on_above || on_left || on_right) {
        return Err(BuildError::NotExterior(v.clone()));
    }
    if layout.len() == 1 {
        return Err(BuildError::NotRepairable { vertex: v.clone(), reason: "it is the only rectangle".into() });
    }

    let full_width = on_left && on_right;
    let full_height = on_below && on_above;
    if (full_width && (on_below || on_above)) || (full_height && (on_left || on_right)) {
        let mut out = layout.clone();
        out.rects.remove(t_idx);
        return Ok(out);
    }
    if full_width || full_height {
        return Err(BuildError::NotRepairable { vertex: v.clone(), reason: "rectangle separates the layout".into() });
    }

    // Stretch direction: toward the boundary side t touches, from t's opposite side.
    let mut plans: Vec<Vec<usize>> = Vec::new();
    for (touches, toward) in
        [(on_below, Side::Below), (on_above, Side::Above), (on_left, Side::Left), (on_right, Side::Right)]
    {
        if touches {
            if let Some(group) = lining_group(layout, t_idx, toward) {
                plans.push(group);
            }
        }
    }
    plans.sort_by_key(|g| g.len() > 1);

    let before = contacts_of_all(layout);
    for group in plans {
        let mut out = layout.clone();
        for &i in &group {
            out.rects[i] = stretched(&layout.rects[i], t);
        }
        out.rects.remove(t_idx);
        let after = contacts_of_all(&out);
        let ok = group.iter().all(|&i| {
            let id = &layout.rects[i].id;
            let mut expected = before[id].clone();
            expected.remove(v);
            after[id] == expected
        });
        if ok {
            return Ok(out);
        }
    }
    Err(BuildError::NotRepairable {
        vertex: v.clone(),
        reason: "no neighbor group lines the hole exactly without creating new contacts".into(),
    })
}

/// Rectangles lining the side of `t` opposite `toward`, when they cover that
/// side exactly.
fn lining_group(layout: &Layout, t_idx: usize, toward: Side) -> Option<Vec<usize>> {
    let t = &layout.rects[t_idx];
    let mut group: Vec<usize> = (0..layout.len())
        .filter(|&i| i != t_idx)
        .filter(|&i| {
            let r = &layout.rects[i];
            match toward {
                Side::Below => r.y == t.top() && r.x < t.right() && r.right() > t.x,
                Side::Above => r.top() == t.y && r.x < t.right() && r.right() > t.x,
                Side::Left => r.x == t.right() && r.y < t.top() && r.top() > t.y,
                Side::Right => r.right() == t.x && r.y < t.top() && r.top() > t.y,
            }
        })
        .collect();
    let horizontal = matches!(toward, Side::Below | Side::Above);
    group.sort_by_key(|&i| if horizontal { layout.rects[i].x } else { layout.rects[i].y });
    let first = &layout.rects[*group.first()?];
    let last = &layout.rects[*group.last()?];
    let exact =
        if horizontal { first.x == t.x && last.right() == t.right() } else { first.y == t.y && last.top() == t.top() };
    exact.then_some(group)
}

fn stretched(r: &Rect, hole: &Rect) -> Rect {
    let x0 = r.x.min(hole.x);
    let y0 = r.y.min(hole.y);
    let x1 = r.right().max(hole.right());
    let y1 = r.top().max(hole.top());
    // only the axis across the hole grows
    if r.y == hole.top() || r.top() == hole.y {
        Rect { id: r.id.clone(), x: r.x, y: y0, w: r.w, h: y1 - y0 }
    } else {
        Rect { id: r.id.clone(), x: x0, y: r.y, w: x1 - x0, h: r.h }
    }
}

fn contacts_of_all(layout: &Layout) -> HashMap<VertexId, HashSet<VertexId>> {
    let mut out: HashMap<VertexId, HashSet<VertexId>> =
        layout.rects.iter().map(|r| (r.id.clone(), HashSet::new())).collect();
    for (i, a) in layout.rects.iter().enumerate() {
        for b in &layout.rects[i + 1..] {
            if touches(a, b) {
                out.get_mut(&a.id).unwrap().insert(b.id.clone());
                out.get_mut(&b.id).unwrap().insert(a.id.clone());
            }
        }
    }
    out
}

fn touches(a: &Rect, b: &Rect) -> bool {
    let x_overlap = a.x.max(b.x) < a.right().min(b.right());
    let y_overlap = a.y.max(b.y) < a.top().min(b.top());
    ((a.right() == b.x || b.right() == a.x) && y_overlap) || ((a.top() == b.y || b.top() == a.y) && x_overlap)
}
