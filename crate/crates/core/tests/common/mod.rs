//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the verifier.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rectdual::{Layout, Orientation, PlaneGraph, RealRect, Rect, Segment, VertexId};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

pub fn g1() -> PlaneGraph {
    PlaneGraph::parse(&read_data("g1.txt")).unwrap()
}

pub fn vid(s: &str) -> VertexId {
    VertexId::from(s)
}

fn bbox(l: &Layout) -> (i64, i64, i64, i64) {
    let x0 = l.rects.iter().map(|r| r.x).min().unwrap();
    let y0 = l.rects.iter().map(|r| r.y).min().unwrap();
    let x1 = l.rects.iter().map(|r| r.x + r.w).max().unwrap();
    let y1 = l.rects.iter().map(|r| r.y + r.h).max().unwrap();
    (x0, y0, x1, y1)
}

/// Maximal internal segments by exhaustive merging: every internal
/// rectangle side starts as its own piece, then any two collinear pieces
/// that touch or overlap are merged, rescanning from scratch after each
/// merge until nothing changes.
pub fn oracle_segments(l: &Layout) -> BTreeSet<Segment> {
    let (x0, y0, x1, y1) = bbox(l);
    let mut pieces: Vec<Segment> = l
        .rects
        .iter()
        .flat_map(rect_sides)
        .filter(|s| match s.orientation {
            Orientation::Horizontal => s.level != y0 && s.level != y1,
            Orientation::Vertical => s.level != x0 && s.level != x1,
        })
        .collect();
    loop {
        let mut merged = false;
        'scan: for i in 0..pieces.len() {
            for j in 0..pieces.len() {
                let (a, b) = (pieces[i], pieces[j]);
                let same_line = a.orientation == b.orientation && a.level == b.level;
                if i != j && same_line && a.span.0 <= b.span.1 && b.span.0 <= a.span.1 {
                    pieces[i].span = (a.span.0.min(b.span.0), a.span.1.max(b.span.1));
                    pieces.swap_remove(j);
                    merged = true;
                    break 'scan;
                }
            }
        }
        if !merged {
            return pieces.into_iter().collect();
        }
    }
}

pub fn rect_sides(r: &Rect) -> [Segment; 4] {
    [
        Segment { orientation: Orientation::Horizontal, level: r.y, span: (r.x, r.x + r.w) },
        Segment { orientation: Orientation::Horizontal, level: r.y + r.h, span: (r.x, r.x + r.w) },
        Segment { orientation: Orientation::Vertical, level: r.x, span: (r.y, r.y + r.h) },
        Segment { orientation: Orientation::Vertical, level: r.x + r.w, span: (r.y, r.y + r.h) },
    ]
}

/// One-sidedness by comparing each oracle segment with every rectangle side.
pub fn oracle_one_sided(l: &Layout) -> bool {
    oracle_segments(l).iter().all(|s| l.rects.iter().any(|r| rect_sides(r).contains(s)))
}

/// Adjacency by pairwise positive-length boundary overlap.
pub fn oracle_contacts(l: &Layout) -> BTreeSet<(VertexId, VertexId)> {
    let mut out = BTreeSet::new();
    for (i, a) in l.rects.iter().enumerate() {
        for b in &l.rects[i + 1..] {
            let overlap = |p0: i64, p1: i64, q0: i64, q1: i64| p1.min(q1) - p0.max(q0) > 0;
            let vertical = (a.x + a.w == b.x || b.x + b.w == a.x) && overlap(a.y, a.y + a.h, b.y, b.y + b.h);
            let horizontal = (a.y + a.h == b.y || b.y + b.h == a.y) && overlap(a.x, a.x + a.w, b.x, b.x + b.w);
            if vertical || horizontal {
                let (u, v) = if a.id < b.id { (&a.id, &b.id) } else { (&b.id, &a.id) };
                out.insert((u.clone(), v.clone()));
            }
        }
    }
    out
}

pub fn graph_edges(g: &PlaneGraph) -> BTreeSet<(VertexId, VertexId)> {
    g.edges().into_iter().map(|(a, b)| if a < b { (a, b) } else { (b, a) }).collect()
}

/// Cell-by-cell tiling check on the integer grid: every unit cell of the
/// bounding box is covered exactly once.
pub fn oracle_tiles(l: &Layout) -> bool {
    let (x0, y0, x1, y1) = bbox(l);
    let mut count: BTreeMap<(i64, i64), u32> = BTreeMap::new();
    for r in &l.rects {
        for x in r.x..r.x + r.w {
            for y in r.y..r.y + r.h {
                *count.entry((x, y)).or_default() += 1;
            }
        }
    }
    count.len() as i64 == (x1 - x0) * (y1 - y0) && count.values().all(|&c| c == 1)
}

/// Random guillotine partition of a `w` x `h` box into at most `pieces`
/// rectangles. Aligned cuts make many of these layouts two-sided.
pub fn random_slicing(seed: u64, w: i64, h: i64, pieces: usize) -> Layout {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boxes = vec![(0i64, 0i64, w, h)];
    while boxes.len() < pieces {
        let splittable: Vec<usize> = (0..boxes.len()).filter(|&i| boxes[i].2 > 1 || boxes[i].3 > 1).collect();
        if splittable.is_empty() {
            break;
        }
        let i = splittable[rng.gen_range(0..splittable.len())];
        let (x, y, bw, bh) = boxes.swap_remove(i);
        let vertical = bh == 1 || (bw > 1 && rng.gen_bool(0.5));
        if vertical {
            let c = rng.gen_range(1..bw);
            boxes.push((x, y, c, bh));
            boxes.push((x + c, y, bw - c, bh));
        } else {
            let c = rng.gen_range(1..bh);
            boxes.push((x, y, bw, c));
            boxes.push((x, y + c, bw, bh - c));
        }
    }
    let rects =
        boxes.iter().enumerate().map(|(i, &(x, y, w, h))| Rect::new(format!("r{i}").as_str(), x, y, w, h)).collect();
    Layout::new((0, 0), rects)
}

/// Areas recomputed from the coordinates.
pub fn real_areas(rects: &[RealRect]) -> BTreeMap<VertexId, f64> {
    rects.iter().map(|r| (r.id.clone(), r.w * r.h)).collect()
}
