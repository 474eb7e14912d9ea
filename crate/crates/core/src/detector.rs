//! Class membership detection.
//!
//! A graph is in the class when it can be grown from a path of adjacent
//! degree-4 vertices by adding one vertex at a time, each new vertex being
//! adjacent to the current set `L` and having at most three neighbors
//! outside `L`. The detector looks for such a path greedily, then computes
//! the largest reachable `L` with a worklist fixpoint. The resulting
//! insertion order is the certificate consumed by the builder.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{PlaneGraph, VertexId};

/// Maximum number of neighbors a vertex may have outside `L` when it joins.
pub const MAX_OUTSIDE_NEIGHBORS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectorError {
    #[error("graph is not biconnected (cut vertex {0})")]
    NotBiconnected(VertexId),
    #[error("invalid degree-4 path: {0}")]
    InvalidPath(String),
}

/// A chordless path of degree-4 vertices, at least two long. Only
/// consecutive vertices may be adjacent, so a row of squares is its dual.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree4Path(Vec<VertexId>);

impl Degree4Path {
    pub fn new(g: &PlaneGraph, vertices: Vec<VertexId>) -> Result<Self, DetectorError> {
        let path = Degree4Path(vertices);
        path.validate(g)?;
        Ok(path)
    }

    pub fn validate(&self, g: &PlaneGraph) -> Result<(), DetectorError> {
        let bad = |msg: String| Err(DetectorError::InvalidPath(msg));
        if self.0.len() < 2 {
            return bad(format!("length {} < 2", self.0.len()));
        }
        let mut seen = HashSet::new();
        for v in &self.0 {
            match g.degree(v) {
                Ok(4) => {}
                Ok(d) => return bad(format!("{v} has degree {d}")),
                Err(_) => return bad(format!("{v} is not in the graph")),
            }
            if !seen.insert(v) {
                return bad(format!("{v} repeated"));
            }
        }
        for w in self.0.windows(2) {
            if !g.has_edge(&w[0], &w[1]) {
                return bad(format!("{} and {} are not adjacent", w[0], w[1]));
            }
        }
        for (i, u) in self.0.iter().enumerate() {
            for w in self.0.iter().skip(i + 2) {
                if g.has_edge(u, w) {
                    return bad(format!("chord between {u} and {w}"));
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The orientation whose first vertex is the smaller label.
    fn canonical(&self) -> Vec<VertexId> {
        let mut v = self.0.clone();
        if v.last() < v.first() {
            v.reverse();
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Insertion {
    pub vertex: VertexId,
    pub placed_neighbors: BTreeSet<VertexId>,
}

/// A degree-4 path plus an insertion order covering every other vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipCertificate {
    pub path: Degree4Path,
    pub insertions: Vec<Insertion>,
}

impl MembershipCertificate {
    /// Number of neighbors outside `L` at each insertion step.
    pub fn outside_counts(&self, g: &PlaneGraph) -> Vec<usize> {
        self.insertions.iter().map(|ins| g.degree(&ins.vertex).unwrap_or(0) - ins.placed_neighbors.len()).collect()
    }

    /// Replays the insertion chain against `g` and reports the first step
    /// that breaks the class condition.
    pub fn check(&self, g: &PlaneGraph) -> Result<(), String> {
        self.resolve(g).map(|_| ())
    }

    /// Like [`MembershipCertificate::check`], also returning the graph
    /// indices of the path vertices followed by the inserted vertices.
    pub(crate) fn resolve(&self, g: &PlaneGraph) -> Result<Vec<usize>, String> {
        self.path.validate(g).map_err(|e| e.to_string())?;
        let mut order = Vec::with_capacity(g.vertex_count());
        let mut in_l = vec![false; g.vertex_count()];
        for v in self.path.vertices() {
            let i = g.idx(v).map_err(|e| e.to_string())?;
            in_l[i] = true;
            order.push(i);
        }
        for (step, ins) in self.insertions.iter().enumerate() {
            let hint = order.last().map_or(0, |&i| i + 1);
            let i = g.idx_near(&ins.vertex, hint).map_err(|e| format!("step {step}: {e}"))?;
            if in_l[i] {
                return Err(format!("step {step}: {} inserted twice", ins.vertex));
            }
            let nbrs = g.neighbors_idx(i);
            // adjacency lists and the recorded set are both in label order
            let inside = nbrs.iter().filter(|&&w| in_l[w]).map(|&w| g.label(w));
            if !inside.eq(ins.placed_neighbors.iter()) {
                return Err(format!("step {step}: placed neighbors of {} do not match N(v) ∩ L", ins.vertex));
            }
            if ins.placed_neighbors.is_empty() {
                return Err(format!("step {step}: {} has no placed neighbor", ins.vertex));
            }
            let outside = nbrs.len() - ins.placed_neighbors.len();
            if outside > MAX_OUTSIDE_NEIGHBORS {
                return Err(format!("step {step}: {} has {outside} outside neighbors", ins.vertex));
            }
            in_l[i] = true;
            order.push(i);
        }
        if order.len() != g.vertex_count() {
            return Err(format!("certificate covers {} of {} vertices", order.len(), g.vertex_count()));
        }
        Ok(order)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "certificate", rename_all = "lowercase")]
pub enum Verdict {
    Member(MembershipCertificate),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCResult {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub tried_paths: Vec<Degree4Path>,
}

impl ClassCResult {
    pub fn certificate(&self) -> Option<&MembershipCertificate> {
        match &self.verdict {
            Verdict::Member(c) => Some(c),
            Verdict::Inconclusive => None,
        }
    }

    pub fn is_member(&self) -> bool {
        matches!(self.verdict, Verdict::Member(_))
    }
}

/// Lazily yields the greedy degree-4 paths, deduplicated up to reversal.
///
/// Start vertices are taken in label order. From each start the walk moves
/// to the smallest unvisited degree-4 neighbor that keeps the path
/// chordless until stuck, then extends the other end the same way.
pub struct Degree4Paths<'g> {
    g: &'g PlaneGraph,
    starts: std::vec::IntoIter<usize>,
    seen: HashSet<Vec<VertexId>>,
    on_path: Vec<bool>,
}

impl<'g> Degree4Paths<'g> {
    pub fn new(g: &'g PlaneGraph) -> Self {
        let mut starts: Vec<usize> = (0..g.vertex_count()).filter(|&i| g.neighbors_idx(i).len() == 4).collect();
        starts.sort_by(|a, b| g.label(*a).cmp(g.label(*b)));
        Degree4Paths { g, starts: starts.into_iter(), seen: HashSet::new(), on_path: vec![false; g.vertex_count()] }
    }

    /// Smallest-label unvisited degree-4 neighbor of the end `v` that
    /// touches no other path vertex, so the path stays chordless.
    fn next_hop(&self, v: usize) -> Option<usize> {
        // adjacency lists are sorted by label
        self.g.neighbors_idx(v).iter().copied().find(|&u| {
            !self.on_path[u]
                && self.g.neighbors_idx(u).len() == 4
                && self.g.neighbors_idx(u).iter().all(|&w| w == v || !self.on_path[w])
        })
    }

    fn walk(&mut self, start: usize) -> Vec<usize> {
        let mut forward = vec![start];
        self.on_path[start] = true;
        while let Some(u) = self.next_hop(*forward.last().unwrap()) {
            self.on_path[u] = true;
            forward.push(u);
        }
        let mut backward = Vec::new();
        let mut cur = start;
        while let Some(u) = self.next_hop(cur) {
            self.on_path[u] = true;
            backward.push(u);
            cur = u;
        }
        for &i in forward.iter().chain(&backward) {
            self.on_path[i] = false;
        }
        backward.reverse();
        backward.extend(forward);
        backward
    }
}

impl Iterator for Degree4Paths<'_> {
    type Item = Degree4Path;

    fn next(&mut self) -> Option<Degree4Path> {
        while let Some(start) = self.starts.next() {
            let walk = self.walk(start);
            if walk.len() < 2 {
                continue;
            }
            let path = Degree4Path(walk.iter().map(|&i| self.g.label(i).clone()).collect());
            if self.seen.insert(path.canonical()) {
                return Some(path);
            }
        }
        None
    }
}

/// Every greedy degree-4 path of `g`, each at least two vertices long.
pub fn enumerate_degree4_paths(g: &PlaneGraph) -> Vec<Degree4Path> {
    Degree4Paths::new(g).collect()
}

/// Grows `L` from `path` to a fixpoint and returns the certificate when
/// `L` reaches every vertex.
///
/// Semantics are those of repeated passes over the unplaced vertices in
/// label order, each pass adding every vertex that is eligible when it is
/// scanned, until a pass adds nothing. Eligibility is monotone in `L`, so
/// the passes are simulated with two ordered queues instead of rescanning.
pub fn check_membership(g: &PlaneGraph, path: &Degree4Path) -> Result<Option<MembershipCertificate>, DetectorError> {
    path.validate(g)?;
    if let Some(cut) = g.cut_vertices().into_iter().next() {
        return Err(DetectorError::NotBiconnected(cut));
    }
    Ok(grow(g, path))
}

fn grow(g: &PlaneGraph, path: &Degree4Path) -> Option<MembershipCertificate> {
    let n = g.vertex_count();
    let mut rank = vec![0usize; n];
    let mut by_rank: Vec<usize> = (0..n).collect();
    by_rank.sort_by(|a, b| g.label(*a).cmp(g.label(*b)));
    for (r, &i) in by_rank.iter().enumerate() {
        rank[i] = r;
    }

    let mut in_l = vec![false; n];
    let mut placed_count = vec![0usize; n];
    let mut queued = vec![false; n];
    let mut current: BTreeSet<usize> = BTreeSet::new();
    let mut next_pass: BTreeSet<usize> = BTreeSet::new();

    let eligible =
        |i: usize, placed: &[usize]| placed[i] > 0 && g.neighbors_idx(i).len() - placed[i] <= MAX_OUTSIDE_NEIGHBORS;

    let add = |i: usize,
               cursor: Option<usize>,
               in_l: &mut Vec<bool>,
               placed_count: &mut Vec<usize>,
               queued: &mut Vec<bool>,
               current: &mut BTreeSet<usize>,
               next_pass: &mut BTreeSet<usize>| {
        in_l[i] = true;
        for &w in g.neighbors_idx(i) {
            if in_l[w] {
                continue;
            }
            placed_count[w] += 1;
            if !queued[w] && eligible(w, placed_count) {
                queued[w] = true;
                match cursor {
                    Some(c) if rank[w] <= c => next_pass.insert(rank[w]),
                    _ => current.insert(rank[w]),
                };
            }
        }
    };

    for v in path.vertices() {
        let i = g.idx(v).ok()?;
        add(i, None, &mut in_l, &mut placed_count, &mut queued, &mut current, &mut next_pass);
    }
    // path vertices may have been queued by their path neighbors
    current.retain(|&r| !in_l[by_rank[r]]);

    let mut insertions = Vec::with_capacity(n - path.len());
    loop {
        let Some(r) = current.pop_first() else {
            if next_pass.is_empty() {
                break;
            }
            std::mem::swap(&mut current, &mut next_pass);
            continue;
        };
        let i = by_rank[r];
        if in_l[i] {
            continue;
        }
        let placed_neighbors: BTreeSet<VertexId> =
            g.neighbors_idx(i).iter().filter(|&&w| in_l[w]).map(|&w| g.label(w).clone()).collect();
        insertions.push(Insertion { vertex: g.label(i).clone(), placed_neighbors });
        add(i, Some(r), &mut in_l, &mut placed_count, &mut queued, &mut current, &mut next_pass);
    }

    (insertions.len() + path.len() == n).then(|| MembershipCertificate { path: path.clone(), insertions })
}

/// Tries each greedy degree-4 path in enumeration order and reports the
/// first one whose fixpoint covers the graph.
pub fn classify(g: &PlaneGraph) -> Result<ClassCResult, DetectorError> {
    let mut tried = Vec::new();
    let mut biconnected_checked = false;
    for path in Degree4Paths::new(g) {
        if !biconnected_checked {
            if let Some(cut) = g.cut_vertices().into_iter().next() {
                return Err(DetectorError::NotBiconnected(cut));
            }
            biconnected_checked = true;
        }
        let outcome = grow(g, &path);
        tried.push(path);
        if let Some(cert) = outcome {
            return Ok(ClassCResult { verdict: Verdict::Member(cert), tried_paths: tried });
        }
    }
    Ok(ClassCResult { verdict: Verdict::Inconclusive, tried_paths: tried })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> PlaneGraph {
        PlaneGraph::parse(include_str!("../tests/data/g1.txt")).unwrap()
    }

    fn ids(labels: &[&str]) -> Vec<VertexId> {
        labels.iter().map(|s| VertexId::from(*s)).collect()
    }

    fn octahedron() -> PlaneGraph {
        PlaneGraph::parse("a b\na c\na d\na e\nb c\nc d\nd e\ne b\nf b\nf c\nf d\nf e").unwrap()
    }

    /// Exhaustive search over insertion orders: can `L` grow from `path`
    /// to every vertex?
    fn reachable_by_search(g: &PlaneGraph, path: &[VertexId]) -> bool {
        let labels = g.sorted_vertices();
        let n = labels.len();
        assert!(n <= 20);
        let bit = |v: &VertexId| 1u32 << labels.iter().position(|l| l == v).unwrap();
        let nbr: Vec<u32> =
            labels.iter().map(|v| g.neighborhood(v).unwrap().iter().map(bit).fold(0, |a, b| a | b)).collect();
        let start = path.iter().map(bit).fold(0, |a, b| a | b);
        let full = (1u32 << n) - 1;
        let mut seen = std::collections::HashSet::from([start]);
        let mut stack = vec![start];
        while let Some(l) = stack.pop() {
            if l == full {
                return true;
            }
            for (v, &m) in nbr.iter().enumerate() {
                if l & (1 << v) == 0 && m & l != 0 && (m & !l).count_ones() <= 3 && seen.insert(l | 1 << v) {
                    stack.push(l | 1 << v);
                }
            }
        }
        false
    }

    #[test]
    fn g1_has_one_path() {
        assert_eq!(enumerate_degree4_paths(&g1()), vec![Degree4Path(ids(&["v2", "v3"]))]);
    }

    #[test]
    fn g1_certificate() {
        let g = g1();
        let r = classify(&g).unwrap();
        let cert = r.certificate().unwrap();
        assert_eq!(cert.path.vertices(), ids(&["v2", "v3"]).as_slice());
        let order: Vec<_> = cert.insertions.iter().map(|i| i.vertex.clone()).collect();
        assert_eq!(order, ids(&["v1", "v4", "v5", "v6", "v7", "v8", "v9", "v10"]));
        assert_eq!(cert.outside_counts(&g), vec![2, 2, 3, 2, 3, 1, 1, 0]);
        cert.check(&g).unwrap();
    }

    #[test]
    fn no_degree4_vertices() {
        let c4 = PlaneGraph::parse("a b\nb c\nc d\nd a").unwrap();
        assert!(enumerate_degree4_paths(&c4).is_empty());
        let k3 = PlaneGraph::parse("a b\nb c\nc a").unwrap();
        let r = classify(&k3).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.tried_paths.is_empty());
    }

    #[test]
    fn octahedron_paths_are_valid() {
        let g = octahedron();
        let edges: HashSet<(VertexId, VertexId)> =
            g.edges().into_iter().flat_map(|(a, b)| [(a.clone(), b.clone()), (b, a)]).collect();
        let paths = enumerate_degree4_paths(&g);
        assert!(!paths.is_empty());
        for p in &paths {
            let v = p.vertices();
            assert!(v.len() >= 2);
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    assert_ne!(v[i], v[j]);
                    assert_eq!(edges.contains(&(v[i].clone(), v[j].clone())), j == i + 1, "{p:?}");
                }
            }
        }
    }

    #[test]
    fn fixpoint_matches_exhaustive_search() {
        let mut graphs = vec![octahedron(), g1()];
        for seed in 0..40 {
            graphs.push(crate::generator::generate(6 + (seed as usize % 9), seed).graph);
        }
        for g in &graphs {
            for p in enumerate_degree4_paths(g) {
                let found = check_membership(g, &p).unwrap();
                assert_eq!(found.is_some(), reachable_by_search(g, p.vertices()), "{p:?}");
                if let Some(c) = found {
                    c.check(g).unwrap();
                }
            }
        }
    }

    #[test]
    fn cut_vertex_is_an_error() {
        let mut text = octahedron().serialize();
        text.push_str("a x\na y\nx y\n");
        let g = PlaneGraph::parse(&text).unwrap();
        assert_eq!(classify(&g), Err(DetectorError::NotBiconnected(VertexId::from("a"))));
        let p = Degree4Path::new(&g, ids(&["b", "c"])).unwrap();
        assert!(matches!(check_membership(&g, &p), Err(DetectorError::NotBiconnected(_))));
    }

    #[test]
    fn path_validation() {
        let g = octahedron();
        assert!(Degree4Path::new(&g, ids(&["b"])).is_err());
        assert!(Degree4Path::new(&g, ids(&["b", "d"])).is_err());
        assert!(Degree4Path::new(&g, ids(&["b", "c", "d"])).is_ok());
        // b-c-f closes a triangle
        assert!(Degree4Path::new(&g, ids(&["b", "c", "f"])).is_err());
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let g = g1();
        let cert = classify(&g).unwrap().certificate().unwrap().clone();
        let mut swapped = cert.clone();
        swapped.insertions.swap(0, 1);
        assert!(swapped.check(&g).is_err());
        let mut short = cert.clone();
        short.insertions.pop();
        assert!(short.check(&g).unwrap_err().contains("covers"));
    }

    #[test]
    fn certificate_json_shape() {
        let cert = classify(&g1()).unwrap().certificate().unwrap().clone();
        let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        assert_eq!(v["path"], serde_json::json!(["v2", "v3"]));
        assert_eq!(v["insertions"][0], serde_json::json!({"vertex": "v1", "placed_neighbors": ["v2"]}));
    }
}
