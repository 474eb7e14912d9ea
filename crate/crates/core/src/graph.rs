//! Plane graph data model and the edge-list text format.
//!
//! Vertices are identified by string labels. The graph keeps the order in
//! which vertices were first seen, but all algorithms that need a canonical
//! order iterate in label order (see [`VertexId`]'s `Ord`).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use compact_str::CompactString;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: expected two vertex labels, got {found:?}")]
    MalformedLine { line: usize, found: String },
    #[error("line {line}: self-loop on {vertex}")]
    SelfLoop { line: usize, vertex: VertexId },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: VertexId, v: VertexId },
    #[error("graph has no edges")]
    Empty,
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("edge count {edges} exceeds 3|V| - 6 = {bound}")]
    TooManyEdges { edges: usize, bound: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex label must be nonempty")]
    EmptyLabel,
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("input is not valid UTF-8")]
    Encoding,
}

/// A vertex label such as `v3`. Ordering is lexicographic on the label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(CompactString);

impl VertexId {
    pub fn new(label: impl Into<String>) -> Result<Self, GraphError> {
        let label = label.into();
        if label.is_empty() {
            return Err(GraphError::EmptyLabel);
        }
        Ok(VertexId(CompactString::from(label)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    /// Panics on an empty label; use [`VertexId::new`] for untrusted input.
    fn from(s: &str) -> Self {
        VertexId::new(s).expect("vertex label must be nonempty")
    }
}

/// Undirected simple connected graph with labeled vertices.
///
/// Immutable after construction. Internally vertices are dense indices in
/// first-appearance order; adjacency lists are sorted by label.
#[derive(Debug, Clone)]
pub struct PlaneGraph {
    labels: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl PartialEq for PlaneGraph {
    /// Labeled-graph identity: same vertex labels and same edges. Vertex
    /// order is not compared.
    fn eq(&self, other: &Self) -> bool {
        if self.labels.len() != other.labels.len() || self.edge_count != other.edge_count {
            return false;
        }
        self.labels.iter().all(|v| other.index.contains_key(v)) && self.edges() == other.edges()
    }
}

impl Eq for PlaneGraph {}

impl PlaneGraph {
    /// Builds a graph from an explicit vertex list and edge list.
    ///
    /// Enforces every type invariant: no self-loops or duplicate edges,
    /// connectivity, and the Euler bound `|E| <= 3|V| - 6` for `|V| >= 3`.
    /// A single vertex without edges is accepted.
    pub fn new(vertices: Vec<VertexId>, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        let mut seen = HashSet::with_capacity(edges.len());
        for (line, (u, v)) in edges.iter().enumerate() {
            let iu = *index.get(u).ok_or_else(|| GraphError::UnknownVertex(u.clone()))?;
            let iv = *index.get(v).ok_or_else(|| GraphError::UnknownVertex(v.clone()))?;
            if iu == iv {
                return Err(GraphError::SelfLoop { line: line + 1, vertex: u.clone() });
            }
            if !seen.insert((iu.min(iv), iu.max(iv))) {
                return Err(GraphError::DuplicateEdge { line: line + 1, u: u.clone(), v: v.clone() });
            }
            adj[iu].push(iv);
            adj[iv].push(iu);
        }
        let g = Self::assemble(vertices, index, adj, edges.len());
        g.check_global()?;
        Ok(g)
    }

    fn assemble(
        labels: Vec<VertexId>,
        index: HashMap<VertexId, usize>,
        mut adj: Vec<Vec<usize>>,
        edge_count: usize,
    ) -> Self {
        for list in &mut adj {
            list.sort_by(|a, b| labels[*a].cmp(&labels[*b]));
        }
        PlaneGraph { labels, index, adj, edge_count }
    }

    fn check_global(&self) -> Result<(), GraphError> {
        let n = self.labels.len();
        if n >= 3 && self.edge_count > 3 * n - 6 {
            return Err(GraphError::TooManyEdges { edges: self.edge_count, bound: 3 * n - 6 });
        }
        let components = self.component_count();
        if components > 1 {
            return Err(GraphError::Disconnected { components });
        }
        Ok(())
    }

    fn component_count(&self) -> usize {
        let n = self.labels.len();
        let mut seen = vec![false; n];
        let mut components = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    /// Parses the edge-list format: blank lines, `#` comments, or `U V`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut labels: Vec<VertexId> = Vec::new();
        let mut index: HashMap<VertexId, usize> = HashMap::new();
        let mut adj: Vec<Vec<usize>> = Vec::new();
        let mut seen = HashSet::new();
        let mut edges = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(GraphError::MalformedLine { line: lineno + 1, found: line.to_string() });
            }
            let mut ids = [0usize; 2];
            for (slot, label) in ids.iter_mut().zip(&fields) {
                let id = VertexId::new(*label)?;
                *slot = match index.get(&id) {
                    Some(&i) => i,
                    None => {
                        labels.push(id.clone());
                        index.insert(id, labels.len() - 1);
                        adj.push(Vec::new());
                        labels.len() - 1
                    }
                };
            }
            let [a, b] = ids;
            if a == b {
                return Err(GraphError::SelfLoop { line: lineno + 1, vertex: labels[a].clone() });
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(GraphError::DuplicateEdge { line: lineno + 1, u: labels[a].clone(), v: labels[b].clone() });
            }
            adj[a].push(b);
            adj[b].push(a);
            edges += 1;
        }
        if labels.is_empty() {
            return Err(GraphError::Empty);
        }
        let g = Self::assemble(labels, index, adj, edges);
        g.check_global()?;
        Ok(g)
    }

    pub fn parse_bytes(bytes: &[u8]) -> Result<Self, GraphError> {
        let text = std::str::from_utf8(bytes).map_err(|_| GraphError::Encoding)?;
        Self::parse(text)
    }

    /// Writes the graph in the edge-list format.
    ///
    /// For graphs produced by [`PlaneGraph::parse`] the line order is chosen
    /// so that parsing the output reproduces the same first-appearance
    /// vertex order.
    pub fn serialize(&self) -> String {
        let n = self.labels.len();
        let mut introduced = vec![false; n];
        let mut written: HashSet<(usize, usize)> = HashSet::new();
        let mut lines: Vec<(usize, usize)> = Vec::with_capacity(self.edge_count);
        for v in 0..n {
            if introduced[v] {
                continue;
            }
            let pair = if let Some(&u) = self.adj[v].iter().find(|&&u| introduced[u]) {
                (u, v)
            } else if v + 1 < n && self.adj[v].contains(&(v + 1)) {
                (v, v + 1)
            } else if let Some(&u) = self.adj[v].iter().min() {
                (v, u)
            } else {
                continue;
            };
            introduced[pair.0] = true;
            introduced[pair.1] = true;
            written.insert((pair.0.min(pair.1), pair.0.max(pair.1)));
            lines.push(pair);
        }
        for u in 0..n {
            for &w in &self.adj[u] {
                if u < w && !written.contains(&(u, w)) {
                    lines.push((u, w));
                }
            }
        }
        let mut out = String::new();
        for (a, b) in lines {
            out.push_str(self.labels[a].as_str());
            out.push(' ');
            out.push_str(self.labels[b].as_str());
            out.push('\n');
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Vertices in first-appearance order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.labels
    }

    /// Vertices in label order.
    pub fn sorted_vertices(&self) -> Vec<VertexId> {
        let mut v = self.labels.clone();
        v.sort();
        v
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.index.contains_key(v)
    }

    pub fn degree(&self, v: &VertexId) -> Result<usize, GraphError> {
        Ok(self.adj[self.idx(v)?].len())
    }

    /// `N(v)` as a fresh set.
    pub fn neighborhood(&self, v: &VertexId) -> Result<BTreeSet<VertexId>, GraphError> {
        let i = self.idx(v)?;
        Ok(self.adj[i].iter().map(|&j| self.labels[j].clone()).collect())
    }

    pub fn has_edge(&self, u: &VertexId, v: &VertexId) -> bool {
        match (self.index.get(u), self.index.get(v)) {
            (Some(&a), Some(&b)) => self.adj[a].binary_search_by(|x| self.labels[*x].cmp(&self.labels[b])).is_ok(),
            _ => false,
        }
    }

    /// All edges as label pairs, each once, smaller label first, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            for &w in list {
                if self.labels[u] < self.labels[w] {
                    out.push((self.labels[u].clone(), self.labels[w].clone()));
                }
            }
        }
        out.sort();
        out
    }

    /// The subgraph induced by `keep`. Errors when the result is disconnected.
    pub fn induced_subgraph(&self, keep: &BTreeSet<VertexId>) -> Result<PlaneGraph, GraphError> {
        if keep.is_empty() {
            return Err(GraphError::Empty);
        }
        for v in keep {
            self.idx(v)?;
        }
        let vertices: Vec<VertexId> = self.labels.iter().filter(|v| keep.contains(*v)).cloned().collect();
        let edges: Vec<(VertexId, VertexId)> =
            self.edges().into_iter().filter(|(u, v)| keep.contains(u) && keep.contains(v)).collect();
        PlaneGraph::new(vertices, &edges)
    }

    /// True when the graph has no cut vertex. Graphs with at most two
    /// vertices count as biconnected.
    pub fn is_biconnected(&self) -> bool {
        self.cut_vertices().is_empty()
    }

    /// Articulation points, found with an iterative Hopcroft-Tarjan DFS.
    pub fn cut_vertices(&self) -> Vec<VertexId> {
        let n = self.labels.len();
        if n <= 2 {
            return Vec::new();
        }
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut timer = 0;
        // (vertex, parent, next neighbor position)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            stack.push((root, usize::MAX, 0));
            while let Some(top) = stack.last_mut() {
                let (u, parent, pos) = *top;
                if pos < self.adj[u].len() {
                    top.2 += 1;
                    let w = self.adj[u][pos];
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((w, u, 0));
                    } else if w != parent {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if parent != root && low[u] >= disc[parent] {
                            is_cut[parent] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        let mut out: Vec<VertexId> = (0..n).filter(|&i| is_cut[i]).map(|i| self.labels[i].clone()).collect();
        out.sort();
        out
    }

    pub(crate) fn idx(&self, v: &VertexId) -> Result<usize, GraphError> {
        self.index.get(v).copied().ok_or_else(|| GraphError::UnknownVertex(v.clone()))
    }

    /// [`PlaneGraph::idx`] that first tries `hint`, for callers walking
    /// labels in roughly vertex order.
    pub(crate) fn idx_near(&self, v: &VertexId, hint: usize) -> Result<usize, GraphError> {
        match self.labels.get(hint) {
            Some(l) if l == v => Ok(hint),
            _ => self.idx(v),
        }
    }

    pub(crate) fn label(&self, i: usize) -> &VertexId {
        &self.labels[i]
    }

    pub(crate) fn neighbors_idx(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }
}
