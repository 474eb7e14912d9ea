//! Random class members, built geometry first.
//!
//! A row of unit squares is extended by full-side strips on random sides;
//! the graph is read off the contacts. Every side receives at least one
//! strip so the row vertices end with degree 4, and a side never takes a
//! second strip until a perpendicular one has been added, since the outer
//! strip would otherwise hang off the inner one alone (a cut vertex).

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builder::{DualBuilder, Side};
use crate::detector::{Degree4Path, Insertion, MembershipCertificate};
use crate::graph::{PlaneGraph, VertexId};
use crate::layout::{Layout, Rect};

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: PlaneGraph,
    pub certificate: MembershipCertificate,
    pub layout: Layout,
    /// Strip side chosen for each insertion, parallel to the certificate.
    pub sides: Vec<Side>,
}

#[derive(Serialize)]
struct Payload<'a> {
    graph: String,
    certificate: &'a MembershipCertificate,
    layout: &'a Layout,
}

impl Instance {
    pub fn to_json(&self) -> String {
        let p = Payload { graph: self.graph.serialize(), certificate: &self.certificate, layout: &self.layout };
        serde_json::to_string_pretty(&p).expect("instance serializes")
    }
}

/// Smallest instance size for a row of `k` squares.
pub fn min_size(k: usize) -> usize {
    k + 4
}

/// Generates an instance with `max(n, row + 4)` vertices, where the row
/// length is drawn from the seed.
pub fn generate(n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_row = (n / 4).clamp(2, 8);
    let k = rng.gen_range(2..=max_row);
    generate_with_row(n, k, &mut rng)
}

pub fn generate_with_row(n: usize, k: usize, rng: &mut impl Rng) -> Instance {
    let k = k.max(2);
    let total = n.max(min_size(k));
    let width = total.to_string().len();
    let ids: Vec<VertexId> = (1..=total).map(|i| VertexId::from(format!("v{i:0width$}").as_str())).collect();

    let row = Layout::new((0, 0), (0..k).map(|i| Rect::new(ids[i].clone(), i as i64, 0, 1, 1)).collect());
    let mut b = DualBuilder::from_layout(row).expect("row is complete");
    let mut edges: Vec<(VertexId, VertexId)> = ids[..k].windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    let mut insertions = Vec::with_capacity(total - k);
    let mut sides = Vec::with_capacity(total - k);
    let mut unused: BTreeSet<usize> = (0..4).collect();
    // strips on each side since the last perpendicular strip
    let mut run = [0usize; 4];

    for (step, v) in ids[k..].iter().enumerate() {
        let left = total - k - step;
        let side = if left <= unused.len() {
            Side::ALL[*unused.first().expect("a side is unused")]
        } else {
            let open: Vec<Side> = Side::ALL.into_iter().filter(|s| run[*s as usize] == 0).collect();
            open[rng.gen_range(0..open.len())]
        };
        unused.remove(&(side as usize));
        for s in Side::ALL {
            if s == side {
                run[s as usize] += 1;
            } else if !parallel(s, side) {
                run[s as usize] = 0;
            }
        }
        let touched = b.attach_side(v, side).expect("fresh label");
        edges.extend(touched.iter().map(|u| (u.clone(), v.clone())));
        insertions.push(Insertion { vertex: v.clone(), placed_neighbors: touched.into_iter().collect() });
        sides.push(side);
    }

    let graph = PlaneGraph::new(ids.clone(), &edges).expect("generated edges are simple");
    let path = Degree4Path::new(&graph, ids[..k].to_vec()).expect("row vertices end with degree 4");
    Instance { graph, certificate: MembershipCertificate { path, insertions }, layout: b.into_layout(), sides }
}

fn parallel(a: Side, b: Side) -> bool {
    matches!(
        (a, b),
        (Side::Below | Side::Above, Side::Below | Side::Above) | (Side::Left | Side::Right, Side::Left | Side::Right)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(generate(50, 7).to_json(), generate(50, 7).to_json());
        assert_ne!(generate(50, 7).to_json(), generate(50, 8).to_json());
    }

    #[test]
    fn small_requests_are_padded() {
        let inst = generate(2, 0);
        assert_eq!(inst.graph.vertex_count(), min_size(inst.certificate.path.len()));
        assert_eq!(inst.certificate.path.len(), 2);
    }

    #[test]
    fn labels_sort_in_insertion_order() {
        let inst = generate(120, 3);
        let labels: Vec<_> = inst.layout.rects.iter().map(|r| r.id.clone()).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        assert_eq!(labels, sorted);
    }

    #[test]
    fn certificate_replays() {
        for seed in 0..20 {
            let inst = generate(30, seed);
            inst.certificate.check(&inst.graph).unwrap();
            assert!(inst.graph.is_biconnected(), "seed {seed}");
            assert!(inst.sides.len() + inst.certificate.path.len() == inst.graph.vertex_count());
        }
    }
}
