//! Area-universal rectangular duals.
//!
//! * [`graph`]: labeled plane graphs and the edge-list format.
//! * [`detector`]: degree-4 path search and class membership certificates.
//! * [`builder`]: dual construction from a certificate, exterior deletion.
//! * [`verifier`]: exact partition, segment, contact and equivalence checks.
//! * [`solver`]: realizing target areas on a one-sided layout.
//! * [`generator`]: random class members grown from the geometry side.
//! * [`render`]: SVG output.

pub mod builder;
pub mod cli;
pub mod detector;
pub mod generator;
pub mod graph;
pub mod layout;
pub mod render;
pub mod solver;
pub mod verifier;

pub use builder::{
    build_dual, classify_and_build, delete_exterior_rect, init_path_row, insert_vertex, placement_for, BuildError,
    DualBuilder, Pipeline, Side,
};
pub use detector::{
    check_membership, classify, enumerate_degree4_paths, ClassCResult, Degree4Path, DetectorError, Insertion,
    MembershipCertificate, Verdict,
};
pub use graph::{GraphError, PlaneGraph, VertexId};
pub use layout::{Bounds, Layout, RealRect, Rect};
pub use verifier::{
    contact_graph, extract_maximal_segments, is_area_universal, validate_partition, weak_equivalent, Orientation,
    Segment, ValidationReport, VerifyError,
};
