//! Vertex-isoperimetric structures on finite vertex-transitive graphs.
//!
//! Builds finite groups and Cayley graphs, computes Moser sets, the minimum
//! boundary `μ(v)`, molecules, kernels, the kernel-graph and Mader cycle
//! systems, and verifies the Scherk-Kemperman and Kemperman sumset
//! inequalities instance by instance.

pub mod automorphism;
pub mod bitset;
pub mod catalog;
pub mod cayley;
pub mod error;
pub mod flow;
pub mod graph;
pub mod group;
pub mod kernel_graph;
pub mod mader;
pub mod moser;
pub mod verify;

pub use automorphism::{
    certify_transitivity, CertificateKind, Transitivity, TransitivityCertificate, TranslationHint,
};
pub use bitset::IndexSet;
pub use cayley::{cayley_graph, circulant, CayleyGraph};
pub use error::{Error, Result};
pub use graph::{Digraph, VertexSet};
pub use group::{parse_group_spec, FiniteGroup, GroupSubset};
