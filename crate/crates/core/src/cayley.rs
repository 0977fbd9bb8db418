use std::sync::Arc;

use crate::automorphism::TranslationHint;
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::group::{FiniteGroup, GroupSubset};

/// `Cay(G, S)`: vertices are group elements, `x → y` iff `x⁻¹y ∈ S`.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    graph: Digraph,
    connection: GroupSubset,
}

impl CayleyGraph {
    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn into_graph(self) -> Digraph {
        self.graph
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.connection.group()
    }

    pub fn connection_set(&self) -> &GroupSubset {
        &self.connection
    }

    /// True iff the identity is in `S`, which is exactly when the graph is reflexive.
    pub fn contains_identity(&self) -> bool {
        self.connection.contains(self.group().identity())
    }

    /// Left translations, which are automorphisms of every Cayley graph.
    pub fn translation_hint(&self) -> TranslationHint {
        TranslationHint::new(Arc::clone(self.group()))
    }
}

pub fn cayley_graph(connection: &GroupSubset) -> Result<CayleyGraph> {
    if connection.is_empty() {
        return Err(Error::EmptyConnectionSet);
    }
    let group = connection.group();
    let n = group.order();
    // Γ(x) = xS
    let edges = (0..n).flat_map(|x| {
        connection
            .members()
            .iter()
            .map(move |s| (x, group.mul(x, s)))
    });
    let graph = Digraph::from_edges(n, edges)?;
    Ok(CayleyGraph {
        graph,
        connection: connection.clone(),
    })
}

/// `Cay(Z_n, S)`.
pub fn circulant(n: usize, steps: &[usize]) -> Result<CayleyGraph> {
    let group = Arc::new(FiniteGroup::cyclic(n)?);
    let s = GroupSubset::new(group, steps.iter().map(|&d| d % n.max(1)))?;
    cayley_graph(&s)
}
