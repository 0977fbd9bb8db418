//! Directed cycles through a vertex that pairwise meet only there.
//!
//! With `r = |Γ(v)|`, delete `v`, split every remaining vertex into a unit
//! capacity arc, and route flow from `Γ(v)` to `Γ⁻(v)`. Each unit of an
//! integral max-flow is a path `u₁ … u_k` with `u₁ ∈ Γ(v)` and `u_k ∈ Γ⁻(v)`,
//! the paths are vertex-disjoint, and closing each with `v` gives the cycles.

use serde::Serialize;

use crate::automorphism::TransitivityCertificate;
use crate::error::{Error, Result};
use crate::flow::{Decomposition, FlowNetwork, NodeId, UNBOUNDED};
use crate::graph::Digraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleSystem {
    pub v: usize,
    /// Each cycle starts and ends at `v`.
    pub cycles: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct MaderNetwork {
    pub network: FlowNetwork,
    pub source: NodeId,
    pub sink: NodeId,
}

fn split_in(u: usize) -> NodeId {
    2 * u
}

fn split_out(u: usize) -> NodeId {
    2 * u + 1
}

pub fn mader_network(g: &Digraph, v: usize) -> MaderNetwork {
    let n = g.vertex_count();
    let mut network = FlowNetwork::new(2 * n + 2);
    let (source, sink) = (2 * n, 2 * n + 1);
    for &u in g.out_neighbors(v) {
        network.add_arc(source, split_in(u), 1);
    }
    for u in (0..n).filter(|&u| u != v) {
        network.add_arc(split_in(u), split_out(u), 1);
    }
    for (u, w) in g.edges() {
        if u != v && w != v && u != w {
            network.add_arc(split_out(u), split_in(w), UNBOUNDED);
        }
    }
    for &w in g.in_neighbors(v) {
        network.add_arc(split_out(w), sink, 1);
    }
    MaderNetwork {
        network,
        source,
        sink,
    }
}

/// Vertices visited by a source-sink walk, reading each split pair once.
fn path_vertices(nodes: &[NodeId], source: NodeId, sink: NodeId) -> Vec<usize> {
    nodes
        .iter()
        .filter(|&&x| x != source && x != sink && x % 2 == 0)
        .map(|&x| x / 2)
        .collect()
}

/// Solves the flow and decomposes it; returns the flow value alongside.
pub fn solve_mader_network(g: &Digraph, v: usize) -> (MaderNetwork, i64, Decomposition) {
    let mut net = mader_network(g, v);
    let value = net.network.max_flow(net.source, net.sink);
    let dec = net.network.decompose(net.source, net.sink);
    (net, value, dec)
}

pub fn mader_cycles(
    g: &Digraph,
    cert: Option<&TransitivityCertificate>,
    v: usize,
) -> Result<CycleSystem> {
    g.check_vertex(v)?;
    if !g.is_loopless() {
        return Err(Error::HasLoops);
    }
    if cert.is_none() {
        return Err(Error::MissingCertificate);
    }
    let r = g.out_degree(v);
    let (net, value, dec) = solve_mader_network(g, v);
    if value != r as i64 || dec.paths.len() != r {
        return Err(Error::Internal(format!(
            "flow from Γ({v}) to Γ⁻({v}) has value {value}, expected {r}"
        )));
    }
    let cycles = dec
        .paths
        .iter()
        .map(|nodes| {
            let mut cycle = vec![v];
            cycle.extend(path_vertices(nodes, net.source, net.sink));
            cycle.push(v);
            cycle
        })
        .collect();
    Ok(CycleSystem { v, cycles })
}

/// Independently re-checks every cycle-system property against `g`.
pub fn verify_cycle_system(g: &Digraph, cs: &CycleSystem) -> std::result::Result<(), String> {
    let n = g.vertex_count();
    let v = cs.v;
    if v >= n {
        return Err(format!("vertex {v} out of range"));
    }
    if cs.cycles.len() != g.out_degree(v) {
        return Err(format!(
            "{} cycles but out-degree of {v} is {}",
            cs.cycles.len(),
            g.out_degree(v)
        ));
    }
    let mut owner = vec![usize::MAX; n];
    for (i, cycle) in cs.cycles.iter().enumerate() {
        if cycle.len() < 3 || cycle.first() != Some(&v) || cycle.last() != Some(&v) {
            return Err(format!(
                "cycle {i} {cycle:?} does not start and end at {v} with an interior"
            ));
        }
        for pair in cycle.windows(2) {
            if pair[0] >= n || pair[1] >= n || !g.has_edge(pair[0], pair[1]) {
                return Err(format!(
                    "cycle {i}: {} -> {} is not an edge",
                    pair[0], pair[1]
                ));
            }
        }
        for &x in &cycle[1..cycle.len() - 1] {
            if x == v {
                return Err(format!("cycle {i} revisits {v}"));
            }
            match owner[x] {
                usize::MAX => owner[x] = i,
                j if j == i => return Err(format!("cycle {i} repeats vertex {x}")),
                j => return Err(format!("cycles {j} and {i} share vertex {x}")),
            }
        }
    }
    Ok(())
}
