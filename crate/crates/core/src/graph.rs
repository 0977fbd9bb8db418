//! Finite directed relations and the set operators on them: image, preimage,
//! boundary, exterior.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::bitset::IndexSet;
use crate::error::{Error, Result};

pub type VertexSet = IndexSet;

/// A finite digraph. Loops are ordinary edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Digraph {
    vertex_count: usize,
    out_adj: Vec<Vec<usize>>,
    #[serde(skip)]
    in_adj: Vec<Vec<usize>>,
    #[serde(skip)]
    out_sets: Vec<IndexSet>,
    #[serde(skip)]
    in_sets: Vec<IndexSet>,
    reflexive: bool,
}

impl Digraph {
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count == 0 {
            return Err(Error::MalformedGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut out_adj = vec![Vec::new(); vertex_count];
        for (u, w) in edges {
            for x in [u, w] {
                if x >= vertex_count {
                    return Err(Error::OutOfRange {
                        index: x,
                        size: vertex_count,
                    });
                }
            }
            out_adj[u].push(w);
        }
        Ok(Self::from_out_adj(out_adj))
    }

    fn from_out_adj(mut out_adj: Vec<Vec<usize>>) -> Self {
        let n = out_adj.len();
        let mut in_adj = vec![Vec::new(); n];
        for (u, list) in out_adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            for &w in list.iter() {
                in_adj[w].push(u);
            }
        }
        let out_sets = out_adj
            .iter()
            .map(|l| IndexSet::from_indices(n, l.iter().copied()))
            .collect::<Vec<_>>();
        let in_sets = in_adj
            .iter()
            .map(|l| IndexSet::from_indices(n, l.iter().copied()))
            .collect();
        let reflexive = (0..n).all(|v| out_sets[v].contains(v));
        Self {
            vertex_count: n,
            out_adj,
            in_adj,
            out_sets,
            in_sets,
            reflexive,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&w| (u, w)))
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    /// `Γ(v)` as a set.
    pub fn out_set(&self, v: usize) -> &VertexSet {
        &self.out_sets[v]
    }

    /// `Γ⁻(v)` as a set.
    pub fn in_set(&self, v: usize) -> &VertexSet {
        &self.in_sets[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.out_sets[u].contains(w)
    }

    pub fn is_reflexive(&self) -> bool {
        self.reflexive
    }

    pub fn is_loopless(&self) -> bool {
        (0..self.vertex_count).all(|v| !self.has_edge(v, v))
    }

    pub fn is_symmetric(&self) -> bool {
        self.out_sets == self.in_sets
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.vertex_count)
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count)
    }

    /// Builds a vertex set, rejecting out-of-range members.
    pub fn vertex_set<I: IntoIterator<Item = usize>>(&self, items: I) -> Result<VertexSet> {
        let mut set = self.empty_set();
        for x in items {
            self.check_vertex(x)?;
            set.insert(x);
        }
        Ok(set)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count {
            return Err(Error::OutOfRange {
                index: v,
                size: self.vertex_count,
            });
        }
        Ok(())
    }

    /// `Γ(F)`.
    pub fn image(&self, f: &VertexSet) -> VertexSet {
        let mut out = self.empty_set();
        for x in f {
            out.union_with(&self.out_sets[x]);
        }
        out
    }

    /// `Γ⁻(F)`.
    pub fn preimage(&self, f: &VertexSet) -> VertexSet {
        let mut out = self.empty_set();
        for x in f {
            out.union_with(&self.in_sets[x]);
        }
        out
    }

    /// `∂(F) = Γ(F) ∖ F`.
    pub fn boundary(&self, f: &VertexSet) -> VertexSet {
        let mut out = self.image(f);
        out.difference_with(f);
        out
    }

    /// `∇(F) = V ∖ (F ∪ Γ(F))`.
    pub fn exterior(&self, f: &VertexSet) -> VertexSet {
        let mut out = self.image(f);
        out.union_with(f);
        out.complement()
    }

    /// `∂⁻(F) = Γ⁻(F) ∖ F`.
    pub fn neg_boundary(&self, f: &VertexSet) -> VertexSet {
        let mut out = self.preimage(f);
        out.difference_with(f);
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_out_adj(self.in_adj.clone())
    }

    pub fn reflexive_closure(&self) -> Self {
        if self.reflexive {
            return self.clone();
        }
        let mut adj = self.out_adj.clone();
        for (v, l) in adj.iter_mut().enumerate() {
            l.push(v);
        }
        Self::from_out_adj(adj)
    }

    pub fn without_loops(&self) -> Self {
        let adj = self
            .out_adj
            .iter()
            .enumerate()
            .map(|(v, l)| l.iter().copied().filter(|&w| w != v).collect())
            .collect();
        Self::from_out_adj(adj)
    }

    /// `Γ[X]`, re-indexed in ascending order of `X`. The returned map sends
    /// new indices to original vertices.
    pub fn induced_subgraph(&self, x: &VertexSet) -> Result<(Self, Vec<usize>)> {
        if x.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let map = x.to_vec();
        let mut position = vec![usize::MAX; self.vertex_count];
        for (i, &v) in map.iter().enumerate() {
            position[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| {
                self.out_adj[v]
                    .iter()
                    .filter(|&&w| position[w] != usize::MAX)
                    .map(|&w| position[w])
                    .collect()
            })
            .collect();
        Ok((Self::from_out_adj(adj), map))
    }

    /// Whether every vertex can reach every other along directed edges.
    pub fn is_strongly_connected(&self) -> bool {
        let reach = |g: &Self| {
            let mut seen = g.empty_set();
            let mut stack = vec![0];
            seen.insert(0);
            while let Some(u) = stack.pop() {
                for &w in &g.out_adj[u] {
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            seen.len() == g.vertex_count
        };
        reach(self) && reach(&self.transpose())
    }

    /// Out-neighbourhood bitmasks; requires at most 64 vertices.
    pub fn out_masks(&self) -> Option<Vec<u64>> {
        (self.vertex_count <= 64).then(|| self.out_sets.iter().map(IndexSet::to_mask).collect())
    }

    pub fn in_masks(&self) -> Option<Vec<u64>> {
        (self.vertex_count <= 64).then(|| self.in_sets.iter().map(IndexSet::to_mask).collect())
    }

    /// Whether `perm` is an automorphism: a bijection with `Γ(perm(x)) = perm(Γ(x))`.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let n = self.vertex_count;
        if perm.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return false;
            }
        }
        (0..n).all(|x| {
            self.out_degree(perm[x]) == self.out_degree(x)
                && self.out_adj[x]
                    .iter()
                    .all(|&y| self.has_edge(perm[x], perm[y]))
        })
    }

    /// Parses the edge-list format: a vertex count line, then `u v` lines.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| {
                        Error::MalformedGraph(format!("line {}: bad integer `{t}`", lineno + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match (n, nums.as_slice()) {
                (None, [count]) => n = Some(*count),
                (None, _) => {
                    return Err(Error::MalformedGraph(
                        "first line must be the vertex count".into(),
                    ))
                }
                (Some(_), [u, w]) => edges.push((*u, *w)),
                (Some(_), _) => {
                    return Err(Error::MalformedGraph(format!(
                        "line {}: expected `u v`",
                        lineno + 1
                    )))
                }
            }
        }
        let n = n.ok_or_else(|| Error::MalformedGraph("empty edge list".into()))?;
        Self::from_edges(n, edges)
    }

    pub fn load_edge_list(path: &Path) -> Result<Self> {
        Self::parse_edge_list(&fs::read_to_string(path)?)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.vertex_count);
        for (u, w) in self.edges() {
            let _ = writeln!(out, "{u} {w}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn circulant(n: usize, s: &[usize]) -> Digraph {
        Digraph::from_edges(
            n,
            (0..n).flat_map(|x| s.iter().map(move |&d| (x, (x + d) % n))),
        )
        .unwrap()
    }

    fn vs(g: &Digraph, xs: &[usize]) -> VertexSet {
        g.vertex_set(xs.iter().copied()).unwrap()
    }

    #[test]
    fn image_examples() {
        let g = circulant(5, &[0, 1]);
        assert_eq!(g.image(&vs(&g, &[0, 2])).to_vec(), vec![0, 1, 2, 3]);
        assert!(g.image(&g.empty_set()).is_empty());
    }

    #[test]
    fn preimage_examples() {
        let g = circulant(6, &[0, 1, 3]);
        assert_eq!(g.preimage(&vs(&g, &[1])).to_vec(), vec![0, 1, 4]);
        assert!(g.preimage(&g.empty_set()).is_empty());
        let sym = circulant(6, &[0, 1, 5]);
        let f = vs(&sym, &[0, 3]);
        assert_eq!(sym.preimage(&f), sym.image(&f));
    }

    #[test]
    fn boundary_and_exterior_examples() {
        let g = circulant(6, &[0, 1]);
        let f = vs(&g, &[0, 1]);
        assert_eq!(g.boundary(&f).to_vec(), vec![2]);
        assert_eq!(g.exterior(&f).to_vec(), vec![3, 4, 5]);
        assert!(g.boundary(&g.all_vertices()).is_empty());
        assert!(g.exterior(&g.all_vertices()).is_empty());
        assert_eq!(g.neg_boundary(&vs(&g, &[3, 4, 5])).to_vec(), vec![2]);
        assert!(g.neg_boundary(&g.empty_set()).is_empty());
        let h = circulant(7, &[0, 2, 3]);
        let single = vs(&h, &[4]);
        assert_eq!(h.boundary(&single).len(), h.out_degree(4) - 1);
    }

    #[test]
    fn reflexive_closure_examples() {
        let g = circulant(5, &[1, 2]);
        assert!(g.is_loopless());
        assert_eq!(g.reflexive_closure(), circulant(5, &[0, 1, 2]));
        let r = circulant(5, &[0, 1]);
        assert_eq!(r.reflexive_closure(), r);
        assert_eq!(r.without_loops(), circulant(5, &[1]));
    }

    #[test]
    fn induced_examples() {
        let g = circulant(6, &[0, 1]);
        let (sub, map) = g.induced_subgraph(&vs(&g, &[0, 1, 2])).unwrap();
        assert_eq!(map, vec![0, 1, 2]);
        let expected = Digraph::from_edges(3, [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]).unwrap();
        assert_eq!(sub, expected);
        let (whole, _) = g.induced_subgraph(&g.all_vertices()).unwrap();
        assert_eq!(whole, g);
        let (one, _) = g.induced_subgraph(&vs(&g, &[4])).unwrap();
        assert!(one.is_reflexive() && one.vertex_count() == 1);
        assert!(matches!(
            g.induced_subgraph(&g.empty_set()),
            Err(Error::EmptyVertexSet)
        ));
    }

    #[test]
    fn edge_list_format() {
        let g = Digraph::parse_edge_list("3\n0 1\n1 2 # comment\n\n2 0\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(Digraph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(Digraph::parse_edge_list("2\n0 5\n").is_err());
        assert!(Digraph::parse_edge_list("2\n0\n").is_err());
        assert!(Digraph::parse_edge_list("").is_err());
    }

    #[test]
    fn automorphism_check() {
        let g = circulant(5, &[1]);
        assert!(g.is_automorphism(&[1, 2, 3, 4, 0]));
        assert!(!g.is_automorphism(&[1, 0, 2, 3, 4]));
        assert!(!g.is_automorphism(&[0, 0, 2, 3, 4]));
    }

    fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..n * n)
                .prop_map(move |e| Digraph::from_edges(n, e).unwrap())
        })
    }

    fn arb_subset(n: usize) -> impl Strategy<Value = VertexSet> {
        proptest::collection::vec(any::<bool>(), n)
            .prop_map(move |bits| VertexSet::from_indices(n, (0..n).filter(|&i| bits[i])))
    }

    proptest! {
        #[test]
        fn partition_and_inclusion((g, f) in arb_digraph(10).prop_flat_map(|g| {
            let n = g.vertex_count();
            (Just(g), arb_subset(n))
        })) {
            let d = g.boundary(&f);
            let e = g.exterior(&f);
            prop_assert!(f.is_disjoint(&d) && f.is_disjoint(&e) && d.is_disjoint(&e));
            prop_assert_eq!(f.len() + d.len() + e.len(), g.vertex_count());
            prop_assert_eq!(g.preimage(&f), g.transpose().image(&f));
            let r = g.reflexive_closure();
            prop_assert!(r.neg_boundary(&r.exterior(&f)).is_subset(&r.boundary(&f)));
        }

        #[test]
        fn closure_keeps_boundary((g, f) in arb_digraph(10).prop_flat_map(|g| {
            let n = g.vertex_count();
            (Just(g), arb_subset(n))
        })) {
            let r = g.reflexive_closure();
            prop_assert_eq!(r.boundary(&f), g.boundary(&f));
            prop_assert_eq!(g.without_loops().boundary(&f), g.boundary(&f));
            prop_assert_eq!(r.reflexive_closure(), r.clone());
        }
    }
}
