//! Graph spec parsing and the named group/graph families that sweeps run over.
//!
//! Graph specs:
//! - `circulant:n:s1,s2,...` is `Cay(Z_n, {s_i})`
//! - `cayley:GROUP:s1,s2,...` is `Cay(G, {s_i})` with element indices
//! - `kneser:n:k` is the Kneser graph on `k`-subsets of `0..n` (symmetric edges)
//! - `edges:n:u-w,u-w,...` is an explicit digraph on `0..n`
//! - `file:PATH` is an edge-list file
//!
//! A trailing `+loops` applies the reflexive closure.

use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automorphism::{
    certify_transitivity, TransitivityCertificate, TranslationHint, DEFAULT_SEARCH_CAP,
};
use crate::cayley::{cayley_graph, CayleyGraph};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::group::{parse_group_spec, FiniteGroup, GroupSubset};

/// A graph together with its canonical key and, for Cayley graphs, the
/// construction data.
#[derive(Clone, Debug)]
pub struct GraphInstance {
    pub key: String,
    pub graph: Digraph,
    pub cayley: Option<CayleyGraph>,
}

impl GraphInstance {
    pub fn hint(&self) -> Option<TranslationHint> {
        self.cayley.as_ref().map(CayleyGraph::translation_hint)
    }

    /// Certifies vertex-transitivity, using the Cayley translations when known.
    pub fn certify(&self) -> Result<TransitivityCertificate> {
        certify_transitivity(&self.graph, self.hint().as_ref(), DEFAULT_SEARCH_CAP)?.certificate()
    }

    fn from_cayley(key: String, cay: CayleyGraph) -> Self {
        Self {
            key,
            graph: cay.graph().clone(),
            cayley: Some(cay),
        }
    }

    /// Adds loops everywhere. Cayley data survives since it only changes `S`
    /// by the identity.
    pub fn reflexive_closure(self) -> Result<Self> {
        if self.graph.is_reflexive() {
            return Ok(self);
        }
        let key = format!("{}+loops", self.key);
        match self.cayley {
            Some(cay) => {
                let mut s = cay.connection_set().members().clone();
                s.insert(cay.group().identity());
                let subset = GroupSubset::from_set(Arc::clone(cay.group()), s)?;
                Ok(Self::from_cayley(key, cayley_graph(&subset)?))
            }
            None => Ok(Self {
                key,
                graph: self.graph.reflexive_closure(),
                cayley: None,
            }),
        }
    }

    /// Removes loops, keeping Cayley data consistent.
    pub fn without_loops(self) -> Result<Self> {
        if self.graph.is_loopless() {
            return Ok(self);
        }
        let key = format!("{}-loops", self.key);
        match self.cayley {
            Some(cay) => {
                let mut s = cay.connection_set().members().clone();
                s.remove(cay.group().identity());
                let group = Arc::clone(cay.group());
                if s.is_empty() {
                    // no Cayley graph with an empty connection set
                    let n = group.order();
                    return Ok(Self {
                        key,
                        graph: Digraph::from_edges(n, [])?,
                        cayley: None,
                    });
                }
                let subset = GroupSubset::from_set(group, s)?;
                Ok(Self::from_cayley(key, cayley_graph(&subset)?))
            }
            None => Ok(Self {
                key,
                graph: self.graph.without_loops(),
                cayley: None,
            }),
        }
    }
}

fn invalid(spec: &str, reason: impl Into<String>) -> Error {
    Error::InvalidSpec {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

fn parse_list(spec: &str, list: &str) -> Result<Vec<usize>> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| invalid(spec, format!("bad element `{t}`")))
        })
        .collect()
}

pub fn parse_graph_spec(spec: &str) -> Result<GraphInstance> {
    let spec = spec.trim();
    if let Some(base) = spec.strip_suffix("+loops") {
        return parse_graph_spec(base)?.reflexive_closure();
    }
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| invalid(spec, "expected KIND:..."))?;
    match kind {
        "circulant" => {
            let (n, list) = rest
                .split_once(':')
                .ok_or_else(|| invalid(spec, "expected circulant:n:s1,s2,..."))?;
            let n: usize = n.parse().map_err(|_| invalid(spec, "bad n"))?;
            let group = Arc::new(FiniteGroup::cyclic(n)?);
            let steps = parse_list(spec, list)?;
            let subset = GroupSubset::new(group, steps.iter().map(|&s| s % n))?;
            let key = format!("circulant:{n}:{}", subset.members().key());
            Ok(GraphInstance::from_cayley(key, cayley_graph(&subset)?))
        }
        "cayley" => {
            // the group spec may itself contain ':' (table:PATH)
            let (group_spec, list) = rest
                .rsplit_once(':')
                .ok_or_else(|| invalid(spec, "expected cayley:GROUP:s1,s2,..."))?;
            let group = Arc::new(parse_group_spec(group_spec)?);
            let subset = GroupSubset::new(group, parse_list(spec, list)?)?;
            let key = format!("cayley:{group_spec}:{}", subset.members().key());
            Ok(GraphInstance::from_cayley(key, cayley_graph(&subset)?))
        }
        "kneser" => {
            let (n, k) = rest
                .split_once(':')
                .ok_or_else(|| invalid(spec, "expected kneser:n:k"))?;
            let n: usize = n.parse().map_err(|_| invalid(spec, "bad n"))?;
            let k: usize = k.parse().map_err(|_| invalid(spec, "bad k"))?;
            if n > 16 || k == 0 || k > n {
                return Err(invalid(spec, "need 1 <= k <= n <= 16"));
            }
            Ok(GraphInstance {
                key: format!("kneser:{n}:{k}"),
                graph: kneser(n, k)?,
                cayley: None,
            })
        }
        "edges" => {
            let (n, list) = rest
                .split_once(':')
                .ok_or_else(|| invalid(spec, "expected edges:n:u-w,..."))?;
            let n: usize = n.parse().map_err(|_| invalid(spec, "bad n"))?;
            let mut edges = Vec::new();
            for pair in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let (u, w) = pair
                    .split_once('-')
                    .ok_or_else(|| invalid(spec, format!("bad edge `{pair}`")))?;
                let u: usize = u
                    .parse()
                    .map_err(|_| invalid(spec, format!("bad edge `{pair}`")))?;
                let w: usize = w
                    .parse()
                    .map_err(|_| invalid(spec, format!("bad edge `{pair}`")))?;
                edges.push((u, w));
            }
            let graph = Digraph::from_edges(n, edges)?;
            Ok(GraphInstance {
                key: edges_key(&graph),
                graph,
                cayley: None,
            })
        }
        "file" => Ok(GraphInstance {
            key: spec.to_string(),
            graph: Digraph::load_edge_list(Path::new(rest))?,
            cayley: None,
        }),
        _ => Err(invalid(spec, format!("unknown graph kind `{kind}`"))),
    }
}

/// Canonical `edges:` spec of a graph, with loops folded into `+loops` when
/// every vertex has one.
pub fn edges_key(g: &Digraph) -> String {
    let reflexive = g.is_reflexive();
    let list: Vec<String> = g
        .edges()
        .filter(|&(u, w)| !(reflexive && u == w))
        .map(|(u, w)| format!("{u}-{w}"))
        .collect();
    let suffix = if reflexive { "+loops" } else { "" };
    format!("edges:{}:{}{suffix}", g.vertex_count(), list.join(","))
}

/// `reflexive-all:N`: every reflexive digraph on `1..=N` vertices, `N ≤ 4`.
/// Not vertex-transitive in general.
pub fn all_reflexive_digraphs(max_n: usize) -> Result<Vec<GraphInstance>> {
    if max_n > 4 {
        return Err(invalid(
            &format!("reflexive-all:{max_n}"),
            "at most 4 vertices",
        ));
    }
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).filter(move |&w| w != u).map(move |w| (u, w)))
            .collect();
        for bits in 0u64..1 << pairs.len() {
            let edges = (0..n).map(|u| (u, u)).chain(
                pairs
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| bits >> i & 1 == 1)
                    .map(|(_, &e)| e),
            );
            let graph = Digraph::from_edges(n, edges.collect::<Vec<_>>())?;
            out.push(GraphInstance {
                key: edges_key(&graph),
                graph,
                cayley: None,
            });
        }
    }
    Ok(out)
}

/// `random-reflexive:COUNT:SEED`: seeded random reflexive digraphs on 1 to 8
/// vertices. Not vertex-transitive in general.
pub fn random_reflexive_family(count: usize, seed: u64) -> Result<Vec<GraphInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.gen_range(1..=8);
        let density: f64 = rng.gen_range(0.05..0.7);
        let mut edges: Vec<(usize, usize)> = (0..n).map(|u| (u, u)).collect();
        for u in 0..n {
            for w in (0..n).filter(|&w| w != u) {
                if rng.gen_bool(density) {
                    edges.push((u, w));
                }
            }
        }
        let graph = Digraph::from_edges(n, edges)?;
        out.push(GraphInstance {
            key: edges_key(&graph),
            graph,
            cayley: None,
        });
    }
    Ok(out)
}

/// Kneser graph `K(n, k)`: `k`-subsets, adjacent when disjoint.
pub fn kneser(n: usize, k: usize) -> Result<Digraph> {
    let subsets: Vec<u32> = (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .collect();
    let edges = subsets.iter().enumerate().flat_map(|(i, &a)| {
        subsets
            .iter()
            .enumerate()
            .filter(move |&(_, &b)| a & b == 0)
            .map(move |(j, _)| (i, j))
    });
    Digraph::from_edges(subsets.len(), edges.collect::<Vec<_>>())
}

/// Groups of the sumset sweeps: cyclic up to 6, `D3`, `D4`, `Q8`, `Z2xZ4`.
pub const SUMSET_GROUPS: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "D3", "D4", "Q8", "Z2xZ4",
];

/// Non-cyclic groups of order at most 16 constructible from the family DSL.
pub const NONCYCLIC_GROUPS: &[&str] = &[
    "Z2xZ2",
    "D3",
    "D4",
    "Q8",
    "Z2xZ4",
    "Z2xZ2xZ2",
    "D5",
    "D6",
    "Z2xZ6",
    "D7",
    "D8",
    "Z2xZ8",
    "Z4xZ4",
    "Z2xD4",
    "Z2xQ8",
    "Z2xZ2xZ4",
    "Z2xZ2xZ2xZ2",
];

/// Connection sets sampled per group when a family is too large to enumerate.
pub const SAMPLED_CONNECTION_SETS: usize = 200;
/// Largest order for which catalogue families enumerate every connection set.
pub const EXHAUSTIVE_CONNECTION_ORDER: usize = 12;
const CATALOGUE_SEED: u64 = 0x5eed_ca7a_1060_0001;

/// Every `Cay(G, S)` with the identity in `S`, or a seeded sample of them.
fn cayley_family(group_spec: &str, sample: Option<(usize, u64)>) -> Result<Vec<GraphInstance>> {
    let group = Arc::new(parse_group_spec(group_spec)?);
    let n = group.order();
    let subsets: Vec<u64> = match sample {
        None => (0u64..1 << (n - 1)).map(|bits| bits << 1 | 1).collect(),
        Some((count, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seen = std::collections::BTreeSet::new();
            let target = count.min(1 << (n - 1));
            while seen.len() < target {
                let bits: u64 = rng.gen::<u64>() & ((1u64 << n) - 1);
                seen.insert(bits | 1);
            }
            seen.into_iter().collect()
        }
    };
    subsets
        .into_iter()
        .map(|mask| {
            let subset =
                GroupSubset::new(Arc::clone(&group), (0..n).filter(|&x| mask >> x & 1 == 1))?;
            let key = if group_spec.starts_with('Z') && !group_spec.contains('x') {
                format!("circulant:{n}:{}", subset.members().key())
            } else {
                format!("cayley:{group_spec}:{}", subset.members().key())
            };
            Ok(GraphInstance::from_cayley(key, cayley_graph(&subset)?))
        })
        .collect()
}

/// `circulants:N`: all `Cay(Z_n, S)` with `0 ∈ S`, `1 ≤ n ≤ N`.
pub fn circulant_family(max_n: usize) -> Result<Vec<GraphInstance>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(cayley_family(&format!("Z{n}"), None)?);
    }
    Ok(out)
}

/// `vt-catalogue:N`: reflexive vertex-transitive graphs on at most `N`
/// vertices. Every connection set for groups of order up to 12; a seeded
/// sample of [`SAMPLED_CONNECTION_SETS`] beyond; plus the reflexive Petersen
/// graph when `N ≥ 10`.
pub fn vt_catalogue(max_n: usize) -> Result<Vec<GraphInstance>> {
    let mut specs: Vec<String> = (1..=max_n).map(|n| format!("Z{n}")).collect();
    for g in NONCYCLIC_GROUPS {
        specs.push(g.to_string());
    }
    let mut out = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let order = parse_group_spec(spec)?.order();
        if order > max_n {
            continue;
        }
        let sample = (order > EXHAUSTIVE_CONNECTION_ORDER)
            .then_some((SAMPLED_CONNECTION_SETS, CATALOGUE_SEED ^ i as u64));
        out.extend(cayley_family(spec, sample)?);
    }
    if max_n >= 10 {
        out.push(parse_graph_spec("kneser:5:2+loops")?);
    }
    Ok(out)
}

/// Groups `random-cayley` draws from.
const RANDOM_CAYLEY_GROUPS: &[&str] = &[
    "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "Z13", "Z14", "Z15", "Z16", "D3", "D4", "Q8", "Z2xZ4",
    "Z2xZ2xZ2", "D5", "D6", "Z2xZ6", "D7", "D8", "Z4xZ4", "Z2xQ8", "Z2xD4",
];

/// `random-cayley:COUNT:SEED`: seeded random reflexive Cayley graphs with at
/// least one generator besides the identity.
pub fn random_cayley_family(count: usize, seed: u64) -> Result<Vec<GraphInstance>> {
    let groups: Vec<(String, Arc<FiniteGroup>)> = RANDOM_CAYLEY_GROUPS
        .iter()
        .map(|s| Ok((s.to_string(), Arc::new(parse_group_spec(s)?))))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let (spec, group) = groups.choose(&mut rng).unwrap();
        let n = group.order();
        let density: f64 = rng.gen_range(0.1..0.6);
        let mut members: Vec<usize> = vec![0];
        members.extend((1..n).filter(|_| rng.gen_bool(density)));
        if members.len() == 1 && n > 1 {
            members.push(rng.gen_range(1..n));
        }
        let subset = GroupSubset::new(Arc::clone(group), members)?;
        let key = format!("cayley:{spec}:{}", subset.members().key());
        out.push(GraphInstance::from_cayley(key, cayley_graph(&subset)?));
    }
    Ok(out)
}

/// Resolves a graph family name or a single graph spec.
pub fn graph_family(name: &str) -> Result<Vec<GraphInstance>> {
    let bad = |reason: &str| invalid(name, reason);
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad("expected an integer"));
    if let Some(n) = name.strip_prefix("circulants:") {
        return circulant_family(num(n)?);
    }
    if let Some(n) = name.strip_prefix("vt-catalogue:") {
        return vt_catalogue(num(n)?);
    }
    if let Some(g) = name.strip_prefix("cayley-all:") {
        return cayley_family(g, None);
    }
    if let Some(rest) = name.strip_prefix("random-cayley:") {
        let (count, seed) = rest
            .split_once(':')
            .ok_or_else(|| bad("expected random-cayley:COUNT:SEED"))?;
        let seed = seed.parse::<u64>().map_err(|_| bad("bad seed"))?;
        return random_cayley_family(num(count)?, seed);
    }
    if let Some(n) = name.strip_prefix("reflexive-all:") {
        return all_reflexive_digraphs(num(n)?);
    }
    if let Some(rest) = name.strip_prefix("random-reflexive:") {
        let (count, seed) = rest
            .split_once(':')
            .ok_or_else(|| bad("expected random-reflexive:COUNT:SEED"))?;
        let seed = seed.parse::<u64>().map_err(|_| bad("bad seed"))?;
        return random_reflexive_family(num(count)?, seed);
    }
    Err(bad("unknown graph family"))
}

/// Resolves a group family name.
pub fn group_family(name: &str) -> Result<Vec<(String, Arc<FiniteGroup>)>> {
    let specs: Vec<String> = match name {
        "sumset" => SUMSET_GROUPS.iter().map(|s| s.to_string()).collect(),
        _ => match name.strip_prefix("cyclic:") {
            Some(n) => {
                let n: usize = n.parse().map_err(|_| invalid(name, "expected cyclic:N"))?;
                (1..=n).map(|i| format!("Z{i}")).collect()
            }
            None => return Err(invalid(name, "unknown group family")),
        },
    };
    specs
        .into_iter()
        .map(|s| {
            let g = parse_group_spec(&s)?;
            Ok((s, Arc::new(g)))
        })
        .collect()
}

/// Rows for `groups list`: spec, order, abelian.
pub fn group_listing() -> Vec<(String, usize, bool)> {
    let mut specs: Vec<String> = (1..=16).map(|n| format!("Z{n}")).collect();
    specs.extend((2..=8).map(|n| format!("D{n}")));
    specs.extend((1..=5).map(|n| format!("S{n}")));
    specs.extend(
        NONCYCLIC_GROUPS
            .iter()
            .filter(|s| s.contains('x') || **s == "Q8")
            .map(|s| s.to_string()),
    );
    specs
        .into_iter()
        .filter_map(|s| {
            parse_group_spec(&s)
                .ok()
                .map(|g| (s, g.order(), g.is_abelian()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{certify_transitivity, DEFAULT_SEARCH_CAP};

    #[test]
    fn graph_spec_examples() {
        let g = parse_graph_spec("circulant:6:0,1,3").unwrap();
        assert_eq!(g.key, "circulant:6:0,1,3");
        assert_eq!(g.graph.out_neighbors(1), &[1, 2, 4]);
        let h = parse_graph_spec("circulant:5:1,2+loops").unwrap();
        assert_eq!(h.key, "circulant:5:1,2+loops");
        assert_eq!(
            h.graph,
            parse_graph_spec("circulant:5:0,1,2").unwrap().graph
        );
        assert!(h.cayley.as_ref().unwrap().contains_identity());
        let c = parse_graph_spec("cayley:D4:0,1,4").unwrap();
        assert_eq!(c.graph.vertex_count(), 8);
        assert!(parse_graph_spec("circulant:5").is_err());
        assert!(parse_graph_spec("cayley:D4:9").is_err());
        assert!(parse_graph_spec("nope:1").is_err());
    }

    #[test]
    fn file_spec() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c3.txt");
        std::fs::write(&path, "3\n0 1\n1 2\n2 0\n").unwrap();
        let g = parse_graph_spec(&format!("file:{}+loops", path.display())).unwrap();
        assert!(g.graph.is_reflexive());
        assert_eq!(g.graph.edge_count(), 6);
    }

    #[test]
    fn petersen_is_vertex_transitive() {
        let p = parse_graph_spec("kneser:5:2").unwrap();
        assert_eq!(p.graph.vertex_count(), 10);
        assert!((0..10).all(|v| p.graph.out_degree(v) == 3));
        let cert = certify_transitivity(&p.graph, None, DEFAULT_SEARCH_CAP)
            .unwrap()
            .certificate()
            .unwrap();
        assert!(cert.verify(&p.graph));
    }

    #[test]
    fn edge_keys_round_trip() {
        for inst in graph_family("random-reflexive:30:5").unwrap() {
            let back = parse_graph_spec(&inst.key).unwrap();
            assert_eq!(back.graph, inst.graph);
            assert_eq!(back.key, inst.key);
        }
        let g = parse_graph_spec("edges:3:0-1,2-2").unwrap();
        assert_eq!(g.key, "edges:3:0-1,2-2");
        // 1 + 4 + 64 + 4096
        assert_eq!(graph_family("reflexive-all:4").unwrap().len(), 4165);
        assert!(graph_family("reflexive-all:5").is_err());
    }

    #[test]
    fn family_sizes() {
        // sum of 2^(n-1) for n = 1..=4
        assert_eq!(circulant_family(4).unwrap().len(), 15);
        assert_eq!(graph_family("cayley-all:D3").unwrap().len(), 32);
        let cat = vt_catalogue(8).unwrap();
        // cyclic 1..=8: 255; Z2xZ2: 8; D3: 32; four groups of order 8: 512
        assert_eq!(cat.len(), 255 + 8 + 32 + 512);
        let r1 = random_cayley_family(20, 3).unwrap();
        let r2 = random_cayley_family(20, 3).unwrap();
        assert_eq!(
            r1.iter().map(|g| g.key.clone()).collect::<Vec<_>>(),
            r2.iter().map(|g| g.key.clone()).collect::<Vec<_>>()
        );
        assert!(r1.iter().all(|g| g.graph.is_reflexive()));
        assert_eq!(group_family("sumset").unwrap().len(), 10);
        assert_eq!(group_family("cyclic:6").unwrap().len(), 6);
        assert!(group_family("bogus").is_err());
    }

    #[test]
    fn loop_toggling_keeps_cayley_data() {
        let g = parse_graph_spec("cayley:Q8:0,2,4").unwrap();
        let stripped = g.without_loops().unwrap();
        assert!(stripped.graph.is_loopless());
        assert_eq!(
            stripped
                .cayley
                .as_ref()
                .unwrap()
                .connection_set()
                .members()
                .to_vec(),
            vec![2, 4]
        );
        let bare = parse_graph_spec("circulant:4:0")
            .unwrap()
            .without_loops()
            .unwrap();
        assert_eq!(bare.graph.edge_count(), 0);
    }
}
