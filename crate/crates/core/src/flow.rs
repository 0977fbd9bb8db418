//! Integral max-flow by BFS augmenting paths, residual reachability, and
//! decomposition of a flow into source-sink paths and leftover cycles.

pub type NodeId = usize;
pub type ArcId = usize;

/// Capacity standing in for "unbounded". Larger than any cut in the
/// networks built here.
pub const UNBOUNDED: i64 = i64::MAX / 4;

#[derive(Clone, Debug)]
struct ArcData {
    to: NodeId,
    cap: i64,
    flow: i64,
}

/// A capacitated digraph with a residual partner for every arc.
/// Arc `2k` is the k-th arc added; `2k + 1` is its reverse.
#[derive(Clone, Debug, Default)]
pub struct FlowNetwork {
    arcs: Vec<ArcData>,
    adj: Vec<Vec<ArcId>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    pub paths: Vec<Vec<NodeId>>,
    pub cycles: Vec<Vec<NodeId>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_node(&mut self) -> NodeId {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_arc(&mut self, from: NodeId, to: NodeId, cap: i64) -> ArcId {
        let id = self.arcs.len();
        self.arcs.push(ArcData { to, cap, flow: 0 });
        self.arcs.push(ArcData {
            to: from,
            cap: 0,
            flow: 0,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len() / 2
    }

    /// Forward arcs as `(id, from, to, cap)`.
    pub fn arcs(&self) -> impl Iterator<Item = (ArcId, NodeId, NodeId, i64)> + '_ {
        (0..self.arcs.len()).step_by(2).map(|id| {
            (
                id,
                self.arcs[id + 1].to,
                self.arcs[id].to,
                self.arcs[id].cap,
            )
        })
    }

    pub fn flow(&self, arc: ArcId) -> i64 {
        self.arcs[arc].flow
    }

    fn residual(&self, arc: ArcId) -> i64 {
        self.arcs[arc].cap - self.arcs[arc].flow
    }

    fn push(&mut self, arc: ArcId, amount: i64) {
        self.arcs[arc].flow += amount;
        self.arcs[arc ^ 1].flow -= amount;
    }

    /// Augments until no residual path remains; returns the total flow added.
    pub fn max_flow(&mut self, source: NodeId, sink: NodeId) -> i64 {
        let mut total = 0;
        while let Some(path) = self.shortest_augmenting_path(source, sink) {
            let bottleneck = path.iter().map(|&a| self.residual(a)).min().unwrap_or(0);
            if bottleneck >= UNBOUNDED {
                // a path of unbounded arcs only: the cut is unbounded
                return UNBOUNDED;
            }
            for &a in &path {
                self.push(a, bottleneck);
            }
            total += bottleneck;
        }
        total
    }

    fn shortest_augmenting_path(&self, source: NodeId, sink: NodeId) -> Option<Vec<ArcId>> {
        if source == sink {
            return None;
        }
        let mut via = vec![usize::MAX; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let w = self.arcs[a].to;
                if !seen[w] && self.residual(a) > 0 {
                    seen[w] = true;
                    via[w] = a;
                    if w == sink {
                        let mut path = Vec::new();
                        let mut x = sink;
                        while x != source {
                            let arc = via[x];
                            path.push(arc);
                            x = self.arcs[arc ^ 1].to;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Nodes reachable from `source` in the residual graph.
    pub fn residual_reachable(&self, source: NodeId) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut stack = vec![source];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let w = self.arcs[a].to;
                if !seen[w] && self.residual(a) > 0 {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Net flow out of `node`.
    pub fn excess_out(&self, node: NodeId) -> i64 {
        self.adj[node].iter().map(|&a| self.arcs[a].flow).sum()
    }

    /// Splits the current flow into unit-by-bottleneck source-sink paths and
    /// the circulation left over. Walks always take the lowest-index arc with
    /// positive remaining flow.
    pub fn decompose(&self, source: NodeId, sink: NodeId) -> Decomposition {
        let mut remaining: Vec<i64> = self.arcs.iter().map(|a| a.flow.max(0)).collect();
        for id in (1..remaining.len()).step_by(2) {
            remaining[id] = 0;
        }
        let next_arc = |remaining: &[i64], u: NodeId| {
            self.adj[u]
                .iter()
                .copied()
                .filter(|a| a % 2 == 0 && remaining[*a] > 0)
                .min()
        };
        let mut out = Decomposition::default();
        'walks: while next_arc(&remaining, source).is_some() {
            let mut position = vec![usize::MAX; self.adj.len()];
            let mut nodes = vec![source];
            let mut arcs: Vec<ArcId> = Vec::new();
            position[source] = 0;
            let mut u = source;
            while u != sink {
                let Some(a) = next_arc(&remaining, u) else {
                    // conservation rules this out for a valid flow
                    break 'walks;
                };
                let w = self.arcs[a].to;
                arcs.push(a);
                if position[w] != usize::MAX {
                    // walked into a circulation: peel it off and restart
                    let cut = position[w];
                    let cycle_arcs = &arcs[cut..];
                    let amount = cycle_arcs.iter().map(|&a| remaining[a]).min().unwrap();
                    for &a in cycle_arcs {
                        remaining[a] -= amount;
                    }
                    let mut cycle = nodes[cut..].to_vec();
                    cycle.push(w);
                    for _ in 0..amount {
                        out.cycles.push(cycle.clone());
                    }
                    continue 'walks;
                }
                position[w] = nodes.len();
                nodes.push(w);
                u = w;
            }
            let amount = arcs.iter().map(|&a| remaining[a]).min().unwrap();
            for &a in &arcs {
                remaining[a] -= amount;
            }
            for _ in 0..amount {
                out.paths.push(nodes.clone());
            }
        }
        // whatever is left is a circulation
        while let Some(start) = (0..remaining.len()).step_by(2).find(|&a| remaining[a] > 0) {
            let mut position = vec![usize::MAX; self.adj.len()];
            let mut nodes = vec![self.arcs[start ^ 1].to];
            let mut arcs = vec![start];
            position[nodes[0]] = 0;
            let mut u = self.arcs[start].to;
            while position[u] == usize::MAX {
                position[u] = nodes.len();
                nodes.push(u);
                let a = next_arc(&remaining, u).expect("circulation conserves flow");
                arcs.push(a);
                u = self.arcs[a].to;
            }
            let cut = position[u];
            let cycle_arcs = &arcs[cut..];
            let amount = cycle_arcs.iter().map(|&a| remaining[a]).min().unwrap();
            for &a in cycle_arcs {
                remaining[a] -= amount;
            }
            let mut cycle = nodes[cut..].to_vec();
            cycle.push(u);
            for _ in 0..amount {
                out.cycles.push(cycle.clone());
            }
        }
        out
    }
}
