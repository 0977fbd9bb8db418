//! Moser sets, the minimum boundary `μ(v)`, molecules and kernels.
//!
//! A `v`-Moser set is a vertex set `F` with `Γ⁻(v) ∩ F = {v}`; `μ(v)` is the
//! least `|∂F|` over such sets and the sets attaining it are the molecules.
//! Molecules are closed under union and intersection, so there is a least
//! one, the kernel `K_v`.
//!
//! Two independent routes compute `μ`: exhaustive enumeration
//! ([`mu_brute`]) and a unit-vertex-capacity max-flow from `v` to
//! `Γ⁻(v) ∖ {v}` ([`mu_flow`]), whose minimal residual side is the kernel.

use rayon::prelude::*;
use serde::Serialize;

use crate::automorphism::TransitivityCertificate;
use crate::error::{Error, Result};
use crate::flow::{FlowNetwork, NodeId, UNBOUNDED};
use crate::graph::{Digraph, VertexSet};

/// Largest graph the enumeration routes accept.
pub const BRUTE_FORCE_CAP: usize = 22;
/// Largest graph the all-vertex lemma checks accept.
pub const LEMMA_CAP: usize = 22;

#[derive(Clone, Debug)]
pub struct MoserInstance<'g> {
    graph: &'g Digraph,
    v: usize,
    forbidden: VertexSet,
}

impl<'g> MoserInstance<'g> {
    pub fn new(graph: &'g Digraph, v: usize) -> Result<Self> {
        if !graph.is_reflexive() {
            return Err(Error::NotReflexive);
        }
        graph.check_vertex(v)?;
        let mut forbidden = graph.in_set(v).clone();
        forbidden.remove(v);
        Ok(Self {
            graph,
            v,
            forbidden,
        })
    }

    pub fn graph(&self) -> &'g Digraph {
        self.graph
    }

    pub fn vertex(&self) -> usize {
        self.v
    }

    /// `Γ⁻(v) ∖ {v}`.
    pub fn forbidden(&self) -> &VertexSet {
        &self.forbidden
    }

    pub fn is_moser_set(&self, f: &VertexSet) -> bool {
        f.contains(self.v) && f.is_disjoint(&self.forbidden)
    }

    fn molecule(&self, members: VertexSet) -> Molecule {
        let boundary_size = self.graph.boundary(&members).len();
        Molecule {
            v: self.v,
            members,
            boundary_size,
        }
    }

    fn check_brute_cap(&self) -> Result<()> {
        let n = self.graph.vertex_count();
        if n > BRUTE_FORCE_CAP {
            return Err(Error::SizeCap {
                what: "exhaustive Moser-set enumeration",
                cap: BRUTE_FORCE_CAP,
                got: n,
            });
        }
        Ok(())
    }
}

/// A `v`-Moser set together with its boundary size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Molecule {
    pub v: usize,
    pub members: VertexSet,
    pub boundary_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Kernel {
    pub molecule: Molecule,
    /// `K_v ∖ {v}`.
    pub atom: VertexSet,
}

impl Kernel {
    pub fn members(&self) -> &VertexSet {
        &self.molecule.members
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MuMethod {
    Brute,
    Flow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuCertificate {
    pub value: usize,
    pub witness: Molecule,
    pub method: MuMethod,
    /// `∂(witness)`, the vertex cut separating `v` from `Γ⁻(v) ∖ {v}`.
    pub cut: VertexSet,
}

/// Calls `visit(F, |∂F|)` for every Moser set, as bitmasks.
fn for_each_moser_set(inst: &MoserInstance<'_>, mut visit: impl FnMut(u64, usize)) -> Result<()> {
    inst.check_brute_cap()?;
    let g = inst.graph;
    let out = g.out_masks().expect("capped below 64 vertices");
    let forbidden = inst.forbidden.to_mask();
    let free: Vec<usize> = (0..g.vertex_count())
        .filter(|&x| x != inst.v && forbidden >> x & 1 == 0)
        .collect();
    let k = free.len();
    // image of each free-subset, built from the subset minus its lowest bit
    let mut image = vec![0u64; 1 << k];
    let mut members = vec![0u64; 1 << k];
    let base = 1u64 << inst.v;
    image[0] = out[inst.v];
    members[0] = base;
    visit(base, (image[0] & !base).count_ones() as usize);
    for sub in 1usize..(1 << k) {
        let low = sub.trailing_zeros() as usize;
        let rest = sub & (sub - 1);
        image[sub] = image[rest] | out[free[low]];
        members[sub] = members[rest] | 1 << free[low];
        visit(
            members[sub],
            (image[sub] & !members[sub]).count_ones() as usize,
        );
    }
    Ok(())
}

/// Lexicographic comparison of ascending member lists for equal-size masks.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

/// Exact `μ(v)` by enumerating every Moser set. The witness is the smallest
/// minimiser, ties broken lexicographically.
pub fn mu_brute(inst: &MoserInstance<'_>) -> Result<MuCertificate> {
    let mut best: Option<(usize, u32, u64)> = None;
    for_each_moser_set(inst, |f, boundary| {
        let size = f.count_ones();
        let better = match best {
            None => true,
            Some((b, s, m)) => {
                boundary < b || (boundary == b && (size < s || (size == s && lex_less(f, m))))
            }
        };
        if better {
            best = Some((boundary, size, f));
        }
    })?;
    let (value, _, mask) = best.expect("{v} is always a Moser set");
    let n = inst.graph.vertex_count();
    let witness = inst.molecule(VertexSet::from_mask(n, mask));
    let cut = inst.graph.boundary(&witness.members);
    Ok(MuCertificate {
        value,
        witness,
        method: MuMethod::Brute,
        cut,
    })
}

/// Every molecule, in lexicographic order.
pub fn all_molecules(inst: &MoserInstance<'_>) -> Result<Vec<Molecule>> {
    let mut best = usize::MAX;
    let mut found: Vec<u64> = Vec::new();
    for_each_moser_set(inst, |f, boundary| {
        if boundary < best {
            best = boundary;
            found.clear();
        }
        if boundary == best {
            found.push(f);
        }
    })?;
    let n = inst.graph.vertex_count();
    let mut molecules: Vec<Molecule> = found
        .into_iter()
        .map(|m| Molecule {
            v: inst.v,
            members: VertexSet::from_mask(n, m),
            boundary_size: best,
        })
        .collect();
    molecules.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(molecules)
}

/// Intersection of every molecule, by enumeration. Independent of the flow route.
pub fn molecule_intersection(inst: &MoserInstance<'_>) -> Result<VertexSet> {
    let molecules = all_molecules(inst)?;
    let mut acc = inst.graph.all_vertices();
    for m in &molecules {
        acc.intersect_with(&m.members);
    }
    Ok(acc)
}

/// The vertex-split network for separating `v` from `Γ⁻(v) ∖ {v}`.
///
/// Vertex `u` becomes `u_in = 2u → u_out = 2u + 1` with capacity 1; an edge
/// `u → w` becomes `u_out → w_in` with unbounded capacity; every forbidden
/// `w` feeds the sink through `w_out → t`, so a forbidden vertex may sit in
/// the cut at cost 1. Nothing enters `v`.
#[derive(Clone, Debug)]
pub struct MoserNetwork {
    pub network: FlowNetwork,
    pub source: NodeId,
    pub sink: NodeId,
}

pub fn split_in(u: usize) -> NodeId {
    2 * u
}

pub fn split_out(u: usize) -> NodeId {
    2 * u + 1
}

pub fn moser_network(inst: &MoserInstance<'_>) -> MoserNetwork {
    let g = inst.graph;
    let n = g.vertex_count();
    let v = inst.v;
    let mut network = FlowNetwork::new(2 * n + 1);
    let sink = 2 * n;
    for u in (0..n).filter(|&u| u != v) {
        network.add_arc(split_in(u), split_out(u), 1);
    }
    for (u, w) in g.edges() {
        if u != w && w != v {
            network.add_arc(split_out(u), split_in(w), UNBOUNDED);
        }
    }
    for w in &inst.forbidden {
        network.add_arc(split_out(w), sink, UNBOUNDED);
    }
    MoserNetwork {
        network,
        source: split_out(v),
        sink,
    }
}

/// Solves the max-flow and reads off the least minimum cut:
/// `{v} ∪ {u : u_out residual-reachable}`.
fn solve_flow(inst: &MoserInstance<'_>) -> Result<(usize, VertexSet)> {
    let mut net = moser_network(inst);
    let value = net.network.max_flow(net.source, net.sink);
    if value >= UNBOUNDED {
        return Err(Error::Internal(
            "unbounded cut in Moser network: v adjacent to a forbidden vertex through unbounded arcs only"
                .into(),
        ));
    }
    let reach = net.network.residual_reachable(net.source);
    let n = inst.graph.vertex_count();
    let mut side = VertexSet::from_indices(n, (0..n).filter(|&u| reach[split_out(u)]));
    side.insert(inst.v);
    Ok((value as usize, side))
}

/// `μ(v)` via max-flow / min vertex cut. The witness is the kernel.
pub fn mu_flow(inst: &MoserInstance<'_>) -> Result<MuCertificate> {
    let (value, side) = solve_flow(inst)?;
    let witness = inst.molecule(side);
    if witness.boundary_size != value || !inst.is_moser_set(&witness.members) {
        return Err(Error::Internal(format!(
            "flow value {value} but residual side has boundary {}",
            witness.boundary_size
        )));
    }
    let cut = inst.graph.boundary(&witness.members);
    Ok(MuCertificate {
        value,
        witness,
        method: MuMethod::Flow,
        cut,
    })
}

/// `K_v`, the least molecule.
pub fn kernel(inst: &MoserInstance<'_>) -> Result<Kernel> {
    let cert = mu_flow(inst)?;
    let mut atom = cert.witness.members.clone();
    atom.remove(inst.v);
    Ok(Kernel {
        molecule: cert.witness,
        atom,
    })
}

/// Kernels of every vertex, computed in parallel.
pub fn all_kernels(g: &Digraph) -> Result<Vec<Kernel>> {
    (0..g.vertex_count())
        .into_par_iter()
        .map(|v| kernel(&MoserInstance::new(g, v)?))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaViolation {
    pub lemma: String,
    pub vertices: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub checks: usize,
    pub violations: Vec<LemmaViolation>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn check(
        &mut self,
        ok: bool,
        lemma: &str,
        vertices: &[usize],
        detail: impl FnOnce() -> String,
    ) {
        self.checks += 1;
        if !ok {
            self.violations.push(LemmaViolation {
                lemma: lemma.to_string(),
                vertices: vertices.to_vec(),
                detail: detail(),
            });
        }
    }

    pub fn merge(&mut self, other: LemmaReport) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }
}

pub(crate) fn check_graph_preconditions(
    g: &Digraph,
    cert: Option<&TransitivityCertificate>,
) -> Result<()> {
    if !g.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    if g.vertex_count() > LEMMA_CAP {
        return Err(Error::SizeCap {
            what: "kernel lemma checks",
            cap: LEMMA_CAP,
            got: g.vertex_count(),
        });
    }
    if cert.is_none() {
        return Err(Error::MissingCertificate);
    }
    Ok(())
}

/// Checks kernel distinctness, automorphism equivariance and the
/// containment alternative for every vertex pair, given precomputed kernels.
pub fn check_kernel_lemmas_with(
    g: &Digraph,
    cert: &TransitivityCertificate,
    kernels: &[Kernel],
) -> LemmaReport {
    let n = g.vertex_count();
    let mut report = LemmaReport::default();
    for v in 0..n {
        for w in v + 1..n {
            report.check(
                kernels[v].members() != kernels[w].members(),
                "distinct",
                &[v, w],
                || format!("K_{v} = K_{w} = {}", kernels[v].members()),
            );
        }
    }
    for phi in cert.automorphisms() {
        for v in 0..n {
            let image = kernels[v].members().map(phi);
            let target = kernels[phi[v]].members();
            report.check(&image == target, "equivariance", &[v, phi[v]], || {
                format!("phi(K_{v}) = {image} but K_{} = {target}", phi[v])
            });
        }
    }
    for v in 0..n {
        let kv = kernels[v].members();
        for w in kv.iter().filter(|&w| w != v) {
            let kw = kernels[w].members();
            let ok = g.image(kw).contains(v) || kw.is_subset(kv);
            report.check(ok, "containment", &[v, w], || {
                format!("w={w} in K_{v}={kv}, but v not in Γ(K_w) and K_w={kw} not within K_v")
            });
        }
    }
    report
}

pub fn check_kernel_lemmas(
    g: &Digraph,
    cert: Option<&TransitivityCertificate>,
) -> Result<LemmaReport> {
    check_graph_preconditions(g, cert)?;
    let kernels = all_kernels(g)?;
    Ok(check_kernel_lemmas_with(g, cert.unwrap(), &kernels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{certify_transitivity, DEFAULT_SEARCH_CAP};
    use crate::cayley::circulant;

    fn g(n: usize, s: &[usize]) -> Digraph {
        circulant(n, s).unwrap().into_graph()
    }

    fn vs(g: &Digraph, xs: &[usize]) -> VertexSet {
        g.vertex_set(xs.iter().copied()).unwrap()
    }

    #[test]
    fn moser_set_examples() {
        let graph = g(6, &[0, 1, 3]);
        let inst = MoserInstance::new(&graph, 1).unwrap();
        assert_eq!(inst.forbidden().to_vec(), vec![0, 4]);
        assert!(inst.is_moser_set(&vs(&graph, &[1])));
        assert!(!inst.is_moser_set(&vs(&graph, &[0, 1])));
        assert!(!inst.is_moser_set(&graph.empty_set()));
    }

    #[test]
    fn instance_requires_reflexive_graph() {
        let graph = g(5, &[1, 2]);
        assert!(matches!(
            MoserInstance::new(&graph, 0),
            Err(Error::NotReflexive)
        ));
        let graph = g(5, &[0, 1]);
        assert!(matches!(
            MoserInstance::new(&graph, 9),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn mu_examples() {
        for n in 3..9 {
            let graph = g(n, &[0, 1]);
            let inst = MoserInstance::new(&graph, 1).unwrap();
            let brute = mu_brute(&inst).unwrap();
            assert_eq!(brute.value, 1);
            assert_eq!(brute.witness.members.to_vec(), vec![1]);
            assert_eq!(mu_flow(&inst).unwrap().value, 1);
        }
        let graph = g(6, &[0, 1, 3]);
        let inst = MoserInstance::new(&graph, 1).unwrap();
        assert_eq!(mu_brute(&inst).unwrap().value, 2);
        assert_eq!(mu_flow(&inst).unwrap().value, 2);

        let graph = g(5, &[0, 1, 2]);
        let inst = MoserInstance::new(&graph, 1).unwrap();
        assert_eq!(mu_flow(&inst).unwrap().value, 2);
        assert_eq!(mu_brute(&inst).unwrap().value, 2);
    }

    #[test]
    fn loops_only_graph_has_zero_mu() {
        let graph = g(4, &[0]);
        let inst = MoserInstance::new(&graph, 2).unwrap();
        assert!(inst.forbidden().is_empty());
        let brute = mu_brute(&inst).unwrap();
        let flow = mu_flow(&inst).unwrap();
        assert_eq!((brute.value, flow.value), (0, 0));
        // {v} already has empty boundary, so it is the least molecule
        assert_eq!(flow.witness.members.to_vec(), vec![2]);
        assert_eq!(brute.witness, flow.witness);
        // V is a molecule too
        let all = all_molecules(&inst).unwrap();
        assert!(all.iter().any(|m| m.members == graph.all_vertices()));
    }

    #[test]
    fn mu_zero_when_forbidden_unreachable() {
        // reflexive 0 -> 1 -> 2: nothing reachable from 2 precedes it
        let graph = Digraph::from_edges(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap();
        let inst = MoserInstance::new(&graph, 2).unwrap();
        assert_eq!(inst.forbidden().to_vec(), vec![1]);
        let flow = mu_flow(&inst).unwrap();
        assert_eq!(flow.value, 0);
        assert_eq!(flow.witness.members.to_vec(), vec![2]);
        assert_eq!(
            mu_brute(&inst).unwrap(),
            MuCertificate {
                method: MuMethod::Brute,
                ..flow
            }
        );
        // Cay(Z6, {0, 3}) is three disjoint 2-cycles; each still needs a cut
        let graph = g(6, &[0, 3]);
        let inst = MoserInstance::new(&graph, 0).unwrap();
        assert_eq!(mu_flow(&inst).unwrap().value, 1);
        assert_eq!(mu_brute(&inst).unwrap().value, 1);
    }

    #[test]
    fn molecules_of_directed_cycle() {
        let graph = g(5, &[0, 1]);
        let inst = MoserInstance::new(&graph, 1).unwrap();
        let molecules = all_molecules(&inst).unwrap();
        let sets: Vec<Vec<usize>> = molecules.iter().map(|m| m.members.to_vec()).collect();
        assert_eq!(
            sets,
            vec![vec![1], vec![1, 2], vec![1, 2, 3], vec![1, 2, 3, 4]]
        );
        for a in &molecules {
            for b in &molecules {
                let i = a.members.intersection(&b.members);
                let u = a.members.union(&b.members);
                assert!(molecules.iter().any(|m| m.members == i));
                assert!(molecules.iter().any(|m| m.members == u));
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let graph = g(7, &[0, 1]);
        let inst = MoserInstance::new(&graph, 1).unwrap();
        let k = kernel(&inst).unwrap();
        assert_eq!(k.members().to_vec(), vec![1]);
        assert!(k.atom.is_empty());
        assert_eq!(
            graph.boundary(k.members()).len(),
            mu_brute(&inst).unwrap().value
        );
        assert_eq!(&molecule_intersection(&inst).unwrap(), k.members());
    }

    #[test]
    fn flow_cut_is_boundary() {
        let graph = g(8, &[0, 1, 2, 5]);
        for v in 0..8 {
            let inst = MoserInstance::new(&graph, v).unwrap();
            let c = mu_flow(&inst).unwrap();
            assert_eq!(c.cut, graph.boundary(&c.witness.members));
            assert_eq!(c.cut.len(), c.value);
        }
    }

    #[test]
    fn brute_cap_enforced() {
        let graph = g(23, &[0, 1]);
        let inst = MoserInstance::new(&graph, 0).unwrap();
        assert!(matches!(mu_brute(&inst), Err(Error::SizeCap { .. })));
        assert!(mu_flow(&inst).is_ok());
    }

    #[test]
    fn kernel_lemma_examples() {
        let cay = circulant(5, &[0, 1]).unwrap();
        let cert = certify_transitivity(
            cay.graph(),
            Some(&cay.translation_hint()),
            DEFAULT_SEARCH_CAP,
        )
        .unwrap()
        .certificate()
        .unwrap();
        let kernels = all_kernels(cay.graph()).unwrap();
        let k0 = kernels[0].members().clone();
        for (x, k) in kernels.iter().enumerate() {
            assert_eq!(k.members(), &k0.map(&cert.automorphisms()[x]));
        }
        let report = check_kernel_lemmas(cay.graph(), Some(&cert)).unwrap();
        assert!(report.holds(), "{:?}", report.violations);
        // C(5,2) distinct pairs + 5 automorphisms * 5 vertices, and no
        // containment pairs because every kernel is a singleton
        assert_eq!(report.checks, 10 + 25);
        assert!(matches!(
            check_kernel_lemmas(cay.graph(), None),
            Err(Error::MissingCertificate)
        ));
    }

    #[test]
    fn lex_less_matches_vec_order() {
        for a in 0u64..64 {
            for b in 0u64..64 {
                if a.count_ones() == b.count_ones() && a != b {
                    let va = VertexSet::from_mask(6, a);
                    let vb = VertexSet::from_mask(6, b);
                    assert_eq!(lex_less(a, b), va < vb, "{a:b} {b:b}");
                }
            }
        }
    }
}
