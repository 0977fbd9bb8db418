//! The kernel-graph `Ω`, with `Ω(v) = Γ(v) ∩ K_v`.

use serde::Serialize;

use crate::automorphism::TransitivityCertificate;
use crate::cayley::{cayley_graph, CayleyGraph};
use crate::error::Result;
use crate::graph::Digraph;
use crate::group::GroupSubset;
use crate::moser::{all_kernels, check_graph_preconditions, Kernel, LemmaReport};

#[derive(Clone, Debug)]
pub struct KernelGraph {
    base: Digraph,
    omega: Digraph,
    kernels: Vec<Kernel>,
    certificate: TransitivityCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub v: usize,
    pub mu: i64,
    pub rhs: i64,
    pub holds: bool,
    pub tight: bool,
}

impl KernelGraph {
    pub fn base(&self) -> &Digraph {
        &self.base
    }

    pub fn omega(&self) -> &Digraph {
        &self.omega
    }

    pub fn kernels(&self) -> &[Kernel] {
        &self.kernels
    }

    pub fn certificate(&self) -> &TransitivityCertificate {
        &self.certificate
    }
}

pub fn build_kernel_graph(
    g: &Digraph,
    cert: Option<&TransitivityCertificate>,
) -> Result<KernelGraph> {
    check_graph_preconditions(g, cert)?;
    let kernels = all_kernels(g)?;
    let n = g.vertex_count();
    let edges = (0..n).flat_map(|v| {
        g.out_set(v)
            .intersection(kernels[v].members())
            .to_vec()
            .into_iter()
            .map(move |w| (v, w))
    });
    let omega = Digraph::from_edges(n, edges.collect::<Vec<_>>())?;
    Ok(KernelGraph {
        base: g.clone(),
        omega,
        kernels,
        certificate: cert.cloned().expect("checked above"),
    })
}

/// Checks that base automorphisms preserve `Ω`, that
/// `Ω⁻(v) ∖ {v} ⊆ ∂(K_v)`, that `Ω⁻(v) ∩ Γ(v) = {v}`, and that
/// `|Ω(v)| = |Ω⁻(v)|`.
pub fn check_omega_lemma(kg: &KernelGraph) -> LemmaReport {
    let (g, omega) = (&kg.base, &kg.omega);
    let n = g.vertex_count();
    let mut report = LemmaReport::default();
    for (i, phi) in kg.certificate.automorphisms().iter().enumerate() {
        report.check(
            omega.is_automorphism(phi),
            "omega-automorphism",
            &[0, i],
            || format!("base automorphism sending 0 to {i} does not preserve omega"),
        );
    }
    for v in 0..n {
        let mut back = omega.in_set(v).clone();
        back.remove(v);
        let boundary = g.boundary(kg.kernels[v].members());
        report.check(back.is_subset(&boundary), "omega-in-boundary", &[v], || {
            format!("Ω⁻({v})∖{{{v}}} = {back} not within ∂(K_{v}) = {boundary}")
        });
        let meet = omega.in_set(v).intersection(g.out_set(v));
        report.check(
            meet.len() == 1 && meet.contains(v),
            "omega-in-meets-out",
            &[v],
            || format!("Ω⁻({v}) ∩ Γ({v}) = {meet}"),
        );
        report.check(
            omega.out_degree(v) == omega.in_degree(v),
            "omega-regular",
            &[v],
            || {
                format!(
                    "|Ω({v})| = {} but |Ω⁻({v})| = {}",
                    omega.out_degree(v),
                    omega.in_degree(v)
                )
            },
        );
    }
    report
}

/// `μ(v) ≥ |Γ(v)| − |Ω(v)| + |Ω⁻(v)| − 1`.
pub fn mainomega_bound(kg: &KernelGraph, v: usize) -> BoundRecord {
    let mu = kg.base.boundary(kg.kernels[v].members()).len() as i64;
    let rhs = kg.base.out_degree(v) as i64 - kg.omega.out_degree(v) as i64
        + kg.omega.in_degree(v) as i64
        - 1;
    BoundRecord {
        v,
        mu,
        rhs,
        holds: mu >= rhs,
        tight: mu == rhs,
    }
}

/// For a Cayley graph, `Ω` should equal `Cay(G, S ∩ K_1)`.
pub fn cayley_omega(kg: &KernelGraph, cay: &CayleyGraph) -> Result<Digraph> {
    let identity = cay.group().identity();
    let s = cay
        .connection_set()
        .members()
        .intersection(kg.kernels[identity].members());
    let subset = GroupSubset::from_set(cay.group().clone(), s)?;
    Ok(cayley_graph(&subset)?.into_graph())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{certify_transitivity, DEFAULT_SEARCH_CAP};
    use crate::cayley::circulant;

    fn build(n: usize, s: &[usize]) -> (CayleyGraph, KernelGraph) {
        let cay = circulant(n, s).unwrap();
        let cert = certify_transitivity(
            cay.graph(),
            Some(&cay.translation_hint()),
            DEFAULT_SEARCH_CAP,
        )
        .unwrap()
        .certificate()
        .unwrap();
        let kg = build_kernel_graph(cay.graph(), Some(&cert)).unwrap();
        (cay, kg)
    }

    #[test]
    fn directed_cycle_has_loops_only_omega() {
        let (cay, kg) = build(5, &[0, 1]);
        for v in 0..5 {
            assert_eq!(kg.omega().out_neighbors(v), &[v]);
        }
        assert_eq!(kg.omega(), &cayley_omega(&kg, &cay).unwrap());
        let b = mainomega_bound(&kg, 0);
        assert_eq!((b.mu, b.rhs, b.tight), (1, 1, true));
        let report = check_omega_lemma(&kg);
        assert!(report.holds(), "{:?}", report.violations);
    }

    #[test]
    fn loops_only_base() {
        let (_, kg) = build(4, &[0]);
        let b = mainomega_bound(&kg, 2);
        assert_eq!((b.mu, b.rhs), (0, 0));
        assert!(check_omega_lemma(&kg).holds());
    }

    #[test]
    fn circulant_6_full_check() {
        let (cay, kg) = build(6, &[0, 1, 3]);
        let report = check_omega_lemma(&kg);
        assert!(report.holds(), "{:?}", report.violations);
        assert_eq!(kg.omega(), &cayley_omega(&kg, &cay).unwrap());
        for v in 0..6 {
            assert!(kg.omega().out_set(v).is_subset(kg.base().out_set(v)));
            assert!(kg.omega().has_edge(v, v));
            let b = mainomega_bound(&kg, v);
            assert!(b.holds);
            // finite vertex-transitive: rhs collapses to |Γ(v)| - 1
            assert_eq!(b.rhs, 2);
        }
    }

    #[test]
    fn requires_certificate_and_reflexive() {
        let cay = circulant(5, &[0, 1]).unwrap();
        assert!(build_kernel_graph(cay.graph(), None).is_err());
        let loopless = circulant(5, &[1]).unwrap();
        let cert = TransitivityCertificate::asserted();
        assert!(build_kernel_graph(loopless.graph(), Some(&cert)).is_err());
    }
}
