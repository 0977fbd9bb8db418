//! Vertex-transitivity certificates.
//!
//! A certificate stores, for every vertex `y`, one automorphism sending the
//! base vertex 0 to `y`. Any ordered pair `(x, y)` is then covered by
//! composing one stored map with the inverse of another.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::group::FiniteGroup;

pub const DEFAULT_SEARCH_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    CayleyTranslations,
    AutomorphismSearch,
    Asserted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityCertificate {
    kind: CertificateKind,
    /// `automorphisms[y]` maps vertex 0 to `y`. Empty for asserted certificates.
    automorphisms: Vec<Vec<usize>>,
}

impl TransitivityCertificate {
    /// A certificate without witnesses. Checks that iterate over
    /// automorphisms are vacuous for it.
    pub fn asserted() -> Self {
        Self {
            kind: CertificateKind::Asserted,
            automorphisms: Vec::new(),
        }
    }

    pub fn kind(&self) -> CertificateKind {
        self.kind
    }

    pub fn automorphisms(&self) -> &[Vec<usize>] {
        &self.automorphisms
    }

    /// Re-checks every stored permutation edge by edge.
    pub fn verify(&self, g: &Digraph) -> bool {
        if self.kind == CertificateKind::Asserted {
            return self.automorphisms.is_empty();
        }
        self.automorphisms.len() == g.vertex_count()
            && self
                .automorphisms
                .iter()
                .enumerate()
                .all(|(y, p)| p.first() == Some(&y) && g.is_automorphism(p))
    }
}

/// Left translations `x ↦ cx` of the group a Cayley graph was built on.
#[derive(Clone, Debug)]
pub struct TranslationHint {
    group: Arc<FiniteGroup>,
}

impl TranslationHint {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        Self { group }
    }

    fn translations(&self) -> Vec<Vec<usize>> {
        let n = self.group.order();
        (0..n)
            .map(|c| (0..n).map(|x| self.group.mul(c, x)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transitivity {
    Certified(TransitivityCertificate),
    NotVertexTransitive { from: usize, to: usize },
}

impl Transitivity {
    pub fn certificate(self) -> Result<TransitivityCertificate> {
        match self {
            Self::Certified(c) => Ok(c),
            Self::NotVertexTransitive { from, to } => Err(Error::NotVertexTransitive { from, to }),
        }
    }
}

pub fn certify_transitivity(
    g: &Digraph,
    hint: Option<&TranslationHint>,
    search_cap: usize,
) -> Result<Transitivity> {
    if let Some(hint) = hint {
        if hint.group.order() == g.vertex_count() {
            let perms = hint.translations();
            if perms.iter().all(|p| g.is_automorphism(p)) {
                return Ok(Transitivity::Certified(TransitivityCertificate {
                    kind: CertificateKind::CayleyTranslations,
                    automorphisms: perms,
                }));
            }
        }
    }
    let n = g.vertex_count();
    if n > search_cap {
        return Err(Error::SizeCap {
            what: "automorphism search",
            cap: search_cap,
            got: n,
        });
    }
    let search = Search::new(g);
    let mut automorphisms = Vec::with_capacity(n);
    for y in 0..n {
        match search.find(0, y) {
            Some(p) => automorphisms.push(p),
            None => return Ok(Transitivity::NotVertexTransitive { from: 0, to: y }),
        }
    }
    Ok(Transitivity::Certified(TransitivityCertificate {
        kind: CertificateKind::AutomorphismSearch,
        automorphisms,
    }))
}

/// Out-degree, in-degree, loop, sorted out- and in-neighbour degree codes.
type VertexInvariant = (usize, usize, bool, Vec<usize>, Vec<usize>);

struct Search<'a> {
    g: &'a Digraph,
    invariant: Vec<VertexInvariant>,
    order: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Digraph) -> Self {
        let n = g.vertex_count();
        let invariant = (0..n)
            .map(|v| {
                let mut out: Vec<usize> = g
                    .out_neighbors(v)
                    .iter()
                    .map(|&w| g.out_degree(w) * n + g.in_degree(w))
                    .collect();
                let mut inn: Vec<usize> = g
                    .in_neighbors(v)
                    .iter()
                    .map(|&w| g.out_degree(w) * n + g.in_degree(w))
                    .collect();
                out.sort_unstable();
                inn.sort_unstable();
                (g.out_degree(v), g.in_degree(v), g.has_edge(v, v), out, inn)
            })
            .collect();
        // BFS over the underlying undirected graph so each newly placed vertex
        // is adjacent to something already placed.
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &w in g.out_neighbors(u).iter().chain(g.in_neighbors(u)) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        Self {
            g,
            invariant,
            order,
        }
    }

    fn find(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let n = self.g.vertex_count();
        if self.invariant[from] != self.invariant[to] {
            return None;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[from] = to;
        used[to] = true;
        let rest: Vec<usize> = self.order.iter().copied().filter(|&x| x != from).collect();
        let mut placed = vec![from];
        if self.extend(&rest, 0, &mut map, &mut used, &mut placed) {
            Some(map)
        } else {
            None
        }
    }

    fn consistent(&self, x: usize, c: usize, placed: &[usize], map: &[usize]) -> bool {
        placed.iter().all(|&p| {
            self.g.has_edge(x, p) == self.g.has_edge(c, map[p])
                && self.g.has_edge(p, x) == self.g.has_edge(map[p], c)
        })
    }

    fn extend(
        &self,
        rest: &[usize],
        depth: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        placed: &mut Vec<usize>,
    ) -> bool {
        let Some(&x) = rest.get(depth) else {
            return true;
        };
        for c in 0..self.g.vertex_count() {
            if used[c]
                || self.invariant[c] != self.invariant[x]
                || !self.consistent(x, c, placed, map)
            {
                continue;
            }
            map[x] = c;
            used[c] = true;
            placed.push(x);
            if self.extend(rest, depth + 1, map, used, placed) {
                return true;
            }
            placed.pop();
            used[c] = false;
            map[x] = usize::MAX;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::circulant;

    #[test]
    fn cayley_hint_gives_translation_certificate() {
        let cay = circulant(6, &[0, 1, 3]).unwrap();
        let cert = certify_transitivity(
            cay.graph(),
            Some(&cay.translation_hint()),
            DEFAULT_SEARCH_CAP,
        )
        .unwrap()
        .certificate()
        .unwrap();
        assert_eq!(cert.kind(), CertificateKind::CayleyTranslations);
        assert!(cert.verify(cay.graph()));
    }

    #[test]
    fn directed_edge_is_not_transitive() {
        let g = Digraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(
            certify_transitivity(&g, None, DEFAULT_SEARCH_CAP).unwrap(),
            Transitivity::NotVertexTransitive { from: 0, to: 1 }
        );
    }

    #[test]
    fn five_cycle_by_search() {
        let cay = circulant(5, &[1]).unwrap();
        let cert = certify_transitivity(cay.graph(), None, DEFAULT_SEARCH_CAP)
            .unwrap()
            .certificate()
            .unwrap();
        assert_eq!(cert.kind(), CertificateKind::AutomorphismSearch);
        assert!(cert.verify(cay.graph()));
        // only rotations exist for the directed 5-cycle
        for (y, p) in cert.automorphisms().iter().enumerate() {
            assert_eq!(p, &(0..5).map(|x| (x + y) % 5).collect::<Vec<_>>());
        }
    }

    #[test]
    fn regular_but_not_transitive() {
        // K3 beside a directed 3-cycle: out-degrees differ.
        let g = Digraph::from_edges(
            6,
            [
                (0, 1),
                (1, 0),
                (1, 2),
                (2, 1),
                (0, 2),
                (2, 0),
                (3, 4),
                (4, 5),
                (5, 3),
            ],
        )
        .unwrap();
        assert!(matches!(
            certify_transitivity(&g, None, DEFAULT_SEARCH_CAP).unwrap(),
            Transitivity::NotVertexTransitive { .. }
        ));
        // Directed 3-cycle beside a directed 4-cycle: every local invariant
        // agrees, so only the backtracking rules it out.
        let c3_c4 =
            Digraph::from_edges(7, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3)])
                .unwrap();
        assert_eq!(
            certify_transitivity(&c3_c4, None, DEFAULT_SEARCH_CAP).unwrap(),
            Transitivity::NotVertexTransitive { from: 0, to: 3 }
        );
        let two_triangles =
            Digraph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let cert = certify_transitivity(&two_triangles, None, DEFAULT_SEARCH_CAP)
            .unwrap()
            .certificate()
            .unwrap();
        assert!(cert.verify(&two_triangles));
    }

    #[test]
    fn search_cap_enforced_without_hint() {
        let cay = circulant(70, &[1]).unwrap();
        assert!(matches!(
            certify_transitivity(cay.graph(), None, DEFAULT_SEARCH_CAP),
            Err(Error::SizeCap { .. })
        ));
        assert!(certify_transitivity(
            cay.graph(),
            Some(&cay.translation_hint()),
            DEFAULT_SEARCH_CAP
        )
        .is_ok());
    }

    #[test]
    fn mismatched_hint_falls_back_to_search() {
        let cay = circulant(4, &[1]).unwrap();
        let other = circulant(4, &[0, 1]).unwrap();
        let path = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let res =
            certify_transitivity(&path, Some(&cay.translation_hint()), DEFAULT_SEARCH_CAP).unwrap();
        assert!(matches!(res, Transitivity::NotVertexTransitive { .. }));
        assert!(certify_transitivity(other.graph(), Some(&cay.translation_hint()), 64).is_ok());
    }

    #[test]
    fn asserted_certificate_has_no_witnesses() {
        let cert = TransitivityCertificate::asserted();
        assert_eq!(cert.kind(), CertificateKind::Asserted);
        assert!(cert.automorphisms().is_empty());
    }
}
