use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bitset::IndexSet;
use crate::catalog::GraphInstance;
use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexSet};
use crate::kernel_graph::{build_kernel_graph, cayley_omega, check_omega_lemma, mainomega_bound};
use crate::mader::{mader_cycles, verify_cycle_system};
use crate::moser::{
    all_kernels, all_molecules, check_kernel_lemmas_with, molecule_intersection, mu_brute, mu_flow,
    MoserInstance,
};

use super::report::Collector;

/// Largest graph the exhaustive main sweep can hold subset tables for.
pub const MAIN_TABLE_CAP: usize = 26;
/// Largest graph for exhaustive submodularity and boundary-inclusion sweeps.
pub const PAIR_TABLE_CAP: usize = 16;
pub const SUBSET_TABLE_CAP: usize = 24;

fn require_reflexive(g: &Digraph) -> Result<()> {
    if g.is_reflexive() {
        Ok(())
    } else {
        Err(Error::NotReflexive)
    }
}

fn size_cap(what: &'static str, cap: usize, got: usize) -> Result<()> {
    if got > cap {
        Err(Error::SizeCap { what, cap, got })
    } else {
        Ok(())
    }
}

fn mask_key(n: usize, mask: u64) -> String {
    IndexSet::from_mask(n, mask).key()
}

pub(crate) fn main_exhaustive(inst: &GraphInstance, out: &mut Collector) -> Result<()> {
    let g = &inst.graph;
    require_reflexive(g)?;
    inst.certify()?;
    let n = g.vertex_count();
    size_cap("exhaustive main sweep", MAIN_TABLE_CAP, n)?;
    let out_m = g.out_masks().expect("capped");
    let in_m = g.in_masks().expect("capped");
    let k = n - 1;
    let mut image = vec![0u64; 1 << k];
    let mut members = vec![0u64; 1 << k];
    for v in 0..n {
        let free: Vec<usize> = (0..n).filter(|&x| x != v).collect();
        let back = in_m[v];
        let compressed_back = free
            .iter()
            .enumerate()
            .filter(|&(_, &x)| back >> x & 1 == 1)
            .fold(0usize, |acc, (i, _)| acc | 1 << i);
        let degree = g.out_degree(v) as i64;
        image[0] = out_m[v];
        members[0] = 1 << v;
        for sub in 0usize..1 << k {
            if sub > 0 {
                let low = sub.trailing_zeros() as usize;
                let rest = sub & (sub - 1);
                image[sub] = image[rest] | out_m[free[low]];
                members[sub] = members[rest] | 1 << free[low];
            }
            let (f, img) = (members[sub], image[sub]);
            let lhs = img.count_ones() as i64;
            let rhs = f.count_ones() as i64 + degree - (f & back).count_ones() as i64;
            let key = || format!("graph={};v={v};F={}", inst.key, mask_key(n, f));
            out.inequality("main", lhs, rhs, key, || {
                Some(json!({ "image": mask_key(n, img) }))
            });
            let reduced = sub & !compressed_back;
            out.inequality(
                "main-reduction",
                lhs,
                image[reduced].count_ones() as i64,
                key,
                || Some(json!({ "reduced": mask_key(n, members[reduced]) })),
            );
        }
    }
    Ok(())
}

pub(crate) fn main_sampled(
    inst: &GraphInstance,
    count: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Collector,
) -> Result<()> {
    let g = &inst.graph;
    require_reflexive(g)?;
    inst.certify()?;
    let n = g.vertex_count();
    for _ in 0..count {
        let v = rng.gen_range(0..n);
        let mut f = IndexSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)));
        f.insert(v);
        let img = g.image(&f);
        let lhs = img.len() as i64;
        let rhs = (f.len() + g.out_degree(v) - g.in_set(v).intersection_len(&f)) as i64;
        let key = || format!("graph={};v={v};F={}", inst.key, f.key());
        out.inequality("main", lhs, rhs, key, || {
            Some(json!({ "image": img.key() }))
        });
        let mut reduced = f.difference(g.in_set(v));
        reduced.insert(v);
        let reduced_image = g.image(&reduced).len() as i64;
        out.inequality("main-reduction", lhs, reduced_image, key, || {
            Some(json!({ "reduced": reduced.key() }))
        });
    }
    Ok(())
}

fn boundary_sizes(g: &Digraph) -> Vec<i64> {
    let n = g.vertex_count();
    (0u64..1 << n)
        .map(|m| g.boundary(&IndexSet::from_mask(n, m)).len() as i64)
        .collect()
}

fn submodular_instance(key: &str, n: usize, b: &[i64], x: u64, y: u64, out: &mut Collector) {
    let lhs = b[x as usize] + b[y as usize];
    let rhs = b[(x | y) as usize] + b[(x & y) as usize];
    out.inequality(
        "submodular",
        lhs,
        rhs,
        || format!("graph={key};X={};Y={}", mask_key(n, x), mask_key(n, y)),
        || None,
    );
}

pub(crate) fn submodular_exhaustive(inst: &GraphInstance, out: &mut Collector) -> Result<()> {
    let g = &inst.graph;
    require_reflexive(g)?;
    let n = g.vertex_count();
    size_cap("exhaustive submodularity sweep", PAIR_TABLE_CAP, n)?;
    let b = boundary_sizes(g);
    for x in 0u64..1 << n {
        for y in x..1 << n {
            submodular_instance(&inst.key, n, &b, x, y, out);
        }
    }
    Ok(())
}

fn random_set(rng: &mut ChaCha8Rng, n: usize) -> VertexSet {
    IndexSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)))
}

pub(crate) fn submodular_sampled(
    inst: &GraphInstance,
    count: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Collector,
) -> Result<()> {
    let g = &inst.graph;
    require_reflexive(g)?;
    let n = g.vertex_count();
    let size = |s: &VertexSet| g.boundary(s).len() as i64;
    for _ in 0..count {
        let (x, y) = (random_set(rng, n), random_set(rng, n));
        let lhs = size(&x) + size(&y);
        let rhs = size(&x.union(&y)) + size(&x.intersection(&y));
        out.inequality(
            "submodular",
            lhs,
            rhs,
            || format!("graph={};X={};Y={}", inst.key, x.key(), y.key()),
            || None,
        );
    }
    Ok(())
}

fn inclusion_instance(key: &str, g: &Digraph, f: &VertexSet, out: &mut Collector) {
    let lhs = g.neg_boundary(&g.exterior(f));
    let rhs = g.boundary(f);
    out.property(
        "boundary-inclusion",
        lhs.is_subset(&rhs),
        || format!("graph={key};F={}", f.key()),
        || Some(json!({ "neg_boundary_of_exterior": lhs, "boundary": rhs })),
    );
}

pub(crate) fn inclusion_exhaustive(inst: &GraphInstance, out: &mut Collector) -> Result<()> {
    let g = &inst.graph;
    require_reflexive(g)?;
    let n = g.vertex_count();
    size_cap("exhaustive boundary-inclusion sweep", SUBSET_TABLE_CAP, n)?;
    for m in 0u64..1 << n {
        inclusion_instance(&inst.key, g, &IndexSet::from_mask(n, m), out);
    }
    Ok(())
}

pub(crate) fn inclusion_sampled(
    inst: &GraphInstance,
    count: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Collector,
) -> Result<()> {
    let g = &inst.graph;
    require_reflexive(g)?;
    for _ in 0..count {
        let f = random_set(rng, g.vertex_count());
        inclusion_instance(&inst.key, g, &f, out);
    }
    Ok(())
}

/// A union or intersection of two members that is missing from the family,
/// if any. A family of `2^k` distinct sets between its meet and join of
/// rank `k` is the whole interval and needs no pairwise pass.
fn lattice_gap(g: &Digraph, family: &[&VertexSet]) -> Option<VertexSet> {
    let set: BTreeSet<&VertexSet> = family.iter().copied().collect();
    let bottom = family
        .iter()
        .fold(g.all_vertices(), |acc, m| acc.intersection(m));
    let top = family.iter().fold(g.empty_set(), |acc, m| acc.union(m));
    let rank = top.len() - bottom.len();
    if set.len() == family.len() && rank < 64 && family.len() as u64 == 1 << rank {
        return None;
    }
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            for c in [a.intersection(b), a.union(b)] {
                if !set.contains(&c) {
                    return Some(c);
                }
            }
        }
    }
    None
}

/// Kernel lemmas plus the flow/brute-force oracle comparison and the
/// molecule lattice checks, for every vertex.
pub(crate) fn lemmas(inst: &GraphInstance, out: &mut Collector) -> Result<()> {
    let g = &inst.graph;
    require_reflexive(g)?;
    let cert = inst.certify()?;
    let kernels = all_kernels(g)?;
    let graph_key = format!("graph={}", inst.key);
    out.lemmas(
        "kernel-lemmas",
        &graph_key,
        check_kernel_lemmas_with(g, &cert, &kernels),
    );
    for (v, kernel) in kernels.iter().enumerate() {
        let mi = MoserInstance::new(g, v)?;
        let key = || format!("{graph_key};v={v}");
        let flow = mu_flow(&mi)?;
        let brute = mu_brute(&mi)?;
        out.property("mu-oracle", flow.value == brute.value, key, || {
            Some(json!({ "flow": flow.value, "brute": brute.value, "flow_cut": flow.cut }))
        });
        let meet = molecule_intersection(&mi)?;
        let k = kernel.members();
        out.property(
            "kernel-oracle",
            k == &brute.witness.members && k == &meet && k == &flow.witness.members,
            key,
            || Some(json!({ "kernel": k, "brute": brute.witness.members, "intersection": meet })),
        );
        let molecules = all_molecules(&mi)?;
        let first_bad = molecules.iter().find(|m| !k.is_subset(&m.members));
        out.property("kernel-in-molecules", first_bad.is_none(), key, || {
            first_bad.map(|m| json!({ "kernel": k, "molecule": m.members }))
        });
        let missing = lattice_gap(g, &molecules.iter().map(|m| &m.members).collect::<Vec<_>>());
        out.property("molecule-lattice", missing.is_none(), key, || {
            missing
                .as_ref()
                .map(|c| json!({ "not_a_molecule": c, "molecules": molecules.len() }))
        });
    }
    Ok(())
}

pub(crate) fn mainomega(inst: &GraphInstance, out: &mut Collector) -> Result<()> {
    let g = &inst.graph;
    require_reflexive(g)?;
    let cert = inst.certify()?;
    let kg = build_kernel_graph(g, Some(&cert))?;
    let graph_key = format!("graph={}", inst.key);
    out.lemmas("omega-lemmas", &graph_key, check_omega_lemma(&kg));
    for v in 0..g.vertex_count() {
        let b = mainomega_bound(&kg, v);
        out.inequality("mainomega", b.mu, b.rhs, || format!("{graph_key};v={v}"), || {
            Some(json!({ "omega_out": kg.omega().out_degree(v), "omega_in": kg.omega().in_degree(v) }))
        });
    }
    if let Some(cay) = &inst.cayley {
        let expected = cayley_omega(&kg, cay)?;
        out.property("cayley-omega", &expected == kg.omega(), || graph_key.clone(), || {
            Some(json!({ "omega": kg.omega().edges().collect::<Vec<_>>(), "cayley": expected.edges().collect::<Vec<_>>() }))
        });
    }
    Ok(())
}

/// Runs on the loopless version of the graph.
pub(crate) fn mader(inst: &GraphInstance, out: &mut Collector) -> Result<()> {
    let inst = inst.clone().without_loops()?;
    let g = &inst.graph;
    let cert = inst.certify()?;
    for v in 0..g.vertex_count() {
        let key = || format!("graph={};v={v}", inst.key);
        match mader_cycles(g, Some(&cert), v) {
            Ok(cs) => {
                let verdict = verify_cycle_system(g, &cs);
                out.property("mader", verdict.is_ok(), key, || {
                    Some(json!({ "cycles": cs.cycles, "error": verdict.err() }))
                });
            }
            Err(Error::Internal(msg)) => {
                out.property("mader", false, key, || Some(json!({ "error": msg })));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_graph_spec;
    use crate::verify::{RecordLevel, Theorem};
    use rand::SeedableRng;

    fn run(spec: &str, f: impl Fn(&GraphInstance, &mut Collector) -> Result<()>) -> Collector {
        let inst = parse_graph_spec(spec).unwrap();
        let mut out = Collector::new(RecordLevel::All, Theorem::Main);
        f(&inst, &mut out).unwrap();
        out
    }

    #[test]
    fn main_examples_on_circulant_7() {
        let out = run("circulant:7:0,1,3", main_exhaustive);
        let (summary, records) = out.into_parts();
        assert_eq!(summary.by_check["main"].instances, 7 * 64);
        assert_eq!(summary.total.violations, 0);
        let single = records
            .iter()
            .find(|r| r.check == "main" && r.key.ends_with("v=0;F=0"))
            .unwrap();
        assert!(single.tight);
        let everything = records
            .iter()
            .find(|r| r.check == "main" && r.key.ends_with("v=0;F=0,1,2,3,4,5,6"))
            .unwrap();
        assert!(everything.tight);
    }

    #[test]
    fn exhaustive_and_sampled_main_agree_on_values() {
        let inst = parse_graph_spec("cayley:D4:0,1,4").unwrap();
        let mut all = Collector::new(RecordLevel::All, Theorem::Main);
        main_exhaustive(&inst, &mut all).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut some = Collector::new(RecordLevel::All, Theorem::Main);
        main_sampled(&inst, 200, &mut rng, &mut some).unwrap();
        let (_, all) = all.into_parts();
        let index: std::collections::HashMap<(String, String), (Option<i64>, Option<i64>)> = all
            .into_iter()
            .map(|r| ((r.key, r.check), (r.lhs, r.rhs)))
            .collect();
        let (_, some) = some.into_parts();
        for r in some {
            assert_eq!(
                index[&(r.key.clone(), r.check.clone())],
                (r.lhs, r.rhs),
                "{}",
                r.key
            );
        }
    }

    #[test]
    fn main_requires_reflexive_and_transitive() {
        let inst = parse_graph_spec("circulant:5:1").unwrap();
        let mut out = Collector::new(RecordLevel::All, Theorem::Main);
        assert!(matches!(
            main_exhaustive(&inst, &mut out),
            Err(Error::NotReflexive)
        ));
    }

    #[test]
    fn lattice_gap_finds_missing_joins() {
        let g = parse_graph_spec("circulant:4:0").unwrap().graph;
        let sets: Vec<VertexSet> = [vec![0], vec![0, 1], vec![0, 2]]
            .iter()
            .map(|xs| g.vertex_set(xs.iter().copied()).unwrap())
            .collect();
        let refs: Vec<&VertexSet> = sets.iter().collect();
        assert_eq!(lattice_gap(&g, &refs).unwrap().to_vec(), vec![0, 1, 2]);
        let full: Vec<VertexSet> = (0u64..4)
            .map(|m| IndexSet::from_mask(4, m << 1 | 1))
            .collect();
        assert!(lattice_gap(&g, &full.iter().collect::<Vec<_>>()).is_none());
        // right count, but a duplicate hides a missing set
        let dup = [&full[0], &full[1], &full[1], &full[2]];
        assert!(lattice_gap(&g, &dup).is_some());
    }

    #[test]
    fn small_graph_suites_are_clean() {
        for spec in [
            "circulant:6:0,1,3",
            "cayley:D3:0,1,3",
            "circulant:8:0,2,4,6",
            "circulant:1:0",
        ] {
            for f in [
                submodular_exhaustive,
                inclusion_exhaustive,
                lemmas,
                mainomega,
                mader,
            ] {
                let (summary, records) = run(spec, f).into_parts();
                assert_eq!(summary.total.violations, 0, "{spec}: {records:?}");
            }
        }
    }
}
