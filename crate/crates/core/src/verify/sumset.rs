use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bitset::IndexSet;
use crate::group::FiniteGroup;

use super::report::Collector;

/// Random subset of `0..n`: each element independently with probability ½,
/// always containing `must`, never anything in `exclude`.
fn random_subset(
    rng: &mut ChaCha8Rng,
    n: usize,
    must: Option<usize>,
    exclude: Option<&IndexSet>,
) -> IndexSet {
    loop {
        let mut s = IndexSet::empty(n);
        for x in 0..n {
            if rng.gen_bool(0.5) && !exclude.is_some_and(|e| e.contains(x)) {
                s.insert(x);
            }
        }
        if let Some(m) = must {
            s.insert(m);
        }
        if !s.is_empty() {
            return s;
        }
    }
}

fn pair_key(group: &str, a: &IndexSet, b: &IndexSet) -> String {
    format!("group={group};A={};B={}", a.key(), b.key())
}

fn scherk_instance(name: &str, g: &FiniteGroup, a: &IndexSet, b: &IndexSet, out: &mut Collector) {
    let e = g.identity();
    let binv = g.inverse_of_set(b);
    let meet = a.intersection(&binv);
    if meet.len() != 1 || !meet.contains(e) {
        return;
    }
    let ab = g.product_set(a, b);
    let lhs = ab.len() as i64;
    let rhs = (a.len() + b.len()) as i64 - 1;
    let holds = out.inequality(
        "scherk",
        lhs,
        rhs,
        || pair_key(name, a, b),
        || Some(json!({ "AB": ab })),
    );
    // The Kemperman bound at c = e computed independently must agree.
    let ebinv = g.left_translate_set(e, &binv);
    let k_rhs = (a.len() + b.len() - a.intersection_len(&ebinv)) as i64;
    let agrees = (lhs >= k_rhs) == holds && (lhs == k_rhs) == (lhs == rhs);
    out.property(
        "scherk-kemperman-agreement",
        agrees,
        || format!("{};c={e}", pair_key(name, a, b)),
        || Some(json!({ "scherk_rhs": rhs, "kemperman_rhs": k_rhs })),
    );
}

fn kemperman_instance(
    name: &str,
    g: &FiniteGroup,
    a: &IndexSet,
    b: &IndexSet,
    out: &mut Collector,
) {
    let ab = g.product_set(a, b);
    let binv = g.inverse_of_set(b);
    let lhs = ab.len() as i64;
    for c in ab.iter() {
        let cbinv = g.left_translate_set(c, &binv);
        let meet = a.intersection_len(&cbinv);
        let rhs = (a.len() + b.len() - meet) as i64;
        out.inequality(
            "kemperman",
            lhs,
            rhs,
            || format!("{};c={c}", pair_key(name, a, b)),
            || Some(json!({ "AB": ab, "cB^-1": cbinv })),
        );
    }
}

pub(crate) fn scherk_exhaustive(name: &str, g: &FiniteGroup, out: &mut Collector) {
    let n = g.order();
    // both sets contain the identity (index 0)
    for am in (0u64..1 << (n - 1)).map(|x| x << 1 | 1) {
        let a = IndexSet::from_mask(n, am);
        for bm in (0u64..1 << (n - 1)).map(|x| x << 1 | 1) {
            scherk_instance(name, g, &a, &IndexSet::from_mask(n, bm), out);
        }
    }
}

pub(crate) fn scherk_sampled(
    name: &str,
    g: &FiniteGroup,
    count: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Collector,
) {
    let n = g.order();
    let e = g.identity();
    for _ in 0..count {
        let b = random_subset(rng, n, Some(e), None);
        let mut forbidden = g.inverse_of_set(&b);
        forbidden.remove(e);
        let a = random_subset(rng, n, Some(e), Some(&forbidden));
        scherk_instance(name, g, &a, &b, out);
    }
}

pub(crate) fn kemperman_exhaustive(name: &str, g: &FiniteGroup, out: &mut Collector) {
    let n = g.order();
    for am in 1u64..1 << n {
        let a = IndexSet::from_mask(n, am);
        for bm in 1u64..1 << n {
            kemperman_instance(name, g, &a, &IndexSet::from_mask(n, bm), out);
        }
    }
}

pub(crate) fn kemperman_sampled(
    name: &str,
    g: &FiniteGroup,
    count: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Collector,
) {
    let n = g.order();
    for _ in 0..count {
        let a = random_subset(rng, n, None, None);
        let b = random_subset(rng, n, None, None);
        kemperman_instance(name, g, &a, &b, out);
    }
}
