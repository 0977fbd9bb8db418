//! Finite groups given by multiplication tables, the standard small families,
//! and set arithmetic (Minkowski products, inverse sets, translations).

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitset::IndexSet;
use crate::error::{Error, Result};

/// Orders up to this bound get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOCIATIVITY_MAX: usize = 64;
/// Random triples checked for larger orders.
pub const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 10_000;
pub const SYMMETRIC_MAX_DEGREE: usize = 5;

/// A finite group as a dense Cayley table. Element 0 is the identity.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    #[serde(skip)]
    mul: Vec<usize>,
    #[serde(skip)]
    inv: Vec<usize>,
    labels: Vec<String>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates a row-major table and builds the group.
    pub fn from_table(
        name: impl Into<String>,
        order: usize,
        mul: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::MalformedTable("order must be positive".into()));
        }
        if mul.len() != order * order {
            return Err(Error::MalformedTable(format!(
                "expected {} entries, got {}",
                order * order,
                mul.len()
            )));
        }
        if let Some(&bad) = mul.iter().find(|&&x| x >= order) {
            return Err(Error::MalformedTable(format!(
                "entry {bad} out of range for order {order}"
            )));
        }
        let at = |a: usize, b: usize| mul[a * order + b];
        for x in 0..order {
            if at(0, x) != x || at(x, 0) != x {
                return Err(Error::NotAGroup(
                    match (0..order).find(|&e| (0..order).all(|y| at(e, y) == y && at(y, e) == y)) {
                        Some(e) => format!("identity is element {e}; it must be element 0"),
                        None => "no two-sided identity".into(),
                    },
                ));
            }
        }
        let mut inv = vec![usize::MAX; order];
        for (x, slot) in inv.iter_mut().enumerate() {
            match (0..order).find(|&y| at(x, y) == 0 && at(y, x) == 0) {
                Some(y) => *slot = y,
                None => {
                    return Err(Error::NotAGroup(format!(
                        "element {x} has no two-sided inverse"
                    )))
                }
            }
        }
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if at(at(a, b), c) != at(a, at(b, c)) {
                return Err(Error::NotAGroup(format!(
                    "associativity fails at ({a}, {b}, {c})"
                )));
            }
            Ok(())
        };
        if order <= EXHAUSTIVE_ASSOCIATIVITY_MAX {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6a09_e667_f3bc_c908);
            for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
                check(
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                )?;
            }
        }
        let labels = match labels {
            Some(l) if l.len() == order => l,
            Some(l) => {
                return Err(Error::MalformedTable(format!(
                    "{} labels for order {order}",
                    l.len()
                )))
            }
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        Ok(Self {
            name: name.into(),
            order,
            mul,
            inv,
            labels,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedFamily("Z0".into()));
        }
        let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_table(format!("Z{n}"), n, mul, None)
    }

    /// Dihedral group of order `2n`; element `i + n*j` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedFamily(format!("D{n} (need n >= 2)")));
        }
        let order = 2 * n;
        let mut mul = vec![0; order * order];
        for x in 0..order {
            let (a, s) = (x % n, x / n);
            for y in 0..order {
                let (b, t) = (y % n, y / n);
                // r^a s^s r^b s^t = r^(a ± b) s^(s+t)
                let rot = if s == 0 { (a + b) % n } else { (a + n - b) % n };
                mul[x * order + y] = rot + n * ((s + t) % 2);
            }
        }
        let labels = (0..order)
            .map(|x| {
                let (a, s) = (x % n, x / n);
                match (a, s) {
                    (0, 0) => "e".to_string(),
                    (1, 0) => "r".to_string(),
                    (a, 0) => format!("r{a}"),
                    (0, _) => "s".to_string(),
                    (1, _) => "rs".to_string(),
                    (a, _) => format!("r{a}s"),
                }
            })
            .collect();
        Self::from_table(format!("D{n}"), order, mul, Some(labels))
    }

    /// Symmetric group on `n` points, permutations in lexicographic order
    /// (identity first). Product `p*q` applies `q` first.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > SYMMETRIC_MAX_DEGREE {
            return Err(Error::UnsupportedFamily(format!(
                "S{n} (supported 1..={SYMMETRIC_MAX_DEGREE})"
            )));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let order = perms.len();
        let mut mul = vec![0; order * order];
        let mut buf = vec![0; n];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                for (k, slot) in buf.iter_mut().enumerate() {
                    *slot = p[q[k]];
                }
                mul[i * order + j] = index(&buf);
            }
        }
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect::<String>())
            .collect();
        Self::from_table(format!("S{n}"), order, mul, Some(labels))
    }

    /// Quaternion group; indices 0..8 are 1, -1, i, -i, j, -j, k, -k.
    pub fn quaternion8() -> Result<Self> {
        // unit index 0..4 = 1,i,j,k with sign bit
        const UNIT_MUL: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let mut mul = vec![0; 64];
        for x in 0..8 {
            let (ux, sx) = (x / 2, x % 2 == 1);
            for y in 0..8 {
                let (uy, sy) = (y / 2, y % 2 == 1);
                let (u, s) = UNIT_MUL[ux][uy];
                let neg = s ^ sx ^ sy;
                mul[x * 8 + y] = 2 * u + usize::from(neg);
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::from_table("Q8", 8, mul, Some(labels))
    }

    /// `G x H` with pair `(a, b)` at index `a*|H| + b`.
    pub fn direct_product(g: &Self, h: &Self) -> Result<Self> {
        let (m, n) = (g.order, h.order);
        let order = m * n;
        let mut mul = vec![0; order * order];
        for x in 0..order {
            for y in 0..order {
                mul[x * order + y] = g.mul(x / n, y / n) * n + h.mul(x % n, y % n);
            }
        }
        let labels = (0..order)
            .map(|x| format!("({},{})", g.labels[x / n], h.labels[x % n]))
            .collect();
        Self::from_table(format!("{}x{}", g.name, h.name), order, mul, Some(labels))
    }

    /// Parses the plain-text Cayley table format.
    pub fn parse_table(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut order: Option<usize> = None;
        let mut rows: Vec<usize> = Vec::new();
        let mut row_count = 0;
        let mut labels: Vec<Option<String>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut parts = rest.trim().splitn(2, char::is_whitespace);
                if let (Some(idx), Some(label)) = (parts.next(), parts.next()) {
                    if let (Ok(i), Some(n)) = (idx.parse::<usize>(), order) {
                        if i >= n {
                            return Err(Error::MalformedTable(format!(
                                "line {}: label index {i} out of range",
                                lineno + 1
                            )));
                        }
                        labels[i] = Some(label.trim().to_string());
                    }
                }
                continue;
            }
            let parse = |tok: &str| {
                tok.parse::<usize>().map_err(|_| {
                    Error::MalformedTable(format!("line {}: bad integer `{tok}`", lineno + 1))
                })
            };
            match order {
                None => {
                    let n = parse(line)?;
                    if n == 0 {
                        return Err(Error::MalformedTable("order must be positive".into()));
                    }
                    order = Some(n);
                    labels = vec![None; n];
                }
                Some(n) => {
                    if row_count == n {
                        return Err(Error::MalformedTable(format!(
                            "line {}: more than {n} rows",
                            lineno + 1
                        )));
                    }
                    let row = line
                        .split_whitespace()
                        .map(parse)
                        .collect::<Result<Vec<_>>>()?;
                    if row.len() != n {
                        return Err(Error::MalformedTable(format!(
                            "line {}: expected {n} entries, got {}",
                            lineno + 1,
                            row.len()
                        )));
                    }
                    rows.extend(row);
                    row_count += 1;
                }
            }
        }
        let n = order.ok_or_else(|| Error::MalformedTable("empty table".into()))?;
        if row_count != n {
            return Err(Error::MalformedTable(format!(
                "expected {n} rows, got {row_count}"
            )));
        }
        let labels = if labels.iter().any(Option::is_some) {
            Some(
                labels
                    .into_iter()
                    .enumerate()
                    .map(|(i, l)| l.unwrap_or_else(|| i.to_string()))
                    .collect(),
            )
        } else {
            None
        };
        Self::from_table(name, n, rows, labels)
    }

    pub fn load_table(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse_table(format!("table:{}", path.display()), &text)
    }

    /// Renders the table in the same format [`FiniteGroup::parse_table`] reads.
    pub fn to_table_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order)
                .map(|b| self.mul(a, b).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("# {i} {l}\n"));
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn product_set(&self, a: &IndexSet, b: &IndexSet) -> IndexSet {
        let mut out = IndexSet::empty(self.order);
        for x in a {
            for y in b {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    pub fn inverse_of_set(&self, b: &IndexSet) -> IndexSet {
        IndexSet::from_indices(self.order, b.iter().map(|x| self.inv(x)))
    }

    pub fn left_translate_set(&self, c: usize, b: &IndexSet) -> IndexSet {
        IndexSet::from_indices(self.order, b.iter().map(|x| self.mul(c, x)))
    }

    pub fn right_translate_set(&self, b: &IndexSet, c: usize) -> IndexSet {
        IndexSet::from_indices(self.order, b.iter().map(|x| self.mul(x, c)))
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| current[i] < current[i + 1])
        else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

/// Parses the group DSL: `Zn`, `Dn`, `Sn`, `Q8`, `AxB`, `table:PATH`.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    let invalid = |reason: &str| Error::InvalidSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    if let Some(path) = spec.strip_prefix("table:") {
        if path.is_empty() {
            return Err(invalid("missing table path"));
        }
        return FiniteGroup::load_table(Path::new(path));
    }
    if spec.contains('x') {
        let mut parts = spec.split('x');
        let first = parts.next().unwrap();
        let mut acc = parse_group_spec(first)?;
        for part in parts {
            let rhs = parse_group_spec(part)?;
            acc = FiniteGroup::direct_product(&acc, &rhs)?;
        }
        return Ok(acc);
    }
    if spec == "Q8" {
        return FiniteGroup::quaternion8();
    }
    let mut chars = spec.chars();
    let family = chars.next().ok_or_else(|| invalid("empty group spec"))?;
    let n: usize = chars
        .as_str()
        .parse()
        .map_err(|_| invalid("expected a family letter followed by an integer"))?;
    match family {
        'Z' => FiniteGroup::cyclic(n),
        'D' => FiniteGroup::dihedral(n),
        'S' => FiniteGroup::symmetric(n),
        _ => Err(Error::UnsupportedFamily(spec.to_string())),
    }
}

/// A subset of a particular group.
#[derive(Clone, Debug)]
pub struct GroupSubset {
    group: Arc<FiniteGroup>,
    members: IndexSet,
}

impl PartialEq for GroupSubset {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.members == other.members
    }
}

impl Eq for GroupSubset {}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GroupSubset {
    pub fn new<I: IntoIterator<Item = usize>>(group: Arc<FiniteGroup>, items: I) -> Result<Self> {
        let order = group.order();
        let mut members = IndexSet::empty(order);
        for x in items {
            if x >= order {
                return Err(Error::OutOfRange {
                    index: x,
                    size: order,
                });
            }
            members.insert(x);
        }
        Ok(Self { group, members })
    }

    pub fn from_set(group: Arc<FiniteGroup>, members: IndexSet) -> Result<Self> {
        let members = members
            .with_universe(group.order())
            .ok_or(Error::OutOfRange {
                index: members.iter().last().unwrap_or(0),
                size: group.order(),
            })?;
        Ok(Self { group, members })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn members(&self) -> &IndexSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    fn with_members(&self, members: IndexSet) -> Self {
        Self {
            group: Arc::clone(&self.group),
            members,
        }
    }

    /// `AB = {ab : a in A, b in B}`.
    pub fn minkowski_product(&self, other: &Self) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        Ok(self.with_members(self.group.product_set(&self.members, &other.members)))
    }

    pub fn inverse_set(&self) -> Self {
        self.with_members(self.group.inverse_of_set(&self.members))
    }

    pub fn left_translate(&self, c: usize) -> Result<Self> {
        self.check_element(c)?;
        Ok(self.with_members(self.group.left_translate_set(c, &self.members)))
    }

    pub fn right_translate(&self, c: usize) -> Result<Self> {
        self.check_element(c)?;
        Ok(self.with_members(self.group.right_translate_set(&self.members, c)))
    }

    fn check_element(&self, c: usize) -> Result<()> {
        if c >= self.group.order() {
            return Err(Error::OutOfRange {
                index: c,
                size: self.group.order(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(g: &Arc<FiniteGroup>, xs: &[usize]) -> GroupSubset {
        GroupSubset::new(Arc::clone(g), xs.iter().copied()).unwrap()
    }

    #[test]
    fn family_orders() {
        assert_eq!(FiniteGroup::cyclic(5).unwrap().order(), 5);
        assert_eq!(FiniteGroup::dihedral(4).unwrap().order(), 8);
        assert_eq!(FiniteGroup::symmetric(5).unwrap().order(), 120);
        assert_eq!(FiniteGroup::quaternion8().unwrap().order(), 8);
        let z5 = FiniteGroup::cyclic(5).unwrap();
        assert_eq!(z5.identity(), 0);
        assert_eq!(z5.mul(1, 1), 2);
    }

    #[test]
    fn abelian_flags() {
        assert!(FiniteGroup::cyclic(6).unwrap().is_abelian());
        assert!(!FiniteGroup::dihedral(3).unwrap().is_abelian());
        assert!(!FiniteGroup::quaternion8().unwrap().is_abelian());
        assert!(!FiniteGroup::symmetric(3).unwrap().is_abelian());
        assert!(parse_group_spec("Z2xZ4").unwrap().is_abelian());
        assert!(FiniteGroup::dihedral(2).unwrap().is_abelian());
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion8().unwrap();
        let (minus_one, i, j, k) = (1, 2, 4, 6);
        assert_eq!(q.mul(i, i), minus_one);
        assert_eq!(q.mul(j, j), minus_one);
        assert_eq!(q.mul(k, k), minus_one);
        assert_eq!(q.mul(q.mul(i, j), k), minus_one);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), k + 1);
    }

    #[test]
    fn direct_product_indexing() {
        let g = parse_group_spec("Z2xZ4").unwrap();
        assert_eq!(g.order(), 8);
        // (1,3)*(1,2) = (0,1) at index 0*4+1
        assert_eq!(g.mul(4 + 3, 4 + 2), 1);
        assert_eq!(g.name(), "Z2xZ4");
        let klein = parse_group_spec("Z2xZ2xZ2").unwrap();
        assert_eq!(klein.order(), 8);
        assert!((0..8).all(|x| klein.inv(x) == x));
    }

    #[test]
    fn two_element_table() {
        let g = FiniteGroup::parse_table("t", "2\n0 1\n1 0\n").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.mul(1, 1), 0);
        assert_eq!(g, FiniteGroup::cyclic(2).unwrap());
    }

    #[test]
    fn table_labels_and_round_trip() {
        let d3 = FiniteGroup::dihedral(3).unwrap();
        let text = d3.to_table_text();
        let back = FiniteGroup::parse_table("D3", &text).unwrap();
        assert_eq!(back, d3);
        assert_eq!(back.labels(), d3.labels());
    }

    #[test]
    fn table_errors() {
        assert!(matches!(
            FiniteGroup::parse_table("t", "2\n0 1\n"),
            Err(Error::MalformedTable(_))
        ));
        assert!(matches!(
            FiniteGroup::parse_table("t", "2\n0 1\n1 x\n"),
            Err(Error::MalformedTable(_))
        ));
        // no inverse for 1
        assert!(matches!(
            FiniteGroup::parse_table("t", "2\n0 1\n1 1\n"),
            Err(Error::NotAGroup(_))
        ));
        // a Latin square with identity 0 that is not associative
        let quasi = "5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n";
        match FiniteGroup::parse_table("t", quasi) {
            Err(Error::NotAGroup(msg)) => assert!(msg.contains("associativity")),
            other => panic!("expected associativity failure, got {other:?}"),
        }
        assert!(matches!(
            parse_group_spec("S6"),
            Err(Error::UnsupportedFamily(_))
        ));
        assert!(matches!(
            parse_group_spec("T4"),
            Err(Error::UnsupportedFamily(_))
        ));
        assert!(parse_group_spec("Zq").is_err());
    }

    #[test]
    fn identity_must_be_zero() {
        // Z2 with identity relabelled to 1
        let err = FiniteGroup::parse_table("t", "2\n1 0\n0 1\n").unwrap_err();
        assert!(err.to_string().contains("element 1"));
    }

    #[test]
    fn minkowski_examples() {
        let z5 = Arc::new(FiniteGroup::cyclic(5).unwrap());
        let ab = set(&z5, &[0, 1])
            .minkowski_product(&set(&z5, &[0, 2]))
            .unwrap();
        assert_eq!(ab.members().to_vec(), vec![0, 1, 2, 3]);
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let h = set(&z4, &[0, 2]);
        assert_eq!(
            h.minkowski_product(&h).unwrap().members().to_vec(),
            vec![0, 2]
        );
        let d4 = Arc::new(FiniteGroup::dihedral(4).unwrap());
        let b = set(&d4, &[1, 5, 6]);
        assert_eq!(set(&d4, &[0]).minkowski_product(&b).unwrap(), b);
        assert!(matches!(
            set(&z5, &[0]).minkowski_product(&h),
            Err(Error::GroupMismatch)
        ));
    }

    #[test]
    fn inverse_and_translate_examples() {
        let z5 = Arc::new(FiniteGroup::cyclic(5).unwrap());
        assert_eq!(
            set(&z5, &[1, 2]).inverse_set().members().to_vec(),
            vec![3, 4]
        );
        assert_eq!(set(&z5, &[0]).inverse_set().members().to_vec(), vec![0]);
        let d4 = Arc::new(FiniteGroup::dihedral(4).unwrap());
        let reflections = set(&d4, &[4, 5, 6, 7]);
        assert_eq!(reflections.inverse_set(), reflections);
        let z6 = Arc::new(FiniteGroup::cyclic(6).unwrap());
        let b = set(&z6, &[0, 1]);
        assert_eq!(b.left_translate(2).unwrap().members().to_vec(), vec![2, 3]);
        assert_eq!(b.left_translate(0).unwrap(), b);
        assert!(b.left_translate(6).is_err());
    }

    #[test]
    fn symmetric_identity_first() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        assert_eq!(s4.labels()[0], "0123");
        assert_eq!(s4.order(), 24);
    }

    fn catalogue() -> Vec<Arc<FiniteGroup>> {
        ["Z1", "Z6", "D3", "D4", "Q8", "Z2xZ4", "S4", "D5"]
            .iter()
            .map(|s| Arc::new(parse_group_spec(s).unwrap()))
            .collect()
    }

    proptest! {
        #[test]
        fn set_algebra(gi in 0usize..8, a in any::<u32>(), b in any::<u32>(), c in any::<u32>(), t in any::<usize>()) {
            let g = &catalogue()[gi];
            let n = g.order();
            let pick = |bits: u32| GroupSubset::new(Arc::clone(g), (0..n).filter(|&x| bits >> (x % 32) & 1 == 1 && x < 32)).unwrap();
            let (a, b, c) = (pick(a), pick(b), pick(c));
            let ab_c = a.minkowski_product(&b).unwrap().minkowski_product(&c).unwrap();
            let a_bc = a.minkowski_product(&b.minkowski_product(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert_eq!(b.inverse_set().inverse_set(), b.clone());
            let ab = a.minkowski_product(&b).unwrap();
            if !a.is_empty() && !b.is_empty() {
                prop_assert!(ab.len() >= a.len().max(b.len()));
            }
            prop_assert_eq!(b.left_translate(t % n).unwrap().len(), b.len());
        }
    }
}
