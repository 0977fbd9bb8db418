//! Fixed-universe index sets backed by a packed bit vector.
//!
//! Both vertex subsets and group subsets are stored this way so equality,
//! hashing and ordering are structural and iteration is always ascending.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

const WORD: usize = 64;

/// A subset of `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    universe: usize,
    words: Vec<u64>,
}

impl IndexSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for w in set.words.iter_mut() {
            *w = u64::MAX;
        }
        set.trim();
        set
    }

    pub fn singleton(universe: usize, x: usize) -> Self {
        let mut set = Self::empty(universe);
        set.insert(x);
        set
    }

    /// Builds a set from indices; panics on an out-of-range index.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut set = Self::empty(universe);
        for x in items {
            set.insert(x);
        }
        set
    }

    /// Builds a set from the low `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD, "mask sets need universe <= 64");
        let mut set = Self::empty(universe);
        if universe > 0 {
            set.words[0] = mask;
            set.trim();
        }
        set
    }

    /// Low word as a mask. Only meaningful when `universe <= 64`.
    pub fn to_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.universe && self.words[x / WORD] >> (x % WORD) & 1 == 1
    }

    pub fn insert(&mut self, x: usize) -> bool {
        assert!(
            x < self.universe,
            "index {x} out of range for universe {}",
            self.universe
        );
        let had = self.contains(x);
        self.words[x / WORD] |= 1 << (x % WORD);
        !had
    }

    pub fn remove(&mut self, x: usize) -> bool {
        let had = self.contains(x);
        if had {
            self.words[x / WORD] &= !(1 << (x % WORD));
        }
        had
    }

    fn check_universe(&self, other: &Self) {
        assert_eq!(
            self.universe, other.universe,
            "set operation across different universes"
        );
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection_len(other) == 0
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Applies a permutation (or any map) given as an image table.
    pub fn map(&self, f: &[usize]) -> Self {
        Self::from_indices(self.universe, self.iter().map(|x| f[x]))
    }

    /// Comma-separated member list, used in instance keys.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.iter().map(|x| x.to_string()).collect();
        parts.join(",")
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the ascending member sequences.
impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a IndexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Deserializes a bare member list; the universe is taken as `max + 1`.
/// Callers that know the parent size should re-home it with [`IndexSet::with_universe`].
impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(deserializer)?;
        let universe = items.iter().max().map_or(0, |m| m + 1);
        Ok(Self::from_indices(universe, items))
    }
}

impl IndexSet {
    /// Same members over a different universe; `None` if a member does not fit.
    pub fn with_universe(&self, universe: usize) -> Option<Self> {
        if self.iter().any(|x| x >= universe) {
            return None;
        }
        Some(Self::from_indices(universe, self.iter()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_and_complement_respect_universe() {
        let full = IndexSet::full(70);
        assert_eq!(full.len(), 70);
        assert!(full.complement().is_empty());
        let s = IndexSet::from_indices(70, [0, 65, 69]);
        assert_eq!(s.complement().len(), 67);
        assert_eq!(s.to_vec(), vec![0, 65, 69]);
    }

    #[test]
    fn lexicographic_order() {
        let a = IndexSet::from_indices(8, [1, 2]);
        let b = IndexSet::from_indices(8, [1, 3]);
        let c = IndexSet::from_indices(8, [1]);
        assert!(a < b);
        assert!(c < a);
    }

    #[test]
    fn serde_is_a_member_list() {
        let s = IndexSet::from_indices(10, [3, 1, 7]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,3,7]");
        let back: IndexSet = serde_json::from_str("[1,3,7]").unwrap();
        assert_eq!(back.with_universe(10).unwrap(), s);
    }

    proptest! {
        #[test]
        fn matches_btreeset(xs in proptest::collection::vec(0usize..150, 0..40),
                            ys in proptest::collection::vec(0usize..150, 0..40)) {
            use std::collections::BTreeSet;
            let a = IndexSet::from_indices(150, xs.iter().copied());
            let b = IndexSet::from_indices(150, ys.iter().copied());
            let sa: BTreeSet<usize> = xs.into_iter().collect();
            let sb: BTreeSet<usize> = ys.into_iter().collect();
            prop_assert_eq!(a.union(&b).to_vec(), sa.union(&sb).copied().collect::<Vec<_>>());
            prop_assert_eq!(a.intersection(&b).to_vec(), sa.intersection(&sb).copied().collect::<Vec<_>>());
            prop_assert_eq!(a.difference(&b).to_vec(), sa.difference(&sb).copied().collect::<Vec<_>>());
            prop_assert_eq!(a.is_subset(&b), sa.is_subset(&sb));
        }
    }
}
