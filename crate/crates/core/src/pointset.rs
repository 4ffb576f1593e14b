use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

const BITS: usize = 64;

/// A subset of the points `0..n` of some orthoset, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: usize,
    words: Vec<u64>,
}

impl PointSet {
    pub fn empty(n: usize) -> Self {
        PointSet { n, words: vec![0; n.div_ceil(BITS)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn singleton(n: usize, p: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(p);
        s
    }

    /// Panics if an index is out of range.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for p in indices {
            s.insert(p);
        }
        s
    }

    fn trim(&mut self) {
        let r = self.n % BITS;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// Size of the ground set.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn contains(&self, p: usize) -> bool {
        p < self.n && self.words[p / BITS] >> (p % BITS) & 1 == 1
    }

    pub fn insert(&mut self, p: usize) {
        assert!(p < self.n, "point {p} out of range 0..{}", self.n);
        self.words[p / BITS] |= 1 << (p % BITS);
    }

    pub fn remove(&mut self, p: usize) {
        if p < self.n {
            self.words[p / BITS] &= !(1 << (p % BITS));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        PointSet { n: self.n, words }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        PointSet { n: self.n, words }
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect();
        PointSet { n: self.n, words }
    }

    /// Set complement within `0..n`.
    pub fn complement(&self) -> PointSet {
        let mut s = PointSet { n: self.n, words: self.words.iter().map(|w| !w).collect() };
        s.trim();
        s
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &PointSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * BITS + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Orders by cardinality, then lexicographically by sorted member list.
impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter())).then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// Serialized as the sorted member list; the universe size is not recorded.
impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Members as a list; the universe is taken as `max + 1`. Use
/// [`PointSet::from_indices`] when the ground set is known.
impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        let n = v.iter().max().map_or(0, |m| m + 1);
        Ok(PointSet::from_indices(n, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra_across_word_boundary() {
        let a = PointSet::from_indices(70, [0, 63, 64, 69]);
        let b = PointSet::from_indices(70, [63, 64]);
        assert!(b.is_subset(&a));
        assert_eq!(a.difference(&b).to_vec(), vec![0, 69]);
        assert_eq!(a.complement().len(), 66);
        assert!(PointSet::full(70).is_full());
        assert_eq!(PointSet::full(70).complement(), PointSet::empty(70));
    }

    #[test]
    fn ordering_is_by_size_then_members() {
        let mut v = vec![
            PointSet::from_indices(4, [0, 1]),
            PointSet::from_indices(4, [3]),
            PointSet::from_indices(4, [0, 2]),
            PointSet::empty(4),
        ];
        v.sort();
        let lists: Vec<_> = v.iter().map(PointSet::to_vec).collect();
        assert_eq!(lists, vec![vec![], vec![3], vec![0, 1], vec![0, 2]]);
    }
}
