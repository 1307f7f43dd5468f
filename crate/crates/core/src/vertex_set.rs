use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

/// A subset of one side of a bipartite graph, indexed `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        VertexSet { bits }
    }

    /// Panics if an index falls outside `0..universe`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut set = VertexSet::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Low `universe` bits of `mask` (universe at most 64).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64);
        VertexSet::from_indices(universe, (0..universe).filter(|&i| mask >> i & 1 == 1))
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.universe() <= 64);
        self.iter().fold(0u64, |m, i| m | 1 << i)
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe(), "vertex {i} outside part of size {}", self.universe());
        self.bits.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.bits.set(i, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet::full(self.universe()).difference(self)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// Number of indices in `indices` that belong to the set.
    pub fn count_in<'a, I: IntoIterator<Item = &'a usize>>(&self, indices: I) -> usize {
        indices.into_iter().filter(|&&i| self.contains(i)).count()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_indices(6, [0, 2, 4]);
        let b = VertexSet::from_indices(6, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 2, 3, 4]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 4]);
        assert_eq!(a.complement().to_vec(), vec![1, 3, 5]);
        assert!(VertexSet::from_indices(6, [2]).is_subset(&a));
        assert_eq!(VertexSet::from_mask(6, 0b10101), a);
        assert_eq!(a.to_mask(), 0b10101);
        assert_eq!(a.first(), Some(0));
        assert_eq!(VertexSet::full(3).len(), 3);
    }

    #[test]
    #[should_panic]
    fn out_of_part_index_panics() {
        VertexSet::from_indices(3, [3]);
    }
}
