//! Fixed-width vertex sets over the vertex indices of one graph.
//!
//! Vertex indices follow the lexicographic order of vertex names, so the
//! ordering defined here (comparison of the sorted index lists) coincides
//! with comparing the sorted name lists.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VSet(FixedBitSet);

impl VSet {
    pub fn empty(n: usize) -> Self {
        VSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        VSet(b)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = Self::empty(n);
        for i in it {
            s.insert(i);
        }
        s
    }

    /// Number of vertices of the ambient graph.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.0.set(i, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.ones().next()
    }

    pub fn union(&self, other: &VSet) -> VSet {
        let mut b = self.0.clone();
        b.union_with(&other.0);
        VSet(b)
    }

    pub fn intersection(&self, other: &VSet) -> VSet {
        let mut b = self.0.clone();
        b.intersect_with(&other.0);
        VSet(b)
    }

    pub fn difference(&self, other: &VSet) -> VSet {
        let mut b = self.0.clone();
        b.difference_with(&other.0);
        VSet(b)
    }

    pub fn complement(&self) -> VSet {
        let mut b = self.0.clone();
        b.toggle_range(..);
        VSet(b)
    }

    pub fn union_with(&mut self, other: &VSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &VSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &VSet) {
        self.0.difference_with(&other.0);
    }

    pub fn is_subset(&self, other: &VSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &VSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersects(&self, other: &VSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for VSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_lexicographic_on_sorted_lists() {
        let a = VSet::from_indices(5, [0, 3]);
        let b = VSet::from_indices(5, [0, 3, 4]);
        let c = VSet::from_indices(5, [1]);
        let e = VSet::empty(5);
        assert!(e < a);
        assert!(a < b);
        assert!(b < c);
    }

    #[test]
    fn set_algebra() {
        let a = VSet::from_indices(70, [1, 2, 65]);
        let b = VSet::from_indices(70, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![1, 2, 3, 65]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 65]);
        assert_eq!(a.complement().len(), 67);
        assert!(VSet::full(70).is_full());
    }
}
