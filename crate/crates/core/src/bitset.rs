//! Fixed-universe bit sets used for object and attribute index sets.
//!
//! Every set remembers the size of its universe so that sets drawn from
//! different contexts cannot be silently mixed.

use std::cmp::Ordering;
use std::fmt;

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    universe: usize,
    words: Vec<u64>,
}

impl BitSet {
    /// The empty subset of `0..universe`.
    pub fn empty(universe: usize) -> Self {
        BitSet {
            universe,
            words: vec![0; universe.div_ceil(WORD_BITS)],
        }
    }

    /// The whole universe `0..universe`.
    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for w in set.words.iter_mut() {
            *w = !0;
        }
        set.trim();
        set
    }

    /// Builds a set from indices, returning the first offending index if one
    /// lies outside the universe.
    pub fn from_indices<I>(universe: usize, indices: I) -> Result<Self, usize>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = Self::empty(universe);
        for i in indices {
            if i >= universe {
                return Err(i);
            }
            set.insert(i);
        }
        Ok(set)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / WORD_BITS] & (1 << (i % WORD_BITS)) != 0
    }

    /// Panics if `i` is outside the universe.
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "index {i} outside universe {}", self.universe);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.universe {
            self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
        }
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &BitSet) -> bool {
        other.is_subset(self)
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    /// Keeps only the members strictly greater than `i`.
    pub fn retain_above(&mut self, i: usize) {
        for j in 0..=i.min(self.universe.saturating_sub(1)) {
            self.remove(j);
        }
    }

    /// True when both sets agree on every index strictly greater than `i`.
    pub fn agrees_above(&self, other: &BitSet, i: usize) -> bool {
        ((i + 1)..self.universe).all(|j| self.contains(j) == other.contains(j))
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            set: self,
            word: 0,
            bits: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Returns a copy over a universe grown or shrunk to `universe`;
    /// members beyond the new bound are dropped.
    pub fn resized(&self, universe: usize) -> BitSet {
        let mut out = BitSet::empty(universe);
        for i in self.iter().take_while(|&i| i < universe) {
            out.insert(i);
        }
        out
    }

    /// Removes index `i` from the universe, shifting higher members down.
    pub fn without_index(&self, i: usize) -> BitSet {
        let mut out = BitSet::empty(self.universe - 1);
        for j in self.iter() {
            match j.cmp(&i) {
                Ordering::Less => out.insert(j),
                Ordering::Greater => out.insert(j - 1),
                Ordering::Equal => {}
            }
        }
        out
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    set: &'a BitSet,
    word: usize,
    bits: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.bits != 0 {
                let tz = self.bits.trailing_zeros() as usize;
                self.bits &= self.bits - 1;
                return Some(self.word * WORD_BITS + tz);
            }
            self.word += 1;
            self.bits = *self.set.words.get(self.word)?;
        }
    }
}

impl<'a> IntoIterator for &'a BitSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_is_trimmed() {
        let s = BitSet::full(70);
        assert_eq!(s.len(), 70);
        assert!(s.contains(69));
        assert!(!s.contains(70));
        assert_eq!(BitSet::full(0).len(), 0);
        assert!(BitSet::full(0).is_full());
    }

    #[test]
    fn from_indices_reports_out_of_range() {
        assert_eq!(BitSet::from_indices(3, [0, 5]), Err(5));
        let s = BitSet::from_indices(130, [1, 64, 129]).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 64, 129]);
    }

    #[test]
    fn set_algebra() {
        let a = BitSet::from_indices(5, [0, 1, 2]).unwrap();
        let b = BitSet::from_indices(5, [1, 2, 3]).unwrap();
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![0]);
        assert!(a.intersection(&b).is_subset(&a));
        assert!(!a.is_subset(&b));
    }

    #[test]
    fn index_removal_shifts() {
        let a = BitSet::from_indices(5, [0, 2, 4]).unwrap();
        assert_eq!(a.without_index(2).iter().collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(a.without_index(1).iter().collect::<Vec<_>>(), vec![0, 1, 3]);
        assert_eq!(a.resized(3).iter().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn agreement_above() {
        let a = BitSet::from_indices(6, [0, 4]).unwrap();
        let b = BitSet::from_indices(6, [1, 4]).unwrap();
        assert!(a.agrees_above(&b, 1));
        assert!(!a.agrees_above(&b, 0));
        let mut c = a.clone();
        c.retain_above(0);
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![4]);
    }
}
