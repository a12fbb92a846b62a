//! Lectic order on index subsets and the NextClosure step.
//!
//! Subsets of `0..n` are ordered like binary numbers in which index `i`
//! carries weight `2^i`: the set holding the largest differing index is the
//! greater one. Under this order `{0} < {1} < {0, 1} < {2} < ...`, so the
//! attribute listed first in a context is the one that varies fastest.

use std::cmp::Ordering;

use crate::bitset::BitSet;

/// Compares two subsets of the same universe in lectic order.
pub fn lectic_cmp(a: &BitSet, b: &BitSet) -> Ordering {
    debug_assert_eq!(a.universe(), b.universe());
    for i in (0..a.universe()).rev() {
        match (a.contains(i), b.contains(i)) {
            (true, false) => return Ordering::Greater,
            (false, true) => return Ordering::Less,
            _ => {}
        }
    }
    Ordering::Equal
}

/// Returns the lectically next set after `current` that is closed under
/// `closure`, or `None` when `current` is the last one.
///
/// `closure` must be a closure operator on subsets of `current.universe()`
/// and `current` must be closed under it.
pub fn next_closure<F>(current: &BitSet, mut closure: F) -> Option<BitSet>
where
    F: FnMut(&BitSet) -> BitSet,
{
    for i in 0..current.universe() {
        if current.contains(i) {
            continue;
        }
        let mut seed = current.clone();
        if i > 0 {
            seed.retain_above(i - 1);
        }
        seed.insert(i);
        let candidate = closure(&seed);
        if candidate.agrees_above(current, i) {
            return Some(candidate);
        }
    }
    None
}

/// Iterator over every closed set of `closure`, in lectic order, starting
/// from the closure of the empty set.
pub struct ClosedSets<F> {
    next: Option<BitSet>,
    closure: F,
}

impl<F> ClosedSets<F>
where
    F: FnMut(&BitSet) -> BitSet,
{
    pub fn new(universe: usize, mut closure: F) -> Self {
        let first = closure(&BitSet::empty(universe));
        ClosedSets {
            next: Some(first),
            closure,
        }
    }
}

impl<F> Iterator for ClosedSets<F>
where
    F: FnMut(&BitSet) -> BitSet,
{
    type Item = BitSet;

    fn next(&mut self) -> Option<BitSet> {
        let current = self.next.take()?;
        self.next = next_closure(&current, &mut self.closure);
        Some(current)
    }
}
