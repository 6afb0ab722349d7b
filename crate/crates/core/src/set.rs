//! Bitmask sets of customer ids.
//!
//! Customer `i` (1-based, the depot is never a member) occupies bit `i - 1`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::model::MAX_CUSTOMERS;

/// A set of customer ids stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CustomerSet(u32);

impl CustomerSet {
    pub const EMPTY: CustomerSet = CustomerSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        CustomerSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// All customers `1..=n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_CUSTOMERS);
        if n == 32 {
            CustomerSet(u32::MAX)
        } else {
            CustomerSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(customer: usize) -> Self {
        debug_assert!((1..=MAX_CUSTOMERS).contains(&customer));
        CustomerSet(1 << (customer - 1))
    }

    pub fn contains(self, customer: usize) -> bool {
        (1..=32).contains(&customer) && self.0 & (1 << (customer - 1)) != 0
    }

    pub fn insert(&mut self, customer: usize) {
        self.0 |= Self::singleton(customer).0;
    }

    pub fn remove(&mut self, customer: usize) {
        self.0 &= !Self::singleton(customer).0;
    }

    pub fn with(self, customer: usize) -> Self {
        CustomerSet(self.0 | Self::singleton(customer).0)
    }

    pub fn without(self, customer: usize) -> Self {
        CustomerSet(self.0 & !Self::singleton(customer).0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Smallest customer id in the set.
    pub fn lowest(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    pub fn union(self, other: Self) -> Self {
        CustomerSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        CustomerSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        CustomerSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Customer ids in ascending order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Compares the two sets as ascending id lists, lexicographically.
    /// A proper prefix sorts first.
    pub fn cmp_as_sorted_list(self, other: Self) -> Ordering {
        let (mut a, mut b) = (self.0, other.0);
        while a != 0 && b != 0 {
            let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
            if la != lb {
                return la.cmp(&lb);
            }
            a &= a - 1;
            b &= b - 1;
        }
        (a != 0).cmp(&(b != 0))
    }
}

impl FromIterator<usize> for CustomerSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = CustomerSet::EMPTY;
        for c in iter {
            set.insert(c);
        }
        set
    }
}

impl IntoIterator for CustomerSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl fmt::Debug for CustomerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Ascending iterator over the ids of a [`CustomerSet`].
#[derive(Clone)]
pub struct Iter(u32);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let id = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(id)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}
