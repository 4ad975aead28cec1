use std::fmt;

use fixedbitset::FixedBitSet;

/// Dense index of an argument inside one [`Framework`](crate::Framework).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgId(pub u32);

impl ArgId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ArgId {
    fn from(i: usize) -> Self {
        ArgId(u32::try_from(i).expect("argument index exceeds u32"))
    }
}

impl fmt::Display for ArgId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of the arguments of a framework with a fixed universe size.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ArgSet {
    bits: FixedBitSet,
}

impl ArgSet {
    pub fn empty(universe: usize) -> Self {
        ArgSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        ArgSet { bits }
    }

    pub fn from_ids<I: IntoIterator<Item = ArgId>>(universe: usize, ids: I) -> Self {
        let mut set = Self::empty(universe);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn contains(&self, id: ArgId) -> bool {
        self.bits.contains(id.index())
    }

    /// Returns `true` when the argument was not already present.
    #[inline]
    pub fn insert(&mut self, id: ArgId) -> bool {
        !self.bits.put(id.index())
    }

    #[inline]
    pub fn remove(&mut self, id: ArgId) -> bool {
        let was = self.bits.contains(id.index());
        self.bits.set(id.index(), false);
        was
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = ArgId> + '_ {
        self.bits.ones().map(ArgId::from)
    }

    pub fn first(&self) -> Option<ArgId> {
        self.bits.ones().next().map(ArgId::from)
    }

    pub fn union_with(&mut self, other: &ArgSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &ArgSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &ArgSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union(&self, other: &ArgSet) -> ArgSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn difference(&self, other: &ArgSet) -> ArgSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn intersection(&self, other: &ArgSet) -> ArgSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn is_subset(&self, other: &ArgSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &ArgSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn to_vec(&self) -> Vec<ArgId> {
        self.iter().collect()
    }
}

impl fmt::Debug for ArgSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.bits.ones()).finish()
    }
}
