use fixedbitset::FixedBitSet;

/// Dense membership set over `0..capacity` with a cached cardinality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdSet {
    bits: FixedBitSet,
    len: usize,
}

pub type VertexSet = IdSet;
pub type EdgeSet = IdSet;

impl IdSet {
    pub fn new(capacity: usize) -> Self {
        IdSet {
            bits: FixedBitSet::with_capacity(capacity),
            len: 0,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        IdSet {
            bits,
            len: capacity,
        }
    }

    pub fn from_ids(capacity: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut set = IdSet::new(capacity);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, id: usize) -> bool {
        self.bits.contains(id)
    }

    /// Returns `true` if `id` was newly inserted. Panics if out of range.
    pub fn insert(&mut self, id: usize) -> bool {
        let was = self.bits.put(id);
        if !was {
            self.len += 1;
        }
        !was
    }

    /// Returns `true` if `id` was present.
    pub fn remove(&mut self, id: usize) -> bool {
        let was = self.bits.contains(id);
        if was {
            self.bits.set(id, false);
            self.len -= 1;
        }
        was
    }

    pub fn set(&mut self, id: usize, present: bool) {
        if present {
            self.insert(id);
        } else {
            self.remove(id);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn is_subset(&self, other: &IdSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn complement(&self) -> IdSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        IdSet {
            len: self.capacity() - self.len,
            bits,
        }
    }

    /// Recount from the bits; used by consistency checks.
    pub fn recount(&self) -> usize {
        self.bits.count_ones(..)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cached_len_tracks_mutations() {
        let mut s = IdSet::new(10);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(9);
        assert_eq!(s.len(), 2);
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert_eq!(s.len(), 1);
        assert_eq!(s.recount(), 1);
        let c = s.complement();
        assert_eq!(c.len(), 9);
        assert_eq!(c.recount(), 9);
        assert!(!c.contains(9));
        assert_eq!(IdSet::full(5).iter().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    #[should_panic]
    fn out_of_range_panics() {
        IdSet::new(3).insert(3);
    }
}
