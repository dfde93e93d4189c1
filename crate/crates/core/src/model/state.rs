use std::fmt;

/// Fixed-length bit set over the ground-atom universe of one instance.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    words: Vec<u64>,
    len: usize,
}

impl AtomSet {
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn new(len: usize) -> Self {
        AtomSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = AtomSet::new(len);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Number of atoms in the universe (not the number of members).
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "atom {i} outside universe of {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn intersect_with(&mut self, other: &AtomSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    pub fn is_superset_of(&self, indices: &[usize]) -> bool {
        indices.iter().all(|&i| self.contains(i))
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The world part of a program state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WorldState {
    Strips(AtomSet),
    Numeric(Vec<i64>),
}

impl WorldState {
    pub fn as_atoms(&self) -> Option<&AtomSet> {
        match self {
            WorldState::Strips(s) => Some(s),
            WorldState::Numeric(_) => None,
        }
    }

    pub fn as_registers(&self) -> Option<&[i64]> {
        match self {
            WorldState::Numeric(r) => Some(r),
            WorldState::Strips(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_round_trip() {
        let s = AtomSet::from_indices(130, [0, 63, 64, 129]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(s.count(), 4);
        assert!(!s.contains(130));
    }

    #[test]
    fn remove_clears_only_target() {
        let mut s = AtomSet::from_indices(10, [1, 2, 3]);
        s.remove(2);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3]);
    }
}
