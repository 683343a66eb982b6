//! Small bitset over a bounded index universe, used for voter and
//! candidate subsets.

/// Bitset over `0..universe`. Inserting an out-of-range index panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdxSet {
    universe: usize,
    bits: Vec<u64>,
}

pub type VoterSet = IdxSet;
pub type CandidateSet = IdxSet;

impl IdxSet {
    pub fn empty(universe: usize) -> Self {
        IdxSet {
            universe,
            bits: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Interprets the low bits of `mask` as membership; universe must be <= 64.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64);
        let mut s = Self::empty(universe);
        for i in 0..universe {
            if mask >> i & 1 == 1 {
                s.insert(i);
            }
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.universe,
            "index {i} outside universe {}",
            self.universe
        );
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn union(&self, other: &IdxSet) -> IdxSet {
        assert_eq!(self.universe, other.universe);
        IdxSet {
            universe: self.universe,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersects(&self, other: &IdxSet) -> bool {
        assert_eq!(self.universe, other.universe);
        self.bits.iter().zip(&other.bits).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &IdxSet) -> bool {
        self.universe == other.universe
            && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(|&i| self.contains(i))
    }
}

impl std::fmt::Display for IdxSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = IdxSet::empty(70);
        s.insert(0);
        s.insert(69);
        assert!(s.contains(0) && s.contains(69) && !s.contains(5));
        assert_eq!(s.len(), 2);
        let t = IdxSet::from_indices(70, [5]);
        let u = s.union(&t);
        assert_eq!(u.iter().collect::<Vec<_>>(), vec![0, 5, 69]);
        assert!(s.is_subset(&u) && !u.is_subset(&s));
    }

    #[test]
    #[should_panic]
    fn out_of_range_insert_panics() {
        IdxSet::empty(3).insert(3);
    }
}
