use std::fmt;

/// A set of states, as a bitset over the enumerated state space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    n: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(n: usize) -> StateSet {
        StateSet { n, words: vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> StateSet {
        let mut s = StateSet { n, words: vec![!0; n.div_ceil(64)] };
        s.trim();
        s
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> StateSet {
        let mut s = StateSet::empty(n);
        idx.into_iter().for_each(|i| s.insert(i));
        s
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> StateSet {
        StateSet::from_indices(n, (0..n).filter(|&i| f(i)))
    }

    fn trim(&mut self) {
        let r = self.n % 64;
        if r != 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << r) - 1;
            }
        }
    }

    /// Size of the underlying state space.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n, "state index out of range");
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.n {
            self.words[i / 64] &= !(1 << (i % 64));
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

    pub fn union(&self, o: &StateSet) -> StateSet {
        self.zip(o, |a, b| a | b)
    }

    pub fn intersection(&self, o: &StateSet) -> StateSet {
        self.zip(o, |a, b| a & b)
    }

    pub fn difference(&self, o: &StateSet) -> StateSet {
        self.zip(o, |a, b| a & !b)
    }

    pub fn complement(&self) -> StateSet {
        let mut s = StateSet { n: self.n, words: self.words.iter().map(|w| !w).collect() };
        s.trim();
        s
    }

    pub fn is_subset(&self, o: &StateSet) -> bool {
        self.words.iter().zip(&o.words).all(|(a, b)| a & !b == 0)
    }

    fn zip(&self, o: &StateSet, f: impl Fn(u64, u64) -> u64) -> StateSet {
        assert_eq!(self.n, o.n, "state sets over different spaces");
        StateSet { n: self.n, words: self.words.iter().zip(&o.words).map(|(&a, &b)| f(a, b)).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    /// Image under a permutation of state indices.
    pub fn map(&self, perm: &[usize]) -> StateSet {
        StateSet::from_indices(self.n, self.iter().map(|i| perm[i]))
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
