use rand::Rng;

const ABSENT: usize = usize::MAX;

/// Subset of `0..capacity` with O(1) insert, remove, membership and
/// uniform sampling.
///
/// Members live densely in `dense`; `pos[x]` is the slot of `x` or `ABSENT`.
/// Removal swaps the last member into the vacated slot.
#[derive(Debug, Clone)]
pub struct SparseSet {
    dense: Vec<usize>,
    pos: Vec<usize>,
}

impl SparseSet {
    pub fn empty(capacity: usize) -> Self {
        SparseSet {
            dense: Vec::with_capacity(capacity),
            pos: vec![ABSENT; capacity],
        }
    }

    /// The set `0..capacity`.
    pub fn full(capacity: usize) -> Self {
        SparseSet {
            dense: (0..capacity).collect(),
            pos: (0..capacity).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.dense.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.dense.is_empty()
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.pos.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.pos.len() && self.pos[x] != ABSENT
    }

    /// Returns false if `x` was already present.
    pub fn insert(&mut self, x: usize) -> bool {
        if self.contains(x) {
            return false;
        }
        self.pos[x] = self.dense.len();
        self.dense.push(x);
        true
    }

    /// Returns false if `x` was not present.
    pub fn remove(&mut self, x: usize) -> bool {
        if !self.contains(x) {
            return false;
        }
        let slot = self.pos[x];
        let last = self.dense.pop().expect("non-empty");
        if last != x {
            self.dense[slot] = last;
            self.pos[last] = slot;
        }
        self.pos[x] = ABSENT;
        true
    }

    /// Uniformly random member, `None` when empty.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        if self.dense.is_empty() {
            None
        } else {
            Some(self.dense[rng.gen_range(0..self.dense.len())])
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.dense.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.dense
    }
}
