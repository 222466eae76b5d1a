//! Index bookkeeping for the ridge search: ridges, tuple keys, the visited
//! set and the FIFO queue.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::binomial;

/// Sorted, strictly increasing `(p - 1)`-tuple of observation indices (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ridge {
    indices: Vec<usize>,
}

impl Ridge {
    /// Sorts the indices; fails on duplicates.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateIndex(w[0]));
        }
        Ok(Self { indices })
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Sorted tuple `ridge ∪ {k}`; `k` must not be in the ridge.
    pub fn extend(&self, k: usize) -> Vec<usize> {
        let pos = self.indices.partition_point(|&i| i < k);
        let mut t = Vec::with_capacity(self.indices.len() + 1);
        t.extend_from_slice(&self.indices[..pos]);
        t.push(k);
        t.extend_from_slice(&self.indices[pos..]);
        t
    }
}

/// Canonical key of a sorted `p`-tuple.
///
/// `Packed` holds `g = j_1 + j_2 n + ... + j_p n^(p-1)` over the sorted
/// 1-based tuple; it is used whenever `n^p < 2^127`. Otherwise the sorted
/// tuple itself is the key. Two tuples get equal codes iff they are equal
/// as sets. Within the packed regime the order of codes is colexicographic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TupleCode {
    Packed(u128),
    Tuple(Box<[u32]>),
}

/// Whether `n^p` fits below `2^127`.
pub fn packs(n: usize, p: usize) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..p {
        match acc.checked_mul(n as u128) {
            Some(v) if v < (1u128 << 127) => acc = v,
            _ => return false,
        }
    }
    true
}

/// Encodes distinct observation indices (0-based, any order) in `[0, n)`.
pub fn encode_tuple(indices: &[usize], n: usize) -> Result<TupleCode> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateIndex(w[0]));
    }
    if let Some(&bad) = sorted.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, n });
    }
    Ok(encode_sorted(&sorted, n))
}

pub(crate) fn encode_sorted(sorted: &[usize], n: usize) -> TupleCode {
    if packs(n, sorted.len()) {
        TupleCode::Packed(packed_code(sorted, n))
    } else {
        TupleCode::Tuple(sorted.iter().map(|&i| i as u32).collect())
    }
}

fn packed_code(sorted: &[usize], n: usize) -> u128 {
    let mut g: u128 = 0;
    for &j in sorted.iter().rev() {
        g = g * n as u128 + (j as u128 + 1);
    }
    g
}

impl TupleCode {
    /// Recovers the sorted 0-based tuple.
    pub fn decode(&self, n: usize, p: usize) -> Vec<usize> {
        match self {
            TupleCode::Tuple(t) => t.iter().map(|&i| i as usize).collect(),
            TupleCode::Packed(g) => {
                let n = n as u128;
                let mut g = *g;
                let mut out = Vec::with_capacity(p);
                // All digits but the last lie in [1, n - 1].
                for _ in 0..p - 1 {
                    let d = g % n;
                    out.push((d - 1) as usize);
                    g = (g - d) / n;
                }
                out.push((g - 1) as usize);
                out
            }
        }
    }
}

/// Colexicographic rank of a ridge among all sorted `(p - 1)`-subsets of `[0, n)`.
pub fn ridge_rank(ridge: &Ridge, n: usize) -> u128 {
    debug_assert!(ridge.indices.iter().all(|&i| i < n));
    ridge
        .indices
        .iter()
        .enumerate()
        .map(|(pos, &c)| binomial(c as u64, pos as u64 + 1))
        .sum()
}

/// The `p` ridges obtained by dropping one element of a sorted tuple, in
/// order of the dropped position.
pub fn subridges(tuple: &[usize]) -> Vec<Ridge> {
    (0..tuple.len())
        .map(|skip| {
            Ridge::from_sorted(
                tuple
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
        .collect()
}

/// All sorted `k`-subsets of `[0, n)` in colexicographic order.
#[derive(Clone, Debug)]
pub struct ColexSubsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl ColexSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Self { n, current }
    }
}

impl Iterator for ColexSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.as_mut()?;
        let out = cur.clone();
        let k = cur.len();
        // Increment the first position that can grow without colliding.
        let mut i = 0;
        loop {
            if i == k {
                self.current = None;
                break;
            }
            let limit = if i + 1 < k { cur[i + 1] } else { self.n };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, c) in cur.iter_mut().enumerate().take(i) {
                    *c = j;
                }
                break;
            }
            i += 1;
        }
        Some(out)
    }
}

/// Default dense-bitset budget in bits.
pub const DEFAULT_VISITED_BUDGET: u128 = 1 << 31;

/// Set of ridges already queued.
///
/// Dense mode keeps one bit per colex rank (`C(n, p - 1)` bits); sparse mode
/// falls back to a hash set when that exceeds the budget.
#[derive(Clone, Debug)]
pub enum VisitedSet {
    Dense { n: usize, bits: Vec<u64>, len: usize },
    Hashed(HashSet<Ridge>),
}

impl VisitedSet {
    pub fn new(n: usize, ridge_len: usize, budget_bits: u128) -> Self {
        let capacity = binomial(n as u64, ridge_len as u64);
        if capacity <= budget_bits {
            Self::dense(n, ridge_len)
        } else {
            Self::Hashed(HashSet::new())
        }
    }

    pub fn dense(n: usize, ridge_len: usize) -> Self {
        let capacity = binomial(n as u64, ridge_len as u64) as usize;
        VisitedSet::Dense {
            n,
            bits: vec![0; capacity.div_ceil(64)],
            len: 0,
        }
    }

    pub fn hashed() -> Self {
        VisitedSet::Hashed(HashSet::new())
    }

    /// Marks `ridge`; returns `true` if it was not marked before.
    pub fn insert(&mut self, ridge: &Ridge) -> bool {
        match self {
            VisitedSet::Dense { n, bits, len } => {
                let r = ridge_rank(ridge, *n) as usize;
                let (word, bit) = (r / 64, r % 64);
                let fresh = bits[word] & (1 << bit) == 0;
                bits[word] |= 1 << bit;
                *len += usize::from(fresh);
                fresh
            }
            VisitedSet::Hashed(set) => set.insert(ridge.clone()),
        }
    }

    pub fn contains(&self, ridge: &Ridge) -> bool {
        match self {
            VisitedSet::Dense { n, bits, .. } => {
                let r = ridge_rank(ridge, *n) as usize;
                bits[r / 64] & (1 << (r % 64)) != 0
            }
            VisitedSet::Hashed(set) => set.contains(ridge),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            VisitedSet::Dense { len, .. } => *len,
            VisitedSet::Hashed(set) => set.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, VisitedSet::Dense { .. })
    }
}

/// FIFO queue of ridges awaiting a scan.
#[derive(Clone, Debug, Default)]
pub struct RidgeQueue(VecDeque<Ridge>);

impl RidgeQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, ridge: Ridge) {
        self.0.push_back(ridge);
    }

    pub fn pop(&mut self) -> Option<Ridge> {
        self.0.pop_front()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Removes and returns every queued ridge in FIFO order.
    pub fn drain_all(&mut self) -> Vec<Ridge> {
        self.0.drain(..).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Ridge> {
        self.0.iter()
    }
}
