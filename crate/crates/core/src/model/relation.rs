// SPDX-License-Identifier: Apache-2.0

//! Bitset world sets and binary relations over at most 64 worlds.

use std::fmt;

/// Largest world count a [`Relation`] can hold.
pub const MAX_WORLDS: usize = 64;

/// A set of world indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet(pub u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    /// `{0, .., n-1}`
    pub fn full(n: usize) -> WorldSet {
        if n >= 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(w: usize) -> WorldSet {
        WorldSet(1 << w)
    }

    pub fn contains(self, w: usize) -> bool {
        self.0 >> w & 1 == 1
    }

    pub fn insert(&mut self, w: usize) {
        self.0 |= 1 << w;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn difference(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & !other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w)
            }
        })
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A binary relation on `{0, .., n-1}` stored as successor rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    rows: Vec<WorldSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        assert!(n <= MAX_WORLDS, "at most {MAX_WORLDS} worlds supported");
        Relation {
            rows: vec![WorldSet::EMPTY; n],
        }
    }

    pub fn identity(n: usize) -> Relation {
        let mut r = Relation::empty(n);
        for w in 0..n {
            r.insert(w, w);
        }
        r
    }

    pub fn from_rows(rows: Vec<WorldSet>) -> Relation {
        assert!(rows.len() <= MAX_WORLDS);
        Relation { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, w: usize) -> WorldSet {
        self.rows[w]
    }

    pub fn rows(&self) -> &[WorldSet] {
        &self.rows
    }

    pub fn contains(&self, w: usize, u: usize) -> bool {
        self.rows[w].contains(u)
    }

    /// Returns whether the pair was new.
    pub fn insert(&mut self, w: usize, u: usize) -> bool {
        let fresh = !self.contains(w, u);
        self.rows[w].insert(u);
        fresh
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(w, row)| row.iter().map(move |u| (w, u)))
    }

    pub fn transpose(&self) -> Relation {
        let mut t = Relation::empty(self.size());
        for (w, u) in self.pairs() {
            t.insert(u, w);
        }
        t
    }

    /// `self ; other`: pairs `(w, v)` with `w self u` and `u other v`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(WorldSet::EMPTY, |acc, u| acc.union(other.rows[u]))
            })
            .collect();
        Relation { rows }
    }

    /// Adds every pair of `other`; returns whether anything changed.
    pub fn union_with(&mut self, other: &Relation) -> bool {
        let mut changed = false;
        for (mine, theirs) in self.rows.iter_mut().zip(&other.rows) {
            let merged = mine.union(*theirs);
            changed |= merged != *mine;
            *mine = merged;
        }
        changed
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows
            .iter()
            .zip(&other.rows)
            .all(|(a, b)| a.is_subset(*b))
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn reflexive_transitive_closure(&self) -> Relation {
        let n = self.size();
        let mut rows = self.rows.clone();
        for (w, row) in rows.iter_mut().enumerate() {
            row.insert(w);
        }
        for k in 0..n {
            let via = rows[k];
            for row in rows.iter_mut() {
                if row.contains(k) {
                    *row = row.union(via);
                }
            }
        }
        Relation { rows }
    }

    /// Image of a set: all `u` with `w R u` for some `w` in `set`.
    pub fn image(&self, set: WorldSet) -> WorldSet {
        set.iter()
            .fold(WorldSet::EMPTY, |acc, w| acc.union(self.rows[w]))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}
