use std::collections::BTreeMap;
use std::ops::Bound;

use crate::scalar::Scalar;
use crate::Q;

/// A sparse vector keyed by an ordered index type.
pub type SparseVec<K, F = Q> = BTreeMap<K, F>;

/// Linear combination of previously inserted vectors, keyed by their tags.
pub type Combination<F = Q> = BTreeMap<usize, F>;

/// What happened when a vector was inserted into an [`Echelon`].
#[derive(Clone, Debug, PartialEq)]
pub enum Insert<F = Q> {
    /// The vector enlarged the span.
    Independent,
    /// The vector was already in the span; the payload is a tag-space
    /// combination mapping to zero.
    Dependent(Combination<F>),
}

#[derive(Clone, Debug)]
struct Row<K, F> {
    entries: Vec<(K, F)>,
    tag: Combination<F>,
}

/// An incrementally built row-echelon basis of sparse vectors.
///
/// Each stored row has a distinct leading key normalized to one. Every
/// inserted vector carries a tag (a formal combination of indices), and
/// the rows remember which combination of tags they came from, so
/// reductions report how a vector decomposes over the inserted ones.
#[derive(Clone, Debug)]
pub struct Echelon<K, F = Q> {
    rows: Vec<Row<K, F>>,
    pivots: BTreeMap<K, usize>,
}

impl<K: Ord + Clone, F: Scalar> Default for Echelon<K, F> {
    fn default() -> Self {
        Self::new()
    }
}

fn axpy<F: Scalar>(acc: &mut Combination<F>, c: &F, x: &Combination<F>) {
    for (k, v) in x {
        let e = acc.entry(*k).or_insert_with(F::zero);
        *e = e.add_ref(&c.mul_ref(v));
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

impl<K: Ord + Clone, F: Scalar> Echelon<K, F> {
    pub fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivots.contains_key(k)
    }

    /// Reduces `v` against the stored rows.
    ///
    /// Returns the remainder, free of pivot keys, and the tag combination
    /// `c` with `v = remainder + sum_j c_j * (vector tagged j)`.
    pub fn reduce(&self, mut v: SparseVec<K, F>) -> (SparseVec<K, F>, Combination<F>) {
        let mut combo = Combination::new();
        let mut cursor: Option<K> = None;
        loop {
            let lower = match &cursor {
                Some(k) => Bound::Excluded(k),
                None => Bound::Unbounded,
            };
            let next = v
                .range((lower, Bound::Unbounded))
                .find(|(k, _)| self.pivots.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((key, c)) = next else { break };
            let row = &self.rows[self.pivots[&key]];
            for (k, x) in &row.entries {
                let e = v.entry(k.clone()).or_insert_with(F::zero);
                *e = e.sub_mul(&c, x);
                if e.is_zero() {
                    v.remove(k);
                }
            }
            axpy(&mut combo, &c, &row.tag);
            cursor = Some(key);
        }
        (v, combo)
    }

    /// Inserts `v` with the given tag.
    pub fn insert(&mut self, v: SparseVec<K, F>, tag: Combination<F>) -> Insert<F> {
        let (rem, combo) = self.reduce(v);
        let mut tag = tag;
        axpy(&mut tag, &-F::one(), &combo);
        let Some((lead_key, lead)) = rem.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return Insert::Dependent(tag);
        };
        let inv = F::one().div_ref(&lead);
        let entries = rem.into_iter().map(|(k, c)| (k, c.mul_ref(&inv))).collect();
        let tag = tag.into_iter().map(|(k, c)| (k, c.mul_ref(&inv))).collect();
        self.pivots.insert(lead_key, self.rows.len());
        self.rows.push(Row { entries, tag });
        Insert::Independent
    }

    /// Inserts `v` tagged by the single index `index`.
    pub fn insert_indexed(&mut self, v: SparseVec<K, F>, index: usize) -> Insert<F> {
        self.insert(v, Combination::from([(index, F::one())]))
    }

    /// Inserts `v` with an empty tag.
    pub fn insert_untagged(&mut self, v: SparseVec<K, F>) -> bool {
        matches!(self.insert(v, Combination::new()), Insert::Independent)
    }

    pub fn contains(&self, v: SparseVec<K, F>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Expresses `v` over the tagged inserted vectors, if it lies in the span.
    pub fn solve(&self, v: SparseVec<K, F>) -> Option<Combination<F>> {
        let (rem, combo) = self.reduce(v);
        rem.is_empty().then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(entries: &[(u32, i64)]) -> SparseVec<u32, Q> {
        entries.iter().map(|&(k, c)| (k, Q::from_i64(c))).collect()
    }

    #[test]
    fn kernel_from_dependencies() {
        let mut e = Echelon::<u32, Q>::new();
        assert_eq!(
            e.insert_indexed(sv(&[(0, 1), (1, 2)]), 0),
            Insert::Independent
        );
        match e.insert_indexed(sv(&[(0, 2), (1, 4)]), 1) {
            Insert::Dependent(rel) => {
                assert_eq!(
                    rel,
                    BTreeMap::from([(0, Q::from_i64(-2)), (1, Q::from_i64(1))])
                )
            }
            Insert::Independent => panic!("expected a dependency"),
        }
        assert_eq!(e.rank(), 1);
    }

    #[test]
    fn solve_recovers_combination() {
        let mut e = Echelon::<u32, Q>::new();
        e.insert_indexed(sv(&[(0, 1), (2, 1)]), 0);
        e.insert_indexed(sv(&[(1, 1), (2, -1)]), 1);
        let target = sv(&[(0, 3), (1, 2), (2, 1)]);
        let c = e.solve(target).unwrap();
        assert_eq!(
            c,
            BTreeMap::from([(0, Q::from_i64(3)), (1, Q::from_i64(2))])
        );
        assert!(e.solve(sv(&[(2, 1)])).is_none());
    }
}
