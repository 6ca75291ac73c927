//! Finite reflexive relations on ordinals, with posets and preorders as the
//! two specializations everything else is built on.
//!
//! Elements are always `0..n`. A relation is stored as one bitmask row per
//! element: bit `j` of `rows[i]` is set iff `i <= j`. Any operation that
//! produces a relation on a different element set (restriction, quotient,
//! posetification) relabels along the increasing bijection, so results are
//! deterministic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard ceiling on the element count of a single relation.
pub const MAX_ELEMENTS: usize = 32;

/// A set of elements of a relation, as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u32) -> Self {
        Subset(mask)
    }

    pub fn full(n: usize) -> Self {
        Subset(full_mask(n))
    }

    pub fn singleton(x: usize) -> Self {
        Subset(1 << x)
    }

    pub fn from_elements(elements: &[usize]) -> Self {
        Subset(elements.iter().fold(0, |m, &x| m | (1 << x)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1 << x;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let x = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(x)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A cover `lower ⋖ upper`: strictly related with nothing strictly between.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoverPair {
    pub lower: usize,
    pub upper: usize,
}

/// A set partition of `0..n`, stored as a restricted growth string: blocks
/// are numbered in order of their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block_of: Vec<usize>,
    num_blocks: usize,
}

impl Partition {
    /// Normalizes an arbitrary labeling into restricted-growth form.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut renumber: Vec<(usize, usize)> = Vec::new();
        let mut block_of = Vec::with_capacity(labels.len());
        for &l in labels {
            let b = match renumber.iter().find(|(old, _)| *old == l) {
                Some(&(_, new)) => new,
                None => {
                    let new = renumber.len();
                    renumber.push((l, new));
                    new
                }
            };
            block_of.push(b);
        }
        Partition { num_blocks: renumber.len(), block_of }
    }

    pub fn from_blocks(n: usize, blocks: &[Subset]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for x in block.iter() {
                if x >= n || labels[x] != usize::MAX {
                    return Err(Error::Parse(format!("blocks do not partition 0..{n}")));
                }
                labels[x] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::Parse(format!("blocks do not cover 0..{n}")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn discrete(n: usize) -> Self {
        Partition { block_of: (0..n).collect(), num_blocks: n }
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> Vec<Subset> {
        let mut blocks = vec![Subset::EMPTY; self.num_blocks];
        for (x, &b) in self.block_of.iter().enumerate() {
            blocks[b].insert(x);
        }
        blocks
    }

    pub fn block(&self, b: usize) -> Subset {
        let mut s = Subset::EMPTY;
        for (x, &c) in self.block_of.iter().enumerate() {
            if c == b {
                s.insert(x);
            }
        }
        s
    }
}

/// A reflexive binary relation on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n: usize,
    rows: Vec<u32>,
}

/// Serialized as `{"n": <count>, "rel": [[i, j], ...]}` with the
/// non-reflexive pairs.
impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Relation", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("rel", &self.pairs().map(|(i, j)| [i, j]).collect::<Vec<_>>())?;
        st.end()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation(n={}; ", self.n)?;
        let mut first = true;
        for (i, j) in self.pairs() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{i}<={j}")?;
        }
        write!(f, ")")
    }
}

impl Relation {
    /// The discrete (antichain) relation: only the reflexive pairs.
    pub fn discrete(n: usize) -> Self {
        assert!(n <= MAX_ELEMENTS, "at most {MAX_ELEMENTS} elements");
        Relation { n, rows: (0..n).map(|i| 1 << i).collect() }
    }

    pub fn empty() -> Self {
        Self::discrete(0)
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        assert!(n <= MAX_ELEMENTS, "at most {MAX_ELEMENTS} elements");
        let full = full_mask(n);
        Relation { n, rows: (0..n).map(|i| full & !((1u32 << i) - 1)).collect() }
    }

    /// Every element related to every other.
    pub fn indiscrete(n: usize) -> Self {
        assert!(n <= MAX_ELEMENTS, "at most {MAX_ELEMENTS} elements");
        Relation { n, rows: vec![full_mask(n); n] }
    }

    /// Reflexive relation generated by `pairs` (no transitive closure).
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::SizeBound { size: n, bound: MAX_ELEMENTS });
        }
        let mut rel = Self::discrete(n);
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::Parse(format!("pair ({i}, {j}) out of range for n={n}")));
            }
            rel.rows[i] |= 1 << j;
        }
        Ok(rel)
    }

    /// Builds a relation from raw rows; reflexivity is forced.
    pub fn from_rows(n: usize, rows: Vec<u32>) -> Self {
        assert_eq!(rows.len(), n);
        let mask = full_mask(n);
        let rows = rows.into_iter().enumerate().map(|(i, r)| (r & mask) | 1 << i).collect();
        Relation { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Strict order: `i <= j` but not `j <= i`.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.le(i, j) && !self.le(j, i)
    }

    pub fn equiv(&self, i: usize, j: usize) -> bool {
        self.le(i, j) && self.le(j, i)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.le(i, j) || self.le(j, i)
    }

    /// Elements `>= x`.
    pub fn up(&self, x: usize) -> Subset {
        Subset(self.rows[x])
    }

    /// Elements `<= x`.
    pub fn down(&self, x: usize) -> Subset {
        let mut s = Subset::EMPTY;
        for i in 0..self.n {
            if self.le(i, x) {
                s.insert(i);
            }
        }
        s
    }

    /// Non-reflexive pairs `(i, j)` with `i <= j`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            Subset(self.rows[i] & !(1 << i)).iter().map(move |j| (i, j))
        })
    }

    pub fn is_reflexive(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r >> i & 1 == 1)
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.n).all(|i| Subset(self.rows[i]).iter().all(|j| self.rows[j] & !self.rows[i] == 0))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().all(|(i, j)| !self.le(j, i))
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    pub fn is_poset(&self) -> bool {
        self.is_preorder() && self.is_antisymmetric()
    }

    pub fn is_discrete(&self) -> bool {
        self.pairs().next().is_none()
    }

    /// Every relation invertible.
    pub fn is_groupoid(&self) -> bool {
        self.pairs().all(|(i, j)| self.le(j, i))
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.connected_components().num_blocks() == 1
    }

    pub fn is_subrelation_of(&self, other: &Relation) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn require_preorder(&self) -> Result<()> {
        if self.is_preorder() {
            Ok(())
        } else {
            Err(Error::NotAPreorder(format!("{self:?}")))
        }
    }

    pub fn require_poset(&self) -> Result<()> {
        if self.is_poset() {
            Ok(())
        } else {
            Err(Error::NotAPoset(format!("{self:?}")))
        }
    }

    /// Smallest transitive relation containing `self`.
    pub fn transitive_closure(&self) -> Relation {
        let mut rows = self.rows.clone();
        for k in 0..self.n {
            let rk = rows[k];
            for row in rows.iter_mut() {
                if *row >> k & 1 == 1 {
                    *row |= rk;
                }
            }
        }
        Relation { n: self.n, rows }
    }

    /// Pairwise union of two relations on the same elements.
    pub fn union(&self, other: &Relation) -> Result<Relation> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect();
        Ok(Relation { n: self.n, rows })
    }

    /// The opposite relation.
    pub fn opposite(&self) -> Relation {
        let mut rows = vec![0u32; self.n];
        for i in 0..self.n {
            for j in Subset(self.rows[i]).iter() {
                rows[j] |= 1 << i;
            }
        }
        Relation { n: self.n, rows }
    }

    /// Covers `p ⋖ p'` in a preorder: `p < p'` strictly with no `x` such
    /// that `p < x < p'`. For posets this is the transitive reduction.
    pub fn strict_covers(&self) -> Vec<CoverPair> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.lt(i, j) && !(0..self.n).any(|x| self.lt(i, x) && self.lt(x, j)) {
                    out.push(CoverPair { lower: i, upper: j });
                }
            }
        }
        out
    }

    /// The cover relation (Hasse diagram) of a poset.
    pub fn covers(&self) -> Result<Vec<CoverPair>> {
        self.require_poset()?;
        Ok(self.strict_covers())
    }

    /// Zig-zag connectivity classes of the comparability graph.
    pub fn connected_components(&self) -> Partition {
        let mut labels = vec![usize::MAX; self.n];
        let mut next = 0;
        for start in 0..self.n {
            if labels[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            labels[start] = next;
            while let Some(x) = stack.pop() {
                for (y, label) in labels.iter_mut().enumerate() {
                    if *label == usize::MAX && self.comparable(x, y) {
                        *label = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        Partition::from_labels(&labels)
    }

    /// Whether `s` is connected as an induced sub-relation.
    pub fn is_connected_subset(&self, s: Subset) -> bool {
        let Some(start) = s.iter().next() else {
            return false;
        };
        let mut seen = Subset::singleton(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in s.difference(seen).iter() {
                if self.comparable(x, y) {
                    seen.insert(y);
                    stack.push(y);
                }
            }
        }
        seen == s
    }

    /// `x, y ∈ s` and `x <= w <= y` imply `w ∈ s`.
    pub fn is_convex_subset(&self, s: Subset) -> bool {
        s.iter().all(|x| {
            s.iter().all(|y| {
                if !self.le(x, y) {
                    return true;
                }
                let between = Subset(self.rows[x]).intersection(self.down(y));
                between.is_subset_of(s)
            })
        })
    }

    pub fn is_down_closed(&self, s: Subset) -> bool {
        s.iter().all(|x| self.down(x).is_subset_of(s))
    }

    pub fn is_up_closed(&self, s: Subset) -> bool {
        s.iter().all(|x| self.up(x).is_subset_of(s))
    }

    /// Restriction to `s`, relabeled along the increasing bijection
    /// `s -> 0..|s|`.
    pub fn induced(&self, s: Subset) -> Relation {
        let elems = s.to_vec();
        let rows = elems
            .iter()
            .map(|&i| {
                elems
                    .iter()
                    .enumerate()
                    .filter(|&(_, &j)| self.le(i, j))
                    .fold(0u32, |m, (k, _)| m | 1 << k)
            })
            .collect();
        Relation { n: elems.len(), rows }
    }

    /// Transitive closure of the image of `self` along the block map of
    /// `partition`, as a relation on the blocks.
    pub fn image_along(&self, partition: &Partition) -> Relation {
        assert_eq!(partition.len(), self.n);
        let k = partition.num_blocks();
        let mut rows: Vec<u32> = (0..k).map(|b| 1 << b).collect();
        for (i, j) in self.pairs() {
            rows[partition.block_of(i)] |= 1 << partition.block_of(j);
        }
        Relation { n: k, rows }.transitive_closure()
    }

    /// The equivalence `x ≃ y` of a preorder as a partition.
    pub fn equivalence_classes(&self) -> Partition {
        let labels: Vec<usize> =
            (0..self.n).map(|x| (0..self.n).find(|&y| self.equiv(x, y)).unwrap_or(x)).collect();
        Partition::from_labels(&labels)
    }

    /// Quotient by mutual comparability. Returns the poset together with
    /// the class of each element.
    pub fn posetify(&self) -> (Relation, Partition) {
        let classes = self.equivalence_classes();
        let poset = self.image_along(&classes);
        (poset, classes)
    }

    /// Block-diagonal relation on `n_self + n_other` elements.
    pub fn disjoint_union(&self, other: &Relation) -> Relation {
        let n = self.n + other.n;
        assert!(n <= MAX_ELEMENTS, "at most {MAX_ELEMENTS} elements");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|r| r << self.n));
        Relation { n, rows }
    }

    /// Relabels element `i` as `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Relation {
        assert_eq!(perm.len(), self.n);
        let mut rows = vec![0u32; self.n];
        for i in 0..self.n {
            for j in Subset(self.rows[i]).iter() {
                rows[perm[i]] |= 1 << perm[j];
            }
        }
        Relation { n: self.n, rows }
    }

    /// The sub-preorder of invertible arrows.
    pub fn invertible_part(&self) -> Relation {
        let rows = (0..self.n)
            .map(|i| Subset(self.rows[i]).iter().filter(|&j| self.le(j, i)).fold(0, |m, j| m | 1 << j))
            .collect();
        Relation { n: self.n, rows }
    }
}
