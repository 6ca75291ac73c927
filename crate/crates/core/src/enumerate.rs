//! Exhaustive, deterministic generators: kernel data of contractions and
//! collapses, admissible sub-relations, down-sets, convex subsets, and
//! catalogs of posets and preorders up to isomorphism.
//!
//! Everything here is plain brute force over partitions, subsets or
//! relation matrices. Output order is the lexicographic order of a fixed
//! serialization (restricted growth strings for partitions, bitmasks for
//! subsets), so two runs always agree.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::admissible::is_admissible;
use crate::canonical::{canonicalize, IsoClass};
use crate::error::{Error, Result};
use crate::maps::OrderMap;
use crate::relation::{full_mask, Partition, Relation, Subset};

/// All set partitions of `0..n` as restricted growth strings, in
/// lexicographic order.
pub fn set_partitions(n: usize) -> Vec<Partition> {
    fn go(labels: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Partition>) {
        if labels.len() == n {
            out.push(Partition::from_labels(labels));
            return;
        }
        let next = if labels.is_empty() { 0 } else { max + 1 };
        for b in 0..=next {
            labels.push(b);
            go(labels, max.max(b), n, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), 0, n, &mut out);
    out
}

/// A surjection out of a fixed poset, recorded by its kernel partition and
/// the induced order on the blocks. Used for contractions and collapses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelDatum {
    pub source: Relation,
    pub kernel: Partition,
    pub quotient: Relation,
    /// Induced sub-relation on each block, in block order.
    pub fibres: Vec<Relation>,
}

pub type ContractionDatum = KernelDatum;

impl KernelDatum {
    fn new(source: &Relation, kernel: Partition, quotient: Relation) -> Self {
        let fibres = kernel.blocks().into_iter().map(|b| source.induced(b)).collect();
        KernelDatum { source: source.clone(), kernel, quotient, fibres }
    }

    pub fn to_map(&self) -> OrderMap {
        OrderMap::from_partition(self.source.clone(), &self.kernel, self.quotient.clone())
            .expect("kernel datum is well formed")
    }

    pub fn is_identity(&self) -> bool {
        self.kernel.num_blocks() == self.source.n()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumOptions {
    /// Accept the empty poset and return its single empty map.
    pub allow_empty: bool,
}

fn check_input(p: &Relation, opts: EnumOptions) -> Result<bool> {
    p.require_poset()?;
    if p.is_empty() {
        if opts.allow_empty {
            return Ok(false);
        }
        return Err(Error::EmptyInput);
    }
    Ok(true)
}

fn empty_datum() -> KernelDatum {
    KernelDatum::new(&Relation::empty(), Partition::discrete(0), Relation::empty())
}

/// Induced quotient order of a contraction with the given kernel, if the
/// kernel defines one.
pub fn contraction_quotient(p: &Relation, kernel: &Partition) -> Option<Relation> {
    let blocks = kernel.blocks();
    if !blocks.iter().all(|&b| p.is_connected_subset(b) && p.is_convex_subset(b)) {
        return None;
    }
    let q = p.image_along(kernel);
    if !q.is_antisymmetric() {
        return None;
    }
    let covers = p.strict_covers();
    let lifts = q.strict_covers().iter().all(|c| {
        covers.iter().any(|d| kernel.block_of(d.lower) == c.lower && kernel.block_of(d.upper) == c.upper)
    });
    lifts.then_some(q)
}

/// Induced quotient order of a collapse with the given kernel, if any:
/// between two blocks either every pair is strictly related or none is.
pub fn collapse_quotient(p: &Relation, kernel: &Partition) -> Option<Relation> {
    let blocks = kernel.blocks();
    let k = blocks.len();
    let mut rows: Vec<u32> = (0..k).map(|b| 1 << b).collect();
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let related = blocks[a]
                .iter()
                .flat_map(|x| blocks[b].iter().map(move |y| (x, y)))
                .filter(|&(x, y)| p.lt(x, y))
                .count();
            if related == blocks[a].len() * blocks[b].len() {
                rows[a] |= 1 << b;
            } else if related != 0 {
                return None;
            }
        }
    }
    Some(Relation::from_rows(k, rows))
}

pub fn enumerate_contractions(p: &Relation) -> Result<Vec<ContractionDatum>> {
    enumerate_contractions_with(p, EnumOptions::default())
}

/// All contractions out of `p`, up to isomorphism over `p`.
pub fn enumerate_contractions_with(p: &Relation, opts: EnumOptions) -> Result<Vec<ContractionDatum>> {
    if !check_input(p, opts)? {
        return Ok(vec![empty_datum()]);
    }
    Ok(set_partitions(p.n())
        .into_iter()
        .filter_map(|kernel| contraction_quotient(p, &kernel).map(|q| KernelDatum::new(p, kernel, q)))
        .collect())
}

pub fn enumerate_collapses(p: &Relation) -> Result<Vec<KernelDatum>> {
    enumerate_collapses_with(p, EnumOptions::default())
}

/// All collapse maps out of `p`, up to isomorphism over `p`.
pub fn enumerate_collapses_with(p: &Relation, opts: EnumOptions) -> Result<Vec<KernelDatum>> {
    if !check_input(p, opts)? {
        return Ok(vec![empty_datum()]);
    }
    Ok(set_partitions(p.n())
        .into_iter()
        .filter_map(|kernel| collapse_quotient(p, &kernel).map(|q| KernelDatum::new(p, kernel, q)))
        .collect())
}

/// All contractions of preorders out of `t`, as identity-on-objects maps
/// `t -> v`. The target is determined by its `≃`-classes: it is the
/// transitive closure of `t` with each class made indiscrete.
pub fn enumerate_preorder_contractions(t: &Relation) -> Result<Vec<OrderMap>> {
    t.require_preorder()?;
    let mut out = Vec::new();
    for classes in set_partitions(t.n()) {
        let mut rows = t.rows().to_vec();
        for b in classes.blocks() {
            for x in b.iter() {
                rows[x] |= b.mask();
            }
        }
        let v = Relation::from_rows(t.n(), rows).transitive_closure();
        if v.equivalence_classes() != classes {
            continue;
        }
        let f = OrderMap::new(t.clone(), v, (0..t.n()).collect())?;
        if f.is_preorder_contraction() {
            out.push(f);
        }
    }
    Ok(out)
}

/// All admissible sub-relations of the preorder `t`.
///
/// An admissible sub-relation is full on each of its connected components,
/// so it is the union of `t` restricted to the blocks of a partition. The
/// search runs over partitions into `t`-connected blocks and keeps those
/// passing the admissibility test.
pub fn enumerate_admissible(t: &Relation) -> Result<Vec<Relation>> {
    t.require_preorder()?;
    let mut out = Vec::new();
    for partition in set_partitions(t.n()) {
        let blocks = partition.blocks();
        if !blocks.iter().all(|&b| t.is_connected_subset(b)) {
            continue;
        }
        let rows = (0..t.n()).map(|x| t.rows()[x] & partition.block(partition.block_of(x)).mask()).collect();
        let sub = Relation::from_rows(t.n(), rows);
        if is_admissible(&sub, t)? {
            out.push(sub);
        }
    }
    out.sort_by_key(|s| s.pairs().collect::<Vec<_>>());
    Ok(out)
}

/// A cut of a poset into a down-set and its complementary up-set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutDatum {
    #[serde(skip)]
    pub source: Relation,
    pub downset: Vec<usize>,
}

impl CutDatum {
    pub fn down(&self) -> Subset {
        Subset::from_elements(&self.downset)
    }

    pub fn up(&self) -> Subset {
        Subset::full(self.source.n()).difference(self.down())
    }
}

fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    (0..=full_mask(n) as u64).map(|m| Subset::from_mask(m as u32))
}

/// All down-closed subsets, including the empty and the full one.
pub fn enumerate_downsets(p: &Relation) -> Result<Vec<CutDatum>> {
    p.require_poset()?;
    Ok(all_subsets(p.n())
        .filter(|&s| p.is_down_closed(s))
        .map(|s| CutDatum { source: p.clone(), downset: s.to_vec() })
        .collect())
}

pub fn enumerate_convex_subsets(p: &Relation) -> Result<Vec<Subset>> {
    p.require_poset()?;
    Ok(all_subsets(p.n()).filter(|&s| p.is_convex_subset(s)).collect())
}

/// Largest `n` accepted by [`catalog`].
pub const CATALOG_MAX_SIZE: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogKind {
    Poset,
    Preorder,
    ConnectedPoset,
    ConnectedPreorder,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub class: IsoClass,
    #[serde(skip)]
    pub representative: Relation,
}

/// One canonical representative per isomorphism class of size `n`, sorted
/// by canonical encoding.
pub fn catalog(kind: CatalogKind, n: usize) -> Result<Vec<CatalogEntry>> {
    if n > CATALOG_MAX_SIZE {
        return Err(Error::SizeBound { size: n, bound: CATALOG_MAX_SIZE });
    }
    let classes = match kind {
        CatalogKind::Poset => poset_classes(n)?,
        CatalogKind::ConnectedPoset => {
            poset_classes(n)?.into_iter().filter(|c| c.to_relation().is_connected()).collect()
        }
        CatalogKind::Preorder => preorder_classes(n)?,
        CatalogKind::ConnectedPreorder => {
            preorder_classes(n)?.into_iter().filter(|c| c.to_relation().is_connected()).collect()
        }
    };
    Ok(classes.into_iter().map(|class| CatalogEntry { representative: class.to_relation(), class }).collect())
}

/// Representatives of all classes of sizes `1..=n_max`.
pub fn catalog_up_to(kind: CatalogKind, n_max: usize) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.extend(catalog(kind, n)?.into_iter().map(|e| e.representative));
    }
    Ok(out)
}

/// Every poset has a linear extension, so it suffices to scan strictly
/// upper-triangular relation matrices and keep the transitive ones.
fn poset_classes(n: usize) -> Result<Vec<IsoClass>> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen = BTreeMap::new();
    for bits in 0..1u64 << slots.len() {
        let mut rows: Vec<u32> = (0..n).map(|i| 1 << i).collect();
        for (s, &(i, j)) in slots.iter().enumerate() {
            if bits >> s & 1 == 1 {
                rows[i] |= 1 << j;
            }
        }
        let rel = Relation::from_rows(n, rows);
        if rel.is_transitive() {
            seen.insert(canonicalize(&rel)?.class, ());
        }
    }
    Ok(seen.into_keys().collect())
}

/// A preorder is a poset of `≃`-classes with a positive size on each
/// class; blow up every poset of size `k <= n` along every composition of
/// `n` into `k` parts.
fn preorder_classes(n: usize) -> Result<Vec<IsoClass>> {
    if n == 0 {
        return Ok(vec![canonicalize(&Relation::empty())?.class]);
    }
    let mut seen = BTreeMap::new();
    for k in 1..=n {
        for poset in poset_classes(k)? {
            let q = poset.to_relation();
            for sizes in compositions(n, k) {
                seen.insert(canonicalize(&blow_up(&q, &sizes))?.class, ());
            }
        }
    }
    Ok(seen.into_keys().collect())
}

/// Replaces element `i` of `q` by an indiscrete block of `sizes[i]`
/// elements.
pub fn blow_up(q: &Relation, sizes: &[usize]) -> Relation {
    let owner: Vec<usize> = sizes.iter().enumerate().flat_map(|(i, &s)| std::iter::repeat_n(i, s)).collect();
    let n = owner.len();
    let rows = (0..n)
        .map(|x| (0..n).filter(|&y| q.le(owner[x], owner[y])).fold(0u32, |m, y| m | 1 << y))
        .collect();
    Relation::from_rows(n, rows)
}

/// Compositions of `n` into exactly `k` positive parts.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(k - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All posets on the labeled set `0..n` (every relation matrix that is a
/// partial order), for `n <= 5`. Cached.
pub fn labeled_posets(n: usize) -> &'static [Relation] {
    static CACHE: [OnceLock<Vec<Relation>>; 6] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    assert!(n <= 5, "labeled poset enumeration is limited to 5 elements");
    CACHE[n].get_or_init(|| {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut out = Vec::new();
        // each unordered pair is unrelated, below or above
        let total = 3u64.pow(slots.len() as u32);
        for mut code in 0..total {
            let mut rows: Vec<u32> = (0..n).map(|i| 1 << i).collect();
            for &(i, j) in &slots {
                match code % 3 {
                    1 => rows[i] |= 1 << j,
                    2 => rows[j] |= 1 << i,
                    _ => {}
                }
                code /= 3;
            }
            let rel = Relation::from_rows(n, rows);
            if rel.is_transitive() {
                out.push(rel);
            }
        }
        out
    })
}
