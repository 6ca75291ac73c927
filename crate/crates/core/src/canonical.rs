//! Canonical forms and automorphism counts for finite preorders.
//!
//! The canonical encoding of a relation on `n` elements is the minimum, over
//! all relabelings compatible with an invariant partition of the elements,
//! of the bit string listing, for each position `k` and each earlier
//! position `j`, the two bits `σk <= σj` and `σj <= σk`. Two preorders are
//! isomorphic iff their encodings agree. The number of relabelings attaining
//! the minimum is the order of the automorphism group.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::relation::Relation;

/// Default bound on the element count for exhaustive operations.
pub const DEFAULT_MAX_SIZE: usize = 10;

/// Hard bound imposed by the 128-bit encoding (`n(n-1) <= 128`).
pub const ENCODING_MAX_SIZE: usize = 11;

/// Isomorphism class of a finite preorder.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoClass {
    size: u8,
    code: u128,
    aut_count: u64,
}

impl IsoClass {
    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn aut_count(&self) -> u64 {
        self.aut_count
    }

    /// The canonical encoding as big-endian bytes, `ceil(n(n-1)/8)` long.
    pub fn encoding(&self) -> Vec<u8> {
        let bits = code_len(self.size());
        let bytes = bits.div_ceil(8);
        let padded = self.code << (bytes * 8 - bits);
        padded.to_be_bytes()[16 - bytes..].to_vec()
    }

    /// Stable key: `<n>:<hex encoding>`.
    pub fn key(&self) -> String {
        let hex: String = self.encoding().iter().map(|b| format!("{b:02x}")).collect();
        format!("{}:{}", self.size, hex)
    }

    /// The canonical representative.
    pub fn to_relation(&self) -> Relation {
        decode(self.size(), self.code)
    }

    pub fn is_point(&self) -> bool {
        self.size == 1
    }
}

impl fmt::Debug for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IsoClass({}, aut={})", self.key(), self.aut_count)
    }
}

impl fmt::Display for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl Serialize for IsoClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

fn code_len(n: usize) -> usize {
    n * n.saturating_sub(1)
}

fn decode(n: usize, code: u128) -> Relation {
    let total = code_len(n);
    let mut rows: Vec<u32> = (0..n).map(|i| 1 << i).collect();
    let mut pos = 0;
    let mut bit = || {
        pos += 1;
        code >> (total - pos) & 1 == 1
    };
    for k in 1..n {
        for j in 0..k {
            if bit() {
                rows[k] |= 1 << j;
            }
            if bit() {
                rows[j] |= 1 << k;
            }
        }
    }
    Relation::from_rows(n, rows)
}

/// Canonical class plus a labeling realizing it: element `i` of the input
/// sits at position `labeling[i]` of the canonical representative.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub class: IsoClass,
    pub labeling: Vec<usize>,
}

struct Search<'a> {
    rel: &'a Relation,
    n: usize,
    total: usize,
    cells: Vec<u64>,
    inv: Vec<u64>,
    perm: Vec<usize>,
    best: Option<u128>,
    best_perm: Vec<usize>,
    count: u64,
}

impl Search<'_> {
    fn run(&mut self, k: usize, prefix: u128, used: u32) {
        if k == self.n {
            match self.best {
                Some(b) if prefix == b => self.count += 1,
                Some(b) if prefix > b => {}
                _ => {
                    self.best = Some(prefix);
                    self.best_perm = self.perm.clone();
                    self.count = 1;
                }
            }
            return;
        }
        let len = k * (k + 1);
        for x in 0..self.n {
            if used >> x & 1 == 1 || self.inv[x] != self.cells[k] {
                continue;
            }
            let mut code = prefix;
            for j in 0..k {
                let y = self.perm[j];
                code = code << 2 | (self.rel.le(x, y) as u128) << 1 | self.rel.le(y, x) as u128;
            }
            if let Some(b) = self.best {
                let b_prefix = if len == 0 { 0 } else { b >> (self.total - len) };
                if code > b_prefix {
                    continue;
                }
            }
            self.perm.push(x);
            self.run(k + 1, code, used | 1 << x);
            self.perm.pop();
        }
    }
}

/// Element invariants: up/down counts refined once by the multisets of the
/// neighbours' counts, replaced by their rank among all distinct values.
fn invariants(rel: &Relation) -> Vec<u64> {
    type Inv = ((usize, usize), Vec<(usize, usize)>, Vec<(usize, usize)>);
    let n = rel.n();
    let base: Vec<(usize, usize)> = (0..n).map(|x| (rel.down(x).len(), rel.up(x).len())).collect();
    let full: Vec<Inv> = (0..n)
        .map(|x| {
            let mut below: Vec<_> = rel.down(x).iter().map(|y| base[y]).collect();
            let mut above: Vec<_> = rel.up(x).iter().map(|y| base[y]).collect();
            below.sort_unstable();
            above.sort_unstable();
            (base[x], below, above)
        })
        .collect();
    let mut distinct = full.clone();
    distinct.sort();
    distinct.dedup();
    full.iter().map(|v| distinct.binary_search(v).expect("present") as u64).collect()
}

fn search(rel: &Relation) -> Canonical {
    let n = rel.n();
    let inv = invariants(rel);
    let mut cells = inv.clone();
    cells.sort_unstable();
    let mut s = Search {
        rel,
        n,
        total: code_len(n),
        cells,
        inv,
        perm: Vec::with_capacity(n),
        best: None,
        best_perm: Vec::new(),
        count: 0,
    };
    s.run(0, 0, 0);
    let code = s.best.unwrap_or(0);
    let mut labeling = vec![0; n];
    for (pos, &x) in s.best_perm.iter().enumerate() {
        labeling[x] = pos;
    }
    Canonical { class: IsoClass { size: n as u8, code, aut_count: s.count.max(1) }, labeling }
}

fn cache() -> &'static RwLock<HashMap<Relation, Canonical>> {
    static CACHE: OnceLock<RwLock<HashMap<Relation, Canonical>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Canonical class and labeling, within an explicit size bound.
pub fn canonicalize_within(rel: &Relation, max_size: usize) -> Result<Canonical> {
    let bound = max_size.min(ENCODING_MAX_SIZE);
    if rel.n() > bound {
        return Err(Error::SizeBound { size: rel.n(), bound });
    }
    rel.require_preorder()?;
    if let Some(c) = cache().read().expect("canonical cache poisoned").get(rel) {
        return Ok(c.clone());
    }
    let c = search(rel);
    cache().write().expect("canonical cache poisoned").insert(rel.clone(), c.clone());
    Ok(c)
}

pub fn canonicalize(rel: &Relation) -> Result<Canonical> {
    canonicalize_within(rel, DEFAULT_MAX_SIZE)
}

pub fn canonical_form(rel: &Relation) -> Result<IsoClass> {
    Ok(canonicalize(rel)?.class)
}

/// The canonical representative of `rel`'s class.
pub fn canonical_relation(rel: &Relation) -> Result<Relation> {
    Ok(canonical_form(rel)?.to_relation())
}

pub fn are_isomorphic(a: &Relation, b: &Relation) -> Result<bool> {
    if a.n() != b.n() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}
