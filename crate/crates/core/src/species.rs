//! Predicate species: classes of posets (or preorders) closed under
//! restriction to convex pieces and under pushforward along contractions or
//! collapses.

use std::fmt;

use serde::Serialize;

use crate::enumerate::{catalog_up_to, enumerate_admissible, enumerate_collapses, enumerate_contractions, CatalogKind};
use crate::error::{Error, Result};
use crate::admissible::quotient;
use crate::canonical::canonical_form;
use crate::relation::{full_mask, Relation, Subset};
use crate::report::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Carrier {
    Posets,
    Preorders,
}

/// Connected species act through contractions on connected objects;
/// general species act through collapses on arbitrary ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    Connected,
    General,
}

#[derive(Clone, Copy)]
pub struct SpeciesSpec {
    pub name: &'static str,
    pub carrier: Carrier,
    pub variant: Variant,
    membership: fn(&Relation) -> bool,
}

impl fmt::Debug for SpeciesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpeciesSpec")
            .field("name", &self.name)
            .field("carrier", &self.carrier)
            .field("variant", &self.variant)
            .finish()
    }
}

impl PartialEq for SpeciesSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.carrier == other.carrier && self.variant == other.variant
    }
}

impl Eq for SpeciesSpec {}

impl SpeciesSpec {
    pub const fn new(name: &'static str, carrier: Carrier, variant: Variant, membership: fn(&Relation) -> bool) -> Self {
        SpeciesSpec { name, carrier, variant, membership }
    }

    pub fn is_member(&self, p: &Relation) -> bool {
        let carrier_ok = match self.carrier {
            Carrier::Posets => p.is_poset(),
            Carrier::Preorders => p.is_preorder(),
        };
        carrier_ok && !p.is_empty() && (self.membership)(p)
    }

    /// Membership of every connected component.
    pub fn is_member_componentwise(&self, p: &Relation) -> bool {
        p.connected_components().blocks().into_iter().all(|b| self.is_member(&p.induced(b)))
    }

    pub fn require_member(&self, p: &Relation) -> Result<()> {
        if self.is_member(p) {
            return Ok(());
        }
        let key = canonical_form(p).map(|c| c.key()).unwrap_or_else(|_| format!("{p:?}"));
        Err(Error::NotMember { species: self.name, key })
    }
}

fn any(_: &Relation) -> bool {
    true
}

fn connected(p: &Relation) -> bool {
    p.is_connected()
}

/// A maximum element, and every closed interval totally ordered.
pub fn is_tree(p: &Relation) -> bool {
    let n = p.n();
    let has_top = (0..n).any(|t| (0..n).all(|x| p.le(x, t)));
    has_top
        && (0..n).all(|x| {
            p.up(x).iter().all(|y| {
                let interval: Vec<usize> = p.up(x).intersection(p.down(y)).to_vec();
                interval.iter().all(|&a| interval.iter().all(|&b| p.comparable(a, b)))
            })
        })
}

/// A tree in which every element has at most one cover below it.
pub fn is_linear_tree(p: &Relation) -> bool {
    is_tree(p) && {
        let covers = p.strict_covers();
        (0..p.n()).all(|x| covers.iter().filter(|c| c.upper == x).count() <= 1)
    }
}

fn tree(p: &Relation) -> bool {
    is_tree(p)
}

fn linear_tree(p: &Relation) -> bool {
    is_linear_tree(p)
}

fn discrete(p: &Relation) -> bool {
    p.is_discrete()
}

/// Connected posets.
pub const ALL_POSETS: SpeciesSpec = SpeciesSpec::new("all", Carrier::Posets, Variant::Connected, connected);
/// Arbitrary non-empty posets, acted on by collapses.
pub const ALL_POSETS_GENERAL: SpeciesSpec = SpeciesSpec::new("all", Carrier::Posets, Variant::General, any);
pub const TREES: SpeciesSpec = SpeciesSpec::new("trees", Carrier::Posets, Variant::Connected, tree);
pub const LINEAR_TREES: SpeciesSpec = SpeciesSpec::new("linear", Carrier::Posets, Variant::Connected, linear_tree);
/// Connected preorders.
pub const ALL_PREORDERS: SpeciesSpec = SpeciesSpec::new("preorders", Carrier::Preorders, Variant::Connected, connected);
pub const DISCRETE: SpeciesSpec = SpeciesSpec::new("discrete", Carrier::Posets, Variant::General, discrete);

pub const NAMES: [&str; 5] = ["all", "trees", "linear", "preorders", "discrete"];

pub fn by_name(name: &str) -> Option<SpeciesSpec> {
    match name {
        "all" => Some(ALL_POSETS),
        "trees" => Some(TREES),
        "linear" => Some(LINEAR_TREES),
        "preorders" => Some(ALL_PREORDERS),
        "discrete" => Some(DISCRETE),
        _ => None,
    }
}

pub fn is_member(s: &SpeciesSpec, p: &Relation) -> bool {
    s.is_member(p)
}

/// All members of size `1..=n_max`, up to isomorphism.
pub fn members(s: &SpeciesSpec, n_max: usize) -> Result<Vec<Relation>> {
    let kind = match (s.carrier, s.variant) {
        (Carrier::Posets, Variant::Connected) => CatalogKind::ConnectedPoset,
        (Carrier::Posets, Variant::General) => CatalogKind::Poset,
        (Carrier::Preorders, Variant::Connected) => CatalogKind::ConnectedPreorder,
        (Carrier::Preorders, Variant::General) => CatalogKind::Preorder,
    };
    Ok(catalog_up_to(kind, n_max)?.into_iter().filter(|p| s.is_member(p)).collect())
}

fn nonempty_subsets(n: usize) -> impl Iterator<Item = Subset> {
    (1..=full_mask(n) as u64).map(|m| Subset::from_mask(m as u32))
}

/// Exhaustively checks, for every member of size at most `n_max`, that its
/// convex pieces and its quotients are members again. Pieces and quotients
/// of a connected species are checked componentwise.
pub fn verify_closure(s: &SpeciesSpec, n_max: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("closure:{}", s.name));
    let member = |p: &Relation| match s.variant {
        Variant::Connected => s.is_member_componentwise(p),
        Variant::General => s.is_member(p),
    };
    for p in members(s, n_max)? {
        let key = canonical_form(&p)?.key();
        let mut problems = Vec::new();
        for piece in nonempty_subsets(p.n()).filter(|&sub| p.is_convex_subset(sub)) {
            let connected_ok = s.variant == Variant::General || p.is_connected_subset(piece);
            if connected_ok && !member(&p.induced(piece)) {
                problems.push(format!("restriction to {:?} is not a member", piece.to_vec()));
            }
        }
        let quotients: Vec<Relation> = match (s.carrier, s.variant) {
            (Carrier::Posets, Variant::Connected) => {
                enumerate_contractions(&p)?.into_iter().map(|d| d.quotient).collect()
            }
            (Carrier::Posets, Variant::General) => enumerate_collapses(&p)?.into_iter().map(|d| d.quotient).collect(),
            (Carrier::Preorders, _) => {
                enumerate_admissible(&p)?.iter().map(|sub| quotient(&p, sub)).collect::<Result<_>>()?
            }
        };
        for q in quotients {
            if !member(&q) {
                problems.push(format!("quotient {:?} is not a member", q));
            }
        }
        report.record(key, (!problems.is_empty()).then(|| problems.join("; ")));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cherry() -> Relation {
        Relation::from_pairs(3, &[(0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(TREES.is_member(&Relation::chain(3)));
        assert!(TREES.is_member(&cherry()));
        assert!(!LINEAR_TREES.is_member(&cherry()));
        assert!(LINEAR_TREES.is_member(&Relation::chain(4)));
        assert!(!TREES.is_member(&Relation::discrete(2)));
        assert!(!TREES.is_member(&cherry().opposite()));
        assert!(DISCRETE.is_member(&Relation::discrete(3)));
        assert!(!DISCRETE.is_member(&Relation::chain(2)));
        assert!(ALL_PREORDERS.is_member(&Relation::indiscrete(2)));
        assert!(!ALL_POSETS.is_member(&Relation::indiscrete(2)));
    }

    #[test]
    fn diamond_is_not_a_tree() {
        let d = Relation::from_pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap().transitive_closure();
        assert!(!TREES.is_member(&d));
    }

    #[test]
    fn lookup_by_name() {
        for name in NAMES {
            assert_eq!(by_name(name).unwrap().name, name);
        }
        assert!(by_name("forests").is_none());
    }

    #[test]
    fn built_in_species_are_closed() {
        for s in [TREES, LINEAR_TREES, ALL_POSETS, DISCRETE] {
            let r = verify_closure(&s, 4).unwrap();
            assert!(r.passed(), "{r}");
        }
        assert!(verify_closure(&ALL_PREORDERS, 3).unwrap().passed());
    }

    #[test]
    fn chains_are_the_linear_trees() {
        for p in members(&LINEAR_TREES, 5).unwrap() {
            assert_eq!(p, Relation::chain(p.n()));
        }
        assert_eq!(members(&LINEAR_TREES, 5).unwrap().len(), 5);
    }
}
