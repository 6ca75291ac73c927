use std::fmt;

use serde::Serialize;

use crate::canonical::{canonical_form, IsoClass};
use crate::error::Result;
use crate::relation::Relation;

/// A finite multiset of isomorphism classes, kept sorted. The empty
/// monomial is the unit.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Monomial(Vec<IsoClass>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut factors: Vec<IsoClass>) -> Self {
        factors.sort_unstable();
        Monomial(factors)
    }

    pub fn single(class: IsoClass) -> Self {
        Monomial(vec![class])
    }

    /// The class of `rel` as a single factor.
    pub fn of_relation(rel: &Relation) -> Result<Self> {
        Ok(Monomial::single(canonical_form(rel)?))
    }

    /// One factor per connected component of `rel`.
    pub fn of_components(rel: &Relation) -> Result<Self> {
        let factors = rel
            .connected_components()
            .blocks()
            .into_iter()
            .map(|b| canonical_form(&rel.induced(b)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial::new(factors))
    }

    /// One factor per listed relation.
    pub fn of_relations<'a>(rels: impl IntoIterator<Item = &'a Relation>) -> Result<Self> {
        Ok(Monomial::new(rels.into_iter().map(canonical_form).collect::<Result<Vec<_>>>()?))
    }

    pub fn factors(&self) -> &[IsoClass] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Total number of elements across the factors.
    pub fn size(&self) -> usize {
        self.0.iter().map(IsoClass::size).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = self.0.clone();
        factors.extend_from_slice(&other.0);
        Monomial::new(factors)
    }

    pub fn keys(&self) -> Vec<String> {
        self.0.iter().map(IsoClass::key).collect()
    }

    /// The disjoint union of the factors' canonical representatives.
    pub fn to_relation(&self) -> Relation {
        self.0.iter().fold(Relation::empty(), |acc, c| acc.disjoint_union(&c.to_relation()))
    }
}

impl FromIterator<IsoClass> for Monomial {
    fn from_iter<I: IntoIterator<Item = IsoClass>>(iter: I) -> Self {
        Monomial::new(iter.into_iter().collect())
    }
}

/// Renders one class: `•` for a point, `{n|i<j,…}` listing covers (or all
/// strict pairs for a preorder) otherwise.
pub fn pretty_class(c: &IsoClass) -> String {
    if c.is_point() {
        return "•".to_string();
    }
    let rel = c.to_relation();
    let edges: Vec<String> = if rel.is_poset() {
        rel.strict_covers().iter().map(|cp| format!("{}<{}", cp.lower, cp.upper)).collect()
    } else {
        rel.pairs().map(|(i, j)| format!("{i}<={j}")).collect()
    };
    format!("{{{}|{}}}", c.size(), edges.join(","))
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(pretty_class).collect();
        f.write_str(&parts.join("·"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial[{}]", self.keys().join(", "))
    }
}
