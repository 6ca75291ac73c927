//! Maps between finite relations and the map classes that drive the
//! incidence coalgebras: convex maps, contractions, collapses and
//! contractions of preorders.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relation::{Partition, Relation, Subset};

/// A function between the element sets of two relations. Monotonicity is a
/// checked property, not an invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderMap {
    source: Relation,
    target: Relation,
    images: Vec<usize>,
}

/// Classification flags of an [`OrderMap`], each computed from first
/// principles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MapClass {
    pub monotone: bool,
    pub convex: bool,
    pub contraction: bool,
    pub collapse: bool,
    pub preorder_contraction: bool,
}

impl OrderMap {
    pub fn new(source: Relation, target: Relation, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.n() {
            return Err(Error::MalformedMap(format!(
                "{} images for a source of {} elements",
                images.len(),
                source.n()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&q| q >= target.n()) {
            return Err(Error::MalformedMap(format!(
                "image {bad} out of range for a target of {} elements",
                target.n()
            )));
        }
        Ok(OrderMap { source, target, images })
    }

    pub fn identity(rel: &Relation) -> Self {
        OrderMap { source: rel.clone(), target: rel.clone(), images: (0..rel.n()).collect() }
    }

    /// The block map `source -> source/partition` onto a given relation on
    /// the blocks.
    pub fn from_partition(source: Relation, partition: &Partition, target: Relation) -> Result<Self> {
        if partition.len() != source.n() {
            return Err(Error::SizeMismatch { left: partition.len(), right: source.n() });
        }
        Self::new(source, target, partition.labels().to_vec())
    }

    pub fn source(&self) -> &Relation {
        &self.source
    }

    pub fn target(&self) -> &Relation {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn fibre(&self, q: usize) -> Subset {
        let mut s = Subset::EMPTY;
        for (x, &y) in self.images.iter().enumerate() {
            if y == q {
                s.insert(x);
            }
        }
        s
    }

    /// The partition of the source into non-empty fibres.
    pub fn kernel(&self) -> Partition {
        Partition::from_labels(&self.images)
    }

    pub fn image(&self) -> Subset {
        Subset::from_elements(&self.images)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &OrderMap) -> Result<OrderMap> {
        if self.target != next.source {
            return Err(Error::MalformedMap("composite of maps with mismatched endpoints".into()));
        }
        let images = self.images.iter().map(|&y| next.images[y]).collect();
        Ok(OrderMap { source: self.source.clone(), target: next.target.clone(), images })
    }

    pub fn is_monotone(&self) -> bool {
        self.source.pairs().all(|(x, y)| self.target.le(self.images[x], self.images[y]))
    }

    pub fn is_surjective(&self) -> bool {
        self.image() == Subset::full(self.target.n())
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.images.len()
    }

    pub fn is_identity_on_objects(&self) -> bool {
        self.source.n() == self.target.n() && self.images.iter().enumerate().all(|(i, &y)| i == y)
    }

    /// For all `x, y` and `f(x) <= w <= f(y)` there is exactly one `p` with
    /// `x <= p <= y` and `f(p) = w`.
    pub fn is_convex(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if !s.is_poset() || !t.is_poset() || !self.is_monotone() {
            return false;
        }
        for x in 0..s.n() {
            for y in 0..s.n() {
                let (fx, fy) = (self.images[x], self.images[y]);
                if !t.le(fx, fy) {
                    continue;
                }
                let interval = s.up(x).intersection(s.down(y));
                for w in t.up(fx).intersection(t.down(fy)).iter() {
                    if interval.iter().filter(|&p| self.images[p] == w).count() != 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Fibres are connected convex subposets and every cover of the target
    /// lifts to a cover of the source, endpoint to endpoint.
    pub fn is_contraction(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if !s.is_poset() || !t.is_poset() || !self.is_monotone() || !self.is_surjective() {
            return false;
        }
        let fibres_ok = (0..t.n()).all(|q| {
            let fib = self.fibre(q);
            s.is_connected_subset(fib) && s.is_convex_subset(fib)
        });
        if !fibres_ok {
            return false;
        }
        let source_covers = s.strict_covers();
        t.strict_covers().iter().all(|c| {
            source_covers
                .iter()
                .any(|d| self.images[d.lower] == c.lower && self.images[d.upper] == c.upper)
        })
    }

    /// `f(x) < f(y)` implies `x < y`.
    pub fn is_partially_reflecting(&self) -> bool {
        let n = self.source.n();
        (0..n).all(|x| {
            (0..n).all(|y| !self.target.lt(self.images[x], self.images[y]) || self.source.lt(x, y))
        })
    }

    /// A partially reflecting monotone surjection of posets.
    pub fn is_collapse(&self) -> bool {
        self.source.is_poset()
            && self.target.is_poset()
            && self.is_monotone()
            && self.is_surjective()
            && self.is_partially_reflecting()
    }

    /// Contraction of preorders: identity on objects, monotone, the
    /// preimage of every `≃`-class of the target is connected in the source,
    /// and covers of the target lift to covers of the source up to `≃` in
    /// the target.
    pub fn is_preorder_contraction(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if !s.is_preorder() || !t.is_preorder() || !self.is_identity_on_objects() || !self.is_monotone() {
            return false;
        }
        let classes = t.equivalence_classes();
        if !classes.blocks().into_iter().all(|b| s.is_connected_subset(b)) {
            return false;
        }
        let source_covers = s.strict_covers();
        t.strict_covers().iter().all(|c| {
            source_covers.iter().any(|d| t.equiv(d.lower, c.lower) && t.equiv(d.upper, c.upper))
        })
    }

    pub fn classify(&self) -> MapClass {
        MapClass {
            monotone: self.is_monotone(),
            convex: self.is_convex(),
            contraction: self.is_contraction(),
            collapse: self.is_collapse(),
            preorder_contraction: self.is_preorder_contraction(),
        }
    }
}

pub fn classify(f: &OrderMap) -> MapClass {
    f.classify()
}

/// A preorder (or poset) with its projection onto its posetification.
#[derive(Clone, Debug)]
pub struct Posetification {
    pub poset: Relation,
    pub projection: OrderMap,
}

pub fn posetify(t: &Relation) -> Result<Posetification> {
    t.require_preorder()?;
    let (poset, classes) = t.posetify();
    let projection = OrderMap::from_partition(t.clone(), &classes, poset.clone())?;
    Ok(Posetification { poset, projection })
}

/// The strict pullback of a cospan `f: P -> V <- Q: g` of posets.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub apex: Relation,
    /// Elements of the apex as `(p, q)` pairs, lexicographically ordered.
    pub elements: Vec<(usize, usize)>,
    pub to_left: OrderMap,
    pub to_right: OrderMap,
}

pub fn pullback(f: &OrderMap, g: &OrderMap) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::MalformedMap("pullback of maps with different targets".into()));
    }
    let mut elements = Vec::new();
    for p in 0..f.source().n() {
        for q in 0..g.source().n() {
            if f.apply(p) == g.apply(q) {
                elements.push((p, q));
            }
        }
    }
    let mut pairs = Vec::new();
    for (a, &(p, q)) in elements.iter().enumerate() {
        for (b, &(p2, q2)) in elements.iter().enumerate() {
            if a != b && f.source().le(p, p2) && g.source().le(q, q2) {
                pairs.push((a, b));
            }
        }
    }
    let apex = Relation::from_pairs(elements.len(), &pairs)?;
    let to_left = OrderMap::new(apex.clone(), f.source().clone(), elements.iter().map(|e| e.0).collect())?;
    let to_right = OrderMap::new(apex.clone(), g.source().clone(), elements.iter().map(|e| e.1).collect())?;
    Ok(Pullback { apex, elements, to_left, to_right })
}

/// Which class the surjective leg of a [`PartialMap`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoverClass {
    Contraction,
    Collapse,
}

impl CoverClass {
    pub fn admits(self, f: &OrderMap) -> bool {
        match self {
            CoverClass::Contraction => f.is_contraction(),
            CoverClass::Collapse => f.is_collapse(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CoverClass::Contraction => "contraction",
            CoverClass::Collapse => "collapse",
        }
    }
}

/// A partially defined contraction (or collapse) `P -> Q`: a span
/// `P <- P' -> Q` with a convex injection on the left.
#[derive(Clone, Debug)]
pub struct PartialMap {
    domain_inclusion: OrderMap,
    cover: OrderMap,
    class: CoverClass,
}

impl PartialMap {
    pub fn new(domain_inclusion: OrderMap, cover: OrderMap, class: CoverClass) -> Result<Self> {
        if domain_inclusion.source() != cover.source() {
            return Err(Error::MalformedMap("span legs have different sources".into()));
        }
        if !domain_inclusion.is_injective() || !domain_inclusion.is_convex() {
            return Err(Error::WrongClass("convex injection"));
        }
        if !class.admits(&cover) {
            return Err(Error::WrongClass(class.name()));
        }
        Ok(PartialMap { domain_inclusion, cover, class })
    }

    pub fn domain_inclusion(&self) -> &OrderMap {
        &self.domain_inclusion
    }

    pub fn cover(&self) -> &OrderMap {
        &self.cover
    }

    pub fn class(&self) -> CoverClass {
        self.class
    }

    /// `self: P ⇸ Q` followed by `next: Q ⇸ R`, composed through the strict
    /// pullback of `next`'s inclusion along `self`'s cover.
    pub fn then(&self, next: &PartialMap) -> Result<PartialMap> {
        if self.class != next.class {
            return Err(Error::MalformedMap("composite of partial maps of different classes".into()));
        }
        let pb = pullback(&self.cover, &next.domain_inclusion)?;
        let inclusion = pb.to_left.then(&self.domain_inclusion)?;
        let cover = pb.to_right.then(&next.cover)?;
        PartialMap::new(inclusion, cover, self.class)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The six-element poset of the contraction picture, laid out as two
    /// rows of three columns. Top row t1 t2 t3 = 0 1 2, bottom row
    /// b1 b2 b3 = 3 4 5.
    pub(crate) fn two_by_three() -> Relation {
        Relation::from_pairs(6, &[(3, 4), (0, 3), (0, 4), (1, 4), (1, 5), (1, 2), (2, 5)])
            .unwrap()
            .transitive_closure()
    }

    #[test]
    fn identity_is_in_every_class() {
        for rel in [Relation::chain(3), Relation::discrete(2), two_by_three()] {
            let c = OrderMap::identity(&rel).classify();
            assert!(c.monotone && c.convex && c.contraction && c.collapse && c.preorder_contraction);
        }
    }

    #[test]
    fn column_collapse_of_the_grid_is_a_contraction() {
        let grid = two_by_three();
        assert!(grid.is_poset());
        let f = OrderMap::new(grid, Relation::chain(3), vec![0, 1, 2, 0, 1, 2]).unwrap();
        let c = f.classify();
        assert!(c.contraction);
        // the relation 0 < 2 of the chain does not lift, only its covers do
        assert!(!c.collapse);
    }

    #[test]
    fn discrete_pair_to_point_is_collapse_not_contraction() {
        let f = OrderMap::new(Relation::discrete(2), Relation::discrete(1), vec![0, 0]).unwrap();
        let c = f.classify();
        assert!(c.collapse);
        assert!(!c.contraction);
    }

    #[test]
    fn wedge_map_fails_to_lift_covers() {
        // left = 0, right = 1, mid = 2 with left < right and left < mid;
        // the target adds mid < right.
        let source = Relation::from_pairs(3, &[(0, 1), (0, 2)]).unwrap();
        let target = Relation::from_pairs(3, &[(0, 1), (0, 2), (2, 1)]).unwrap();
        let f = OrderMap::new(source.clone(), target.clone(), vec![0, 1, 2]).unwrap();
        assert!(f.is_monotone() && f.is_surjective());
        assert!((0..3).all(|q| {
            let fib = f.fibre(q);
            source.is_connected_subset(fib) && source.is_convex_subset(fib)
        }));
        assert!(!f.is_contraction());
    }

    #[test]
    fn out_of_range_image_is_malformed() {
        let err = OrderMap::new(Relation::chain(2), Relation::discrete(1), vec![0, 1]).unwrap_err();
        assert!(matches!(err, Error::MalformedMap(_)));
        let err = OrderMap::new(Relation::chain(2), Relation::discrete(1), vec![0]).unwrap_err();
        assert!(matches!(err, Error::MalformedMap(_)));
    }

    #[test]
    fn convex_inclusion_of_an_interval() {
        let c3 = Relation::chain(3);
        let mid = OrderMap::new(Relation::chain(2), c3.clone(), vec![0, 1]).unwrap();
        assert!(mid.is_convex());
        let ends = OrderMap::new(Relation::chain(2), c3, vec![0, 2]).unwrap();
        assert!(!ends.is_convex());
    }

    #[test]
    fn posetification_projection_is_monotone_surjection() {
        let t = Relation::from_pairs(3, &[(0, 1), (1, 0), (0, 2), (1, 2)]).unwrap();
        let p = posetify(&t).unwrap();
        assert_eq!(p.poset, Relation::chain(2));
        assert!(p.projection.is_monotone() && p.projection.is_surjective());
        let again = posetify(&p.poset).unwrap();
        assert!(again.projection.is_identity_on_objects());
    }

    #[test]
    fn partial_maps_compose() {
        // P = 3-chain, restricted to {1,2} and contracted to a point; then
        // the point maps identically.
        let c3 = Relation::chain(3);
        let incl = OrderMap::new(Relation::chain(2), c3, vec![1, 2]).unwrap();
        let cover = OrderMap::new(Relation::chain(2), Relation::discrete(1), vec![0, 0]).unwrap();
        let a = PartialMap::new(incl, cover, CoverClass::Contraction).unwrap();
        let point = Relation::discrete(1);
        let b = PartialMap::new(OrderMap::identity(&point), OrderMap::identity(&point), CoverClass::Contraction)
            .unwrap();
        let ab = a.then(&b).unwrap();
        assert_eq!(ab.cover().source().n(), 2);
        assert_eq!(ab.domain_inclusion().images(), &[1, 2]);
    }

    #[test]
    fn partial_map_rejects_nonconvex_domain() {
        let c3 = Relation::chain(3);
        let incl = OrderMap::new(Relation::chain(2), c3, vec![0, 2]).unwrap();
        let cover = OrderMap::identity(&Relation::chain(2));
        assert!(PartialMap::new(incl, cover, CoverClass::Contraction).is_err());
    }
}
