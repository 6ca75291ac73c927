use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::monomial::Monomial;
use super::tensor::{rational, AlgElem, TensorElem};
use crate::admissible::quotient;
use crate::canonical::IsoClass;
use crate::enumerate::{enumerate_admissible, enumerate_collapses, enumerate_contractions, enumerate_downsets};
use crate::error::{Error, Result};
use crate::relation::{Relation, Subset};
use crate::species::{Carrier, SpeciesSpec, Variant, ALL_POSETS, ALL_POSETS_GENERAL, ALL_PREORDERS};

/// Which family of maps the comultiplication sums over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Flavor {
    /// Contractions of connected posets.
    K,
    /// Collapse maps of arbitrary posets.
    D,
    /// Cuts of connected posets into a down-set and an up-set.
    R,
    /// Admissible sub-preorders of connected preorders.
    A,
}

impl Flavor {
    pub fn carrier(self) -> Carrier {
        match self {
            Flavor::A => Carrier::Preorders,
            _ => Carrier::Posets,
        }
    }

    pub fn default_species(self) -> SpeciesSpec {
        match self {
            Flavor::K | Flavor::R => ALL_POSETS,
            Flavor::D => ALL_POSETS_GENERAL,
            Flavor::A => ALL_PREORDERS,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K" | "k" => Ok(Flavor::K),
            "D" | "d" => Ok(Flavor::D),
            "R" | "r" => Ok(Flavor::R),
            "A" | "a" => Ok(Flavor::A),
            _ => Err(Error::Parse(format!("unknown flavor `{s}`"))),
        }
    }
}

/// Counit of a monomial. K and D: every factor a point. R: the unit. A:
/// every factor a groupoid preorder.
pub fn counit(m: &Monomial, flavor: Flavor) -> BigRational {
    let holds = match flavor {
        Flavor::K | Flavor::D => m.factors().iter().all(IsoClass::is_point),
        Flavor::R => m.is_unit(),
        Flavor::A => m.factors().iter().all(|c| c.to_relation().is_groupoid()),
    };
    if holds {
        BigRational::one()
    } else {
        BigRational::zero()
    }
}

type CacheKey = (Flavor, &'static str, Variant, IsoClass);

fn cache() -> &'static RwLock<HashMap<CacheKey, TensorElem>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, TensorElem>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// An incidence bialgebra: a flavor of comultiplication restricted to the
/// members of a species.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    pub flavor: Flavor,
    pub species: SpeciesSpec,
}

impl Coalgebra {
    /// The species `all` stands for connected posets under K and R and for
    /// arbitrary posets under D.
    pub fn new(flavor: Flavor, species: SpeciesSpec) -> Result<Self> {
        let species = if flavor == Flavor::D && species == ALL_POSETS { ALL_POSETS_GENERAL } else { species };
        if species.carrier != flavor.carrier() {
            return Err(Error::CarrierMismatch(flavor.carrier(), species.carrier));
        }
        Ok(Coalgebra { flavor, species })
    }

    pub fn of(flavor: Flavor) -> Self {
        Coalgebra { flavor, species: flavor.default_species() }
    }

    pub fn carrier(&self) -> Carrier {
        self.flavor.carrier()
    }

    fn generator_ok(&self, p: &Relation) -> bool {
        let shape = match self.flavor {
            Flavor::D => !p.is_empty(),
            _ => p.is_connected(),
        };
        shape && self.species.is_member(p)
    }

    fn closed(&self, what: &str, p: &Relation) -> Result<()> {
        let ok = match self.species.variant {
            Variant::Connected => self.species.is_member_componentwise(p),
            Variant::General => self.species.is_member(p),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NotClosed { species: self.species.name, detail: format!("{what} {p:?}") })
        }
    }

    /// Comultiplication of a single generator.
    pub fn delta_generator(&self, class: &IsoClass) -> Result<TensorElem> {
        let key = (self.flavor, self.species.name, self.species.variant, *class);
        if let Some(t) = cache().read().expect("coproduct cache poisoned").get(&key) {
            return Ok(t.clone());
        }
        let p = class.to_relation();
        if !self.generator_ok(&p) {
            return Err(Error::NotMember { species: self.species.name, key: class.key() });
        }
        let t = self.compute(&p)?;
        cache().write().expect("coproduct cache poisoned").insert(key, t.clone());
        Ok(t)
    }

    fn compute(&self, p: &Relation) -> Result<TensorElem> {
        let mut out = TensorElem::zero(self.carrier());
        let one = BigRational::one();
        match self.flavor {
            Flavor::K => {
                for d in enumerate_contractions(p)? {
                    for fib in &d.fibres {
                        self.closed("fibre", fib)?;
                    }
                    self.closed("quotient", &d.quotient)?;
                    let left = Monomial::of_relations(&d.fibres)?;
                    out.add_term([left, Monomial::of_relation(&d.quotient)?], one.clone());
                }
            }
            Flavor::D => {
                for d in enumerate_collapses(p)? {
                    for fib in &d.fibres {
                        self.closed("fibre", fib)?;
                    }
                    self.closed("quotient", &d.quotient)?;
                    let left = Monomial::of_relations(&d.fibres)?;
                    out.add_term([left, Monomial::of_relation(&d.quotient)?], one.clone());
                }
            }
            Flavor::R => {
                for cut in enumerate_downsets(p)? {
                    let (down, up) = (p.induced(cut.down()), p.induced(cut.up()));
                    self.closed("down-set", &down)?;
                    self.closed("up-set", &up)?;
                    out.add_term([Monomial::of_components(&down)?, Monomial::of_components(&up)?], one.clone());
                }
            }
            Flavor::A => {
                for sub in enumerate_admissible(p)? {
                    let q = quotient(p, &sub)?;
                    self.closed("quotient", &q)?;
                    out.add_term([Monomial::of_components(&sub)?, Monomial::of_components(&q)?], one.clone());
                }
            }
        }
        Ok(out)
    }

    /// Comultiplication of a monomial, multiplicative over its factors.
    pub fn delta(&self, m: &Monomial) -> Result<TensorElem> {
        let mut out = TensorElem::unit(self.carrier());
        for c in m.factors() {
            out = out.mul(&self.delta_generator(c)?)?;
        }
        Ok(out)
    }

    pub fn delta_alg(&self, a: &AlgElem) -> Result<TensorElem> {
        let mut out = TensorElem::zero(self.carrier());
        for ([m], c) in a.terms() {
            out.add_assign(&self.delta(m)?.scaled(c))?;
        }
        Ok(out)
    }

    pub fn counit(&self, m: &Monomial) -> BigRational {
        counit(m, self.flavor)
    }

    pub fn counit_alg(&self, a: &AlgElem) -> BigRational {
        a.terms().map(|([m], c)| c * self.counit(m)).sum()
    }

    /// The monomial of generators represented by an object: its connected
    /// components, or the object itself under D.
    pub fn monomial_of(&self, p: &Relation) -> Result<Monomial> {
        match self.flavor {
            Flavor::D => Monomial::of_relation(p),
            _ => Monomial::of_components(p),
        }
    }

    /// Comultiplication of the product of a family of objects, computed from
    /// the family as a whole rather than factor by factor: contractions,
    /// cuts and admissible sub-preorders of the disjoint union, and
    /// collapses of the union that respect the members under D.
    pub fn delta_direct(&self, family: &[Relation]) -> Result<TensorElem> {
        let u = family.iter().fold(Relation::empty(), |acc, p| acc.disjoint_union(p));
        let mut out = TensorElem::zero(self.carrier());
        if u.is_empty() {
            return Ok(TensorElem::unit(self.carrier()));
        }
        let one = BigRational::one();
        match self.flavor {
            Flavor::K => {
                for d in enumerate_contractions(&u)? {
                    let left = Monomial::of_relations(&d.fibres)?;
                    out.add_term([left, Monomial::of_components(&d.quotient)?], one.clone());
                }
            }
            Flavor::R => {
                for cut in enumerate_downsets(&u)? {
                    let (down, up) = (u.induced(cut.down()), u.induced(cut.up()));
                    out.add_term([Monomial::of_components(&down)?, Monomial::of_components(&up)?], one.clone());
                }
            }
            Flavor::A => {
                for sub in enumerate_admissible(&u)? {
                    let q = quotient(&u, &sub)?;
                    out.add_term([Monomial::of_components(&sub)?, Monomial::of_components(&q)?], one.clone());
                }
            }
            Flavor::D => {
                let mut member = Vec::new();
                for (i, p) in family.iter().enumerate() {
                    member.extend(std::iter::repeat_n(i, p.n()));
                }
                for d in enumerate_collapses(&u)? {
                    let blocks = d.kernel.blocks();
                    let owner: Vec<usize> = blocks.iter().map(|b| member[b.iter().next().expect("nonempty")]).collect();
                    if blocks.iter().zip(&owner).any(|(b, &o)| b.iter().any(|x| member[x] != o)) {
                        continue;
                    }
                    let quotients: Vec<Relation> = (0..family.len())
                        .map(|i| {
                            let mine = (0..blocks.len()).filter(|&b| owner[b] == i).collect::<Vec<_>>();
                            d.quotient.induced(Subset::from_elements(&mine))
                        })
                        .collect();
                    let left = Monomial::of_relations(&d.fibres)?;
                    out.add_term([left, Monomial::of_relations(&quotients)?], one.clone());
                }
            }
        }
        Ok(out)
    }

    /// Counit of the product of a family, read off the family directly.
    pub fn counit_direct(&self, family: &[Relation]) -> BigRational {
        let holds = match self.flavor {
            Flavor::K => family.iter().all(Relation::is_discrete),
            Flavor::D => family.iter().all(|p| p.n() == 1),
            Flavor::R => family.iter().all(Relation::is_empty),
            Flavor::A => family.iter().all(Relation::is_groupoid),
        };
        if holds {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    }
}

fn coalgebra(flavor: Flavor, s: &SpeciesSpec) -> Result<Coalgebra> {
    Coalgebra::new(flavor, *s)
}

pub fn delta_k(m: &Monomial, s: &SpeciesSpec) -> Result<TensorElem> {
    coalgebra(Flavor::K, s)?.delta(m)
}

pub fn delta_d(m: &Monomial, s: &SpeciesSpec) -> Result<TensorElem> {
    coalgebra(Flavor::D, s)?.delta(m)
}

pub fn delta_r(m: &Monomial, s: &SpeciesSpec) -> Result<TensorElem> {
    coalgebra(Flavor::R, s)?.delta(m)
}

/// Comultiplication of a preorder: left legs are the components of the
/// admissible sub-preorder, right legs the components of the quotient.
pub fn delta_a(t: &Relation) -> Result<TensorElem> {
    t.require_preorder()?;
    Coalgebra::of(Flavor::A).delta(&Monomial::of_components(t)?)
}

/// The coaction of the contraction bialgebra on the cut coalgebra: the same
/// sum as the contraction comultiplication, with the left leg read in the
/// contraction bialgebra and the right leg in the cut coalgebra.
pub fn coaction_gamma(m: &Monomial, s: &SpeciesSpec) -> Result<TensorElem> {
    delta_k(m, s)
}

/// Number of terms, counted with multiplicity.
pub fn total_coefficient(t: &TensorElem) -> BigRational {
    t.terms().map(|(_, c)| c.clone()).sum()
}

pub fn count(n: i64) -> BigRational {
    rational(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::species::{DISCRETE, TREES};

    fn m(rel: &Relation) -> Monomial {
        Monomial::of_relation(rel).unwrap()
    }

    fn point() -> Monomial {
        m(&Relation::discrete(1))
    }

    fn points(k: usize) -> Monomial {
        Monomial::of_components(&Relation::discrete(k)).unwrap()
    }

    fn cherry() -> Relation {
        Relation::from_pairs(3, &[(0, 2), (1, 2)]).unwrap()
    }

    fn expect(terms: &[(Monomial, Monomial, i64)], carrier: Carrier) -> TensorElem {
        let mut t = TensorElem::zero(carrier);
        for (l, r, c) in terms {
            t.add_term([l.clone(), r.clone()], rational(*c));
        }
        t
    }

    #[test]
    fn contraction_coproduct_examples() {
        let k = Coalgebra::of(Flavor::K);
        assert_eq!(k.delta(&point()).unwrap(), expect(&[(point(), point(), 1)], Carrier::Posets));

        let l2 = m(&Relation::chain(2));
        assert_eq!(
            k.delta(&l2).unwrap(),
            expect(&[(points(2), l2.clone(), 1), (l2.clone(), point(), 1)], Carrier::Posets)
        );

        let ch = m(&cherry());
        let expected = expect(
            &[(points(3), ch.clone(), 1), (point().mul(&l2), l2.clone(), 2), (ch.clone(), point(), 1)],
            Carrier::Posets,
        );
        assert_eq!(k.delta(&ch).unwrap(), expected);
        assert_eq!(delta_k(&ch, &TREES).unwrap(), expected);
        // compositions 1+1+1, 2+1, 1+2, 3; the middle two collect
        let l3 = k.delta(&m(&Relation::chain(3))).unwrap();
        assert_eq!(l3.len(), 3);
        assert_eq!(total_coefficient(&l3), rational(4));
    }

    #[test]
    fn collapse_coproduct_examples() {
        let d3 = m(&Relation::discrete(3));
        let d2 = m(&Relation::discrete(2));
        let expected = expect(
            &[(points(3), d3.clone(), 1), (point().mul(&d2), d2.clone(), 3), (d3.clone(), point(), 1)],
            Carrier::Posets,
        );
        assert_eq!(delta_d(&d3, &DISCRETE).unwrap(), expected);
        assert_eq!(delta_d(&point(), &DISCRETE).unwrap(), expect(&[(point(), point(), 1)], Carrier::Posets));
        let l2 = m(&Relation::chain(2));
        assert_eq!(Coalgebra::of(Flavor::D).delta(&l2).unwrap(), Coalgebra::of(Flavor::K).delta(&l2).unwrap());
    }

    #[test]
    fn admissible_coproduct_examples() {
        let pt = Monomial::of_relation(&Relation::discrete(1)).unwrap();
        assert_eq!(delta_a(&Relation::discrete(1)).unwrap(), expect(&[(pt.clone(), pt.clone(), 1)], Carrier::Preorders));

        let l2 = m(&Relation::chain(2));
        let i2 = m(&Relation::indiscrete(2));
        let expected = expect(&[(points(2), l2.clone(), 1), (l2.clone(), i2, 1)], Carrier::Preorders);
        assert_eq!(delta_a(&Relation::chain(2)).unwrap(), expected);

        let dn = points(4);
        assert_eq!(delta_a(&Relation::discrete(4)).unwrap(), expect(&[(dn.clone(), dn, 1)], Carrier::Preorders));
    }

    #[test]
    fn cut_coproduct_examples() {
        let one = Monomial::unit();
        let pt = point();
        assert_eq!(
            delta_r(&pt, &TREES).unwrap(),
            expect(&[(one.clone(), pt.clone(), 1), (pt.clone(), one.clone(), 1)], Carrier::Posets)
        );
        let ch = m(&cherry());
        let l2 = m(&Relation::chain(2));
        assert_eq!(
            delta_r(&ch, &TREES).unwrap(),
            expect(
                &[
                    (one.clone(), ch.clone(), 1),
                    (pt.clone(), l2.clone(), 2),
                    (points(2), pt.clone(), 1),
                    (ch.clone(), one.clone(), 1)
                ],
                Carrier::Posets
            )
        );
        let l3 = m(&Relation::chain(3));
        assert_eq!(
            delta_r(&l3, &TREES).unwrap(),
            expect(
                &[(one.clone(), l3.clone(), 1), (pt.clone(), l2.clone(), 1), (l2, pt, 1), (l3, one, 1)],
                Carrier::Posets
            )
        );
    }

    #[test]
    fn counit_examples() {
        assert_eq!(counit(&points(2), Flavor::K), rational(1));
        assert_eq!(counit(&m(&Relation::chain(2)), Flavor::K), rational(0));
        assert_eq!(counit(&m(&Relation::indiscrete(2)), Flavor::A), rational(1));
        assert_eq!(counit(&m(&Relation::chain(2)), Flavor::A), rational(0));
        assert_eq!(counit(&Monomial::unit(), Flavor::R), rational(1));
        assert_eq!(counit(&point(), Flavor::R), rational(0));
    }

    #[test]
    fn non_members_are_rejected() {
        assert!(matches!(delta_k(&m(&Relation::discrete(2)), &TREES), Err(Error::NotMember { .. })));
        assert!(matches!(delta_k(&m(&cherry().opposite()), &TREES), Err(Error::NotMember { .. })));
        assert!(Coalgebra::new(Flavor::A, TREES).is_err());
    }

    #[test]
    fn coaction_matches_contraction_coproduct() {
        for rel in [Relation::chain(2), cherry(), Relation::chain(3)] {
            assert_eq!(coaction_gamma(&m(&rel), &TREES).unwrap(), delta_k(&m(&rel), &TREES).unwrap());
        }
    }

    #[test]
    fn direct_computation_agrees_on_products() {
        let k = Coalgebra::of(Flavor::K);
        let a = Relation::chain(2);
        let b = cherry();
        let direct = k.delta_direct(&[a.clone(), b.clone()]).unwrap();
        let product = k.delta(&m(&a)).unwrap().mul(&k.delta(&m(&b)).unwrap()).unwrap();
        assert_eq!(direct, product);
    }
}
