//! Admissible sub-preorders, quotients `T/T'`, quotient grids over chains of
//! admissible inclusions, and the passage from admissible maps to
//! contractions.

use serde::Serialize;
use thiserror::Error;

use crate::canonical::are_isomorphic;
use crate::error::{Error, Result};
use crate::maps::OrderMap;
use crate::relation::{Relation, Subset};
use crate::report::CheckReport;

/// Why a sub-relation fails to be admissible.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum AdmissibleFailure {
    #[error("pair {0} <= {1} of the sub-relation is missing from the ambient preorder")]
    NotSubRelation(usize, usize),
    #[error("sub-relation is not a preorder")]
    NotPreorder,
    #[error("ambient preorder is not full on the component {component:?}")]
    NotFull { component: Vec<usize> },
    #[error("equivalence classes of the quotient differ from the components of the sub-relation")]
    ClassMismatch,
}

fn same_size(a: &Relation, b: &Relation) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch { left: a.n(), right: b.n() });
    }
    Ok(())
}

/// The first violated admissibility condition, if any.
pub fn admissibility_failure(sub: &Relation, amb: &Relation) -> Result<Option<AdmissibleFailure>> {
    same_size(sub, amb)?;
    amb.require_preorder()?;
    if let Some((x, y)) = sub.pairs().find(|&(x, y)| !amb.le(x, y)) {
        return Ok(Some(AdmissibleFailure::NotSubRelation(x, y)));
    }
    if !sub.is_preorder() {
        return Ok(Some(AdmissibleFailure::NotPreorder));
    }
    let components = sub.connected_components();
    for block in components.blocks() {
        if amb.induced(block) != sub.induced(block) {
            return Ok(Some(AdmissibleFailure::NotFull { component: block.to_vec() }));
        }
    }
    if quotient(amb, sub)?.equivalence_classes() != components {
        return Ok(Some(AdmissibleFailure::ClassMismatch));
    }
    Ok(None)
}

pub fn is_admissible(sub: &Relation, amb: &Relation) -> Result<bool> {
    Ok(admissibility_failure(sub, amb)?.is_none())
}

/// `amb/sub`: the arrows of `sub` are inverted and the result closed
/// transitively.
pub fn quotient(amb: &Relation, sub: &Relation) -> Result<Relation> {
    same_size(sub, amb)?;
    if let Some((x, y)) = sub.pairs().find(|&(x, y)| !amb.le(x, y)) {
        return Err(Error::NotSubRelation(x, y));
    }
    Ok(amb.union(&sub.opposite())?.transitive_closure())
}

/// The identity-on-objects map `amb -> amb/sub`.
pub fn quotient_map(amb: &Relation, sub: &Relation) -> Result<OrderMap> {
    let q = quotient(amb, sub)?;
    OrderMap::new(amb.clone(), q, (0..amb.n()).collect())
}

fn require_admissible(sub: &Relation, amb: &Relation) -> Result<()> {
    match admissibility_failure(sub, amb)? {
        None => Ok(()),
        Some(failure) => Err(Error::NotAdmissible { index: 0, failure }),
    }
}

/// The contraction of posets `posetify(amb) -> posetify(amb/sub)` induced
/// by an admissible `sub`.
pub fn admissible_to_contraction(sub: &Relation, amb: &Relation) -> Result<OrderMap> {
    require_admissible(sub, amb)?;
    let q = quotient(amb, sub)?;
    let (source, source_classes) = amb.posetify();
    let (target, target_classes) = q.posetify();
    let mut images = vec![0; source.n()];
    for x in 0..amb.n() {
        images[source_classes.block_of(x)] = target_classes.block_of(x);
    }
    let f = OrderMap::new(source, target, images)?;
    if !f.is_contraction() {
        return Err(Error::WrongClass("contraction"));
    }
    Ok(f)
}

/// The admissible sub-relation `{x <= y : f(x) ≃ f(y)}` of the source of a
/// contraction, for either a contraction of posets or an identity-on-objects
/// contraction of preorders.
pub fn contraction_to_admissible(f: &OrderMap) -> Result<Relation> {
    if !f.is_contraction() && !f.is_preorder_contraction() {
        return Err(Error::WrongClass("contraction"));
    }
    let (s, t) = (f.source(), f.target());
    let rows = (0..s.n())
        .map(|x| s.up(x).iter().filter(|&y| t.equiv(f.apply(x), f.apply(y))).fold(0u32, |m, y| m | 1 << y))
        .collect();
    Ok(Relation::from_rows(s.n(), rows))
}

/// The grid of iterated quotients of a chain `T_0 ⊆ … ⊆ T_m` of admissible
/// inclusions. Row 0 is the chain itself; row `i >= 1` holds `T_j/T_{i-1}`
/// for `j` from `i-1` to `m`.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientGrid {
    chain: Vec<Relation>,
    rows: Vec<Vec<Relation>>,
}

impl QuotientGrid {
    /// The chain length `m` (index of the last preorder).
    pub fn m(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn chain(&self) -> &[Relation] {
        &self.chain
    }

    fn first_column(i: usize) -> usize {
        i.saturating_sub(1)
    }

    /// `T_j/T_{i-1}`, with `T_{-1}` read as the discrete preorder.
    pub fn cell(&self, i: usize, j: usize) -> Option<&Relation> {
        let row = self.rows.get(i)?;
        j.checked_sub(Self::first_column(i)).and_then(|k| row.get(k))
    }

    pub fn rows(&self) -> &[Vec<Relation>] {
        &self.rows
    }

    /// Checks every square for the pushout property, every horizontal map
    /// for admissibility and every vertical map for being a contraction of
    /// preorders.
    pub fn verify(&self) -> CheckReport {
        let mut report = CheckReport::new("quotient-grid");
        let m = self.m();
        for i in 0..=m + 1 {
            for j in Self::first_column(i)..=m {
                let cell = self.cell(i, j).expect("cell in range");
                if j < m {
                    let right = self.cell(i, j + 1).expect("cell in range");
                    let detail = match admissibility_failure(cell, right) {
                        Ok(None) => None,
                        Ok(Some(f)) => Some(f.to_string()),
                        Err(e) => Some(e.to_string()),
                    };
                    report.record(format!("horizontal ({i},{j})"), detail);
                }
                if let Some(below) = self.cell(i + 1, j) {
                    let f = OrderMap::new(cell.clone(), below.clone(), (0..cell.n()).collect())
                        .expect("same element set");
                    let detail = (!f.is_preorder_contraction()).then(|| "not a contraction of preorders".into());
                    report.record(format!("vertical ({i},{j})"), detail);
                    if j < m {
                        let right = self.cell(i, j + 1).expect("cell in range");
                        let corner = self.cell(i + 1, j + 1).expect("cell in range");
                        let pushout = right.union(below).expect("same size").transitive_closure();
                        let detail = (pushout != *corner).then(|| "square is not a pushout".into());
                        report.record(format!("square ({i},{j})"), detail);
                    }
                }
            }
        }
        report
    }

    /// `(T_j/T_i)/(T_k/T_i) ≅ T_j/T_k` for all `i <= k <= j`, compared by
    /// canonical form.
    pub fn coherence(&self) -> CheckReport {
        let mut report = CheckReport::new("grid-coherence");
        let m = self.m();
        for i in 0..=m {
            for k in i..=m {
                for j in k..=m {
                    let tj_ti = self.cell(i + 1, j).expect("cell in range");
                    let tk_ti = self.cell(i + 1, k).expect("cell in range");
                    let tj_tk = self.cell(k + 1, j).expect("cell in range");
                    let detail = match quotient(tj_ti, tk_ti).and_then(|q| are_isomorphic(&q, tj_tk)) {
                        Ok(true) => None,
                        Ok(false) => Some("iterated quotient differs".to_string()),
                        Err(e) => Some(e.to_string()),
                    };
                    report.record(format!("(i,k,j)=({i},{k},{j})"), detail);
                }
            }
        }
        report
    }
}

/// Builds the quotient grid of a chain of admissible inclusions.
pub fn quotient_grid(chain: &[Relation]) -> Result<QuotientGrid> {
    let first = chain.first().ok_or(Error::EmptyInput)?;
    for t in chain {
        t.require_preorder()?;
        same_size(first, t)?;
    }
    for (index, link) in chain.windows(2).enumerate() {
        if let Some(failure) = admissibility_failure(&link[0], &link[1])? {
            return Err(Error::NotAdmissible { index, failure });
        }
    }
    let m = chain.len() - 1;
    let mut rows = vec![chain.to_vec()];
    for i in 1..=m + 1 {
        let sub = &chain[i - 1];
        let row = (i - 1..=m).map(|j| quotient(&chain[j], sub)).collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(QuotientGrid { chain: chain.to_vec(), rows })
}

/// A chain of contractions `P_0 -> P_1 -> … -> P_k` between connected
/// posets.
#[derive(Clone, Debug)]
pub struct ContractionChain {
    pub posets: Vec<Relation>,
    pub maps: Vec<OrderMap>,
}

/// Sends an admissible chain `T_0 ⊆ … ⊆ T_m` to the family, indexed by the
/// connected components of `T_m`, of chains of contractions obtained by
/// posetifying `T_m, T_m/T_0, …, T_m/T_{m-1}` and restricting to each
/// component.
pub fn r_map(chain: &[Relation]) -> Result<Vec<ContractionChain>> {
    let grid = quotient_grid(chain)?;
    let m = grid.m();
    let column: Vec<&Relation> = (0..=m).map(|i| grid.cell(i, m).expect("cell in range")).collect();
    let components = column[0].connected_components();
    let mut family = Vec::new();
    for block in components.blocks() {
        family.push(restrict_column(&column, block)?);
    }
    Ok(family)
}

fn restrict_column(column: &[&Relation], block: Subset) -> Result<ContractionChain> {
    let levels: Vec<_> = column.iter().map(|t| t.induced(block).posetify()).collect();
    let mut maps = Vec::new();
    for pair in levels.windows(2) {
        let ((src, src_classes), (tgt, tgt_classes)) = (&pair[0], &pair[1]);
        let mut images = vec![0; src.n()];
        for x in 0..block.len() {
            images[src_classes.block_of(x)] = tgt_classes.block_of(x);
        }
        maps.push(OrderMap::new(src.clone(), tgt.clone(), images)?);
    }
    Ok(ContractionChain { posets: levels.into_iter().map(|(p, _)| p).collect(), maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::tests::two_by_three;

    fn pairs(n: usize, ps: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(n, ps).unwrap().transitive_closure()
    }

    /// Every sub-preorder of `t`, by brute force over subsets of its
    /// non-reflexive pairs.
    fn all_sub_preorders(t: &Relation) -> Vec<Relation> {
        let ps: Vec<_> = t.pairs().collect();
        (0..1u64 << ps.len())
            .map(|bits| {
                let chosen: Vec<_> = (0..ps.len()).filter(|&k| bits >> k & 1 == 1).map(|k| ps[k]).collect();
                Relation::from_pairs(t.n(), &chosen).unwrap()
            })
            .filter(|r| r.is_preorder())
            .collect()
    }

    #[test]
    fn admissible_examples() {
        for t in [Relation::chain(3), two_by_three(), Relation::indiscrete(2)] {
            assert!(is_admissible(&t, &t).unwrap());
        }
        for p in [Relation::chain(3), two_by_three(), Relation::discrete(2)] {
            assert!(is_admissible(&Relation::discrete(p.n()), &p).unwrap());
        }
        let columns = pairs(6, &[(0, 3), (1, 4), (2, 5)]);
        assert!(is_admissible(&columns, &two_by_three()).unwrap());
    }

    #[test]
    fn admissible_rejections() {
        assert!(matches!(
            is_admissible(&Relation::discrete(2), &Relation::chain(3)),
            Err(Error::SizeMismatch { .. })
        ));
        let failure = admissibility_failure(&Relation::chain(2), &Relation::discrete(2)).unwrap();
        assert_eq!(failure, Some(AdmissibleFailure::NotSubRelation(0, 1)));
        // {0 <= 1} and {1 <= 2} inside the 3-chain: not full on {0,1,2}
        let sub = Relation::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_admissible(&sub, &Relation::chain(3)).unwrap());
    }

    #[test]
    fn quotient_examples() {
        let ch = two_by_three();
        assert_eq!(quotient(&ch, &Relation::discrete(6)).unwrap(), ch);
        assert_eq!(quotient(&Relation::chain(2), &Relation::chain(2)).unwrap(), Relation::indiscrete(2));
        let sub = Relation::from_pairs(3, &[(0, 1)]).unwrap();
        let q = quotient(&Relation::chain(3), &sub).unwrap();
        assert_eq!(q, pairs(3, &[(0, 1), (1, 0), (1, 2)]));
        assert!(quotient(&Relation::discrete(2), &Relation::chain(2)).is_err());
    }

    #[test]
    fn partition_enumeration_matches_brute_force() {
        let universe = [
            Relation::chain(3),
            pairs(3, &[(0, 2), (1, 2)]),
            pairs(3, &[(0, 1), (1, 0), (1, 2)]),
            pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]),
            Relation::indiscrete(3),
        ];
        for t in universe {
            let mut brute: Vec<Relation> =
                all_sub_preorders(&t).into_iter().filter(|s| is_admissible(s, &t).unwrap()).collect();
            brute.sort_by_key(|s| s.pairs().collect::<Vec<_>>());
            assert_eq!(crate::enumerate::enumerate_admissible(&t).unwrap(), brute);
        }
    }

    #[test]
    fn contraction_from_admissible() {
        let p = two_by_three();
        let id = admissible_to_contraction(&Relation::discrete(6), &p).unwrap();
        assert!(id.is_identity_on_objects());

        let f = admissible_to_contraction(&Relation::chain(2), &Relation::chain(2)).unwrap();
        assert_eq!(f.target(), &Relation::discrete(1));

        let columns = pairs(6, &[(0, 3), (1, 4), (2, 5)]);
        let f = admissible_to_contraction(&columns, &p).unwrap();
        assert_eq!(f.target(), &Relation::chain(3));
        assert_eq!(f.images(), &[0, 1, 2, 0, 1, 2]);

        assert!(admissible_to_contraction(&Relation::from_pairs(3, &[(0, 1)]).unwrap(), &Relation::discrete(3))
            .is_err());
    }

    #[test]
    fn admissible_from_contraction() {
        let c2 = Relation::chain(2);
        assert_eq!(contraction_to_admissible(&OrderMap::identity(&c2)).unwrap(), Relation::discrete(2));
        let to_point = OrderMap::new(c2.clone(), Relation::discrete(1), vec![0, 0]).unwrap();
        assert_eq!(contraction_to_admissible(&to_point).unwrap(), c2);
        let bad = OrderMap::new(Relation::discrete(2), Relation::discrete(1), vec![0, 0]).unwrap();
        assert!(contraction_to_admissible(&bad).is_err());
    }

    #[test]
    fn grid_examples() {
        let t = Relation::chain(2);
        let g = quotient_grid(std::slice::from_ref(&t)).unwrap();
        assert_eq!(g.cell(0, 0), Some(&t));
        assert_eq!(g.cell(1, 0), Some(&Relation::indiscrete(2)));
        assert!(g.cell(2, 0).is_none());

        let g = quotient_grid(&[Relation::discrete(2), Relation::chain(2)]).unwrap();
        assert_eq!(g.cell(1, 1), Some(&Relation::chain(2)));
        assert_eq!(g.cell(2, 1), Some(&Relation::indiscrete(2)));
        assert!(g.verify().passed(), "{}", g.verify());
        assert!(g.coherence().passed());
    }

    #[test]
    fn grid_rejects_non_admissible_link() {
        let sub = Relation::from_pairs(3, &[(0, 2)]).unwrap();
        let err = quotient_grid(&[Relation::discrete(3), sub, Relation::chain(3)]).unwrap_err();
        assert!(matches!(err, Error::NotAdmissible { index: 1, .. }));
    }

    #[test]
    fn r_map_examples() {
        let p = Relation::chain(2).disjoint_union(&Relation::discrete(1));
        let family = r_map(std::slice::from_ref(&p)).unwrap();
        assert_eq!(family.len(), 2);
        assert_eq!(family[0].posets, vec![Relation::chain(2)]);
        assert_eq!(family[1].posets, vec![Relation::discrete(1)]);

        let family = r_map(&[Relation::indiscrete(2)]).unwrap();
        assert_eq!(family.len(), 1);
        assert_eq!(family[0].posets, vec![Relation::discrete(1)]);

        let family = r_map(&[Relation::discrete(2), Relation::chain(2)]).unwrap();
        assert_eq!(family.len(), 1);
        assert_eq!(family[0].posets, vec![Relation::chain(2), Relation::chain(2)]);
        assert!(family[0].maps[0].is_contraction());
    }
}
