use num_rational::BigRational;
use rayon::prelude::*;

use super::coproduct::{Coalgebra, Flavor};
use super::monomial::Monomial;
use super::tensor::{AlgElem, Tensor3, TensorElem};
use crate::canonical::DEFAULT_MAX_SIZE;
use crate::enumerate::{catalog_up_to, CatalogKind};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::report::CheckReport;
use crate::species::{members, SpeciesSpec};

fn within_bound(universe: &[Monomial]) -> Result<()> {
    match universe.iter().map(Monomial::size).max() {
        Some(size) if size > DEFAULT_MAX_SIZE => Err(Error::SizeBound { size, bound: DEFAULT_MAX_SIZE }),
        _ => Ok(()),
    }
}

fn subject(m: &Monomial) -> String {
    if m.is_unit() {
        "1".to_string()
    } else {
        m.keys().join("*")
    }
}

/// Runs `check` on every item in parallel and records the outcomes in input
/// order.
fn run<T: Sync>(
    suite: &str,
    items: &[T],
    name: impl Fn(&T) -> String + Sync,
    check: impl Fn(&T) -> Result<Option<String>> + Sync,
) -> CheckReport {
    let outcomes: Vec<(String, Option<String>)> = items
        .par_iter()
        .map(|item| {
            let detail = match check(item) {
                Ok(d) => d,
                Err(e) => Some(e.to_string()),
            };
            (name(item), detail)
        })
        .collect();
    let mut report = CheckReport::new(suite);
    for (subject, detail) in outcomes {
        report.record(subject, detail);
    }
    report
}

/// `(Δ ⊗ id)Δ(m)` as a rank-3 tensor.
pub fn delta_left(c: &Coalgebra, d: &TensorElem) -> Result<Tensor3> {
    let mut out = Tensor3::zero(c.carrier());
    for ([a, b], coeff) in d.terms() {
        for ([a1, a2], c2) in c.delta(a)?.terms() {
            out.add_term([a1.clone(), a2.clone(), b.clone()], coeff * c2);
        }
    }
    Ok(out)
}

/// `(id ⊗ Δ)Δ(m)` as a rank-3 tensor.
pub fn delta_right(c: &Coalgebra, d: &TensorElem) -> Result<Tensor3> {
    let mut out = Tensor3::zero(c.carrier());
    for ([a, b], coeff) in d.terms() {
        for ([b1, b2], c2) in c.delta(b)?.terms() {
            out.add_term([a.clone(), b1.clone(), b2.clone()], coeff * c2);
        }
    }
    Ok(out)
}

fn coassociativity_failure(c: &Coalgebra, m: &Monomial) -> Result<Option<String>> {
    let d = c.delta(m)?;
    let (lhs, rhs) = (delta_left(c, &d)?, delta_right(c, &d)?);
    if lhs != rhs {
        return Ok(Some(format!("(Δ⊗id)Δ ≠ (id⊗Δ)Δ: {}", lhs.difference_summary(&rhs, 4))));
    }
    let mut left_counit = AlgElem::zero(c.carrier());
    let mut right_counit = AlgElem::zero(c.carrier());
    for ([a, b], coeff) in d.terms() {
        left_counit.add_term([b.clone()], coeff * c.counit(a));
        right_counit.add_term([a.clone()], coeff * c.counit(b));
    }
    let id = AlgElem::monomial(c.carrier(), m.clone());
    if left_counit != id {
        return Ok(Some(format!("(ε⊗id)Δ ≠ id: {left_counit}")));
    }
    if right_counit != id {
        return Ok(Some(format!("(id⊗ε)Δ ≠ id: {right_counit}")));
    }
    Ok(None)
}

/// Coassociativity and both counit laws on every monomial of the universe.
pub fn check_coassociativity(c: &Coalgebra, universe: &[Monomial]) -> Result<CheckReport> {
    within_bound(universe)?;
    Ok(run(&format!("coassoc:{}:{}", c.flavor, c.species.name), universe, subject, |m| {
        coassociativity_failure(c, m)
    }))
}

fn bialgebra_failure(c: &Coalgebra, a: &Relation, b: &Relation) -> Result<Option<String>> {
    let (ma, mb) = (c.monomial_of(a)?, c.monomial_of(b)?);
    let direct = c.delta_direct(&[a.clone(), b.clone()])?;
    let product = c.delta(&ma)?.mul(&c.delta(&mb)?)?;
    if direct != product {
        return Ok(Some(format!("Δ(ab) ≠ Δ(a)Δ(b): {}", direct.difference_summary(&product, 4))));
    }
    let eps: BigRational = c.counit(&ma) * c.counit(&mb);
    if c.counit_direct(&[a.clone(), b.clone()]) != eps || c.counit(&ma.mul(&mb)) != eps {
        return Ok(Some("ε(ab) ≠ ε(a)ε(b)".into()));
    }
    Ok(None)
}

/// `Δ(ab) = Δ(a)Δ(b)` and `ε(ab) = ε(a)ε(b)` for every unordered pair drawn
/// from the universe, with the left side computed on the product object
/// itself. Also checks `Δ(1) = 1 ⊗ 1`.
pub fn check_bialgebra(c: &Coalgebra, universe: &[Relation]) -> Result<CheckReport> {
    if let Some(size) = universe.iter().map(|p| 2 * p.n()).max().filter(|&s| s > DEFAULT_MAX_SIZE) {
        return Err(Error::SizeBound { size, bound: DEFAULT_MAX_SIZE });
    }
    let pairs: Vec<(usize, usize)> =
        (0..universe.len()).flat_map(|i| (i..universe.len()).map(move |j| (i, j))).collect();
    let mut report = run(
        &format!("bialgebra:{}:{}", c.flavor, c.species.name),
        &pairs,
        |&(i, j)| format!("{}*{}", subject(&c.monomial_of(&universe[i]).unwrap_or_default()), subject(&c.monomial_of(&universe[j]).unwrap_or_default())),
        |&(i, j)| bialgebra_failure(c, &universe[i], &universe[j]),
    );
    let unit = c.delta(&Monomial::unit())?;
    let ok = unit == TensorElem::unit(c.carrier()) && c.counit(&Monomial::unit()) == BigRational::from_integer(1.into());
    report.record("1", (!ok).then(|| "Δ(1) ≠ 1⊗1".into()));
    Ok(report)
}

/// `ω(γ ⊗ γ)` applied to a tensor: swap the middle factors and multiply the
/// two contraction legs.
fn coaction_pair(k: &Coalgebra, t: &TensorElem) -> Result<Tensor3> {
    let mut out = Tensor3::zero(k.carrier());
    for ([x, y], c) in t.terms() {
        let (gx, gy) = (k.delta(x)?, k.delta(y)?);
        for ([b1, a1], c1) in gx.terms() {
            for ([b2, a2], c2) in gy.terms() {
                out.add_term([b1.mul(b2), a1.clone(), a2.clone()], c * c1 * c2);
            }
        }
    }
    Ok(out)
}

fn comodule_failure(k: &Coalgebra, r: &Coalgebra, p: &Relation) -> Result<Option<String>> {
    let m = Monomial::of_relation(p)?;
    let gamma = k.delta(&m)?;
    let mut lhs = Tensor3::zero(k.carrier());
    for ([b, a], c) in gamma.terms() {
        for ([a1, a2], c2) in r.delta(a)?.terms() {
            lhs.add_term([b.clone(), a1.clone(), a2.clone()], c * c2);
        }
    }
    let rhs = coaction_pair(k, &r.delta(&m)?)?;
    if lhs != rhs {
        return Ok(Some(format!("(id⊗Δ)γ ≠ ω(γ⊗γ)Δ: {}", lhs.difference_summary(&rhs, 4))));
    }
    let mut counit_side = AlgElem::zero(k.carrier());
    for ([b, a], c) in gamma.terms() {
        counit_side.add_term([b.clone()], c * r.counit(a));
    }
    let unit_side = AlgElem::unit(k.carrier()).scaled(&r.counit(&m));
    if counit_side != unit_side {
        return Ok(Some(format!("(id⊗ε)γ ≠ ηε: {counit_side} vs {unit_side}")));
    }
    Ok(None)
}

/// Both comodule-bialgebra diagrams on every member of the species of size
/// at most `n_max`, plus the unit.
pub fn check_comodule_bialgebra(s: &SpeciesSpec, n_max: usize) -> Result<CheckReport> {
    let k = Coalgebra::new(Flavor::K, *s)?;
    let r = Coalgebra::new(Flavor::R, *s)?;
    let universe = members(s, n_max)?;
    let mut report = run(
        &format!("comodule:{}", s.name),
        &universe,
        |p| Monomial::of_relation(p).map(|m| subject(&m)).unwrap_or_default(),
        |p| comodule_failure(&k, &r, p),
    );
    let unit_ok = k.delta(&Monomial::unit())? == TensorElem::unit(k.carrier());
    report.record("1", (!unit_ok).then(|| "γ(1) ≠ 1⊗1".into()));
    Ok(report)
}

/// Components of the posetification, as a monomial of connected posets.
pub fn r1(t: &Relation) -> Result<Monomial> {
    Monomial::of_components(&t.posetify().0)
}

fn r1_monomial(m: &Monomial) -> Result<Monomial> {
    m.factors().iter().try_fold(Monomial::unit(), |acc, c| Ok(acc.mul(&r1(&c.to_relation())?)))
}

fn culf_failure(t: &Relation) -> Result<Option<String>> {
    let k = Coalgebra::of(Flavor::K);
    let a = Coalgebra::of(Flavor::A);
    let lhs = k.delta(&r1(t)?)?;
    let mut rhs = TensorElem::zero(k.carrier());
    for ([x, y], c) in a.delta(&Monomial::of_components(t)?)?.terms() {
        rhs.add_term([r1_monomial(x)?, r1_monomial(y)?], c.clone());
    }
    Ok((lhs != rhs).then(|| format!("Δ_K r ≠ (r⊗r)Δ_A: {}", lhs.difference_summary(&rhs, 4))))
}

/// `Δ_K(r(T)) = (r ⊗ r)Δ_A(T)` for every preorder `T` of size at most
/// `n_max`.
pub fn check_culf_r(n_max: usize) -> Result<CheckReport> {
    let universe = catalog_up_to(CatalogKind::Preorder, n_max)?;
    Ok(run(
        "culf",
        &universe,
        |t| Monomial::of_components(t).map(|m| subject(&m)).unwrap_or_default(),
        culf_failure,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::species::{LINEAR_TREES, TREES};

    fn connected_posets(n: usize) -> Vec<Monomial> {
        catalog_up_to(CatalogKind::ConnectedPoset, n)
            .unwrap()
            .iter()
            .map(|p| Monomial::of_relation(p).unwrap())
            .collect()
    }

    #[test]
    fn small_coassociativity() {
        for flavor in [Flavor::K, Flavor::R] {
            let r = check_coassociativity(&Coalgebra::of(flavor), &connected_posets(3)).unwrap();
            assert!(r.passed(), "{r}");
        }
        let ds: Vec<Monomial> = catalog_up_to(CatalogKind::Poset, 3)
            .unwrap()
            .iter()
            .map(|p| Monomial::of_relation(p).unwrap())
            .collect();
        assert!(check_coassociativity(&Coalgebra::of(Flavor::D), &ds).unwrap().passed());
        let pre: Vec<Monomial> = catalog_up_to(CatalogKind::Preorder, 3)
            .unwrap()
            .iter()
            .map(|p| Monomial::of_components(p).unwrap())
            .collect();
        assert!(check_coassociativity(&Coalgebra::of(Flavor::A), &pre).unwrap().passed());
    }

    #[test]
    fn universe_bound_is_enforced() {
        let big = Monomial::of_components(&Relation::discrete(DEFAULT_MAX_SIZE + 1)).unwrap();
        assert!(check_coassociativity(&Coalgebra::of(Flavor::K), &[big]).is_err());
    }

    #[test]
    fn small_bialgebra() {
        let universe = catalog_up_to(CatalogKind::ConnectedPoset, 3).unwrap();
        for flavor in [Flavor::K, Flavor::D, Flavor::R] {
            let r = check_bialgebra(&Coalgebra::of(flavor), &universe).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn small_comodule() {
        assert!(check_comodule_bialgebra(&TREES, 3).unwrap().passed());
        assert!(check_comodule_bialgebra(&LINEAR_TREES, 4).unwrap().passed());
    }

    #[test]
    fn small_culf() {
        let r = check_culf_r(3).unwrap();
        assert!(r.passed(), "{r}");
    }
}
