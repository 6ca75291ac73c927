//! Exhaustive check suites over all small posets and preorders.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::admissible::{
    admissible_to_contraction, contraction_to_admissible, is_admissible, quotient, quotient_grid, quotient_map,
};
use crate::canonical::canonical_form;
use crate::enumerate::{
    catalog_up_to, enumerate_admissible, enumerate_collapses, enumerate_contractions,
    enumerate_preorder_contractions, CatalogKind,
};
use crate::error::{Error, Result};
use crate::gluing::{fibre_map_choices, glue, glue_candidates};
use crate::incidence::{
    check_bialgebra, check_coassociativity, check_comodule_bialgebra, check_culf_r, Coalgebra, Flavor, Monomial,
};
use crate::maps::{CoverClass, OrderMap};
use crate::relation::Relation;
use crate::report::CheckReport;
use crate::species::{verify_closure, ALL_POSETS, DISCRETE, LINEAR_TREES, TREES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Coassoc,
    Bialgebra,
    Comodule,
    Bijection,
    Culf,
    Closure,
    GlueUnique,
    GridCoherence,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Coassoc,
        Suite::Bialgebra,
        Suite::Comodule,
        Suite::Bijection,
        Suite::Culf,
        Suite::Closure,
        Suite::GlueUnique,
        Suite::GridCoherence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Coassoc => "coassoc",
            Suite::Bialgebra => "bialgebra",
            Suite::Comodule => "comodule",
            Suite::Bijection => "bijection",
            Suite::Culf => "culf",
            Suite::Closure => "closure",
            Suite::GlueUnique => "glue-unique",
            Suite::GridCoherence => "grid-coherence",
        }
    }

    /// Default size bound: 5 on posets, 4 on preorders, and 4 for products
    /// of pairs.
    pub fn default_max_size(self) -> usize {
        match self {
            Suite::Coassoc | Suite::Comodule | Suite::Closure | Suite::GlueUnique => 5,
            Suite::Bialgebra | Suite::Bijection | Suite::Culf | Suite::GridCoherence => 4,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

/// Runs a suite. Without an explicit bound, coassociativity uses 5 for the
/// poset flavors and 4 for preorders.
pub fn run_suite(suite: Suite, max_size: Option<usize>) -> Result<Vec<CheckReport>> {
    let n = max_size.unwrap_or(suite.default_max_size());
    match suite {
        Suite::Coassoc => {
            let pre = max_size.unwrap_or(4);
            Ok(vec![
                check_coassociativity(&Coalgebra::of(Flavor::K), &connected_monomials(n)?)?,
                check_coassociativity(&Coalgebra::of(Flavor::R), &connected_monomials(n)?)?,
                check_coassociativity(&Coalgebra::of(Flavor::D), &poset_generators(max_size.unwrap_or(4))?)?,
                check_coassociativity(&Coalgebra::of(Flavor::A), &preorder_monomials(pre)?)?,
            ])
        }
        Suite::Bialgebra => {
            let universe = catalog_up_to(CatalogKind::ConnectedPoset, n)?;
            [Flavor::K, Flavor::D, Flavor::R].into_iter().map(|f| check_bialgebra(&Coalgebra::of(f), &universe)).collect()
        }
        Suite::Comodule => Ok(vec![check_comodule_bialgebra(&TREES, n)?, check_comodule_bialgebra(&LINEAR_TREES, n)?]),
        Suite::Bijection => Ok(vec![check_bijection(n)?]),
        Suite::Culf => Ok(vec![check_culf_r(n)?]),
        Suite::Closure => [TREES, LINEAR_TREES, ALL_POSETS, DISCRETE].iter().map(|s| verify_closure(s, n)).collect(),
        Suite::GlueUnique => Ok(vec![check_gluing(CoverClass::Contraction, n)?, check_gluing(CoverClass::Collapse, n)?]),
        Suite::GridCoherence => Ok(vec![check_grid_coherence(n)?]),
    }
}

pub fn connected_monomials(n: usize) -> Result<Vec<Monomial>> {
    catalog_up_to(CatalogKind::ConnectedPoset, n)?.iter().map(Monomial::of_relation).collect()
}

/// Every non-empty poset as a single generator.
pub fn poset_generators(n: usize) -> Result<Vec<Monomial>> {
    catalog_up_to(CatalogKind::Poset, n)?.iter().map(Monomial::of_relation).collect()
}

/// Every non-empty preorder as the monomial of its components.
pub fn preorder_monomials(n: usize) -> Result<Vec<Monomial>> {
    catalog_up_to(CatalogKind::Preorder, n)?.iter().map(Monomial::of_components).collect()
}

fn key(rel: &Relation) -> String {
    canonical_form(rel).map(|c| c.key()).unwrap_or_else(|_| format!("{rel:?}"))
}

fn collect(suite: &str, outcomes: Vec<(String, Result<Option<String>>)>) -> CheckReport {
    let mut report = CheckReport::new(suite);
    for (subject, outcome) in outcomes {
        report.record(subject, outcome.unwrap_or_else(|e| Some(e.to_string())));
    }
    report
}

fn bijection_failure(t: &Relation) -> Result<Option<String>> {
    let subs = enumerate_admissible(t)?;
    let contractions = enumerate_preorder_contractions(t)?;
    if subs.len() != contractions.len() {
        return Ok(Some(format!("{} admissible subs but {} contractions", subs.len(), contractions.len())));
    }
    for sub in &subs {
        let q = quotient_map(t, sub)?;
        if !q.is_preorder_contraction() {
            return Ok(Some(format!("quotient by {sub:?} is not a contraction")));
        }
        if contraction_to_admissible(&q)? != *sub {
            return Ok(Some(format!("{sub:?} does not round-trip")));
        }
        admissible_to_contraction(sub, t)?;
    }
    for f in &contractions {
        let sub = contraction_to_admissible(f)?;
        if !is_admissible(&sub, t)? || quotient(t, &sub)? != *f.target() {
            return Ok(Some(format!("contraction onto {:?} does not round-trip", f.target())));
        }
    }
    if t.is_poset() {
        let data = enumerate_contractions(t)?;
        if data.len() != subs.len() {
            return Ok(Some(format!("{} admissible subs but {} poset contractions", subs.len(), data.len())));
        }
        for d in &data {
            let sub = contraction_to_admissible(&d.to_map())?;
            let back = admissible_to_contraction(&sub, t)?;
            if back.kernel() != d.kernel || canonical_form(back.target())? != canonical_form(&d.quotient)? {
                return Ok(Some(format!("kernel {:?} does not round-trip", d.kernel.labels())));
            }
        }
    }
    Ok(None)
}

/// The admissible/contraction correspondence on every preorder of size at
/// most `n`: equal counts, mutually inverse constructions, and for posets
/// agreement with the enumerated contractions up to kernel data.
pub fn check_bijection(n: usize) -> Result<CheckReport> {
    let universe = catalog_up_to(CatalogKind::Preorder, n)?;
    let outcomes = universe.par_iter().map(|t| (key(t), bijection_failure(t))).collect();
    Ok(collect("bijection", outcomes))
}

fn gluing_failure(f: &OrderMap, class: CoverClass) -> Result<Option<String>> {
    for choice in fibre_map_choices(f, class)? {
        let glued = glue(f, &choice, class)?;
        for (b, piece) in choice.iter().enumerate() {
            let over = glued.w.induced(glued.g.fibre(b));
            if over != *piece.target() {
                return Ok(Some(format!("fibre {b} of the glued map differs from the given piece")));
            }
        }
        let candidates = glue_candidates(f, &choice, class)?;
        if candidates != [glued.w.clone()] {
            return Ok(Some(format!(
                "{} candidate orders for fibre maps {:?}",
                candidates.len(),
                choice.iter().map(|m| m.images().to_vec()).collect::<Vec<_>>()
            )));
        }
    }
    Ok(None)
}

/// For every contraction out of a connected poset (or collapse out of any
/// poset) of size at most `n`, and every choice of maps of the same class
/// out of its fibres, the glued factorization exists and is the only one.
pub fn check_gluing(class: CoverClass, n: usize) -> Result<CheckReport> {
    let (kind, suite) = match class {
        CoverClass::Contraction => (CatalogKind::ConnectedPoset, "glue-unique:contraction"),
        CoverClass::Collapse => (CatalogKind::Poset, "glue-unique:collapse"),
    };
    let mut maps = Vec::new();
    for p in catalog_up_to(kind, n)? {
        let data = match class {
            CoverClass::Contraction => enumerate_contractions(&p)?,
            CoverClass::Collapse => enumerate_collapses(&p)?,
        };
        maps.extend(data.into_iter().map(|d| (format!("{}/{:?}", key(&p), d.kernel.labels()), d.to_map())));
    }
    let outcomes = maps.par_iter().map(|(name, f)| (name.clone(), gluing_failure(f, class))).collect();
    Ok(collect(suite, outcomes))
}

fn grid_failure(chain: &[Relation]) -> Result<Option<String>> {
    let grid = quotient_grid(chain)?;
    let mut problems = Vec::new();
    for report in [grid.verify(), grid.coherence()] {
        problems.extend(report.failures.into_iter().map(|f| format!("{}: {}", f.subject, f.detail)));
    }
    Ok((!problems.is_empty()).then(|| problems.join("; ")))
}

/// Quotient-grid structure and coherence for every admissible 2-chain
/// `T_0 ⊆ T_1 ⊆ T_2` over preorders of size at most `n`.
pub fn check_grid_coherence(n: usize) -> Result<CheckReport> {
    let mut chains = Vec::new();
    for t2 in catalog_up_to(CatalogKind::Preorder, n)? {
        for t1 in enumerate_admissible(&t2)? {
            for t0 in enumerate_admissible(&t1)? {
                chains.push(vec![t0, t1.clone(), t2.clone()]);
            }
        }
    }
    let outcomes = chains
        .par_iter()
        .map(|c| (c.iter().map(key).collect::<Vec<_>>().join(" ⊆ "), grid_failure(c)))
        .collect();
    Ok(collect("grid-coherence", outcomes))
}
