//! Finite posets and preorders, the maps between them that drive
//! incidence bialgebras (contractions, collapse maps, admissible
//! sub-preorders, cuts), and exact computations with those bialgebras on
//! isomorphism classes.
//!
//! ```
//! use posetal::{Relation, incidence::{delta_k, Monomial}, species::TREES};
//!
//! let cherry = Relation::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
//! let delta = delta_k(&Monomial::of_relation(&cherry).unwrap(), &TREES).unwrap();
//! assert_eq!(delta.len(), 3);
//! ```

pub mod admissible;
pub mod canonical;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod gluing;
pub mod incidence;
pub mod maps;
pub mod relation;
pub mod report;
pub mod species;
pub mod suites;

pub use admissible::{
    admissible_to_contraction, contraction_to_admissible, is_admissible, quotient, quotient_grid, quotient_map, r_map,
    AdmissibleFailure, ContractionChain, QuotientGrid,
};
pub use canonical::{are_isomorphic, canonical_form, canonicalize, IsoClass};
pub use enumerate::{
    catalog, enumerate_admissible, enumerate_collapses, enumerate_contractions, enumerate_convex_subsets,
    enumerate_downsets, CatalogKind, ContractionDatum, CutDatum, KernelDatum,
};
pub use error::{Error, Result};
pub use gluing::{glue_collapses, glue_contractions, Gluing};
pub use maps::{classify, posetify, MapClass, OrderMap, PartialMap};
pub use relation::{CoverPair, Partition, Relation, Subset};
pub use report::{CheckFailure, CheckReport};
pub use species::{Carrier, SpeciesSpec};
