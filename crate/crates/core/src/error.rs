use thiserror::Error;

use crate::admissible::AdmissibleFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a poset: {0}")]
    NotAPoset(String),

    #[error("not a preorder: {0}")]
    NotAPreorder(String),

    #[error("malformed map: {0}")]
    MalformedMap(String),

    #[error("element count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("size {size} exceeds the configured bound {bound}")]
    SizeBound { size: usize, bound: usize },

    #[error("sub-relation is not contained in the ambient relation (pair {0} <= {1})")]
    NotSubRelation(usize, usize),

    #[error("link {index} of the chain is not admissible: {failure}")]
    NotAdmissible { index: usize, failure: AdmissibleFailure },

    #[error("map is not a {0}")]
    WrongClass(&'static str),

    #[error("{key} is not a member of species `{species}`")]
    NotMember { species: &'static str, key: String },

    #[error("species `{species}` is not closed: {detail}")]
    NotClosed { species: &'static str, detail: String },

    #[error("carrier mismatch: {0:?} vs {1:?}")]
    CarrierMismatch(crate::species::Carrier, crate::species::Carrier),

    #[error("empty poset is not allowed here")]
    EmptyInput,

    #[error("gluing failed: {0}")]
    Gluing(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
