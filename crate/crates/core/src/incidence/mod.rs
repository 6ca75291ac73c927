//! The free commutative algebra on isomorphism classes, the four
//! comultiplications (contractions, collapses, cuts, admissible
//! sub-preorders), their counits, the coaction, and exact checkers for the
//! bialgebra axioms.

pub mod checks;
pub mod coproduct;
pub mod monomial;
pub mod tensor;

pub use checks::{check_bialgebra, check_coassociativity, check_comodule_bialgebra, check_culf_r, r1};
pub use coproduct::{coaction_gamma, counit, delta_a, delta_d, delta_k, delta_r, Coalgebra, Flavor};
pub use monomial::{pretty_class, Monomial};
pub use tensor::{format_rational, rational, AlgElem, Tensor, Tensor3, TensorElem};
