use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::species::Carrier;

/// A finite formal sum of `R`-fold tensors of monomials with exact rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor<const R: usize> {
    carrier: Carrier,
    terms: BTreeMap<[Monomial; R], BigRational>,
}

pub type AlgElem = Tensor<1>;
pub type TensorElem = Tensor<2>;
pub type Tensor3 = Tensor<3>;

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `p/q`, with the denominator always written.
pub fn format_rational(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

impl<const R: usize> Tensor<R> {
    pub fn zero(carrier: Carrier) -> Self {
        Tensor { carrier, terms: BTreeMap::new() }
    }

    pub fn basis(carrier: Carrier, key: [Monomial; R]) -> Self {
        let mut t = Self::zero(carrier);
        t.add_term(key, BigRational::one());
        t
    }

    /// `1 ⊗ … ⊗ 1`.
    pub fn unit(carrier: Carrier) -> Self {
        Self::basis(carrier, std::array::from_fn(|_| Monomial::unit()))
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn add_term(&mut self, key: [Monomial; R], coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.same_carrier(other)?;
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
        Ok(())
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.carrier);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn coeff(&self, key: &[Monomial; R]) -> BigRational {
        self.terms.get(key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Monomial; R], &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_carrier(&self, other: &Self) -> Result<()> {
        if self.carrier != other.carrier {
            return Err(Error::CarrierMismatch(self.carrier, other.carrier));
        }
        Ok(())
    }

    /// Componentwise product, extended bilinearly.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_carrier(other)?;
        let mut out = Self::zero(self.carrier);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let key = std::array::from_fn(|i| a[i].mul(&b[i]));
                out.add_term(key, ca * cb);
            }
        }
        Ok(out)
    }

    /// Terms present in exactly one side or with different coefficients,
    /// rendered for diagnostics.
    pub fn difference_summary(&self, other: &Self, limit: usize) -> String {
        let mut lines = Vec::new();
        let keys: std::collections::BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).collect();
        for k in keys {
            let (a, b) = (self.coeff(k), other.coeff(k));
            if a != b {
                let legs: Vec<String> = k.iter().map(|m| m.to_string()).collect();
                lines.push(format!("{}: {} vs {}", legs.join(" ⊗ "), format_rational(&a), format_rational(&b)));
            }
        }
        let more = lines.len().saturating_sub(limit);
        lines.truncate(limit);
        if more > 0 {
            lines.push(format!("… {more} more"));
        }
        lines.join("; ")
    }
}

impl AlgElem {
    pub fn monomial(carrier: Carrier, m: Monomial) -> Self {
        Self::basis(carrier, [m])
    }

    /// Product in the free commutative algebra.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
}

impl TensorElem {
    /// JSON list of `{"left": [...], "right": [...], "coeff": "p/q"}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|([l, r], c)| json!({"left": l.keys(), "right": r.keys(), "coeff": format_rational(c)}))
                .collect(),
        )
    }

    pub fn pure(carrier: Carrier, left: Monomial, right: Monomial) -> Self {
        Self::basis(carrier, [left, right])
    }
}

impl<const R: usize> fmt::Display for Tensor<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let legs: Vec<String> = k.iter().map(|m| m.to_string()).collect();
                let legs = legs.join(" ⊗ ");
                if c.is_one() {
                    legs
                } else if c.is_integer() {
                    format!("{} ({legs})", c.numer())
                } else {
                    format!("{} ({legs})", format_rational(c))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<const R: usize> fmt::Debug for Tensor<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor<{R}>[{:?}] {self}", self.carrier)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::Relation;

    fn point() -> Monomial {
        Monomial::of_relation(&Relation::discrete(1)).unwrap()
    }

    #[test]
    fn product_examples() {
        let one = AlgElem::unit(Carrier::Posets);
        let p = AlgElem::monomial(Carrier::Posets, Monomial::of_relation(&Relation::chain(2)).unwrap());
        assert_eq!(one.product(&p).unwrap(), p);

        let dot = AlgElem::monomial(Carrier::Posets, point());
        let dd = dot.product(&dot).unwrap();
        assert_eq!(dd.len(), 1);
        assert_eq!(dd.terms().next().unwrap().0[0].degree(), 2);

        let q = AlgElem::monomial(Carrier::Posets, Monomial::of_relation(&Relation::chain(3)).unwrap());
        let mut sum = p.clone();
        sum.add_assign(&q).unwrap();
        let mut expected = p.product(&dot).unwrap();
        expected.add_assign(&q.product(&dot).unwrap()).unwrap();
        assert_eq!(sum.product(&dot).unwrap(), expected);
    }

    #[test]
    fn carrier_mismatch_is_an_error() {
        let a = AlgElem::unit(Carrier::Posets);
        let b = AlgElem::unit(Carrier::Preorders);
        assert!(matches!(a.product(&b), Err(Error::CarrierMismatch(..))));
    }

    #[test]
    fn zero_terms_are_dropped() {
        let mut t = TensorElem::pure(Carrier::Posets, point(), point());
        t.add_term([point(), point()], rational(-1));
        assert!(t.is_empty());
        assert_eq!(t.to_string(), "0");
    }

    #[test]
    fn json_uses_keys_and_fractions() {
        let t = TensorElem::pure(Carrier::Posets, point(), Monomial::unit()).scaled(&rational(3));
        assert_eq!(t.to_json(), json!([{"left": ["1:"], "right": [], "coeff": "3/1"}]));
    }
}
