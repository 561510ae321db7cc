//! Laurent polynomials with integer coefficients over a lattice `ℤ^n`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::LatticeVector;

/// `Σ c_u x^u` with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<LatticeVector, BigInt>,
}

/// Serialized form of one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialTerm {
    pub exponent: Vec<i64>,
    pub coefficient: String,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(LatticeVector::zero(dim), BigInt::one())
    }

    pub fn monomial(exponent: LatticeVector, coefficient: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exponent, coefficient.into());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (LatticeVector, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Adds `c·x^e`, dropping the entry if it cancels.
    pub fn add_term(&mut self, exponent: LatticeVector, coefficient: BigInt) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: &LatticeVector) -> BigInt {
        self.terms.get(exponent).cloned().unwrap_or_default()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn exponents(&self) -> impl Iterator<Item = &LatticeVector> {
        self.terms.keys()
    }

    /// Substitutes along the map `ℤ^{k·m} → ℤ^{(k−1)·m}` that adds slot `i`
    /// and slot `i + 1` (1-based, each of width `slot_dim`).
    pub fn merge_slots(&self, i: usize, slot_dim: usize) -> LaurentPolynomial {
        assert!(i >= 1, "slots are numbered from 1");
        let mut out = LaurentPolynomial::zero();
        for (e, c) in &self.terms {
            assert!(e.dim() >= (i + 1) * slot_dim, "slot index out of range");
            out.add_term(merge_exponent(e.coords(), i, slot_dim), c.clone());
        }
        out
    }

    pub fn to_terms(&self) -> Vec<MonomialTerm> {
        self.terms.iter().map(|(e, c)| MonomialTerm { exponent: e.0.clone(), coefficient: c.to_string() }).collect()
    }
}

pub(crate) fn merge_exponent(e: &[i64], i: usize, slot_dim: usize) -> LatticeVector {
    let start = (i - 1) * slot_dim;
    let mut out = Vec::with_capacity(e.len() - slot_dim);
    out.extend_from_slice(&e[..start]);
    out.extend((0..slot_dim).map(|k| e[start + k] + e[start + slot_dim + k]));
    out.extend_from_slice(&e[start + 2 * slot_dim..]);
    LatticeVector(out)
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-other)
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    // exponents add when monomials multiply
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = LatticeVector(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            if abs.is_one() {
                write!(f, "x^{e}")?;
            } else {
                write!(f, "{abs}*x^{e}")?;
            }
        }
        Ok(())
    }
}
