//! Exact lattice arithmetic on `M ≅ ℤ^n`, its dual `N`, fractional points of
//! `(1/q)M` and their classes in `(1/q)M / M ≅ (ℤ/q)^n`.
//!
//! Coordinates are stored as `i64`. Every derived quantity (pairings, sums of
//! products) is computed in `i128` or arbitrary precision, never in floating
//! point.

use std::fmt;
use std::ops::{Add, Neg, Range, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of coset classes a single enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

/// An integer vector, either a character in `M` or a cocharacter in `N`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Integer pairing with another integer vector.
    pub fn dot(&self, other: &LatticeVector) -> Result<i128> {
        check_dim(self.dim(), other.dim())?;
        Ok(dot(&self.0, &other.0))
    }

    /// Concatenation, used for product lattices `M × M'`.
    pub fn concat(&self, other: &LatticeVector) -> LatticeVector {
        let mut coords = self.0.clone();
        coords.extend_from_slice(&other.0);
        LatticeVector(coords)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

/// A point of `(1/q)M`: `numerators / den`.
///
/// The denominator is the ambient `q` and is never reduced, so points sharing
/// a `q` add and compare coordinatewise on numerators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FractionalPoint {
    num: Vec<i64>,
    den: u32,
}

impl FractionalPoint {
    pub fn new(num: Vec<i64>, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidDenominator(den, 1));
        }
        Ok(Self { num, den })
    }

    pub fn zero(dim: usize, den: u32) -> Self {
        Self { num: vec![0; dim], den }
    }

    /// Embeds a lattice point `m ∈ M` as `(q·m)/q`.
    pub fn from_lattice(m: &LatticeVector, den: u32) -> Self {
        Self { num: m.0.iter().map(|&c| c * den as i64).collect(), den }
    }

    pub fn numerators(&self) -> &[i64] {
        &self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0)
    }

    /// True when the point lies in `M`.
    pub fn is_integral(&self) -> bool {
        let q = self.den as i64;
        self.num.iter().all(|c| c.rem_euclid(q) == 0)
    }

    /// The lattice point, if integral.
    pub fn to_lattice(&self) -> Option<LatticeVector> {
        if !self.is_integral() {
            return None;
        }
        let q = self.den as i64;
        Some(LatticeVector(self.num.iter().map(|c| c / q).collect()))
    }

    pub fn coordinate(&self, i: usize) -> BigRational {
        BigRational::new(BigInt::from(self.num[i]), BigInt::from(self.den))
    }

    /// Numerator of `⟨u, v⟩`, i.e. `q·⟨u, v⟩ ∈ ℤ`.
    pub fn pairing_numerator(&self, v: &LatticeVector) -> Result<i128> {
        check_dim(self.dim(), v.dim())?;
        Ok(dot(&self.num, &v.0))
    }

    pub fn checked_add(&self, other: &FractionalPoint) -> Result<FractionalPoint> {
        self.check_compatible(other)?;
        Ok(FractionalPoint { num: self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect(), den: self.den })
    }

    /// Adds an integer lattice translate.
    pub fn translate(&self, m: &LatticeVector) -> Result<FractionalPoint> {
        check_dim(self.dim(), m.dim())?;
        let q = self.den as i64;
        Ok(FractionalPoint { num: self.num.iter().zip(&m.0).map(|(a, b)| a + q * b).collect(), den: self.den })
    }

    /// Product-lattice point `(self, other)`.
    pub fn concat(&self, other: &FractionalPoint) -> Result<FractionalPoint> {
        if self.den != other.den {
            return Err(Error::DenominatorMismatch { expected: self.den, got: other.den });
        }
        let mut num = self.num.clone();
        num.extend_from_slice(&other.num);
        Ok(FractionalPoint { num, den: self.den })
    }

    fn check_compatible(&self, other: &FractionalPoint) -> Result<()> {
        check_dim(self.dim(), other.dim())?;
        if self.den != other.den {
            return Err(Error::DenominatorMismatch { expected: self.den, got: other.den });
        }
        Ok(())
    }
}

impl fmt::Display for FractionalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &c) in self.num.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let g = c.gcd(&(self.den as i64));
            let (n, d) = (c / g, self.den as i64 / g);
            if d == 1 {
                write!(f, "{n}")?;
            } else {
                write!(f, "{n}/{d}")?;
            }
        }
        write!(f, ")")
    }
}

impl Neg for &FractionalPoint {
    type Output = FractionalPoint;
    fn neg(self) -> FractionalPoint {
        FractionalPoint { num: self.num.iter().map(|c| -c).collect(), den: self.den }
    }
}

impl Add for &FractionalPoint {
    type Output = FractionalPoint;
    /// Panics on a dimension or denominator mismatch; use
    /// [`FractionalPoint::checked_add`] for untrusted input.
    fn add(self, other: &FractionalPoint) -> FractionalPoint {
        self.checked_add(other).expect("incompatible fractional points")
    }
}

impl Sub for &FractionalPoint {
    type Output = FractionalPoint;
    fn sub(self, other: &FractionalPoint) -> FractionalPoint {
        self + &(-other)
    }
}

/// The class of a fractional point in `(1/q)M / M`, by canonical residues in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CosetClass {
    residues: Vec<i64>,
    den: u32,
}

impl CosetClass {
    /// Builds a class from arbitrary integers, reducing them mod `q`.
    pub fn from_residues(residues: Vec<i64>, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidDenominator(den, 1));
        }
        let q = den as i64;
        Ok(Self { residues: residues.into_iter().map(|r| r.rem_euclid(q)).collect(), den })
    }

    pub fn zero(dim: usize, den: u32) -> Self {
        Self { residues: vec![0; dim], den }
    }

    pub fn residues(&self) -> &[i64] {
        &self.residues
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn dim(&self) -> usize {
        self.residues.len()
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    /// The canonical representative in `[0, 1)^n`.
    pub fn representative(&self) -> FractionalPoint {
        FractionalPoint { num: self.residues.clone(), den: self.den }
    }

    pub fn negate(&self) -> CosetClass {
        let q = self.den as i64;
        CosetClass { residues: self.residues.iter().map(|r| (-r).rem_euclid(q)).collect(), den: self.den }
    }

    pub fn add(&self, other: &CosetClass) -> CosetClass {
        let q = self.den as i64;
        CosetClass {
            residues: self.residues.iter().zip(&other.residues).map(|(a, b)| (a + b).rem_euclid(q)).collect(),
            den: self.den,
        }
    }
}

impl fmt::Display for CosetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.representative())
    }
}

/// Divides out the gcd of the coordinates.
pub fn primitive(v: &LatticeVector) -> Result<LatticeVector> {
    let g = v.0.iter().fold(0i64, |g, &c| g.gcd(&c));
    if g == 0 {
        return Err(Error::NotARayDirection);
    }
    Ok(LatticeVector(v.0.iter().map(|c| c / g).collect()))
}

/// Exact `⟨u, v⟩` for `u ∈ (1/q)M`, `v ∈ N`.
pub fn pairing(u: &FractionalPoint, v: &LatticeVector) -> Result<BigRational> {
    let n = u.pairing_numerator(v)?;
    Ok(BigRational::new(BigInt::from(n), BigInt::from(u.den)))
}

pub fn coset_class(u: &FractionalPoint) -> CosetClass {
    let q = u.den as i64;
    CosetClass { residues: u.num.iter().map(|c| c.rem_euclid(q)).collect(), den: u.den }
}

/// All `q^n` classes of `(1/q)M / M` in lexicographic order of residues.
///
/// Supports random access by index so that contiguous index ranges can be
/// handed to independent workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassEnumerator {
    dim: usize,
    den: u32,
    len: u64,
}

pub fn enumerate_classes(dim: usize, q: u32) -> Result<ClassEnumerator> {
    enumerate_classes_with_cap(dim, q, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_classes_with_cap(dim: usize, q: u32, cap: u64) -> Result<ClassEnumerator> {
    if q < 2 {
        return Err(Error::InvalidDenominator(q, 2));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let count = (q as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    Ok(ClassEnumerator { dim, den: q, len: count as u64 })
}

impl ClassEnumerator {
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    /// The class at position `index`; the first coordinate is the most
    /// significant digit.
    pub fn class_at(&self, index: u64) -> CosetClass {
        assert!(index < self.len, "class index out of range");
        let q = self.den as u64;
        let mut residues = vec![0i64; self.dim];
        let mut rest = index;
        for slot in residues.iter_mut().rev() {
            *slot = (rest % q) as i64;
            rest /= q;
        }
        CosetClass { residues, den: self.den }
    }

    /// Position of a class in the enumeration order.
    pub fn index_of(&self, class: &CosetClass) -> u64 {
        class.residues.iter().fold(0u64, |acc, &r| acc * self.den as u64 + r as u64)
    }

    pub fn range(&self, range: Range<u64>) -> impl Iterator<Item = CosetClass> + '_ {
        let end = range.end.min(self.len);
        (range.start..end).map(move |i| self.class_at(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = CosetClass> + '_ {
        self.range(0..self.len)
    }

    /// Splits `0..len` into at most `parts` contiguous ranges.
    pub fn partition(&self, parts: usize) -> Vec<Range<u64>> {
        let parts = parts.max(1) as u64;
        let chunk = self.len.div_ceil(parts).max(1);
        (0..self.len).step_by(chunk as usize).map(|s| s..(s + chunk).min(self.len)).collect()
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}
