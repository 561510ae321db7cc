//! Module maps `Σ c_a π_a`, where `π_a(x^u) = x^{a+u}` if `a + u ∈ M` and `0`
//! otherwise, together with the diagonal-splitting decision procedure and the
//! explicit splittings of `X × X` and `X^n`.

mod construct;
mod decide;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::lattice::{self, coset_class, FractionalPoint, LatticeVector};
use crate::laurent::LaurentPolynomial;
use crate::polytope::anticanonical_polytope;

pub use construct::{
    adjacent_semidiagonal_map, canonical_splitting, diagonal_splitting, diagonal_splitting_from_certificate,
    narrow_representatives, semidiagonal_splitting, semidiagonal_splitting_from_certificate,
};
pub use decide::{
    decide_by_interior_enumeration, first_interior_representative, is_diagonally_split, is_diagonally_split_with,
    require_complete, split_q_scan, split_q_scan_with, splitting_basis, witness_for_class, CertificateEntryJson,
    CertificateJson, NonSplitWitness, SearchOptions, SplitCertificate, SplitVerdict, WitnessJson,
};

/// `⟨a, v_ρ⟩ > −1` for every ray of the cone, i.e. `π_a` extends over `U_σ`.
pub fn regular_on_chart(a: &FractionalPoint, fan: &Fan, cone: &Cone) -> bool {
    let q = a.den() as i128;
    fan.cone_rays(cone).iter().all(|v| lattice::dot(a.numerators(), v.coords()) > -q)
}

/// Merges exponent slots `i` and `i + 1` (1-based) of a polynomial on
/// `M^n`, i.e. restricts a function on `X^n` to the semidiagonal `Δ_i`.
pub fn restrict_semidiagonal(p: &LaurentPolynomial, i: usize, slot_dim: usize) -> LaurentPolynomial {
    p.merge_slots(i, slot_dim)
}

/// A finite integer combination `Σ c_a π_a` on a fan, for a fixed `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingMap {
    ambient: Fan,
    q: u32,
    terms: BTreeMap<FractionalPoint, i64>,
    // class residues of −a, i.e. the class of the u on which π_a is nonzero
    by_class: HashMap<Vec<i64>, Vec<(FractionalPoint, i64)>>,
}

impl SplittingMap {
    /// Builds `Σ c_a π_a`, summing repeated points and dropping zero
    /// coefficients. Every term must lie strictly inside `P_{−K}`.
    pub fn new(fan: &Fan, q: u32, terms: impl IntoIterator<Item = (FractionalPoint, i64)>) -> Result<SplittingMap> {
        if q < 2 {
            return Err(Error::InvalidDenominator(q, 2));
        }
        let mut collected: BTreeMap<FractionalPoint, i64> = BTreeMap::new();
        for (a, c) in terms {
            if a.den() != q {
                return Err(Error::DenominatorMismatch { expected: q, got: a.den() });
            }
            lattice::check_dim(fan.dim(), a.dim())?;
            let slot = collected.entry(a).or_insert(0);
            *slot = slot.checked_add(c).ok_or_else(|| Error::InvalidArgument("coefficient overflow".into()))?;
        }
        collected.retain(|_, c| *c != 0);
        let pk = anticanonical_polytope(fan);
        for a in collected.keys() {
            if let Some(ray) = pk.first_non_strict(a) {
                return Err(Error::NotRegular { point: a.clone(), ray });
            }
        }
        let mut by_class: HashMap<Vec<i64>, Vec<(FractionalPoint, i64)>> = HashMap::new();
        for (a, &c) in &collected {
            by_class.entry(coset_class(&-a).residues().to_vec()).or_default().push((a.clone(), c));
        }
        Ok(SplittingMap { ambient: fan.clone(), q, terms: collected, by_class })
    }

    pub fn ambient(&self) -> &Fan {
        &self.ambient
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    /// Terms in lexicographic order of `a`.
    pub fn terms(&self) -> impl Iterator<Item = (&FractionalPoint, i64)> {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: &FractionalPoint) -> i64 {
        self.terms.get(a).copied().unwrap_or(0)
    }

    /// `c_0 = 1`, i.e. `π ∘ F^* = id`.
    pub fn is_splitting(&self) -> bool {
        self.coefficient(&FractionalPoint::zero(self.dim(), self.q)) == 1
    }

    /// `π(x^u)` for `u ∈ (1/q)M`.
    pub fn apply(&self, u: &FractionalPoint) -> Result<LaurentPolynomial> {
        if u.den() != self.q {
            return Err(Error::DenominatorMismatch { expected: self.q, got: u.den() });
        }
        lattice::check_dim(self.dim(), u.dim())?;
        let mut out = LaurentPolynomial::zero();
        if let Some(list) = self.by_class.get(coset_class(u).residues()) {
            for (a, c) in list {
                let m = (a + u).to_lattice().expect("class index guarantees a + u ∈ M");
                out.add_term(m, BigInt::from(*c));
            }
        }
        Ok(out)
    }

    /// `π(x^m)` for an integral exponent.
    pub fn apply_lattice(&self, m: &LatticeVector) -> Result<LaurentPolynomial> {
        self.apply(&FractionalPoint::from_lattice(m, self.q))
    }
}
