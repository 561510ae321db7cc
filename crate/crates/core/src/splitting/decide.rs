//! Deciding whether the interior of `𝔽_X` meets every class of `(1/q)M / M`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{Completeness, Fan};
use crate::lattice::{coset_class, enumerate_classes_with_cap, CosetClass, FractionalPoint, DEFAULT_ENUMERATION_CAP};
use crate::polytope::{anticanonical_polytope, diagonal_splitting_polytope, HPolytope, IntegerBox, Odometer};

// classes handed to the thread pool per batch; a miss stops the scan at a batch boundary
const BATCH: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Accept fans whose completeness could not be verified.
    pub assume_complete: bool,
    /// Upper bound on the number of classes `q^n`.
    pub cap: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { assume_complete: false, cap: DEFAULT_ENUMERATION_CAP }
    }
}

/// Fails unless the fan is verified complete or the caller overrides.
pub fn require_complete(fan: &Fan, assume_complete: bool) -> Result<()> {
    match fan.is_complete() {
        Completeness::VerifiedComplete => Ok(()),
        _ if assume_complete => Ok(()),
        Completeness::VerifiedIncomplete => Err(Error::IncompleteFan("verified incomplete")),
        Completeness::Unverified => Err(Error::IncompleteFan("completeness unverified")),
    }
}

/// One strict-interior representative of `𝔽_X` per class, in class order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCertificate {
    q: u32,
    entries: Vec<(CosetClass, FractionalPoint)>,
}

/// A class with no representative strictly inside `𝔽_X`, and the box that was
/// searched exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonSplitWitness {
    q: u32,
    class: CosetClass,
    search_box: IntegerBox,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitVerdict {
    Split(SplitCertificate),
    NotSplit(NonSplitWitness),
}

impl SplitVerdict {
    pub fn is_split(&self) -> bool {
        matches!(self, SplitVerdict::Split(_))
    }

    pub fn certificate(&self) -> Option<&SplitCertificate> {
        match self {
            SplitVerdict::Split(c) => Some(c),
            SplitVerdict::NotSplit(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&NonSplitWitness> {
        match self {
            SplitVerdict::Split(_) => None,
            SplitVerdict::NotSplit(w) => Some(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntryJson {
    pub class: Vec<i64>,
    pub rep: Vec<i64>,
    pub den: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub q: u32,
    pub classes: Vec<CertificateEntryJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub q: u32,
    pub class: Vec<i64>,
    #[serde(rename = "box")]
    pub search_box: Vec<[i64; 2]>,
}

impl SplitCertificate {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn entries(&self) -> &[(CosetClass, FractionalPoint)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn representative(&self, class: &CosetClass) -> Option<&FractionalPoint> {
        self.entries.binary_search_by(|(c, _)| c.cmp(class)).ok().map(|i| &self.entries[i].1)
    }

    /// Representatives of the nonzero classes, in class order.
    pub fn nonzero_representatives(&self) -> impl Iterator<Item = &FractionalPoint> {
        self.entries.iter().filter(|(c, _)| !c.is_zero()).map(|(_, r)| r)
    }

    /// Re-checks the certificate without searching: every class appears exactly
    /// once, every representative reduces to its class and lies strictly
    /// inside `𝔽_X`.
    pub fn validate(&self, fan: &Fan) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(format!("invalid certificate: {msg}")));
        let classes = enumerate_classes_with_cap(fan.dim(), self.q, u64::MAX)?;
        if self.entries.len() as u64 != classes.len() {
            return bad(format!("{} entries for {} classes", self.entries.len(), classes.len()));
        }
        let polytope = diagonal_splitting_polytope(fan);
        for (expected, (class, rep)) in classes.iter().zip(&self.entries) {
            if class != &expected {
                return bad(format!("expected class {expected}, found {class}"));
            }
            if rep.den() != self.q || rep.dim() != fan.dim() {
                return bad(format!("representative {rep} has the wrong shape"));
            }
            if &coset_class(rep) != class {
                return bad(format!("representative {rep} is not in class {class}"));
            }
            if !polytope.contains_strict(rep) {
                return bad(format!("representative {rep} is not interior"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            q: self.q,
            classes: self
                .entries
                .iter()
                .map(|(c, r)| CertificateEntryJson {
                    class: c.residues().to_vec(),
                    rep: r.numerators().to_vec(),
                    den: r.den(),
                })
                .collect(),
        }
    }

    /// Parses without validating; call [`SplitCertificate::validate`].
    pub fn from_json(json: &CertificateJson) -> Result<SplitCertificate> {
        let entries = json
            .classes
            .iter()
            .map(|e| {
                Ok((CosetClass::from_residues(e.class.clone(), json.q)?, FractionalPoint::new(e.rep.clone(), e.den)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SplitCertificate { q: json.q, entries })
    }
}

impl NonSplitWitness {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn class(&self) -> &CosetClass {
        &self.class
    }

    pub fn search_box(&self) -> &IntegerBox {
        &self.search_box
    }

    /// Re-runs the exhaustive search: the box must contain the bounding box
    /// of `𝔽_X` and hold no strict-interior point of the class.
    pub fn validate(&self, fan: &Fan) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(format!("invalid witness: {msg}")));
        if self.class.dim() != fan.dim() || self.class.den() != self.q {
            return bad("class has the wrong shape".into());
        }
        let polytope = diagonal_splitting_polytope(fan);
        if !self.search_box.contains_box(&polytope.bounding_box()?) {
            return bad("search box does not cover the polytope".into());
        }
        if let Some(rep) = first_interior_representative(&polytope, &self.search_box, &self.class) {
            return bad(format!("class {} has interior representative {rep}", self.class));
        }
        Ok(())
    }

    pub fn to_json(&self) -> WitnessJson {
        WitnessJson { q: self.q, class: self.class.residues().to_vec(), search_box: self.search_box.intervals() }
    }

    pub fn from_json(json: &WitnessJson) -> Result<NonSplitWitness> {
        let (lower, upper) = json.search_box.iter().map(|[l, u]| (*l, *u)).unzip();
        Ok(NonSplitWitness {
            q: json.q,
            class: CosetClass::from_residues(json.class.clone(), json.q)?,
            search_box: IntegerBox::new(lower, upper)?,
        })
    }
}

/// Lexicographically smallest point of the class inside the box that lies
/// strictly inside the polytope.
pub fn first_interior_representative(
    polytope: &HPolytope,
    search_box: &IntegerBox,
    class: &CosetClass,
) -> Option<FractionalPoint> {
    let q = class.den();
    let axes = search_box
        .numerator_ranges(q)
        .into_iter()
        .zip(class.residues())
        .map(|((lo, hi), &r)| (lo + (r - lo).rem_euclid(q as i64), hi, q as i64))
        .collect();
    let mut odometer = Odometer::new(axes);
    while let Some(num) = odometer.next_point() {
        let u = FractionalPoint::new(num.to_vec(), q).expect("q ≥ 2");
        if polytope.contains_strict(&u) {
            return Some(u);
        }
    }
    None
}

/// Per-class search with the default options (the fan must be verified complete).
pub fn is_diagonally_split(fan: &Fan, q: u32) -> Result<SplitVerdict> {
    is_diagonally_split_with(fan, q, &SearchOptions::default())
}

/// For each class in lexicographic order, scans its representatives in the
/// bounding box of `𝔽_X` for a strict-interior point. Returns the full
/// certificate or the first uncovered class.
pub fn is_diagonally_split_with(fan: &Fan, q: u32, options: &SearchOptions) -> Result<SplitVerdict> {
    require_complete(fan, options.assume_complete)?;
    let classes = enumerate_classes_with_cap(fan.dim(), q, options.cap)?;
    let polytope = diagonal_splitting_polytope(fan);
    let search_box = polytope.bounding_box()?;
    let mut entries = Vec::with_capacity(classes.len() as usize);
    let mut start = 0;
    while start < classes.len() {
        let end = (start + BATCH).min(classes.len());
        let found: Vec<(CosetClass, Option<FractionalPoint>)> = (start..end)
            .into_par_iter()
            .map(|i| {
                let class = classes.class_at(i);
                let rep = first_interior_representative(&polytope, &search_box, &class);
                (class, rep)
            })
            .collect();
        for (class, rep) in found {
            match rep {
                Some(rep) => entries.push((class, rep)),
                None => {
                    return Ok(SplitVerdict::NotSplit(NonSplitWitness { q, class, search_box }));
                }
            }
        }
        start = end;
    }
    Ok(SplitVerdict::Split(SplitCertificate { q, entries }))
}

/// Enumerates the interior fractional points of `𝔽_X` once, keeps the first
/// point seen in each class, and reports the first class never seen.
pub fn decide_by_interior_enumeration(fan: &Fan, q: u32, options: &SearchOptions) -> Result<SplitVerdict> {
    require_complete(fan, options.assume_complete)?;
    let classes = enumerate_classes_with_cap(fan.dim(), q, options.cap)?;
    let polytope = diagonal_splitting_polytope(fan);
    let search_box = polytope.bounding_box()?;
    let mut slots: Vec<Option<FractionalPoint>> = vec![None; classes.len() as usize];
    for u in polytope.interior_points(q)? {
        let slot = &mut slots[classes.index_of(&coset_class(&u)) as usize];
        if slot.is_none() {
            *slot = Some(u);
        }
    }
    let mut entries = Vec::with_capacity(slots.len());
    for (i, slot) in slots.into_iter().enumerate() {
        let class = classes.class_at(i as u64);
        match slot {
            Some(rep) => entries.push((class, rep)),
            None => return Ok(SplitVerdict::NotSplit(NonSplitWitness { q, class, search_box })),
        }
    }
    Ok(SplitVerdict::Split(SplitCertificate { q, entries }))
}

/// A witness for one given class, if that class is uncovered.
pub fn witness_for_class(fan: &Fan, class: &CosetClass) -> Result<Option<NonSplitWitness>> {
    crate::lattice::check_dim(fan.dim(), class.dim())?;
    let polytope = diagonal_splitting_polytope(fan);
    let search_box = polytope.bounding_box()?;
    Ok(match first_interior_representative(&polytope, &search_box, class) {
        Some(_) => None,
        None => Some(NonSplitWitness { q: class.den(), class: class.clone(), search_box }),
    })
}

/// Verdicts for every `q` in `q_min..=q_max`, in increasing `q`.
pub fn split_q_scan(fan: &Fan, q_min: u32, q_max: u32) -> Result<Vec<(u32, SplitVerdict)>> {
    split_q_scan_with(fan, q_min, q_max, &SearchOptions::default())
}

pub fn split_q_scan_with(
    fan: &Fan,
    q_min: u32,
    q_max: u32,
    options: &SearchOptions,
) -> Result<Vec<(u32, SplitVerdict)>> {
    if q_min < 2 {
        return Err(Error::InvalidDenominator(q_min, 2));
    }
    if q_min > q_max {
        return Err(Error::InvalidArgument(format!("empty q range {q_min}..{q_max}")));
    }
    (q_min..=q_max).into_par_iter().map(|q| Ok((q, is_diagonally_split_with(fan, q, options)?))).collect()
}

/// Interior points of `P_{−K}` in `(1/q)M`, indexing a basis of the maps `π_a`.
pub fn splitting_basis(fan: &Fan, q: u32) -> Result<Vec<FractionalPoint>> {
    if q < 1 {
        return Err(Error::InvalidDenominator(q, 1));
    }
    anticanonical_polytope(fan).interior_points(q)
}
