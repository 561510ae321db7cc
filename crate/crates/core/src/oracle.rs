//! Brute-force checks on truncated chart semigroups.
//!
//! For a full-dimensional cone `σ` the chart grid is the finite set
//! `{ u ∈ σ^∨ ∩ (1/q)M : ⟨u, v_ρ⟩ ≤ B for every ray ρ of σ }`. Every check
//! below applies a map to monomials `x^u` for `u` in such grids (or products
//! of them) and compares the images with what the property demands.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::lattice::{self, FractionalPoint, LatticeVector};
use crate::laurent::{merge_exponent, LaurentPolynomial, MonomialTerm};
use crate::polytope::{Constraint, HPolytope};
use crate::splitting::{restrict_semidiagonal, SplittingMap};

/// Default degree bound `B`.
pub const DEFAULT_BOUND: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartGrid {
    cone: usize,
    q: u32,
    bound: u32,
    points: Vec<FractionalPoint>,
}

impl ChartGrid {
    pub fn cone(&self) -> usize {
        self.cone
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> &[FractionalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// All `u ∈ σ^∨ ∩ (1/q)M` with `0 ≤ ⟨u, v_ρ⟩ ≤ B` for the rays of cone
/// `cone` of the fan. `q = 1` gives the integral points.
pub fn chart_grid(fan: &Fan, cone: usize, q: u32, bound: u32) -> Result<ChartGrid> {
    let c = fan.max_cones().get(cone).ok_or_else(|| Error::InvalidArgument(format!("no maximal cone {cone}")))?;
    if q == 0 {
        return Err(Error::InvalidDenominator(q, 1));
    }
    if !fan.is_full_dimensional(c) {
        return Err(Error::NotFullDimensional(cone));
    }
    let mut constraints = Vec::with_capacity(2 * c.rays().len());
    for v in fan.cone_rays(c) {
        constraints.push(Constraint::new(v.clone(), BigRational::zero())?);
        constraints.push(Constraint::new(-v, BigRational::from_integer((-(bound as i64)).into()))?);
    }
    let points = HPolytope::new(fan.dim(), constraints)?.fractional_points(q)?;
    Ok(ChartGrid { cone, q, bound, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A failing check: the chart, the element(s) the map was applied to, and
/// the offending image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub chart: usize,
    pub elements: Vec<FractionalPoint>,
    pub image: LaurentPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub check: String,
    pub verdict: Verdict,
    pub elements_checked: u64,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub num: Vec<i64>,
    pub den: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleJson {
    pub chart: usize,
    pub elements: Vec<PointJson>,
    pub image: Vec<MonomialTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReportJson {
    pub check: String,
    pub verdict: Verdict,
    pub elements_checked: u64,
    pub counterexample: Option<CounterexampleJson>,
}

impl OracleReport {
    fn from_parts(check: impl Into<String>, elements_checked: u64, counterexample: Option<Counterexample>) -> Self {
        OracleReport {
            check: check.into(),
            verdict: if counterexample.is_some() { Verdict::Fail } else { Verdict::Pass },
            elements_checked,
            counterexample,
        }
    }

    /// Combines per-chart reports; the counterexample of the first failing
    /// chart wins.
    fn merge(check: &str, parts: Vec<(u64, Option<Counterexample>)>) -> Self {
        let checked = parts.iter().map(|p| p.0).sum();
        let first = parts.into_iter().find_map(|p| p.1);
        Self::from_parts(check, checked, first)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> OracleReportJson {
        OracleReportJson {
            check: self.check.clone(),
            verdict: self.verdict,
            elements_checked: self.elements_checked,
            counterexample: self.counterexample.as_ref().map(|c| CounterexampleJson {
                chart: c.chart,
                elements: c.elements.iter().map(|u| PointJson { num: u.numerators().to_vec(), den: u.den() }).collect(),
                image: c.image.to_terms(),
            }),
        }
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{}: {verdict} ({} elements)", self.check, self.elements_checked)?;
        if let Some(c) = &self.counterexample {
            write!(f, "; chart {}, element", c.chart)?;
            for u in &c.elements {
                write!(f, " {u}")?;
            }
            write!(f, ", image {}", c.image)?;
        }
        Ok(())
    }
}

/// Whether `π_a` maps the chart grid into the chart: for every grid point `u`
/// with `a + u ∈ M`, also `a + u ∈ σ^∨`.
pub fn brute_force_regularity(a: &FractionalPoint, fan: &Fan, cone: usize, q: u32, bound: u32) -> Result<OracleReport> {
    if a.den() != q {
        return Err(Error::DenominatorMismatch { expected: q, got: a.den() });
    }
    lattice::check_dim(fan.dim(), a.dim())?;
    let grid = chart_grid(fan, cone, q, bound)?;
    let c = &fan.max_cones()[cone];
    let mut counterexample = None;
    for u in grid.points() {
        let s = a + u;
        if s.is_integral() && !fan.dual_cone_contains(c, &s) {
            counterexample = Some(Counterexample {
                chart: cone,
                elements: vec![u.clone()],
                image: LaurentPolynomial::monomial(s.to_lattice().expect("integral"), 1),
            });
            break;
        }
    }
    Ok(OracleReport::from_parts("regularity", grid.len() as u64, counterexample))
}

/// `π(x^u) = x^u` for every integral point `u` of every chart grid of the
/// ambient fan.
pub fn verify_splitting_law(pi: &SplittingMap, bound: u32) -> Result<OracleReport> {
    let fan = pi.ambient();
    let parts = (0..fan.max_cones().len())
        .into_par_iter()
        .map(|ci| -> Result<(u64, Option<Counterexample>)> {
            let grid = chart_grid(fan, ci, 1, bound)?;
            for u in grid.points() {
                let m = u.to_lattice().expect("q = 1");
                let image = pi.apply_lattice(&m)?;
                if image != LaurentPolynomial::monomial(m, 1) {
                    let elements = vec![FractionalPoint::from_lattice(&u.to_lattice().expect("q = 1"), pi.q())];
                    return Ok((grid.len() as u64, Some(Counterexample { chart: ci, elements, image })));
                }
            }
            Ok((grid.len() as u64, None))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport::merge("splitting law", parts))
}

/// Compatibility of `π` on `X × X` with the diagonal; see
/// [`verify_semidiagonal_compatibility`].
pub fn verify_diagonal_compatibility(fan: &Fan, q: u32, pi: &SplittingMap, bound: u32) -> Result<OracleReport> {
    let mut report = verify_semidiagonal_compatibility(fan, q, 2, 1, pi, bound)?;
    report.check = "diagonal".into();
    Ok(report)
}

/// Compatibility of `π` on `X^n` with `Δ_i` on the charts `σ^n`: for grid
/// points `b`, `b′` of `σ^n` that agree outside slots `i`, `i + 1` and have
/// equal sums there, the restrictions of `π(x^b)` and `π(x^{b′})` to `Δ_i`
/// must agree. Each `b` is compared against the lexicographically first
/// point with the same merged exponent.
///
/// A counterexample lists `[b_first, b]`, and the image is the restriction
/// of `π(x^{b_first} − x^b)`.
pub fn verify_semidiagonal_compatibility(
    fan: &Fan,
    q: u32,
    n: usize,
    i: usize,
    pi: &SplittingMap,
    bound: u32,
) -> Result<OracleReport> {
    if n < 2 || i == 0 || i >= n {
        return Err(Error::InvalidArgument(format!("need 1 ≤ i < n, got i = {i}, n = {n}")));
    }
    if pi.q() != q {
        return Err(Error::DenominatorMismatch { expected: q, got: pi.q() });
    }
    let d = fan.dim();
    lattice::check_dim(n * d, pi.dim())?;
    let parts = (0..fan.max_cones().len())
        .into_par_iter()
        .map(|ci| -> Result<(u64, Option<Counterexample>)> {
            let grid = chart_grid(fan, ci, q, bound)?;
            let slots = grid.points();
            let total = (slots.len() as u64)
                .checked_pow(n as u32)
                .filter(|&t| t <= lattice::DEFAULT_ENUMERATION_CAP)
                .ok_or(Error::EnumerationTooLarge {
                count: (slots.len() as u128).saturating_pow(n as u32),
                cap: lattice::DEFAULT_ENUMERATION_CAP,
            })?;
            let mut first: HashMap<LatticeVector, (FractionalPoint, LaurentPolynomial)> = HashMap::new();
            let mut digits = vec![0usize; n];
            for _ in 0..total {
                let mut num = Vec::with_capacity(n * d);
                for &k in &digits {
                    num.extend_from_slice(slots[k].numerators());
                }
                let b = FractionalPoint::new(num, q)?;
                let key = merge_exponent(b.numerators(), i, d);
                let image = restrict_semidiagonal(&pi.apply(&b)?, i, d);
                match first.get(&key) {
                    None => {
                        first.insert(key, (b, image));
                    }
                    Some((b0, image0)) if image0 != &image => {
                        return Ok((
                            total,
                            Some(Counterexample { chart: ci, elements: vec![b0.clone(), b], image: image0 - &image }),
                        ));
                    }
                    Some(_) => {}
                }
                for slot in (0..n).rev() {
                    digits[slot] += 1;
                    if digits[slot] < slots.len() {
                        break;
                    }
                    digits[slot] = 0;
                }
            }
            Ok((total, None))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport::merge(&format!("semidiagonal {i} of {n}"), parts))
}

/// Membership test for the monomials of a `T`-invariant ideal on a chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealPredicate {
    /// The ideal of the union of the invariant divisors: `u` pairs
    /// positively with every ray of the chart.
    UnionOfDivisors,
    /// The ideal of the orbit closure of a cone `τ`: on a chart containing
    /// `τ`, `u` pairs positively with some ray of `τ`; on other charts the
    /// ideal is the unit ideal.
    OrbitClosure(Cone),
}

impl IdealPredicate {
    /// Parses `divisors` or `orbit:<i,j,…>` (ray indices).
    pub fn parse(s: &str, fan: &Fan) -> Result<IdealPredicate> {
        if s == "divisors" {
            return Ok(IdealPredicate::UnionOfDivisors);
        }
        let unknown = || Error::InvalidArgument(format!("unknown ideal predicate `{s}`"));
        let list = s.strip_prefix("orbit:").ok_or_else(unknown)?;
        let mut rays: Vec<usize> =
            list.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| unknown())).collect::<Result<_>>()?;
        rays.sort();
        fan.cones()
            .into_iter()
            .find(|c| c.rays() == rays.as_slice())
            .map(IdealPredicate::OrbitClosure)
            .ok_or_else(|| Error::InvalidArgument(format!("{list} is not a cone of the fan")))
    }

    /// Whether `x^u` lies in the ideal on the chart `σ` (including `u ∈ σ^∨`).
    pub fn holds(&self, fan: &Fan, sigma: &Cone, u: &FractionalPoint) -> bool {
        if !fan.dual_cone_contains(sigma, u) {
            return false;
        }
        let positive = |i: &usize| lattice::dot(u.numerators(), fan.rays()[*i].coords()) > 0;
        match self {
            IdealPredicate::UnionOfDivisors => sigma.rays().iter().all(positive),
            IdealPredicate::OrbitClosure(tau) => !tau.is_subset_of(sigma) || tau.rays().iter().any(positive),
        }
    }

    pub fn name(&self) -> String {
        match self {
            IdealPredicate::UnionOfDivisors => "union of divisors".into(),
            IdealPredicate::OrbitClosure(tau) => format!("orbit closure {:?}", tau.rays()),
        }
    }
}

/// `π(F_* I) ⊆ I` on every chart: for every grid point `u` with `x^u` in the
/// ideal, every monomial of `π(x^u)` is again in the ideal.
pub fn verify_monomial_ideal_compatibility(
    pi: &SplittingMap,
    fan: &Fan,
    predicate: &IdealPredicate,
    bound: u32,
) -> Result<OracleReport> {
    if pi.ambient() != fan {
        return Err(Error::InvalidArgument("map is not defined on this fan".into()));
    }
    let q = pi.q();
    let parts = (0..fan.max_cones().len())
        .into_par_iter()
        .map(|ci| -> Result<(u64, Option<Counterexample>)> {
            let sigma = &fan.max_cones()[ci];
            let grid = chart_grid(fan, ci, q, bound)?;
            let mut checked = 0;
            for u in grid.points() {
                if !predicate.holds(fan, sigma, u) {
                    continue;
                }
                checked += 1;
                let image = pi.apply(u)?;
                let escapes =
                    image.exponents().any(|m| !predicate.holds(fan, sigma, &FractionalPoint::from_lattice(m, q)));
                if escapes {
                    return Ok((checked, Some(Counterexample { chart: ci, elements: vec![u.clone()], image })));
                }
            }
            Ok((checked, None))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport::merge(&format!("ideal: {}", predicate.name()), parts))
}

/// For a map on `X × X`: the restriction of `π(x^b)` to the diagonal is
/// `x^{b_1 + b_2}` when `b_1 + b_2 ∈ M` and `0` otherwise.
pub fn diagonal_identity_holds(pi: &SplittingMap, b: &FractionalPoint) -> Result<bool> {
    if !pi.dim().is_multiple_of(2) {
        return Err(Error::InvalidArgument("map is not on a square".into()));
    }
    let d = pi.dim() / 2;
    let restricted = restrict_semidiagonal(&pi.apply(b)?, 1, d);
    let sum = FractionalPoint::new(merge_exponent(b.numerators(), 1, d).0, b.den())?;
    let expected = match sum.to_lattice() {
        Some(m) => LaurentPolynomial::monomial(m, 1),
        None => LaurentPolynomial::zero(),
    };
    Ok(restricted == expected)
}
