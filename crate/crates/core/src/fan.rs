//! Fans in `N_ℝ`: validation, completeness, dual-cone membership, products and
//! the built-in fans `pn:<n>`, `hirzebruch:<a>`, `product:<spec>x<spec>`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, primitive, FractionalPoint, LatticeVector};
use crate::polytope::{is_feasible, Row};

/// Outcome of a completeness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    VerifiedComplete,
    VerifiedIncomplete,
    Unverified,
}

impl fmt::Display for Completeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Completeness::VerifiedComplete => "verified-complete",
            Completeness::VerifiedIncomplete => "verified-incomplete",
            Completeness::Unverified => "unverified",
        })
    }
}

/// A cone, stored as indices into its fan's ray list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cone {
    rays: Vec<usize>,
}

impl Cone {
    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    /// True when every ray of `self` is a ray of `other`.
    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.rays.iter().all(|r| other.rays.contains(r))
    }
}

/// On-disk fan description. Rays may be non-primitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Cone>,
    completeness: Completeness,
    primitivized: Vec<usize>,
}

impl Fan {
    /// Validates and builds a fan. Non-primitive rays are divided by their
    /// gcd; their indices are reported by [`Fan::primitivized`].
    pub fn new(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        if dim == 0 {
            return Err(Error::InvalidFan("dimension must be at least 1".into()));
        }
        let mut prim = Vec::with_capacity(rays.len());
        let mut primitivized = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            lattice::check_dim(dim, r.dim())?;
            let p = primitive(r)?;
            if &p != r {
                primitivized.push(i);
            }
            if prim.contains(&p) {
                return Err(Error::DuplicateRay(p));
            }
            prim.push(p);
        }
        let mut used = vec![false; prim.len()];
        let mut cones = Vec::with_capacity(max_cones.len());
        for (ci, c) in max_cones.into_iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidFan(format!("cone {ci} has no rays")));
            }
            let mut seen = BTreeSet::new();
            for &i in &c {
                if i >= prim.len() {
                    return Err(Error::RayIndexOutOfRange { cone: ci, index: i });
                }
                if !seen.insert(i) {
                    return Err(Error::InvalidFan(format!("cone {ci} repeats ray {i}")));
                }
                used[i] = true;
            }
            let gens: Vec<&LatticeVector> = c.iter().map(|&i| &prim[i]).collect();
            if !is_pointed(&gens) {
                return Err(Error::NonPointedCone(ci));
            }
            cones.push(Cone { rays: c });
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::UnusedRay(i));
        }
        let sorted: BTreeSet<Vec<usize>> = cones
            .iter()
            .map(|c| {
                let mut r = c.rays.clone();
                r.sort();
                r
            })
            .collect();
        if sorted.len() != cones.len() {
            return Err(Error::InvalidFan("duplicate maximal cone".into()));
        }
        let mut fan = Fan { dim, rays: prim, max_cones: cones, completeness: Completeness::Unverified, primitivized };
        if dim == 2 {
            fan.validate_planar()?;
        }
        fan.completeness = fan.compute_completeness();
        Ok(fan)
    }

    pub fn from_json(json: &FanJson) -> Result<Fan> {
        let rays = json.rays.iter().cloned().map(LatticeVector).collect();
        Fan::new(json.dim, rays, json.max_cones.clone())
    }

    pub fn to_json(&self) -> FanJson {
        FanJson {
            dim: self.dim,
            rays: self.rays.iter().map(|r| r.0.clone()).collect(),
            max_cones: self.max_cones.iter().map(|c| c.rays.clone()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    /// Indices of input rays that were not primitive and were rescaled.
    pub fn primitivized(&self) -> &[usize] {
        &self.primitivized
    }

    pub fn is_complete(&self) -> Completeness {
        self.completeness
    }

    pub fn cone_rays(&self, cone: &Cone) -> Vec<&LatticeVector> {
        cone.rays.iter().map(|&i| &self.rays[i]).collect()
    }

    /// Rank of the span of the cone's rays.
    pub fn cone_dim(&self, cone: &Cone) -> usize {
        rank(&self.cone_rays(cone))
    }

    pub fn is_full_dimensional(&self, cone: &Cone) -> bool {
        self.cone_dim(cone) == self.dim
    }

    /// `u ∈ σ^∨`, i.e. `⟨u, v_ρ⟩ ≥ 0` for every ray of the cone.
    pub fn dual_cone_contains(&self, cone: &Cone, u: &FractionalPoint) -> bool {
        assert_eq!(u.dim(), self.dim, "point dimension mismatch");
        cone.rays.iter().all(|&i| lattice::dot(u.numerators(), self.rays[i].coords()) >= 0)
    }

    /// All nonempty faces of all maximal cones, as sorted ray-index lists,
    /// ordered by size and then lexicographically.
    pub fn cones(&self) -> Vec<Cone> {
        let mut out: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for c in &self.max_cones {
            for f in self.faces(c) {
                out.insert((f.rays.len(), f.rays));
            }
        }
        out.into_iter().map(|(_, rays)| Cone { rays }).collect()
    }

    /// Nonempty faces of a cone (including the cone itself).
    pub fn faces(&self, cone: &Cone) -> Vec<Cone> {
        let mut sorted = cone.rays.clone();
        sorted.sort();
        let k = sorted.len();
        let simplicial = self.cone_dim(cone) == k;
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << k) {
            let subset: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| sorted[b]).collect();
            if simplicial || self.is_face(&sorted, &subset) {
                out.push(Cone { rays: subset });
            }
        }
        out
    }

    /// Whether some `u` vanishes on `subset` and is positive on the other rays.
    fn is_face(&self, all: &[usize], subset: &[usize]) -> bool {
        let mut rows: Vec<Row> = Vec::new();
        for &i in all {
            let coeffs: Vec<BigRational> = self.rays[i].0.iter().map(|&x| int(x)).collect();
            if subset.contains(&i) {
                let neg = coeffs.iter().map(|c| -c).collect();
                rows.push((coeffs, BigRational::zero()));
                rows.push((neg, BigRational::zero()));
            } else {
                rows.push((coeffs, BigRational::one()));
            }
        }
        is_feasible(&rows)
    }

    fn validate_planar(&self) -> Result<()> {
        for (ci, c) in self.max_cones.iter().enumerate() {
            if c.rays.len() > 2 {
                return Err(Error::InvalidFan(format!("cone {ci} has more than two rays in the plane")));
            }
            if c.rays.len() == 2 {
                let (a, b) = ccw_pair(&self.rays[c.rays[0]], &self.rays[c.rays[1]]);
                for (ri, r) in self.rays.iter().enumerate() {
                    if !c.rays.contains(&ri) && cross(a, r) > 0 && cross(r, b) > 0 {
                        return Err(Error::InvalidFan(format!("ray {ri} lies inside cone {ci}")));
                    }
                }
            }
        }
        Ok(())
    }

    fn compute_completeness(&self) -> Completeness {
        match self.dim {
            1 => {
                let dirs: BTreeSet<i64> = self.rays.iter().map(|r| r.0[0]).collect();
                if dirs.contains(&1) && dirs.contains(&-1) {
                    Completeness::VerifiedComplete
                } else {
                    Completeness::VerifiedIncomplete
                }
            }
            2 => self.planar_completeness(),
            _ => self.facet_pairing(),
        }
    }

    fn planar_completeness(&self) -> Completeness {
        if self.max_cones.iter().any(|c| c.rays.len() != 2) || self.rays.len() < 3 {
            return Completeness::VerifiedIncomplete;
        }
        let mut order: Vec<usize> = (0..self.rays.len()).collect();
        order.sort_by(|&i, &j| angle_cmp(&self.rays[i], &self.rays[j]));
        let listed: BTreeSet<(usize, usize)> =
            self.max_cones.iter().map(|c| (c.rays[0].min(c.rays[1]), c.rays[0].max(c.rays[1]))).collect();
        let n = order.len();
        let mut consecutive = BTreeSet::new();
        for k in 0..n {
            let (i, j) = (order[k], order[(k + 1) % n]);
            if cross(&self.rays[i], &self.rays[j]) <= 0 {
                return Completeness::VerifiedIncomplete;
            }
            consecutive.insert((i.min(j), i.max(j)));
        }
        if consecutive == listed {
            Completeness::VerifiedComplete
        } else {
            Completeness::VerifiedIncomplete
        }
    }

    fn facet_pairing(&self) -> Completeness {
        if self.max_cones.iter().any(|c| !self.is_full_dimensional(c)) {
            return Completeness::VerifiedIncomplete;
        }
        if self.max_cones.iter().any(|c| c.rays.len() != self.dim) {
            return Completeness::Unverified;
        }
        let mut facets: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in &self.max_cones {
            let mut r = c.rays.clone();
            r.sort();
            for skip in 0..r.len() {
                let mut f = r.clone();
                f.remove(skip);
                *facets.entry(f).or_default() += 1;
            }
        }
        if facets.values().all(|&k| k == 2) {
            Completeness::VerifiedComplete
        } else if facets.values().any(|&k| k == 1) {
            Completeness::VerifiedIncomplete
        } else {
            Completeness::Unverified
        }
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn cross(a: &LatticeVector, b: &LatticeVector) -> i128 {
    a.0[0] as i128 * b.0[1] as i128 - a.0[1] as i128 * b.0[0] as i128
}

fn ccw_pair<'a>(a: &'a LatticeVector, b: &'a LatticeVector) -> (&'a LatticeVector, &'a LatticeVector) {
    if cross(a, b) >= 0 {
        (a, b)
    } else {
        (b, a)
    }
}

/// Counterclockwise angle order starting at the positive x-axis.
fn angle_cmp(a: &LatticeVector, b: &LatticeVector) -> Ordering {
    let upper = |v: &LatticeVector| v.0[1] > 0 || (v.0[1] == 0 && v.0[0] > 0);
    upper(b).cmp(&upper(a)).then_with(|| 0.cmp(&cross(a, b)))
}

/// Exact rank of a list of integer vectors.
pub(crate) fn rank(vectors: &[&LatticeVector]) -> usize {
    let mut m: Vec<Vec<BigRational>> = vectors.iter().map(|v| v.0.iter().map(|&x| int(x)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// No nonzero nonnegative combination of the generators vanishes.
fn is_pointed(gens: &[&LatticeVector]) -> bool {
    let k = gens.len();
    let dim = gens[0].dim();
    let mut rows: Vec<Row> = Vec::new();
    let unit = |i: usize| -> Vec<BigRational> {
        (0..k).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()
    };
    for i in 0..k {
        rows.push((unit(i), BigRational::zero()));
    }
    // Σλ = 1
    rows.push((vec![BigRational::one(); k], BigRational::one()));
    rows.push((vec![-BigRational::one(); k], -BigRational::one()));
    for c in 0..dim {
        let coeffs: Vec<BigRational> = gens.iter().map(|g| int(g.0[c])).collect();
        let neg = coeffs.iter().map(|x| -x).collect();
        rows.push((coeffs, BigRational::zero()));
        rows.push((neg, BigRational::zero()));
    }
    !is_feasible(&rows)
}

/// `F × G` with rays `(v, 0)` then `(0, w)` and cones `σ × τ` in row-major order.
pub fn product_fan(f: &Fan, g: &Fan) -> Fan {
    let mut rays: Vec<LatticeVector> = f.rays.iter().map(|v| v.concat(&LatticeVector::zero(g.dim))).collect();
    rays.extend(g.rays.iter().map(|w| LatticeVector::zero(f.dim).concat(w)));
    let offset = f.rays.len();
    let mut max_cones = Vec::with_capacity(f.max_cones.len() * g.max_cones.len());
    for s in &f.max_cones {
        for t in &g.max_cones {
            let mut c = s.rays.clone();
            c.extend(t.rays.iter().map(|i| i + offset));
            max_cones.push(Cone { rays: c });
        }
    }
    use Completeness::*;
    let completeness = match (f.completeness, g.completeness) {
        (VerifiedComplete, VerifiedComplete) => VerifiedComplete,
        (VerifiedIncomplete, _) | (_, VerifiedIncomplete) => VerifiedIncomplete,
        _ => Unverified,
    };
    Fan { dim: f.dim + g.dim, rays, max_cones, completeness, primitivized: Vec::new() }
}

/// `F^n`.
pub fn power_fan(f: &Fan, n: usize) -> Fan {
    assert!(n >= 1, "power must be positive");
    (1..n).fold(f.clone(), |acc, _| product_fan(&acc, f))
}

/// `ℙ^n`: rays `e_1, …, e_n, −(e_1 + … + e_n)`, maximal cones all `n`-subsets.
pub fn projective_space(n: usize) -> Fan {
    assert!(n >= 1, "dimension must be positive");
    let mut rays: Vec<LatticeVector> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            LatticeVector(e)
        })
        .collect();
    rays.push(LatticeVector(vec![-1; n]));
    let cones = (0..=n).rev().map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
    Fan::new(n, rays, cones).expect("projective space fan is valid")
}

/// Hirzebruch surface `F_a`: rays `(1,0), (0,1), (0,−1), (−1,a)`.
pub fn hirzebruch(a: i64) -> Fan {
    assert!(a >= 0, "Hirzebruch parameter must be nonnegative");
    let rays = [[1, 0], [0, 1], [0, -1], [-1, a]].iter().map(|r| LatticeVector(r.to_vec())).collect();
    let cones = vec![vec![0, 1], vec![1, 3], vec![3, 2], vec![2, 0]];
    Fan::new(2, rays, cones).expect("Hirzebruch fan is valid")
}

/// Parses `pn:<n>`, `hirzebruch:<a>` or `product:<spec>x<spec>[x<spec>…]`.
pub fn builtin(spec: &str) -> Result<Fan> {
    let bad = || Error::InvalidArgument(format!("unknown builtin fan `{spec}`"));
    if let Some(rest) = spec.strip_prefix("product:") {
        let parts: Vec<&str> = rest.split('x').collect();
        if parts.len() < 2 {
            return Err(bad());
        }
        let mut fan = builtin(parts[0])?;
        for p in &parts[1..] {
            fan = product_fan(&fan, &builtin(p)?);
        }
        return Ok(fan);
    }
    let (name, arg) = spec.split_once(':').ok_or_else(bad)?;
    match name {
        "pn" => match arg.parse::<usize>() {
            Ok(n) if (1..=64).contains(&n) => Ok(projective_space(n)),
            _ => Err(bad()),
        },
        "hirzebruch" => match arg.parse::<i64>() {
            Ok(a) if (0..=1_000_000).contains(&a) => Ok(hirzebruch(a)),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    fn fp(num: &[i64], den: u32) -> FractionalPoint {
        FractionalPoint::new(num.to_vec(), den).unwrap()
    }

    fn fan(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Result<Fan> {
        Fan::new(dim, rays.iter().map(|r| lv(r)).collect(), cones.iter().map(|c| c.to_vec()).collect())
    }

    #[test]
    fn p1_from_rays() {
        let f = fan(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap();
        assert_eq!(f, projective_space(1));
        assert_eq!(f.is_complete(), Completeness::VerifiedComplete);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(fan(2, &[&[1, 0], &[-1, 0]], &[&[0, 1]]), Err(Error::NonPointedCone(0)));
        assert_eq!(fan(2, &[&[1, 0], &[2, 0]], &[&[0], &[1]]), Err(Error::DuplicateRay(lv(&[1, 0]))));
        assert_eq!(
            fan(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 1], &[2]]),
            Err(Error::InvalidFan("ray 2 lies inside cone 0".into()))
        );
        assert_eq!(fan(2, &[&[1, 0], &[0, 1]], &[&[0]]), Err(Error::UnusedRay(1)));
        assert_eq!(fan(2, &[&[1, 0]], &[&[0, 3]]), Err(Error::RayIndexOutOfRange { cone: 0, index: 3 }));
        assert_eq!(fan(2, &[&[0, 0]], &[&[0]]), Err(Error::NotARayDirection));
        assert!(matches!(fan(3, &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0]], &[&[0, 1, 2]]), Err(Error::NonPointedCone(0))));
    }

    #[test]
    fn primitivized_rays() {
        let f = fan(2, &[&[2, 0], &[0, 3], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]).unwrap();
        assert_eq!(f.primitivized(), &[0, 1]);
        assert_eq!(f.rays()[0], lv(&[1, 0]));
        assert_eq!(f.is_complete(), Completeness::VerifiedComplete);
    }

    #[test]
    fn completeness_examples() {
        assert_eq!(projective_space(2).is_complete(), Completeness::VerifiedComplete);
        let plane = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap();
        assert_eq!(plane.is_complete(), Completeness::VerifiedIncomplete);
        let mut rays: Vec<Vec<i64>> = Vec::new();
        for i in 0..3 {
            for s in [1, -1] {
                let mut e = vec![0; 3];
                e[i] = s;
                rays.push(e);
            }
        }
        let mut cones = Vec::new();
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    cones.push(vec![a, b, c]);
                }
            }
        }
        let octants = Fan::new(3, rays.iter().cloned().map(LatticeVector).collect(), cones.clone()).unwrap();
        assert_eq!(octants.is_complete(), Completeness::VerifiedComplete);
        cones.pop();
        let missing = Fan::new(3, rays.into_iter().map(LatticeVector).collect(), cones).unwrap();
        assert_eq!(missing.is_complete(), Completeness::VerifiedIncomplete);
        // two half-planes meeting only along a line, listed in the wrong pairing
        let gap = fan(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[&[0, 1], &[2, 3], &[1, 2]]).unwrap();
        assert_eq!(gap.is_complete(), Completeness::VerifiedIncomplete);
    }

    #[test]
    fn builtins() {
        for a in 0..8 {
            assert_eq!(hirzebruch(a).is_complete(), Completeness::VerifiedComplete);
        }
        for n in 1..5 {
            let p = projective_space(n);
            assert_eq!(p.is_complete(), Completeness::VerifiedComplete);
            assert_eq!(p.rays().len(), n + 1);
            assert_eq!(p.max_cones().len(), n + 1);
        }
        assert!(hirzebruch(3).rays().contains(&lv(&[-1, 3])));
        let f0: BTreeSet<_> = hirzebruch(0).rays().iter().cloned().collect();
        let p1p1 = product_fan(&projective_space(1), &projective_space(1));
        assert_eq!(f0, p1p1.rays().iter().cloned().collect());
        assert_eq!(builtin("hirzebruch:2").unwrap(), hirzebruch(2));
        assert_eq!(builtin("pn:3").unwrap(), projective_space(3));
        assert_eq!(builtin("product:pn:1xpn:1").unwrap(), p1p1);
        assert_eq!(builtin("product:pn:1xpn:1xpn:1").unwrap().dim(), 3);
        for bad in ["pn:0", "hirzebruch:-1", "torus:2", "product:pn:1", "pn"] {
            assert!(builtin(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn products() {
        let p = product_fan(&projective_space(1), &projective_space(1));
        assert_eq!((p.rays().len(), p.max_cones().len()), (4, 4));
        assert_eq!(p.is_complete(), Completeness::VerifiedComplete);
        let ff = product_fan(&hirzebruch(1), &hirzebruch(1));
        assert_eq!((ff.rays().len(), ff.max_cones().len()), (8, 16));
        let rebuilt = Fan::from_json(&ff.to_json()).unwrap();
        assert_eq!(rebuilt.is_complete(), Completeness::VerifiedComplete);
        let (a, b, c) = (projective_space(1), hirzebruch(2), projective_space(2));
        let left = product_fan(&product_fan(&a, &b), &c);
        let right = product_fan(&a, &product_fan(&b, &c));
        let ms = |f: &Fan| f.rays().iter().cloned().collect::<BTreeSet<_>>();
        assert_eq!(ms(&left), ms(&right));
        assert_eq!(left.max_cones().len(), right.max_cones().len());
        assert_eq!(left, right);
    }

    #[test]
    fn dual_cone_examples() {
        let f1 = hirzebruch(1);
        let first_quadrant = &f1.max_cones()[0];
        for c in f1.max_cones() {
            assert!(f1.dual_cone_contains(c, &FractionalPoint::zero(2, 2)));
        }
        assert!(f1.dual_cone_contains(first_quadrant, &fp(&[1, 1], 2)));
        let chart = &f1.max_cones()[2];
        assert!(!f1.dual_cone_contains(chart, &fp(&[1, 0], 2)));
    }

    #[test]
    fn faces_and_cones() {
        let p2 = projective_space(2);
        assert_eq!(p2.cones().len(), 6);
        let square_cone = fan(3, &[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]], &[&[0, 1, 2, 3]]).unwrap();
        let faces = square_cone.faces(&square_cone.max_cones()[0]);
        // 4 rays, 4 two-dimensional faces, the cone itself
        assert_eq!(faces.len(), 9);
        assert_eq!(square_cone.is_complete(), Completeness::Unverified);
        assert_eq!(rank(&[&lv(&[1, 2, 3]), &lv(&[2, 4, 6])]), 1);
    }

    #[test]
    fn fan_json_round_trip() {
        let text = r#"{ "dim": 2, "rays": [[1,0],[0,1],[0,-1],[-1,2]], "max_cones": [[0,1],[1,3],[3,2],[2,0]] }"#;
        let json: FanJson = serde_json::from_str(text).unwrap();
        assert_eq!(Fan::from_json(&json).unwrap(), hirzebruch(2));
    }

    proptest! {
        #[test]
        fn dual_cone_membership(a in 0i64..6, cone in 0usize..4, x in -20i64..20, y in -20i64..20, q in 2u32..7) {
            let f = hirzebruch(a);
            let c = &f.max_cones()[cone];
            let u = fp(&[x, y], q);
            let pairings: Vec<i128> = f.cone_rays(c).iter().map(|v| u.pairing_numerator(v).unwrap()).collect();
            prop_assert_eq!(f.dual_cone_contains(c, &u), pairings.iter().all(|&p| p >= 0));
            // the rays of a smooth cone form a basis, so any sign pattern is realisable
            if pairings.iter().all(|&p| p > 0) {
                prop_assert!(!f.dual_cone_contains(c, &(-&u)));
            }
        }

        #[test]
        fn completeness_of_random_planar_fans(raw in proptest::collection::vec((-6i64..6, -6i64..6), 3..9)) {
            // rays sorted by angle, cones between neighbours
            let mut rays: Vec<LatticeVector> = Vec::new();
            for (x, y) in raw {
                if (x, y) == (0, 0) { continue; }
                let p = primitive(&lv(&[x, y])).unwrap();
                if !rays.contains(&p) { rays.push(p); }
            }
            prop_assume!(rays.len() >= 3);
            rays.sort_by(angle_cmp);
            let n = rays.len();
            let wraps = (0..n).all(|k| cross(&rays[k], &rays[(k + 1) % n]) > 0);
            let cones: Vec<Vec<usize>> = (0..n)
                .filter(|&k| cross(&rays[k], &rays[(k + 1) % n]) > 0)
                .map(|k| vec![k, (k + 1) % n])
                .collect();
            let covered: BTreeSet<usize> = cones.iter().flatten().copied().collect();
            prop_assume!(covered.len() == n);
            let f = Fan::new(2, rays, cones).unwrap();
            let expected = if wraps { Completeness::VerifiedComplete } else { Completeness::VerifiedIncomplete };
            prop_assert_eq!(f.is_complete(), expected);
        }
    }
}
