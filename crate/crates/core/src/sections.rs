//! Degree-one generation of section rings, checked on polytopes: `P` is
//! normal when every lattice point of `kP` is a sum of `k` lattice points of
//! `P`. For a toric variety with an ample line bundle this is the
//! combinatorial form of projective normality, so a pass here corroborates
//! (but does not prove) normal generation.

use std::collections::HashMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::oracle::Verdict;
use crate::polytope::HPolytope;

/// `kP`: every bound multiplied by `k`.
pub fn dilate(p: &HPolytope, k: u32) -> Result<HPolytope> {
    if k == 0 {
        return Err(Error::InvalidArgument("dilation factor must be positive".into()));
    }
    Ok(p.scaled(&BigRational::from_integer(k.into())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityFailure {
    pub k: u32,
    pub point: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalityReport {
    pub polytope: HPolytope,
    pub k_max: u32,
    pub verdict: Verdict,
    pub points_checked: u64,
    pub counterexample: Option<NormalityFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityReportJson {
    pub polytope: String,
    pub k_max: u32,
    pub verdict: Verdict,
    pub points_checked: u64,
    pub counterexample: Option<NormalityFailure>,
}

impl NormalityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> NormalityReportJson {
        NormalityReportJson {
            polytope: self.polytope.to_string(),
            k_max: self.k_max,
            verdict: self.verdict,
            points_checked: self.points_checked,
            counterexample: self.counterexample.clone(),
        }
    }
}

/// Reachable `k`-fold sums of lattice points of `P`, each with one way of
/// writing it, built layer by layer as `S_k = S_{k−1} + S_1`.
pub struct Decomposer {
    generators: Vec<LatticeVector>,
    // layer k-1 maps a point of S_k to (point of S_{k-1}, generator index)
    layers: Vec<HashMap<LatticeVector, (LatticeVector, usize)>>,
}

impl Decomposer {
    pub fn new(p: &HPolytope) -> Result<Decomposer> {
        let generators = p.lattice_points()?;
        if generators.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        let first =
            generators.iter().enumerate().map(|(i, g)| (g.clone(), (LatticeVector::zero(g.dim()), i))).collect();
        Ok(Decomposer { generators, layers: vec![first] })
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    fn extend_to(&mut self, k: usize) {
        while self.layers.len() < k {
            let prev = self.layers.last().expect("layer 1 exists");
            let mut next = HashMap::with_capacity(prev.len() * 2);
            let mut keys: Vec<&LatticeVector> = prev.keys().collect();
            keys.sort();
            for s in keys {
                for (i, g) in self.generators.iter().enumerate() {
                    let sum = LatticeVector(s.0.iter().zip(&g.0).map(|(a, b)| a + b).collect());
                    next.entry(sum).or_insert_with(|| (s.clone(), i));
                }
            }
            self.layers.push(next);
        }
    }

    /// `k` lattice points of `P` summing to `point`, if they exist.
    pub fn decompose(&mut self, point: &LatticeVector, k: usize) -> Option<Vec<LatticeVector>> {
        assert!(k >= 1, "k must be positive");
        self.extend_to(k);
        let mut out = Vec::with_capacity(k);
        let mut current = point.clone();
        for layer in (0..k).rev() {
            let (prev, g) = self.layers[layer].get(&current)?.clone();
            out.push(self.generators[g].clone());
            current = prev;
        }
        out.reverse();
        Some(out)
    }
}

/// Checks that every lattice point of `kP`, `2 ≤ k ≤ k_max`, is a sum of `k`
/// lattice points of `P`. The first failure (smallest `k`, then
/// lexicographically first point) is reported.
pub fn normality_check(p: &HPolytope, k_max: u32) -> Result<NormalityReport> {
    let mut dec = Decomposer::new(p)?;
    let mut checked = 0u64;
    let mut counterexample = None;
    'outer: for k in 2..=k_max {
        let kp = dilate(p, k)?;
        for point in kp.lattice_points()? {
            checked += 1;
            if dec.decompose(&point, k as usize).is_none() {
                counterexample = Some(NormalityFailure { k, point: point.0 });
                break 'outer;
            }
        }
    }
    Ok(NormalityReport {
        polytope: p.clone(),
        k_max,
        verdict: if counterexample.is_some() { Verdict::Fail } else { Verdict::Pass },
        points_checked: checked,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{hirzebruch, projective_space};
    use crate::polytope::{anticanonical_polytope, divisor_polytope_int, polygon_from_points};
    use proptest::prelude::*;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    fn segment() -> HPolytope {
        HPolytope::from_integer_constraints(1, &[(vec![1], 0), (vec![-1], -1)]).unwrap()
    }

    #[test]
    fn dilation_examples() {
        let p1 = anticanonical_polytope(&projective_space(1));
        assert_eq!(dilate(&p1, 1).unwrap(), p1);
        assert_eq!(dilate(&p1, 3).unwrap().lattice_points().unwrap().len(), 7);
        let trap = divisor_polytope_int(&hirzebruch(1), &[0, 0, 1, 1]).unwrap();
        assert_eq!(dilate(&trap, 2).unwrap().lattice_points().unwrap().len(), 12);
        assert!(dilate(&trap, 0).is_err());
    }

    #[test]
    fn normal_examples() {
        let trap = divisor_polytope_int(&hirzebruch(1), &[0, 0, 1, 1]).unwrap();
        assert!(normality_check(&trap, 4).unwrap().passed());
        assert!(normality_check(&segment(), 5).unwrap().passed());
        assert!(normality_check(&anticanonical_polytope(&projective_space(2)), 3).unwrap().passed());
    }

    #[test]
    fn reeve_tetrahedron_is_not_normal() {
        // conv{0, e1, e2, e1 + e2 + 2 e3}: its only lattice points are the vertices
        let pts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 2]];
        let rows = [(vec![0, 0, 1], 0), (vec![2, 0, -1], 0), (vec![0, 2, -1], 0), (vec![-2, -2, 1], -2)];
        let p = HPolytope::from_integer_constraints(3, &rows).unwrap();
        assert_eq!(p.lattice_points().unwrap(), {
            let mut v: Vec<_> = pts.iter().map(|q| lv(q)).collect();
            v.sort();
            v
        });
        let r = normality_check(&p, 2).unwrap();
        let c = r.counterexample.unwrap();
        assert_eq!(c.k, 2);
        assert!(dilate(&p, 2).unwrap().lattice_points().unwrap().contains(&LatticeVector(c.point.clone())));
        assert!(Decomposer::new(&p).unwrap().decompose(&LatticeVector(c.point), 2).is_none());
    }

    #[test]
    fn empty_polytope_rejected() {
        let p = HPolytope::from_integer_constraints(1, &[(vec![2], 1), (vec![-2], -1)]).unwrap();
        assert_eq!(normality_check(&p, 2).unwrap_err(), Error::EmptyPolyhedron);
    }

    proptest! {
        #[test]
        fn polygons_are_normal(raw in proptest::collection::vec((-3i64..4, -3i64..4), 3..7)) {
            let pts: Vec<_> = raw.iter().map(|&(x, y)| lv(&[x, y])).collect();
            let Ok(p) = polygon_from_points(&pts) else { return Ok(()) };
            prop_assert!(normality_check(&p, 3).unwrap().passed());
            let mut dec = Decomposer::new(&p).unwrap();
            for point in dilate(&p, 3).unwrap().lattice_points().unwrap() {
                let parts = dec.decompose(&point, 3).unwrap();
                prop_assert!(parts.iter().all(|g| dec.generators().contains(g)));
                let sum: Vec<i64> = (0..2).map(|i| parts.iter().map(|g| g.0[i]).sum()).collect();
                prop_assert_eq!(sum, point.0.clone());
            }
        }
    }
}
