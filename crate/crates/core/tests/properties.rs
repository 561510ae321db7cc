use proptest::prelude::*;

use toric_split::fan::builtin;
use toric_split::oracle::{brute_force_regularity, verify_diagonal_compatibility, verify_splitting_law};
use toric_split::splitting::{
    decide_by_interior_enumeration, diagonal_splitting, is_diagonally_split, regular_on_chart, splitting_basis,
    CertificateJson, SearchOptions, WitnessJson,
};
use toric_split::{
    hirzebruch, primitive, Completeness, Fan, LatticeVector, LaurentPolynomial, NonSplitWitness, SplitCertificate,
    SplitVerdict,
};

/// A complete fan in the plane from the rays sorted by angle, or `None` when
/// two consecutive rays are at least a half-turn apart.
fn planar_fan(raw: &[(i64, i64)]) -> Option<Fan> {
    let mut rays: Vec<LatticeVector> = raw
        .iter()
        .filter(|&&(x, y)| (x, y) != (0, 0))
        .map(|&(x, y)| primitive(&LatticeVector(vec![x, y])).unwrap())
        .collect();
    rays.sort_by(|a, b| {
        let angle = |v: &LatticeVector| (v.0[1] as f64).atan2(v.0[0] as f64);
        angle(a).partial_cmp(&angle(b)).unwrap()
    });
    rays.dedup();
    let k = rays.len();
    if k < 3 {
        return None;
    }
    for i in 0..k {
        let (a, b) = (&rays[i], &rays[(i + 1) % k]);
        // the turn from a to b must be strictly less than a half-turn
        if a.0[0] * b.0[1] - a.0[1] * b.0[0] <= 0 {
            return None;
        }
    }
    let cones = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    Fan::new(2, rays, cones).ok()
}

fn round_trip(verdict: &SplitVerdict, fan: &Fan) {
    match verdict {
        SplitVerdict::Split(c) => {
            let text = serde_json::to_string(&c.to_json()).unwrap();
            let back = SplitCertificate::from_json(&serde_json::from_str::<CertificateJson>(&text).unwrap()).unwrap();
            assert_eq!(&back, c);
            back.validate(fan).unwrap();
        }
        SplitVerdict::NotSplit(w) => {
            let text = serde_json::to_string(&w.to_json()).unwrap();
            let back = NonSplitWitness::from_json(&serde_json::from_str::<WitnessJson>(&text).unwrap()).unwrap();
            assert_eq!(&back, w);
            back.validate(fan).unwrap();
        }
    }
}

#[test]
fn hirzebruch_verdicts_agree_and_round_trip() {
    for a in 0..=6 {
        let fan = hirzebruch(a);
        for q in 2..=8 {
            let v = is_diagonally_split(&fan, q).unwrap();
            assert_eq!(v, decide_by_interior_enumeration(&fan, q, &SearchOptions::default()).unwrap());
            round_trip(&v, &fan);
        }
    }
}

#[test]
fn products_of_projective_spaces_split() {
    for spec in ["product:pn:1xpn:1", "product:pn:1xpn:2", "product:pn:1xpn:1xpn:1"] {
        let fan = builtin(spec).unwrap();
        assert_eq!(fan.is_complete(), Completeness::VerifiedComplete, "{spec}");
        for q in 2..=3 {
            assert!(is_diagonally_split(&fan, q).unwrap().is_split(), "{spec} q={q}");
        }
    }
}

#[test]
fn diagonal_splitting_fixes_integral_monomials() {
    let fan = hirzebruch(1);
    let pi = diagonal_splitting(&fan, 3).unwrap();
    for x in -3..=3 {
        for y in -3..=3 {
            let m = LatticeVector(vec![x, y, y - x, 2 * x]);
            assert_eq!(pi.apply_lattice(&m).unwrap(), LaurentPolynomial::monomial(m.clone(), 1));
        }
    }
    assert!(verify_splitting_law(&pi, 2).unwrap().passed());
}

#[test]
fn basis_regularity_matches_brute_force() {
    for fan in [hirzebruch(2), builtin("pn:2").unwrap()] {
        for a in splitting_basis(&fan, 3).unwrap() {
            for (ci, cone) in fan.max_cones().iter().enumerate() {
                assert_eq!(
                    regular_on_chart(&a, &fan, cone),
                    brute_force_regularity(&a, &fan, ci, 3, 2).unwrap().passed()
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_planar_fans(raw in proptest::collection::vec((-3i64..=3, -3i64..=3), 3..7), q in 2u32..6) {
        let Some(fan) = planar_fan(&raw) else { return Ok(()) };
        prop_assert_eq!(fan.is_complete(), Completeness::VerifiedComplete);
        let v = is_diagonally_split(&fan, q).unwrap();
        prop_assert_eq!(&v, &decide_by_interior_enumeration(&fan, q, &SearchOptions::default()).unwrap());
        round_trip(&v, &fan);
        if v.is_split() {
            let pi = diagonal_splitting(&fan, q).unwrap();
            prop_assert!(pi.is_splitting());
            prop_assert!(verify_diagonal_compatibility(&fan, q, &pi, 1).unwrap().passed());
        }
    }
}
