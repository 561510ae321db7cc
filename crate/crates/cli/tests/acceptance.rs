//! Acceptance suite, run without the libtest harness so that every criterion
//! prints its `[N] name: PASS|FAIL` line. Exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toric_split::fan::power_fan;
use toric_split::oracle::{
    brute_force_regularity, diagonal_identity_holds, verify_diagonal_compatibility,
    verify_monomial_ideal_compatibility, verify_semidiagonal_compatibility, IdealPredicate,
};
use toric_split::polytope::divisor_polytope_int;
use toric_split::sections::normality_check;
use toric_split::splitting::{
    adjacent_semidiagonal_map, canonical_splitting, decide_by_interior_enumeration, diagonal_splitting,
    is_diagonally_split, regular_on_chart, semidiagonal_splitting, splitting_basis, witness_for_class, SearchOptions,
};
use toric_split::{
    anticanonical_polytope, builtin, hirzebruch, projective_space, CosetClass, Fan, FractionalPoint, LatticeVector,
    LaurentPolynomial, SplitVerdict,
};
use toric_split_cli::random_polygon;

type Criterion = fn() -> Vec<String>;

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("hirzebruch_split_table", hirzebruch_split_table),
        ("certificate_soundness", certificate_soundness),
        ("basis_matches_brute_force", basis_matches_brute_force),
        ("diagonal_key_identity", diagonal_key_identity),
        ("compatibility_oracles", compatibility_oracles),
        ("canonical_splitting_ideals", canonical_splitting_ideals),
        ("normality_corroboration", normality_corroboration),
        ("scan_determinism_and_speed", scan_determinism_and_speed),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let failures = std::panic::catch_unwind(run).unwrap_or_else(|_| vec!["panicked".into()]);
        let status = if failures.is_empty() { "PASS" } else { "FAIL" };
        println!("[{}] {name}: {status}", i + 1);
        for f in &failures {
            println!("    {f}");
        }
        failed += usize::from(!failures.is_empty());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_toric-split")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

/// Independent strict-interior test for `𝔽_X`: `|⟨u, v⟩| < 1` for every ray.
fn strictly_inside(fan: &Fan, num: &[i64], q: u32) -> bool {
    fan.rays().iter().all(|v| {
        let p: i64 = num.iter().zip(v.coords()).map(|(a, b)| a * b).sum();
        p.abs() < q as i64
    })
}

/// Exhaustive search of `[−2, 2]^dim ∩ (1/q)M` for a strict interior point
/// of the given class.
fn class_covered(fan: &Fan, residues: &[i64], q: u32) -> bool {
    let q = q as i64;
    let dim = fan.dim();
    let mut num = vec![-2 * q; dim];
    loop {
        let same_class = num.iter().zip(residues).all(|(a, r)| (a - r).rem_euclid(q) == 0);
        if same_class && strictly_inside(fan, &num, q as u32) {
            return true;
        }
        let mut i = 0;
        while i < dim && num[i] == 2 * q {
            num[i] = -2 * q;
            i += 1;
        }
        if i == dim {
            return false;
        }
        num[i] += 1;
    }
}

fn class(residues: &[i64], q: u32) -> CosetClass {
    CosetClass::from_residues(residues.to_vec(), q).unwrap()
}

fn hirzebruch_split_table() -> Vec<String> {
    let mut failures = Vec::new();
    for a in 0..=5i64 {
        let fan = hirzebruch(a);
        let spec = format!("hirzebruch:{a}");
        for q in 2..=9u32 {
            let expect_split = a <= 1 || (a == 2 && q % 2 == 1);
            let (code, _) = cli(&["check", "--builtin", &spec, "--q", &q.to_string()]);
            if code != if expect_split { 0 } else { 1 } {
                failures.push(format!("F_{a} q={q}: exit {code}"));
                continue;
            }
            if expect_split {
                continue;
            }
            let verdict = is_diagonally_split(&fan, q).unwrap();
            let Some(witness) = verdict.witness() else {
                failures.push(format!("F_{a} q={q}: no witness"));
                continue;
            };
            if witness.validate(&fan).is_err() {
                failures.push(format!("F_{a} q={q}: reported witness does not validate"));
            }
            let reported = witness.class().residues().to_vec();
            if reported[0] != 0 || class_covered(&fan, &reported, q) {
                failures.push(format!("F_{a} q={q}: reported class {reported:?} is not an uncovered (0, r/q)"));
            }
            let expected = vec![0, (q / 2) as i64];
            if a == 2 && reported != expected {
                failures.push(format!("F_2 q={q}: witness {reported:?}, expected {expected:?}"));
            }
            let formula = class(&expected, q);
            let confirmed = witness_for_class(&fan, &formula).unwrap();
            if confirmed.is_none() || class_covered(&fan, &expected, q) {
                failures.push(format!("F_{a} q={q}: class (0, {}/{q}) is covered", q / 2));
            }
        }
    }
    failures
}

fn certificate_soundness() -> Vec<String> {
    let mut failures = Vec::new();
    let mut pairs = 0;
    for a in 0..=5i64 {
        let fan = hirzebruch(a);
        for q in 2..=9u32 {
            pairs += 1;
            let first = is_diagonally_split(&fan, q).unwrap();
            let second = decide_by_interior_enumeration(&fan, q, &SearchOptions::default()).unwrap();
            if first != second {
                failures.push(format!("F_{a} q={q}: the two decision procedures disagree"));
            }
            let SplitVerdict::Split(cert) = &first else {
                continue;
            };
            if let Err(e) = cert.validate(&fan) {
                failures.push(format!("F_{a} q={q}: certificate rejected: {e}"));
            }
            // independent re-validation
            let mut seen = BTreeSet::new();
            for (c, rep) in cert.entries() {
                let reduced: Vec<i64> = rep.numerators().iter().map(|x| x.rem_euclid(q as i64)).collect();
                if rep.den() != q || reduced != c.residues() {
                    failures.push(format!("F_{a} q={q}: {rep} is not in class {:?}", c.residues()));
                }
                if !strictly_inside(&fan, rep.numerators(), q) {
                    failures.push(format!("F_{a} q={q}: {rep} is not strictly interior"));
                }
                if !seen.insert(reduced) {
                    failures.push(format!("F_{a} q={q}: class {:?} repeated", c.residues()));
                }
            }
            if seen.len() != (q * q) as usize {
                failures.push(format!("F_{a} q={q}: {} of {} classes covered", seen.len(), q * q));
            }
        }
    }
    assert_eq!(pairs, 48);
    failures
}

fn basis_matches_brute_force() -> Vec<String> {
    let mut failures = Vec::new();
    let fan = projective_space(2);
    let basis = splitting_basis(&fan, 2).unwrap();
    if basis.len() != 10 {
        failures.push(format!("{} basis points, expected 10", basis.len()));
    }
    let mut brute = BTreeSet::new();
    for x in -2..=4i64 {
        for y in -2..=4i64 {
            // ⟨u, v⟩ > −1 for v = e1, e2, −e1 − e2, numerators over 2
            if x > -2 && y > -2 && -x - y > -2 {
                brute.insert(vec![x, y]);
            }
        }
    }
    let found: BTreeSet<Vec<i64>> = basis.iter().map(|u| u.numerators().to_vec()).collect();
    if found != brute {
        failures.push(format!("basis {found:?} differs from brute force {brute:?}"));
    }
    for a in &basis {
        for (ci, cone) in fan.max_cones().iter().enumerate() {
            if !regular_on_chart(a, &fan, cone) {
                failures.push(format!("{a} not regular on chart {ci}"));
            }
            if !brute_force_regularity(a, &fan, ci, 2, 4).unwrap().passed() {
                failures.push(format!("{a} fails the brute-force regularity oracle on chart {ci}"));
            }
        }
    }
    failures
}

fn diagonal_key_identity() -> Vec<String> {
    let mut failures = Vec::new();
    for (fan, q) in [(projective_space(1), 2u32), (hirzebruch(1), 2), (hirzebruch(1), 3)] {
        let pi = diagonal_splitting(&fan, q).unwrap();
        let dims = 2 * fan.dim();
        let r = 2 * q as i64;
        let mut num = vec![-r; dims];
        let mut cases = 0u64;
        let mut bad = 0u64;
        'scan: loop {
            let b = FractionalPoint::new(num.clone(), q).unwrap();
            cases += 1;
            if !diagonal_identity_holds(&pi, &b).unwrap() {
                bad += 1;
            }
            let mut i = 0;
            while num[i] == r {
                num[i] = -r;
                i += 1;
                if i == dims {
                    break 'scan;
                }
            }
            num[i] += 1;
        }
        if bad > 0 {
            failures.push(format!("dim {} q={q}: {bad} of {cases} cases fail", fan.dim()));
        }
    }
    failures
}

fn compatibility_oracles() -> Vec<String> {
    let mut failures = Vec::new();
    for (name, fan, q) in [
        ("P^1", projective_space(1), 2u32),
        ("P^1", projective_space(1), 3),
        ("F_1", hirzebruch(1), 2),
        ("F_1", hirzebruch(1), 3),
        ("F_2", hirzebruch(2), 3),
    ] {
        let pi = diagonal_splitting(&fan, q).unwrap();
        let r = verify_diagonal_compatibility(&fan, q, &pi, 3).unwrap();
        if !r.passed() {
            failures.push(format!("{name} q={q}: {r}"));
        }
    }
    for (name, fan, q) in [("P^1", projective_space(1), 2u32), ("F_2", hirzebruch(2), 3)] {
        let pi = match semidiagonal_splitting(&fan, q, 3) {
            Ok(pi) => pi,
            Err(e) => {
                failures.push(format!("{name} q={q} n=3: no semidiagonal splitting: {e}"));
                let cert = is_diagonally_split(&fan, q).unwrap().certificate().unwrap().clone();
                adjacent_semidiagonal_map(&fan, &cert, 3).unwrap()
            }
        };
        for i in 1..=2 {
            let r = verify_semidiagonal_compatibility(&fan, q, 3, i, &pi, 2).unwrap();
            if !r.passed() {
                failures.push(format!("{name} q={q} n=3: {r}"));
            }
        }
    }
    let p1 = projective_space(1);
    let pi0 = canonical_splitting(&power_fan(&p1, 2), 2).unwrap();
    let r = verify_diagonal_compatibility(&p1, 2, &pi0, 3).unwrap();
    match &r.counterexample {
        None => failures.push("canonical splitting passes the diagonal oracle".into()),
        Some(c) => {
            let (b, b2) = (&c.elements[0], &c.elements[1]);
            let diff = b2 - b;
            let d = diff.numerators();
            if d[1] != -d[0] || d[0] % 2 == 0 {
                failures.push(format!("elements {b}, {b2} do not differ by (u, -u) with u outside M"));
            }
            // image · x^{−(b_1 + b_2)} is the constant 1
            let merged = (b.numerators()[0] + b.numerators()[1]) / 2;
            let shift = LaurentPolynomial::monomial(LatticeVector(vec![-merged]), 1);
            if &c.image * &shift != LaurentPolynomial::one(1) {
                failures.push(format!("counterexample image {} is not a unit monomial", c.image));
            }
        }
    }
    failures
}

fn canonical_splitting_ideals() -> Vec<String> {
    let mut failures = Vec::new();
    for (name, fan) in [("P^2", projective_space(2)), ("F_3", hirzebruch(3))] {
        let mut predicates = vec![IdealPredicate::UnionOfDivisors];
        predicates.extend(fan.cones().into_iter().map(IdealPredicate::OrbitClosure));
        for q in [2u32, 3] {
            let pi0 = canonical_splitting(&fan, q).unwrap();
            for p in &predicates {
                let r = verify_monomial_ideal_compatibility(&pi0, &fan, p, 3).unwrap();
                if !r.passed() {
                    failures.push(format!("{name} q={q}: {r}"));
                }
            }
        }
    }
    failures
}

fn normality_corroboration() -> Vec<String> {
    let mut failures = Vec::new();
    let square_fan = builtin("product:pn:1xpn:1").unwrap();
    let cases = [
        ("F_1 trapezoid", divisor_polytope_int(&hirzebruch(1), &[0, 0, 1, 1]).unwrap()),
        ("P^2 anticanonical", anticanonical_polytope(&projective_space(2))),
        ("unit square", divisor_polytope_int(&square_fan, &[0, 1, 0, 1]).unwrap()),
    ];
    let square_points = cases[2].1.lattice_points().unwrap();
    if square_points.len() != 4 {
        failures.push(format!("unit square has {} lattice points", square_points.len()));
    }
    for (name, p) in &cases {
        let r = normality_check(p, 4).unwrap();
        if !r.passed() {
            failures.push(format!("{name}: {:?}", r.counterexample));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for i in 0..20 {
        let p = random_polygon(&mut rng);
        let r = normality_check(&p, 4).unwrap();
        if !r.passed() {
            failures.push(format!("random polygon {i} ({p}): {:?}", r.counterexample));
        }
    }
    failures
}

fn scan_determinism_and_speed() -> Vec<String> {
    let mut failures = Vec::new();
    let args = ["scan", "--builtin", "hirzebruch:2", "--q-min", "2", "--q-max", "50"];
    let start = Instant::now();
    let (code, first) = cli(&args);
    let elapsed = start.elapsed();
    if code != 0 {
        failures.push(format!("exit {code}"));
    }
    if elapsed >= Duration::from_secs(10) {
        failures.push(format!("took {elapsed:?}"));
    }
    let (_, second) = cli(&args);
    let mut single = vec!["--workers", "1"];
    single.extend(args);
    let (_, one) = cli(&single);
    let mut many = vec!["--workers", "8"];
    many.extend(args);
    let (_, eight) = cli(&many);
    if first != second || first != one || first != eight {
        failures.push("output differs between runs or worker counts".into());
    }
    let odd: Vec<String> = (3..=49).step_by(2).map(|q: u32| q.to_string()).collect();
    if !first.contains(&format!("split at: [{}]", odd.join(", "))) {
        failures.push("split set is not the odd q".into());
    }
    failures
}
