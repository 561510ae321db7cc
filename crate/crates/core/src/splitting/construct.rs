//! Explicit splittings: `π_0` on `X`, `π_Δ` on `X × X`, and splittings of
//! `X^n` compatible with the semidiagonals.

use crate::error::{Error, Result};
use crate::fan::{power_fan, product_fan, Fan};
use crate::lattice::{coset_class, enumerate_classes, FractionalPoint};
use crate::polytope::diagonal_splitting_polytope;

use super::decide::{is_diagonally_split, SplitCertificate, SplitVerdict};
use super::SplittingMap;

// node budget for the window search in `narrow_representatives`
const WINDOW_SEARCH_BUDGET: u64 = 2_000_000;

/// `π_0`, the map `x^u ↦ x^u` on `M` and `0` off it.
pub fn canonical_splitting(fan: &Fan, q: u32) -> Result<SplittingMap> {
    SplittingMap::new(fan, q, [(FractionalPoint::zero(fan.dim(), q), 1)])
}

fn certificate_or_error(fan: &Fan, q: u32) -> Result<SplitCertificate> {
    match is_diagonally_split(fan, q)? {
        SplitVerdict::Split(c) => Ok(c),
        SplitVerdict::NotSplit(w) => Err(Error::NotDiagonallySplit { q, class: w.class().residues().to_vec() }),
    }
}

/// `π_Δ` on `X × X` for a diagonally split `X`.
pub fn diagonal_splitting(fan: &Fan, q: u32) -> Result<SplittingMap> {
    diagonal_splitting_from_certificate(fan, &certificate_or_error(fan, q)?)
}

/// `π_Δ = π_(0,0) + Σ π_(a, −a)`, one term per nonzero class with `a` its
/// certificate representative.
pub fn diagonal_splitting_from_certificate(fan: &Fan, cert: &SplitCertificate) -> Result<SplittingMap> {
    cert.validate(fan)?;
    let q = cert.q();
    let mut terms = vec![(FractionalPoint::zero(2 * fan.dim(), q), 1)];
    for a in cert.nonzero_representatives() {
        terms.push((a.concat(&-a)?, 1));
    }
    SplittingMap::new(&product_fan(fan, fan), q, terms)
}

/// A representative of every class whose pairing with each ray ranges over
/// an interval of length less than one, indexed by class position.
///
/// Searches over one window `[m/q, (m + q − 1)/q]` per ray, `−(q−1) ≤ m ≤ 0`,
/// keeping candidates from the interior of `𝔽_X`; the lexicographically
/// smallest surviving candidate is taken in each class.
pub fn narrow_representatives(fan: &Fan, q: u32) -> Result<Vec<FractionalPoint>> {
    let classes = enumerate_classes(fan.dim(), q)?;
    let polytope = diagonal_splitting_polytope(fan);
    let mut candidates: Vec<Vec<(FractionalPoint, Vec<i128>)>> = vec![Vec::new(); classes.len() as usize];
    for u in polytope.interior_points(q)? {
        let pairings = fan.rays().iter().map(|v| u.pairing_numerator(v)).collect::<Result<Vec<_>>>()?;
        candidates[classes.index_of(&coset_class(&u)) as usize].push((u, pairings));
    }
    if let Some(i) = candidates.iter().position(|c| c.is_empty()) {
        return Err(Error::NotDiagonallySplit { q, class: classes.class_at(i as u64).residues().to_vec() });
    }
    let all: Vec<Vec<usize>> = candidates.iter().map(|c| (0..c.len()).collect()).collect();
    let mut budget = WINDOW_SEARCH_BUDGET;
    match window_search(&candidates, &all, 0, fan.rays().len(), q as i128, &mut budget) {
        Some(choice) => Ok(choice.into_iter().enumerate().map(|(k, i)| candidates[k][i].0.clone()).collect()),
        None => Err(Error::NoNarrowRepresentatives(q)),
    }
}

fn window_search(
    candidates: &[Vec<(FractionalPoint, Vec<i128>)>],
    alive: &[Vec<usize>],
    ray: usize,
    rays: usize,
    q: i128,
    budget: &mut u64,
) -> Option<Vec<usize>> {
    if ray == rays {
        return Some(alive.iter().map(|c| c[0]).collect());
    }
    for m in -(q - 1)..=0 {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let mut next = Vec::with_capacity(alive.len());
        for (k, list) in alive.iter().enumerate() {
            let kept: Vec<usize> =
                list.iter().copied().filter(|&i| (m..m + q).contains(&candidates[k][i].1[ray])).collect();
            if kept.is_empty() {
                break;
            }
            next.push(kept);
        }
        if next.len() == alive.len() {
            if let Some(found) = window_search(candidates, &next, ray + 1, rays, q, budget) {
                return Some(found);
            }
        }
    }
    None
}

/// A splitting of `X^n` compatible with every semidiagonal `Δ_i`.
pub fn semidiagonal_splitting(fan: &Fan, q: u32, n: usize) -> Result<SplittingMap> {
    semidiagonal_splitting_from_certificate(fan, &certificate_or_error(fan, q)?, n)
}

/// For `n = 2` this is [`diagonal_splitting_from_certificate`]. For larger
/// `n`, with `R` from [`narrow_representatives`], it has one term per tuple of
/// classes `(s_1, …, s_{n−1})`: slot `k` holds `R(s_k) − R(s_{k−1})`, where
/// `s_0 = s_n = 0`.
pub fn semidiagonal_splitting_from_certificate(fan: &Fan, cert: &SplitCertificate, n: usize) -> Result<SplittingMap> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least two factors, got {n}")));
    }
    if n == 2 {
        return diagonal_splitting_from_certificate(fan, cert);
    }
    cert.validate(fan)?;
    let q = cert.q();
    let reps = narrow_representatives(fan, q)?;
    let k = reps.len() as u64;
    let count = k.checked_pow((n - 1) as u32).filter(|&c| c <= crate::lattice::DEFAULT_ENUMERATION_CAP).ok_or(
        Error::EnumerationTooLarge {
            count: (k as u128).saturating_pow((n - 1) as u32),
            cap: crate::lattice::DEFAULT_ENUMERATION_CAP,
        },
    )?;
    let zero = FractionalPoint::zero(fan.dim(), q);
    let mut terms = Vec::with_capacity(count as usize);
    for index in 0..count {
        let mut sums = vec![0usize; n + 1];
        let mut rest = index;
        for slot in (1..n).rev() {
            sums[slot] = (rest % k) as usize;
            rest /= k;
        }
        let rep = |s: usize, slot: usize| {
            if slot == 0 || slot == n {
                &zero
            } else {
                &reps[s]
            }
        };
        let mut point = rep(sums[1], 1) - &zero;
        for slot in 2..=n {
            point = point.concat(&(rep(sums[slot], slot) - rep(sums[slot - 1], slot - 1)))?;
        }
        terms.push((point, 1));
    }
    SplittingMap::new(&power_fan(fan, n), q, terms)
}

/// `π_0 + Σ_i Σ_j π_(a_j in slot i, −a_j in slot i+1)` over nonzero-class
/// certificate representatives `a_j`. For `n ≥ 3` this map is in general not
/// compatible with the semidiagonals; see [`semidiagonal_splitting`].
pub fn adjacent_semidiagonal_map(fan: &Fan, cert: &SplitCertificate, n: usize) -> Result<SplittingMap> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least two factors, got {n}")));
    }
    cert.validate(fan)?;
    let (q, d) = (cert.q(), fan.dim());
    let mut terms = vec![(FractionalPoint::zero(n * d, q), 1)];
    for i in 0..n - 1 {
        for a in cert.nonzero_representatives() {
            let mut num = vec![0; n * d];
            num[i * d..(i + 1) * d].copy_from_slice(a.numerators());
            for (slot, &x) in num[(i + 1) * d..(i + 2) * d].iter_mut().zip(a.numerators()) {
                *slot = -x;
            }
            terms.push((FractionalPoint::new(num, q)?, 1));
        }
    }
    SplittingMap::new(&power_fan(fan, n), q, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{hirzebruch, projective_space};
    use crate::splitting::regular_on_chart;

    fn fp(num: &[i64], den: u32) -> FractionalPoint {
        FractionalPoint::new(num.to_vec(), den).unwrap()
    }

    fn cert(fan: &Fan, q: u32) -> SplitCertificate {
        is_diagonally_split(fan, q).unwrap().certificate().unwrap().clone()
    }

    #[test]
    fn diagonal_examples() {
        let p1 = projective_space(1);
        let pd = diagonal_splitting(&p1, 2).unwrap();
        let terms: Vec<_> = pd.terms().map(|(a, c)| (a.clone(), c)).collect();
        assert_eq!(terms, vec![(fp(&[-1, 1], 2), 1), (fp(&[0, 0], 2), 1)]);
        assert!(pd.is_splitting());
        assert_eq!(diagonal_splitting(&hirzebruch(1), 2).unwrap().len(), 4);
        for q in 2..6 {
            assert_eq!(diagonal_splitting(&hirzebruch(0), q).unwrap().len(), (q * q) as usize);
        }
        assert_eq!(diagonal_splitting(&hirzebruch(2), 2), Err(Error::NotDiagonallySplit { q: 2, class: vec![0, 1] }));
    }

    #[test]
    fn adjacent_map_examples() {
        let p1 = projective_space(1);
        let m = adjacent_semidiagonal_map(&p1, &cert(&p1, 2), 3).unwrap();
        let terms: Vec<_> = m.terms().map(|(a, c)| (a.clone(), c)).collect();
        assert_eq!(terms, vec![(fp(&[-1, 1, 0], 2), 1), (fp(&[0, -1, 1], 2), 1), (fp(&[0, 0, 0], 2), 1)]);
        for (fan, q, n) in [(hirzebruch(1), 3, 3), (hirzebruch(2), 3, 4), (projective_space(2), 2, 3)] {
            let m = adjacent_semidiagonal_map(&fan, &cert(&fan, q), n).unwrap();
            let classes = (q as usize).pow(fan.dim() as u32);
            assert_eq!(m.len(), 1 + (n - 1) * (classes - 1));
        }
        let f1 = hirzebruch(1);
        assert_eq!(adjacent_semidiagonal_map(&f1, &cert(&f1, 2), 2).unwrap(), diagonal_splitting(&f1, 2).unwrap());
    }

    #[test]
    fn semidiagonal_examples() {
        let f1 = hirzebruch(1);
        assert_eq!(semidiagonal_splitting(&f1, 3, 2).unwrap(), diagonal_splitting(&f1, 3).unwrap());
        let p1 = projective_space(1);
        for q in 2..6u32 {
            let s = semidiagonal_splitting(&p1, q, 3).unwrap();
            assert_eq!(s.len(), (q * q) as usize);
            assert!(s.is_splitting());
            let s4 = semidiagonal_splitting(&p1, q, 4).unwrap();
            assert_eq!(s4.len(), (q * q * q) as usize);
        }
        assert!(semidiagonal_splitting(&p1, 2, 1).is_err());
    }

    #[test]
    fn narrow_representative_spread() {
        for (fan, q) in [(projective_space(1), 5), (hirzebruch(0), 3), (hirzebruch(1), 2), (hirzebruch(1), 3)] {
            let reps = match narrow_representatives(&fan, q) {
                Ok(r) => r,
                Err(Error::NoNarrowRepresentatives(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            assert_eq!(reps.len(), (q as usize).pow(fan.dim() as u32));
            assert!(reps[0].is_zero());
            for v in fan.rays() {
                let p: Vec<i128> = reps.iter().map(|r| r.pairing_numerator(v).unwrap()).collect();
                assert!(p.iter().max().unwrap() - p.iter().min().unwrap() < q as i128);
            }
        }
        assert_eq!(narrow_representatives(&hirzebruch(2), 3), Err(Error::NoNarrowRepresentatives(3)));
        assert!(matches!(narrow_representatives(&hirzebruch(3), 2), Err(Error::NotDiagonallySplit { .. })));
    }

    #[test]
    fn every_term_regular_on_every_chart() {
        let p1 = projective_space(1);
        let maps = [
            diagonal_splitting(&hirzebruch(1), 3).unwrap(),
            diagonal_splitting(&projective_space(2), 2).unwrap(),
            semidiagonal_splitting(&p1, 3, 3).unwrap(),
            adjacent_semidiagonal_map(&p1, &cert(&p1, 2), 3).unwrap(),
        ];
        for m in &maps {
            for (a, _) in m.terms() {
                for c in m.ambient().max_cones() {
                    assert!(regular_on_chart(a, m.ambient(), c));
                }
            }
        }
    }
}
