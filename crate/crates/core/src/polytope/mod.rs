//! Rational polyhedra in H-representation.
//!
//! A polyhedron is a list of constraints `⟨u, normal⟩ ≥ bound` with integer
//! normals and rational bounds. Membership tests are exact; bounding boxes are
//! found by Fourier–Motzkin elimination; fractional points are enumerated by
//! scanning the box in lexicographic order.

mod fm;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{self, primitive, FractionalPoint, LatticeVector, DEFAULT_ENUMERATION_CAP};

pub(crate) use fm::{is_feasible, Row};

/// Exact rational number used for bounds and divisor coefficients.
pub type Rational = BigRational;

/// `⟨u, normal⟩ ≥ bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    normal: LatticeVector,
    bound: BigRational,
    // bound as (numerator, denominator) when both fit in i64
    small: Option<(i128, i128)>,
}

impl Constraint {
    pub fn new(normal: LatticeVector, bound: BigRational) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::InvalidArgument("constraint normal is zero".into()));
        }
        let small = match (bound.numer().to_i64(), bound.denom().to_i64()) {
            (Some(n), Some(d)) => Some((n as i128, d as i128)),
            _ => None,
        };
        Ok(Self { normal, bound, small })
    }

    pub fn normal(&self) -> &LatticeVector {
        &self.normal
    }

    pub fn bound(&self) -> &BigRational {
        &self.bound
    }

    /// Sign of `⟨u, normal⟩ − bound`.
    fn compare(&self, u: &FractionalPoint) -> Ordering {
        let s = lattice::dot(u.numerators(), self.normal.coords());
        let q = u.den() as i128;
        if let Some((n, d)) = self.small {
            if let (Some(lhs), Some(rhs)) = (s.checked_mul(d), n.checked_mul(q)) {
                return lhs.cmp(&rhs);
            }
        }
        BigRational::new(BigInt::from(s), BigInt::from(q)).cmp(&self.bound)
    }

    fn scaled(&self, k: &BigRational) -> Constraint {
        Constraint::new(self.normal.clone(), &self.bound * k).expect("nonzero normal")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl HPolytope {
    pub fn new(dim: usize, constraints: Vec<Constraint>) -> Result<Self> {
        for c in &constraints {
            lattice::check_dim(dim, c.normal.dim())?;
        }
        Ok(Self { dim, constraints })
    }

    /// Builds from `(normal, bound)` pairs with integer bounds.
    pub fn from_integer_constraints(dim: usize, rows: &[(Vec<i64>, i64)]) -> Result<Self> {
        let constraints =
            rows.iter().map(|(n, b)| Constraint::new(LatticeVector(n.clone()), int(*b))).collect::<Result<Vec<_>>>()?;
        Self::new(dim, constraints)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Panics if `u` has the wrong dimension.
    pub fn contains(&self, u: &FractionalPoint) -> bool {
        assert_eq!(u.dim(), self.dim, "point dimension mismatch");
        self.constraints.iter().all(|c| c.compare(u) != Ordering::Less)
    }

    /// Every constraint holds strictly. Panics if `u` has the wrong dimension.
    pub fn contains_strict(&self, u: &FractionalPoint) -> bool {
        assert_eq!(u.dim(), self.dim, "point dimension mismatch");
        self.constraints.iter().all(|c| c.compare(u) == Ordering::Greater)
    }

    /// Index of the first constraint that fails strictly, if any.
    pub fn first_non_strict(&self, u: &FractionalPoint) -> Option<usize> {
        self.constraints.iter().position(|c| c.compare(u) != Ordering::Greater)
    }

    /// `−P`.
    pub fn negated(&self) -> HPolytope {
        HPolytope {
            dim: self.dim,
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint::new(-&c.normal, c.bound.clone()).expect("nonzero normal"))
                .collect(),
        }
    }

    pub fn intersection(&self, other: &HPolytope) -> Result<HPolytope> {
        lattice::check_dim(self.dim, other.dim)?;
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        Ok(HPolytope { dim: self.dim, constraints })
    }

    /// `P × Q` in the product space.
    pub fn product(&self, other: &HPolytope) -> HPolytope {
        let lift = |c: &Constraint, before: usize, after: usize| {
            let mut n = vec![0; before];
            n.extend_from_slice(c.normal.coords());
            n.extend(std::iter::repeat_n(0, after));
            Constraint::new(LatticeVector(n), c.bound.clone()).expect("nonzero normal")
        };
        let mut constraints: Vec<_> = self.constraints.iter().map(|c| lift(c, 0, other.dim)).collect();
        constraints.extend(other.constraints.iter().map(|c| lift(c, self.dim, 0)));
        HPolytope { dim: self.dim + other.dim, constraints }
    }

    /// `kP` for a positive rational `k`.
    pub fn scaled(&self, k: &BigRational) -> HPolytope {
        HPolytope { dim: self.dim, constraints: self.constraints.iter().map(|c| c.scaled(k)).collect() }
    }

    fn rows(&self) -> Vec<Row> {
        self.constraints
            .iter()
            .map(|c| (c.normal.coords().iter().map(|&x| int(x)).collect(), c.bound.clone()))
            .collect()
    }

    /// Exact per-coordinate extrema as rationals.
    pub fn coordinate_ranges(&self) -> Result<Vec<(BigRational, BigRational)>> {
        let rows = self.rows();
        if rows.is_empty() {
            return Err(Error::Unbounded(0));
        }
        (0..self.dim)
            .map(|i| match fm::project(&rows, i) {
                fm::Projection::Infeasible => Err(Error::EmptyPolyhedron),
                fm::Projection::Interval(fm::Interval { lower: Some(l), upper: Some(u) }) => Ok((l, u)),
                fm::Projection::Interval(_) => Err(Error::Unbounded(i)),
            })
            .collect()
    }

    /// Smallest integer box containing the polyhedron.
    pub fn bounding_box(&self) -> Result<IntegerBox> {
        let ranges = self.coordinate_ranges()?;
        let to_i64 = |r: BigRational| {
            r.to_integer().to_i64().ok_or_else(|| Error::InvalidArgument("bounding box exceeds i64".into()))
        };
        let mut lower = Vec::with_capacity(self.dim);
        let mut upper = Vec::with_capacity(self.dim);
        for (l, u) in ranges {
            lower.push(to_i64(l.floor())?);
            upper.push(to_i64(u.ceil())?);
        }
        IntegerBox::new(lower, upper)
    }

    /// All points of `(1/q)ℤ^n` strictly inside, lexicographic.
    pub fn interior_points(&self, q: u32) -> Result<Vec<FractionalPoint>> {
        let bbox = self.bounding_box()?;
        let mut out = Vec::new();
        bbox.for_each_point(q, DEFAULT_ENUMERATION_CAP, |u| {
            if self.contains_strict(u) {
                out.push(u.clone());
            }
        })?;
        Ok(out)
    }

    /// All points of `(1/q)ℤ^n` inside or on the boundary, lexicographic.
    pub fn fractional_points(&self, q: u32) -> Result<Vec<FractionalPoint>> {
        let bbox = self.bounding_box()?;
        let mut out = Vec::new();
        bbox.for_each_point(q, DEFAULT_ENUMERATION_CAP, |u| {
            if self.contains(u) {
                out.push(u.clone());
            }
        })?;
        Ok(out)
    }

    /// All integer points inside or on the boundary, lexicographic.
    pub fn lattice_points(&self) -> Result<Vec<LatticeVector>> {
        Ok(self.fractional_points(1)?.into_iter().map(|u| LatticeVector(u.numerators().to_vec())).collect())
    }

    /// Vertices of a bounded 2-dimensional polygon in counterclockwise order.
    pub fn vertices_2d(&self) -> Result<Vec<(BigRational, BigRational)>> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: self.dim });
        }
        self.bounding_box()?;
        let mut verts: Vec<(BigRational, BigRational)> = Vec::new();
        let cs = &self.constraints;
        for i in 0..cs.len() {
            for j in (i + 1)..cs.len() {
                let (a, b) = (cs[i].normal.coords(), cs[j].normal.coords());
                let det = a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128;
                if det == 0 {
                    continue;
                }
                let det = BigRational::from_integer(det.into());
                let (ba, bb) = (&cs[i].bound, &cs[j].bound);
                let x = (ba * int(b[1]) - bb * int(a[1])) / &det;
                let y = (bb * int(a[0]) - ba * int(b[0])) / &det;
                let inside =
                    cs.iter().all(|c| int(c.normal.coords()[0]) * &x + int(c.normal.coords()[1]) * &y >= c.bound);
                if inside && !verts.contains(&(x.clone(), y.clone())) {
                    verts.push((x, y));
                }
            }
        }
        if verts.is_empty() {
            return Ok(verts);
        }
        let n = BigRational::from_integer(verts.len().into());
        let cx = verts.iter().map(|v| &v.0).fold(BigRational::zero(), |a, b| a + b) / &n;
        let cy = verts.iter().map(|v| &v.1).fold(BigRational::zero(), |a, b| a + b) / &n;
        verts.sort_by(|p, q| {
            let (px, py) = (&p.0 - &cx, &p.1 - &cy);
            let (qx, qy) = (&q.0 - &cx, &q.1 - &cy);
            let half = |x: &BigRational, y: &BigRational| !(y.is_positive() || (y.is_zero() && x.is_positive()));
            half(&px, &py).cmp(&half(&qx, &qy)).then_with(|| (&qx * &py).cmp(&(&px * &qy)))
        });
        Ok(verts)
    }
}

impl fmt::Display for HPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.constraints.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "<u, {}> >= {}", c.normal, c.bound)?;
        }
        Ok(())
    }
}

/// Per-coordinate integer bounds `lower[i] ≤ x_i ≤ upper[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerBox {
    lower: Vec<i64>,
    upper: Vec<i64>,
}

impl IntegerBox {
    pub fn new(lower: Vec<i64>, upper: Vec<i64>) -> Result<Self> {
        lattice::check_dim(lower.len(), upper.len())?;
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::InvalidArgument("box lower bound exceeds upper".into()));
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Pairs `[lower_i, upper_i]`.
    pub fn intervals(&self) -> Vec<[i64; 2]> {
        self.lower.iter().zip(&self.upper).map(|(&l, &u)| [l, u]).collect()
    }

    pub fn contains_box(&self, other: &IntegerBox) -> bool {
        self.dim() == other.dim()
            && self.lower.iter().zip(&other.lower).all(|(a, b)| a <= b)
            && self.upper.iter().zip(&other.upper).all(|(a, b)| a >= b)
    }

    /// Number of points of `(1/q)ℤ^n` in the box.
    pub fn count_points(&self, q: u32) -> u128 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| ((u - l) as u128) * q as u128 + 1)
            .fold(1u128, |acc, k| acc.saturating_mul(k))
    }

    /// Numerator range `[q·lower_i, q·upper_i]` per coordinate.
    pub fn numerator_ranges(&self, q: u32) -> Vec<(i64, i64)> {
        let q = q as i64;
        self.lower.iter().zip(&self.upper).map(|(&l, &u)| (l * q, u * q)).collect()
    }

    /// Visits every point of `(1/q)ℤ^n` in the box, lexicographically.
    pub fn for_each_point(&self, q: u32, cap: u64, mut f: impl FnMut(&FractionalPoint)) -> Result<()> {
        let count = self.count_points(q);
        if count > cap as u128 {
            return Err(Error::EnumerationTooLarge { count, cap });
        }
        let ranges = self.numerator_ranges(q);
        let mut odometer = Odometer::new(ranges.iter().map(|&(l, u)| (l, u, 1)).collect());
        while let Some(num) = odometer.next_point() {
            f(&FractionalPoint::new(num.to_vec(), q)?);
        }
        Ok(())
    }
}

/// Lexicographic walk over a product of arithmetic progressions
/// `start, start + step, …, ≤ end`.
pub(crate) struct Odometer {
    axes: Vec<(i64, i64, i64)>,
    current: Vec<i64>,
    started: bool,
    done: bool,
}

impl Odometer {
    pub(crate) fn new(axes: Vec<(i64, i64, i64)>) -> Self {
        let done = axes.iter().any(|&(s, e, _)| s > e);
        let current = axes.iter().map(|&(s, _, _)| s).collect();
        Self { axes, current, started: false, done }
    }

    pub(crate) fn next_point(&mut self) -> Option<&[i64]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        for i in (0..self.axes.len()).rev() {
            let (start, end, step) = self.axes[i];
            if self.current[i] + step <= end {
                self.current[i] += step;
                return Some(&self.current);
            }
            self.current[i] = start;
        }
        self.done = true;
        None
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `P_D = { u : ⟨u, v_ρ⟩ ≥ −d_ρ }`, one constraint per ray in ray order.
pub fn divisor_polytope(fan: &Fan, d: &[BigRational]) -> Result<HPolytope> {
    if d.len() != fan.rays().len() {
        return Err(Error::CoefficientCount { expected: fan.rays().len(), got: d.len() });
    }
    let constraints =
        fan.rays().iter().zip(d).map(|(v, d)| Constraint::new(v.clone(), -d)).collect::<Result<Vec<_>>>()?;
    HPolytope::new(fan.dim(), constraints)
}

/// Integer-coefficient convenience wrapper around [`divisor_polytope`].
pub fn divisor_polytope_int(fan: &Fan, d: &[i64]) -> Result<HPolytope> {
    let d: Vec<BigRational> = d.iter().map(|&x| int(x)).collect();
    divisor_polytope(fan, &d)
}

/// `P_{−K} = { u : ⟨u, v_ρ⟩ ≥ −1 }`.
pub fn anticanonical_polytope(fan: &Fan) -> HPolytope {
    let ones = vec![BigRational::one(); fan.rays().len()];
    divisor_polytope(fan, &ones).expect("one coefficient per ray")
}

/// `{ u : −1 ≤ ⟨u, v_ρ⟩ ≤ 1 }`, two constraints per ray.
pub fn diagonal_splitting_polytope(fan: &Fan) -> HPolytope {
    let mut constraints = Vec::with_capacity(2 * fan.rays().len());
    for v in fan.rays() {
        constraints.push(Constraint::new(v.clone(), -BigRational::one()).expect("ray"));
        constraints.push(Constraint::new(-v, -BigRational::one()).expect("ray"));
    }
    HPolytope::new(fan.dim(), constraints).expect("ray dimensions")
}

/// Convex hull of integer points in the plane as an H-polytope with
/// primitive inward normals. Fails when the points are collinear.
pub fn polygon_from_points(points: &[LatticeVector]) -> Result<HPolytope> {
    for p in points {
        lattice::check_dim(2, p.dim())?;
    }
    let mut pts: Vec<(i64, i64)> = points.iter().map(|p| (p.0[0], p.0[1])).collect();
    pts.sort();
    pts.dedup();
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| {
        (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
    };
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(Error::InvalidArgument("points do not span a polygon".into()));
    }
    let mut constraints = Vec::with_capacity(hull.len());
    for i in 0..hull.len() {
        let (p, q) = (hull[i], hull[(i + 1) % hull.len()]);
        let normal = primitive(&LatticeVector(vec![-(q.1 - p.1), q.0 - p.0]))?;
        let bound = normal.0[0] * p.0 + normal.0[1] * p.1;
        constraints.push(Constraint::new(normal, int(bound))?);
    }
    HPolytope::new(2, constraints)
}
