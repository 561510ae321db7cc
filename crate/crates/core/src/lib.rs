//! Diagonal splittings of complete toric varieties.
//!
//! A complete toric variety `X` given by a fan is diagonally split for `q`
//! exactly when the interior of `𝔽_X = { u : −1 ≤ ⟨u, v_ρ⟩ ≤ 1 }` meets every
//! class of `(1/q)M / M`. This crate decides that condition with exact
//! arithmetic, builds the corresponding splitting maps `Σ c_a π_a` on `X × X`
//! and `X^n`, and checks them against a brute-force oracle on truncated chart
//! semigroups.

pub mod error;
pub mod fan;
pub mod lattice;
pub mod laurent;
pub mod oracle;
pub mod polytope;
pub mod sections;
pub mod splitting;
pub mod svg;

pub use error::{Error, Result};
pub use fan::{builtin, hirzebruch, product_fan, projective_space, Completeness, Cone, Fan, FanJson};
pub use lattice::{coset_class, enumerate_classes, pairing, primitive, CosetClass, FractionalPoint, LatticeVector};
pub use laurent::LaurentPolynomial;
pub use polytope::{anticanonical_polytope, diagonal_splitting_polytope, divisor_polytope, HPolytope, IntegerBox};
pub use splitting::{NonSplitWitness, SplitCertificate, SplitVerdict, SplittingMap};
