//! Exact-arithmetic toolkit for rational polyhedral geometry.
//!
//! Everything in this crate computes over arbitrary-precision integers and
//! rationals; there is no floating point anywhere. The main pieces:
//!
//! - [`lattice`]: integer/rational vectors and matrices, Smith normal form,
//!   sublattice indices.
//! - [`polyhedral`]: strongly convex rational cones and fans, with exact
//!   smoothness / completeness / projectivity / stability predicates and
//!   star subdivision.
//! - [`rootdata`]: root data from Cartan matrices, Weyl groups, diagram
//!   automorphisms, dominant chambers, and boundary strata.
//! - [`refine`]: equivariant resolution of fan singularities (a group-stable
//!   smooth projective refinement pipeline).
//! - [`monoid`]: finitely generated submonoids of a lattice, membership,
//!   saturation, Hilbert bases.
//! - [`dvr`]: fans in `R^n x R>=0` describing toric schemes over a discrete
//!   valuation ring, recession fans, special-fiber combinatorics, and the
//!   shear-stability refutation machinery.
//! - [`cox`]: Cox ray data, coordinate-vanishing patterns, and torus-GIT
//!   semistability with linearization search.
//!
//! The core math is generic over the integer scalar through [`scalar::RingInt`];
//! the concrete aliases at the crate root pin everything to `num::BigInt`,
//! which is what the CLI and the test suites use.

#![allow(clippy::needless_range_loop)]

pub mod cox;
pub mod dvr;
pub mod error;
pub mod lattice;
pub mod lp;
pub mod monoid;
pub mod polyhedral;
pub mod refine;
pub mod rootdata;
pub mod scalar;

pub use error::Error;

/// Arbitrary-precision integer used by all concrete type aliases.
pub type Int = num::BigInt;
/// Arbitrary-precision rational in lowest terms.
pub type Rat = num::rational::Ratio<Int>;

/// Integer coordinate tuple in a fixed-rank lattice.
pub type LatticeVector = lattice::Vector<Int>;
/// Rational coordinate tuple.
pub type RationalVector = lattice::Vector<Rat>;
/// Row-major arbitrary-precision integer matrix.
pub type IntMatrix = lattice::Matrix<Int>;
/// Row-major arbitrary-precision rational matrix.
pub type RatMatrix = lattice::Matrix<Rat>;

/// Strongly convex rational polyhedral cone over `BigInt`.
pub type Cone = polyhedral::Cone<Int>;
/// Finite rational polyhedral fan over `BigInt`.
pub type Fan = polyhedral::Fan<Int>;
/// Finite group of unimodular integer matrices.
pub type MatrixGroup = polyhedral::MatrixGroup<Int>;
