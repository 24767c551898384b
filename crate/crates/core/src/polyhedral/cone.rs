use std::collections::BTreeSet;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{index_in_saturation, rational_rank, Matrix, Vector};
use crate::scalar::{Fraction, RingInt};

use super::hrep::{canonicalize_generators, extreme_rays, hull_hrep, HRep};

/// Strongly convex rational polyhedral cone, stored by its minimal primitive
/// generators with cached facet normals.
///
/// Construction canonicalizes: rays are primitivized, deduplicated, reduced
/// to the extreme ones, and sorted, so two cones are equal as sets of points
/// iff they compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone<I: RingInt> {
    rank: usize,
    rays: Vec<Vector<I>>,
    dim: usize,
    span_equations: Vec<Vector<I>>,
    facets: Vec<Vector<I>>,
}

impl<I: RingInt> Cone<I> {
    /// Builds the cone generated by the given vectors. Errors when the hull
    /// contains a line.
    pub fn from_rays(rank: usize, generators: &[Vector<I>]) -> Result<Self> {
        for g in generators {
            if g.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: g.rank(),
                });
            }
        }
        let gens = canonicalize_generators(generators);
        let h = hull_hrep(rank, &gens);
        if !h.pointed {
            return Err(Error::NotPointed);
        }
        let mut rays: Vec<Vector<I>> = gens
            .into_iter()
            .filter(|g| is_extreme(&h, g))
            .collect();
        rays.sort();
        Ok(Cone {
            rank,
            rays,
            dim: h.dim,
            span_equations: h.span_equations,
            facets: h.facets,
        })
    }

    pub fn zero(rank: usize) -> Self {
        Cone::from_rays(rank, &[]).expect("zero cone is pointed")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vector<I>] {
        &self.rays
    }

    pub fn is_zero_cone(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn facet_normals(&self) -> &[Vector<I>] {
        &self.facets
    }

    pub fn span_equations(&self) -> &[Vector<I>] {
        &self.span_equations
    }

    pub fn contains_integer(&self, x: &Vector<I>) -> bool {
        self.span_equations.iter().all(|e| e.dot(x).is_zero())
            && self.facets.iter().all(|f| !f.dot(x).is_negative())
    }

    pub fn contains(&self, x: &Vector<Fraction<I>>) -> bool {
        self.span_equations
            .iter()
            .all(|e| e.dot_rational(x).is_zero())
            && self.facets.iter().all(|f| !f.dot_rational(x).is_negative())
    }

    /// Membership in the relative interior.
    pub fn contains_in_relative_interior(&self, x: &Vector<I>) -> bool {
        self.span_equations.iter().all(|e| e.dot(x).is_zero())
            && self.facets.iter().all(|f| f.dot(x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone<I>) -> bool {
        other.is_zero_cone() && self.rank == other.rank
            || other.rays.iter().all(|r| self.contains_integer(r))
    }

    /// Exact intersection as a cone; intersections of strongly convex cones
    /// stay strongly convex.
    pub fn intersection(&self, other: &Cone<I>) -> Cone<I> {
        assert_eq!(self.rank, other.rank);
        let mut eqs = self.span_equations.clone();
        eqs.extend_from_slice(&other.span_equations);
        let mut ineqs = self.facets.clone();
        ineqs.extend_from_slice(&other.facets);
        let rays = extreme_rays(self.rank, &eqs, &ineqs);
        Cone::from_rays(self.rank, &rays).expect("intersection of pointed cones is pointed")
    }

    /// All faces, including the cone itself and the zero cone. Faces are
    /// exactly the tight loci of facet subsets.
    pub fn faces(&self) -> Vec<Cone<I>> {
        let mut ray_sets: BTreeSet<Vec<Vector<I>>> = BTreeSet::new();
        for subset in super::hrep::subsets_of_size(self.facets.len(), 0)
            .into_iter()
            .chain((1..=self.facets.len()).flat_map(|k| super::hrep::subsets_of_size(self.facets.len(), k)))
        {
            let tight: Vec<Vector<I>> = self
                .rays
                .iter()
                .filter(|r| subset.iter().all(|&fi| self.facets[fi].dot(r).is_zero()))
                .cloned()
                .collect();
            ray_sets.insert(tight);
        }
        ray_sets.insert(Vec::new());
        ray_sets
            .into_iter()
            .map(|rs| Cone::from_rays(self.rank, &rs).expect("face of pointed cone is pointed"))
            .collect()
    }

    /// Faces of dimension `self.dim() - 1`.
    pub fn facet_faces(&self) -> Vec<Cone<I>> {
        self.faces()
            .into_iter()
            .filter(|f| self.dim > 0 && f.dim == self.dim - 1)
            .collect()
    }

    pub fn is_face_of(&self, other: &Cone<I>) -> bool {
        other.faces().iter().any(|f| f == self)
    }

    /// Number of rays equals the dimension.
    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    /// Index of the subgroup generated by the rays inside the lattice points
    /// of their rational span; `1` for the zero cone.
    pub fn multiplicity(&self) -> I {
        if self.rays.is_empty() {
            return num::One::one();
        }
        index_in_saturation(&self.rays).expect("rays share the ambient rank")
    }

    /// Rays extend to a basis of the ambient lattice.
    pub fn is_smooth(&self) -> bool {
        self.is_simplicial() && self.multiplicity().is_one()
    }

    /// Image under an integer matrix; the image of a pointed cone under an
    /// invertible map is pointed.
    pub fn transform(&self, m: &Matrix<I>) -> Result<Cone<I>> {
        let rays: Vec<Vector<I>> = self.rays.iter().map(|r| m.apply(r)).collect();
        Cone::from_rays(m.nrows(), &rays)
    }

    /// Primitive generator of the ray sum, an interior point for cones of
    /// positive dimension.
    pub fn barycenter_ray(&self) -> Option<Vector<I>> {
        if self.rays.is_empty() {
            return None;
        }
        let mut acc = Vector::zero(self.rank);
        for r in &self.rays {
            acc = acc.add(r);
        }
        Some(acc.primitive().expect("sum of extreme rays of a pointed cone is nonzero"))
    }

    /// Rational coordinates of `x` in the ray basis; `None` if the cone is
    /// not simplicial or `x` is outside the span.
    pub fn ray_coordinates(&self, x: &Vector<I>) -> Option<Vec<Fraction<I>>> {
        if !self.is_simplicial() || self.dim == 0 {
            return None;
        }
        let a = Matrix::from_rows(
            (0..self.rank)
                .map(|i| {
                    self.rays
                        .iter()
                        .map(|r| crate::scalar::to_ratio(&r.coords()[i]))
                        .collect()
                })
                .collect(),
        );
        let b: Vec<Fraction<I>> = x.coords().iter().map(crate::scalar::to_ratio).collect();
        crate::lattice::solve(&a, &b)
    }
}

fn is_extreme<I: RingInt>(h: &HRep<I>, g: &Vector<I>) -> bool {
    if h.dim == 0 {
        return false;
    }
    if h.dim == 1 {
        return true;
    }
    let tight: Vec<Vector<I>> = h
        .facets
        .iter()
        .filter(|f| f.dot(g).is_zero())
        .cloned()
        .collect();
    rational_rank(&tight.iter().map(Vector::to_rational).collect::<Vec<_>>()) == h.dim - 1
}
