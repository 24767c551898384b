//! Inequality descriptions of finitely generated cones, and back.
//!
//! `hull_hrep` turns a generator list into span equations plus facet
//! inequalities by enumerating candidate hyperplanes spanned by generator
//! subsets; every facet of a finitely generated cone contains enough
//! generators to show up this way. `extreme_rays` inverts the description.
//! Both directions are exact and neither assumes the cone is pointed.

use std::collections::BTreeSet;

use num::{Signed, Zero};

use crate::lattice::{integer_nullspace, rational_rank, rref, Matrix, Vector};
use crate::scalar::{Fraction, RingInt};

/// Inequality description of the convex hull of a ray list.
#[derive(Debug, Clone)]
pub struct HRep<I: RingInt> {
    pub rank: usize,
    /// Dimension of the linear span.
    pub dim: usize,
    /// Primitive integer functionals vanishing on the span.
    pub span_equations: Vec<Vector<I>>,
    /// Primitive integer functionals, nonnegative exactly on the cone
    /// (within the span). Empty when the cone equals its span.
    pub facets: Vec<Vector<I>>,
    /// Whether the cone is strongly convex.
    pub pointed: bool,
    /// Pivot columns identifying span coordinates: for `x` in the span the
    /// tuple `x[pivots]` gives coordinates w.r.t. the reduced basis.
    pub pivots: Vec<usize>,
}

impl<I: RingInt> HRep<I> {
    pub fn contains(&self, x: &Vector<Fraction<I>>) -> bool {
        self.span_equations
            .iter()
            .all(|e| e.dot_rational(x).is_zero())
            && self.facets.iter().all(|f| !f.dot_rational(x).is_negative())
    }

    pub fn contains_integer(&self, x: &Vector<I>) -> bool {
        self.span_equations.iter().all(|e| e.dot(x).is_zero())
            && self.facets.iter().all(|f| !f.dot(x).is_negative())
    }

    /// Strict interior relative to the span.
    pub fn contains_in_relative_interior(&self, x: &Vector<I>) -> bool {
        self.span_equations.iter().all(|e| e.dot(x).is_zero())
            && self.facets.iter().all(|f| f.dot(x).is_positive())
    }

    /// Restriction of an ambient integer vector to span coordinates.
    pub fn span_coords(&self, x: &Vector<I>) -> Vector<I> {
        Vector::new(self.pivots.iter().map(|&p| x.coords()[p].clone()).collect())
    }
}

/// Computes the H-representation of the cone generated by `rays`.
pub fn hull_hrep<I: RingInt>(rank: usize, rays: &[Vector<I>]) -> HRep<I> {
    let gens: Vec<Vector<I>> = canonicalize_generators(rays);
    if gens.is_empty() {
        return HRep {
            rank,
            dim: 0,
            span_equations: (0..rank).map(|i| Vector::basis(rank, i)).collect(),
            facets: Vec::new(),
            pointed: true,
            pivots: Vec::new(),
        };
    }
    let span_equations = integer_nullspace(&gens, rank);
    let mut reduced = Matrix::from_rows(
        gens.iter()
            .map(|g| g.to_rational().into_coords())
            .collect(),
    );
    let pivots = rref(&mut reduced);
    let dim = pivots.len();

    let coords: Vec<Vector<I>> = gens
        .iter()
        .map(|g| Vector::new(pivots.iter().map(|&p| g.coords()[p].clone()).collect()))
        .collect();

    let (facets_local, pointed) = local_facets(dim, &coords);
    let facets = facets_local
        .into_iter()
        .map(|f| {
            let mut amb = vec![I::zero(); rank];
            for (j, &p) in pivots.iter().enumerate() {
                amb[p] = f.coords()[j].clone();
            }
            Vector::new(amb)
        })
        .collect();

    HRep {
        rank,
        dim,
        span_equations,
        facets,
        pointed,
        pivots,
    }
}

/// Facets of a full-dimensional cone given by generators in `Z^dim`, plus a
/// pointedness verdict.
fn local_facets<I: RingInt>(dim: usize, gens: &[Vector<I>]) -> (Vec<Vector<I>>, bool) {
    if dim == 0 {
        return (Vec::new(), true);
    }
    if dim == 1 {
        let any_pos = gens.iter().any(|g| g.coords()[0].is_positive());
        let any_neg = gens.iter().any(|g| g.coords()[0].is_negative());
        return match (any_pos, any_neg) {
            (true, false) => (vec![Vector::new(vec![I::one()])], true),
            (false, true) => (vec![Vector::new(vec![-I::one()])], true),
            _ => (Vec::new(), false),
        };
    }
    let mut facets: BTreeSet<Vector<I>> = BTreeSet::new();
    for subset in subsets_of_size(gens.len(), dim - 1) {
        let rows: Vec<Vector<I>> = subset.iter().map(|&i| gens[i].clone()).collect();
        let ns = integer_nullspace(&rows, dim);
        if ns.len() != 1 {
            continue;
        }
        let mut n = ns.into_iter().next().unwrap();
        let mut pos = false;
        let mut neg = false;
        for g in gens {
            let v = n.dot(g);
            if v.is_positive() {
                pos = true;
            } else if v.is_negative() {
                neg = true;
            }
        }
        if pos && neg {
            continue;
        }
        if neg {
            n = n.neg();
        }
        if pos || neg {
            facets.insert(n);
        }
    }
    let facet_vec: Vec<Vector<I>> = facets.into_iter().collect();
    let pointed = rational_rank(
        &facet_vec
            .iter()
            .map(Vector::to_rational)
            .collect::<Vec<_>>(),
    ) == dim;
    (facet_vec, pointed)
}

/// Extreme rays of `{x : eq·x = 0, ineq·x >= 0}`. The region must be
/// strongly convex; this holds whenever the description comes from
/// intersecting pointed cones.
pub fn extreme_rays<I: RingInt>(
    rank: usize,
    equalities: &[Vector<I>],
    inequalities: &[Vector<I>],
) -> Vec<Vector<I>> {
    let basis = integer_nullspace(equalities, rank);
    let m = basis.len();
    if m == 0 {
        return Vec::new();
    }
    // inequalities restricted to solution coordinates: row_i[j] = ineq_i · basis_j
    let local: Vec<Vector<I>> = inequalities
        .iter()
        .map(|q| Vector::new(basis.iter().map(|b| q.dot(b)).collect()))
        .collect();
    let local_nonzero: Vec<Vector<I>> = local.iter().filter(|r| !r.is_zero()).cloned().collect();
    assert_eq!(
        rational_rank(
            &local_nonzero
                .iter()
                .map(Vector::to_rational)
                .collect::<Vec<_>>()
        ),
        m,
        "extreme ray enumeration requires a strongly convex region"
    );

    let mut out: BTreeSet<Vector<I>> = BTreeSet::new();
    let mut push_candidate = |g: Vector<I>, local: &[Vector<I>]| {
        for cand in [g.clone(), g.neg()] {
            if local.iter().all(|r| !r.dot(&cand).is_negative()) {
                let tight: Vec<Vector<I>> = local
                    .iter()
                    .filter(|r| r.dot(&cand).is_zero())
                    .cloned()
                    .collect();
                let tight_rank =
                    rational_rank(&tight.iter().map(Vector::to_rational).collect::<Vec<_>>());
                if tight_rank == m - 1 {
                    out.insert(cand.primitive().expect("candidate ray is nonzero"));
                }
            }
        }
    };

    if m == 1 {
        push_candidate(Vector::new(vec![I::one()]), &local_nonzero);
    } else {
        for subset in subsets_of_size(local_nonzero.len(), m - 1) {
            let rows: Vec<Vector<I>> = subset.iter().map(|&i| local_nonzero[i].clone()).collect();
            let ns = integer_nullspace(&rows, m);
            if ns.len() != 1 {
                continue;
            }
            push_candidate(ns.into_iter().next().unwrap(), &local_nonzero);
        }
    }

    out.into_iter()
        .map(|y| {
            let mut amb = Vector::zero(rank);
            for (j, b) in basis.iter().enumerate() {
                amb = amb.add(&b.scale(&y.coords()[j]));
            }
            amb.primitive().expect("extreme ray is nonzero")
        })
        .collect()
}

/// Drops zero vectors, primitivizes, and removes duplicates keeping order of
/// first occurrence.
pub fn canonicalize_generators<I: RingInt>(rays: &[Vector<I>]) -> Vec<Vector<I>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in rays {
        if r.is_zero() {
            continue;
        }
        let p = r.primitive().expect("nonzero");
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

/// All subsets of `{0..n}` of the given size, in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // rightmost slot that can still advance
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + (i - 1) {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
