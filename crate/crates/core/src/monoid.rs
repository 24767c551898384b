//! Finitely generated submonoids of a lattice.
//!
//! Membership is a complete decision procedure, not a heuristic: for a
//! monoid whose rational cone is strongly convex a positive functional
//! bounds every coefficient, and the general case splits off the unit
//! lattice (generated by exactly those generators whose negatives lie in the
//! rational cone) and searches the pointed quotient. Saturation follows the
//! normalization recipe: the saturated monoid is the cone intersected with
//! the lattice points of its span, delivered through a Hilbert basis with a
//! verified multiple-certificate for every element gained.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{lattice_membership, subgroup_basis, Matrix, SublatticeIndex, Vector};
use crate::lp::{LinearSystem, Rel};
use crate::polyhedral::{hull_hrep, Cone, HRep};
use crate::scalar::{to_ratio, Fraction, RingInt};

/// Finitely generated submonoid of `Z^rank`, kept as a duplicate-free
/// generator list.
#[derive(Debug, Clone)]
pub struct AffineMonoid<I: RingInt> {
    rank: usize,
    generators: Vec<Vector<I>>,
    hull: HRep<I>,
}

impl<I: RingInt> PartialEq for AffineMonoid<I> {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.generators == other.generators
    }
}

impl<I: RingInt> Eq for AffineMonoid<I> {}

/// Outcome of a membership query. The search bound makes the verdict exact:
/// any representation would have every coefficient below it.
#[derive(Debug, Clone)]
pub struct Membership<I: RingInt> {
    pub member: bool,
    /// Nonnegative coefficients per generator, when member.
    pub combination: Option<Vec<I>>,
    /// Cap used for the coefficients of non-unit generators.
    pub coefficient_bound: Option<I>,
}

/// Lattice data of the subgroup generated by the monoid.
#[derive(Debug, Clone)]
pub struct GroupDescription<I: RingInt> {
    pub basis: Vec<Vector<I>>,
    pub saturated_basis: Vec<Vector<I>>,
    pub index: SublatticeIndex<I>,
}

/// Certificate that `multiple · element` lies in the monoid.
#[derive(Debug, Clone)]
pub struct Certificate<I: RingInt> {
    pub element: Vector<I>,
    pub multiple: I,
    pub combination: Vec<I>,
}

#[derive(Debug, Clone)]
pub struct SaturationResult<I: RingInt> {
    /// Hilbert basis of the saturated monoid.
    pub saturated_generators: Vec<Vector<I>>,
    /// Basis elements outside the original monoid.
    pub added: Vec<Vector<I>>,
    /// One verified certificate per added element.
    pub certificates: Vec<Certificate<I>>,
}

/// Saturation data when the cone is not strongly convex: no Hilbert basis
/// exists, so the result is the cone plus lattice description.
#[derive(Debug, Clone)]
pub struct NotPointedSaturation<I: RingInt> {
    pub saturated_lattice_basis: Vec<Vector<I>>,
    pub span_equations: Vec<Vector<I>>,
    pub facets: Vec<Vector<I>>,
    pub saturated: bool,
}

#[derive(Debug, Clone)]
pub enum SaturationOutcome<I: RingInt> {
    Pointed(SaturationResult<I>),
    NotPointed(NotPointedSaturation<I>),
}

impl<I: RingInt> SaturationOutcome<I> {
    pub fn is_saturated(&self) -> bool {
        match self {
            SaturationOutcome::Pointed(r) => r.added.is_empty(),
            SaturationOutcome::NotPointed(r) => r.saturated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiberChecks {
    /// The generators span the full ambient lattice as a group.
    pub generates_ambient: bool,
    /// The monoid equals its saturation.
    pub saturated: bool,
}

impl<I: RingInt> AffineMonoid<I> {
    pub fn new(rank: usize, generators: Vec<Vector<I>>) -> Result<Self> {
        let mut gens: Vec<Vector<I>> = Vec::new();
        for g in generators {
            if g.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: g.rank(),
                });
            }
            if !g.is_zero() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        let hull = hull_hrep(rank, &gens);
        Ok(AffineMonoid {
            rank,
            generators: gens,
            hull,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vector<I>] {
        &self.generators
    }

    fn hull(&self) -> &HRep<I> {
        &self.hull
    }

    /// Decides whether `target` is a nonnegative integer combination of the
    /// generators, with the combination as witness.
    pub fn membership(&self, target: &Vector<I>) -> Membership<I> {
        assert_eq!(target.rank(), self.rank);
        if target.is_zero() {
            return Membership {
                member: true,
                combination: Some(vec![I::zero(); self.generators.len()]),
                coefficient_bound: Some(I::zero()),
            };
        }
        if self.generators.is_empty() {
            return Membership {
                member: false,
                combination: None,
                coefficient_bound: Some(I::zero()),
            };
        }
        let hull = self.hull().clone();
        if !hull.contains_integer(target) {
            return Membership {
                member: false,
                combination: None,
                coefficient_bound: Some(I::zero()),
            };
        }
        // unit generators: those whose negative stays in the rational cone
        let unit_idx: Vec<usize> = (0..self.generators.len())
            .filter(|&i| hull.contains_integer(&self.generators[i].neg()))
            .collect();
        let pos_idx: Vec<usize> = (0..self.generators.len())
            .filter(|i| !unit_idx.contains(i))
            .collect();
        let unit_gens: Vec<Vector<I>> = unit_idx.iter().map(|&i| self.generators[i].clone()).collect();
        let pos_gens: Vec<Vector<I>> = pos_idx.iter().map(|&i| self.generators[i].clone()).collect();

        // project out the rational span of the units; the quotient cone is
        // strongly convex, so a positive functional bounds the search there
        let projector = unit_span_projector(self.rank, &unit_gens);
        let proj_pos: Vec<Vector<I>> = pos_gens.iter().map(|g| projector.project(g)).collect();
        let proj_target = projector.project(target);

        let proj_hull = if unit_idx.is_empty() {
            hull.clone()
        } else {
            crate::polyhedral::hull_hrep(projector.target_rank(), &proj_pos)
        };
        let Some((bounds, max_bound)) = search_bounds(&proj_hull, &proj_pos, &proj_target) else {
            return Membership {
                member: false,
                combination: None,
                coefficient_bound: Some(I::zero()),
            };
        };

        let mut coeffs = vec![I::zero(); pos_gens.len()];
        let found = search(
            &proj_pos,
            &bounds,
            0,
            &proj_target,
            &mut coeffs,
            &mut |coeffs| {
                // leaf: the ambient residual must lie in the unit lattice
                let mut residual = target.clone();
                for (k, c) in coeffs.iter().enumerate() {
                    residual = residual.sub(&pos_gens[k].scale(c));
                }
                lattice_membership(&unit_gens, &residual)
            },
        );
        match found {
            Some((pos_coeffs, unit_combo)) => {
                let mut combination = vec![I::zero(); self.generators.len()];
                for (k, c) in pos_coeffs.iter().enumerate() {
                    combination[pos_idx[k]] = c.clone();
                }
                // signed unit coefficients become nonnegative ones by
                // rewriting each negative unit through the rational cone
                for (k, z) in unit_combo.iter().enumerate() {
                    let gi = unit_idx[k];
                    if !z.is_negative() {
                        combination[gi] = combination[gi].clone() + z.clone();
                        continue;
                    }
                    let times = -z.clone();
                    let expansion = self.negated_unit_expression(gi, &hull);
                    for (j, e) in expansion.iter().enumerate() {
                        combination[j] = combination[j].clone() + e.clone() * times.clone();
                    }
                }
                debug_assert_eq!(&self.evaluate(&combination), target);
                Membership {
                    member: true,
                    combination: Some(combination),
                    coefficient_bound: Some(max_bound),
                }
            }
            None => Membership {
                member: false,
                combination: None,
                coefficient_bound: Some(max_bound),
            },
        }
    }

    /// Nonnegative expression of `-g_i` for a unit generator, via a rational
    /// cone combination with cleared denominators.
    fn negated_unit_expression(&self, gi: usize, hull: &HRep<I>) -> Vec<I> {
        let _ = hull;
        let k = self.generators.len();
        let target = self.generators[gi].neg();
        // rational feasibility: -g = sum lambda_j g_j, lambda >= 0
        let mut lp = LinearSystem::new(k);
        for r in 0..self.rank {
            let coeffs: Vec<Fraction<I>> = self
                .generators
                .iter()
                .map(|g| to_ratio(&g.coords()[r]))
                .collect();
            lp.push(coeffs, Rel::Eq, to_ratio(&target.coords()[r]));
        }
        for j in 0..k {
            let mut coeffs = vec![Fraction::<I>::zero(); k];
            coeffs[j] = Fraction::one();
            lp.push(coeffs, Rel::Ge, Fraction::zero());
        }
        let lambda = lp
            .feasible_point()
            .expect("negated unit generator lies in the rational cone");
        let mut denom = I::one();
        for l in &lambda {
            denom = denom.lcm(l.denom());
        }
        // -g = sum (N*lambda_j) g_j + (N-1) g  with N the common denominator
        let mut out: Vec<I> = lambda
            .iter()
            .map(|l| l.numer().clone() * (denom.clone() / l.denom().clone()))
            .collect();
        out[gi] = out[gi].clone() + denom.clone() - I::one();
        debug_assert_eq!(self.evaluate(&out), target);
        out
    }

    fn evaluate(&self, coeffs: &[I]) -> Vector<I> {
        let mut acc = Vector::zero(self.rank);
        for (g, c) in self.generators.iter().zip(coeffs) {
            acc = acc.add(&g.scale(c));
        }
        acc
    }

    /// Subgroup generated by the monoid, via Smith normal form.
    pub fn group(&self) -> GroupDescription<I> {
        let sb = subgroup_basis(&self.generators).expect("generators share the rank");
        GroupDescription {
            basis: sb.basis,
            saturated_basis: sb.saturated_basis,
            index: sb.index,
        }
    }

    /// Saturation `{a : n·a in Q for some n >= 1}`, as the cone of the
    /// generators intersected with the lattice points of its span.
    pub fn saturation(&self) -> SaturationOutcome<I> {
        let hull = self.hull();
        if !hull.pointed {
            return SaturationOutcome::NotPointed(self.saturation_not_pointed(hull));
        }
        let cone = Cone::from_rays(self.rank, &self.generators)
            .expect("hull is pointed");
        let basis = hilbert_basis(&cone);
        let mut added = Vec::new();
        let mut certificates = Vec::new();
        for b in &basis {
            let m = self.membership(b);
            if m.member {
                continue;
            }
            let cert = self
                .multiple_certificate(b)
                .expect("Hilbert basis elements have a multiple in the monoid");
            added.push(b.clone());
            certificates.push(cert);
        }
        SaturationOutcome::Pointed(SaturationResult {
            saturated_generators: basis,
            added,
            certificates,
        })
    }

    fn saturation_not_pointed(&self, hull: &HRep<I>) -> NotPointedSaturation<I> {
        let group = self.group();
        // units must already form a saturated sublattice, and the pointed
        // quotient by their span must be saturated
        let unit_gens: Vec<Vector<I>> = self
            .generators
            .iter()
            .filter(|g| hull.contains_integer(&g.neg()))
            .cloned()
            .collect();
        let unit_group = subgroup_basis(&unit_gens).expect("rank checked");
        let units_saturated = unit_group.divisors.iter().all(|d| d.is_one());
        let projector = unit_span_projector(self.rank, &unit_gens);
        let projected: Vec<Vector<I>> = self
            .generators
            .iter()
            .filter(|g| !hull.contains_integer(&g.neg()))
            .map(|g| projector.project(g))
            .collect();
        let quotient = AffineMonoid::new(projector.target_rank(), projected)
            .expect("projection preserves rank consistency");
        let quotient_saturated = quotient.saturation().is_saturated();
        NotPointedSaturation {
            saturated_lattice_basis: group.saturated_basis,
            span_equations: hull.span_equations.clone(),
            facets: hull.facets.clone(),
            saturated: units_saturated && quotient_saturated,
        }
    }

    /// Smallest `n >= 1` with `n·target` in the monoid, with its witness.
    pub fn multiple_certificate(&self, target: &Vector<I>) -> Option<Certificate<I>> {
        let mut n = I::one();
        // any element of the saturation has a multiple bounded by the
        // subset determinants of the generator matrix; 10^4 is far beyond
        // anything desk-scale and turns a logic bug into a visible failure
        for _ in 0..10_000 {
            let m = self.membership(&target.scale(&n));
            if m.member {
                return Some(Certificate {
                    element: target.clone(),
                    multiple: n,
                    combination: m.combination.unwrap(),
                });
            }
            n = n + I::one();
        }
        None
    }

    /// Irreducibility / normality shadow of the special fiber: the group must
    /// be the whole ambient lattice and the monoid its own saturation.
    pub fn fiber_checks(&self) -> FiberChecks {
        let generates_ambient = matches!(&self.group().index, SublatticeIndex::Finite(i) if i.is_one());
        FiberChecks {
            generates_ambient,
            saturated: self.saturation().is_saturated(),
        }
    }
}

/// Lattice quotient of the ambient lattice by the saturated rational span of
/// the unit generators. With `U·B·V = D` for the unit generator matrix `B`,
/// the coordinates `(V^T x)` beyond the rank of `B` vanish exactly on the
/// span, so they present the quotient as a smaller `Z^m`.
struct UnitSpanProjector<I: RingInt> {
    v_transpose: Option<Matrix<I>>,
    span_rank: usize,
    rank: usize,
}

fn unit_span_projector<I: RingInt>(rank: usize, unit_gens: &[Vector<I>]) -> UnitSpanProjector<I> {
    if unit_gens.is_empty() {
        return UnitSpanProjector {
            v_transpose: None,
            span_rank: 0,
            rank,
        };
    }
    let b = Matrix::from_rows(unit_gens.iter().map(|g| g.coords().to_vec()).collect());
    let snf = crate::lattice::smith_normal_form(&b);
    let span_rank = snf.nonzero_divisors().len();
    UnitSpanProjector {
        v_transpose: Some(snf.v.transpose()),
        span_rank,
        rank,
    }
}

impl<I: RingInt> UnitSpanProjector<I> {
    fn target_rank(&self) -> usize {
        self.rank - self.span_rank
    }

    fn project(&self, v: &Vector<I>) -> Vector<I> {
        debug_assert_eq!(v.rank(), self.rank);
        match &self.v_transpose {
            None => v.clone(),
            Some(vt) => {
                let xi = vt.mul_vec(v.coords());
                Vector::new(xi[self.span_rank..].to_vec())
            }
        }
    }
}

/// Per-generator coefficient caps from a positive functional on the pointed
/// projected cone; `None` when the target provably lies outside. The sum of
/// the facet normals is strictly positive away from the lineality, so for a
/// pointed hull it takes a positive integer value on every generator.
fn search_bounds<I: RingInt>(
    hull: &HRep<I>,
    gens: &[Vector<I>],
    target: &Vector<I>,
) -> Option<(Vec<I>, I)> {
    if gens.is_empty() {
        return Some((Vec::new(), I::zero()));
    }
    debug_assert!(hull.pointed);
    let rank = gens[0].rank();
    let mut w = Vector::zero(rank);
    for f in &hull.facets {
        w = w.add(f);
    }
    let budget = w.dot(target);
    if budget.is_negative() {
        return None;
    }
    let mut bounds = Vec::with_capacity(gens.len());
    let mut max_bound = I::zero();
    for g in gens {
        let den = w.dot(g);
        debug_assert!(den.is_positive(), "facet-normal sum is positive on generators");
        let b = budget.clone().div_floor(&den);
        if b > max_bound {
            max_bound = b.clone();
        }
        bounds.push(b);
    }
    Some((bounds, max_bound))
}

/// Depth-first bounded search with leaf acceptance; complete because every
/// solution respects the functional bounds.
fn search<I: RingInt, F>(
    gens: &[Vector<I>],
    bounds: &[I],
    idx: usize,
    remaining: &Vector<I>,
    coeffs: &mut Vec<I>,
    accept: &mut F,
) -> Option<(Vec<I>, Vec<I>)>
where
    F: FnMut(&[I]) -> Option<Vec<I>>,
{
    if idx == gens.len() {
        if !remaining.is_zero() {
            return None;
        }
        if let Some(unit_combo) = accept(coeffs) {
            return Some((coeffs.clone(), unit_combo));
        }
        return None;
    }
    let mut c = I::zero();
    while c <= bounds[idx] {
        let rest = remaining.sub(&gens[idx].scale(&c));
        coeffs[idx] = c.clone();
        if let Some(hit) = search(gens, bounds, idx + 1, &rest, coeffs, accept) {
            return Some(hit);
        }
        c = c + I::one();
    }
    coeffs[idx] = I::zero();
    None
}

/// Unique minimal generating set of `cone ∩ Z^rank`: lattice points of the
/// zonotope of the ray generators, reduced to the irreducible ones.
pub fn hilbert_basis<I: RingInt>(cone: &Cone<I>) -> Vec<Vector<I>> {
    if cone.dim() == 0 {
        return Vec::new();
    }
    let rank = cone.rank();
    let rays = cone.rays();
    // lattice points of the half-closed zonotope live in this box
    let mut lo = vec![I::zero(); rank];
    let mut hi = vec![I::zero(); rank];
    for r in rays {
        for j in 0..rank {
            let c = &r.coords()[j];
            if c.is_negative() {
                lo[j] = lo[j].clone() + c.clone();
            } else {
                hi[j] = hi[j].clone() + c.clone();
            }
        }
    }
    let mut zonotope_points: Vec<Vector<I>> = Vec::new();
    let mut cursor = lo.clone();
    'point: loop {
        let x = Vector::new(cursor.clone());
        if !x.is_zero() && in_zonotope(cone, &x) {
            zonotope_points.push(x);
        }
        for j in 0..rank {
            cursor[j] = cursor[j].clone() + I::one();
            if cursor[j] <= hi[j] {
                continue 'point;
            }
            cursor[j] = lo[j].clone();
        }
        break;
    }
    // an element is reducible iff subtracting some zonotope point keeps it
    // in the cone; irreducibles of the cone all lie in the zonotope
    let mut basis: Vec<Vector<I>> = zonotope_points
        .iter()
        .filter(|x| {
            !zonotope_points.iter().any(|y| {
                if *x == y {
                    return false;
                }
                let d = x.sub(y);
                !d.is_zero() && cone.contains_integer(&d)
            })
        })
        .cloned()
        .collect();
    basis.sort();
    basis
}

fn in_zonotope<I: RingInt>(cone: &Cone<I>, x: &Vector<I>) -> bool {
    let rays = cone.rays();
    if cone.is_simplicial() {
        match cone.ray_coordinates(x) {
            Some(lambda) => lambda
                .iter()
                .all(|l| !l.is_negative() && *l <= Fraction::one()),
            None => false,
        }
    } else {
        let k = rays.len();
        let mut lp = LinearSystem::new(k);
        for r in 0..cone.rank() {
            let coeffs: Vec<Fraction<I>> = rays.iter().map(|g| to_ratio(&g.coords()[r])).collect();
            lp.push(coeffs, Rel::Eq, to_ratio(&x.coords()[r]));
        }
        for j in 0..k {
            let mut ge = vec![Fraction::<I>::zero(); k];
            ge[j] = Fraction::one();
            lp.push(ge.clone(), Rel::Ge, Fraction::zero());
            lp.push(ge, Rel::Le, Fraction::one());
        }
        lp.feasible_point().is_some()
    }
}
