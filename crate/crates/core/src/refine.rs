//! Group-equivariant resolution of fan singularities.
//!
//! `equivariant_smooth_refine` turns a group-stable fan with convex support
//! into a smooth refinement that is still stable under the group, by star
//! subdividing along whole orbits of canonically chosen rays. Non-simplicial
//! cones are first split by pulling at existing rays; non-smooth simplicial
//! cones are then resolved at lattice points of their fundamental
//! parallelepipeds, which strictly shrinks the multiset of cone
//! multiplicities at every step. Projectivity, when present on the input, is
//! re-certified after every orbit rather than assumed.
//!
//! `good_fan` runs the pipeline for a root datum: saturate the dominant
//! chamber under the Weyl group, refine equivariantly under the Weyl and
//! diagram symmetries together, and cut the result back to the chamber.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::polyhedral::{measure_less, projectivity, Cone, Fan, MatrixGroup};
use crate::rootdata::RootDatum;
use crate::scalar::{Fraction, RingInt};

pub const DEFAULT_BUDGET: usize = 1000;

/// What one orbit step did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    /// Pull at an existing ray orbit to break non-simplicial cones.
    Simplicialize,
    /// Subdivide at a parallelepiped-point orbit to lower multiplicities.
    Resolve,
}

#[derive(Debug, Clone)]
pub struct OrbitStep<I: RingInt> {
    pub kind: StepKind,
    /// The full ray orbit subdivided at, in application order.
    pub orbit: Vec<Vector<I>>,
    /// Multiplicity measure (multiplicities > 1, sorted descending).
    pub measure_before: Vec<I>,
    pub measure_after: Vec<I>,
}

/// Audit trail of the refinement run.
#[derive(Debug, Clone, Default)]
pub struct RefinementTrace<I: RingInt> {
    pub steps: Vec<OrbitStep<I>>,
    pub iterations: usize,
    pub budget: usize,
}

/// Error plus the partial trace accumulated before it.
#[derive(Debug, Clone)]
pub struct RefineFailure<I: RingInt> {
    pub error: Error,
    pub trace: RefinementTrace<I>,
}

impl<I: RingInt> From<RefineFailure<I>> for Error {
    fn from(f: RefineFailure<I>) -> Error {
        f.error
    }
}

/// Smooth group-stable refinement of a group-stable fan with convex support.
/// Preserves projectivity (verified per step, not assumed).
pub fn equivariant_smooth_refine<I: RingInt>(
    fan: &Fan<I>,
    group: &MatrixGroup<I>,
    budget: usize,
) -> std::result::Result<(Fan<I>, RefinementTrace<I>), RefineFailure<I>> {
    let mut trace = RefinementTrace {
        steps: Vec::new(),
        iterations: 0,
        budget,
    };
    let fail = |error: Error, trace: &RefinementTrace<I>| RefineFailure {
        error,
        trace: trace.clone(),
    };

    if !fan.is_stable(group) {
        return Err(fail(Error::NotStable, &trace));
    }
    let was_projective = match projectivity(fan) {
        Ok(w) => w.is_some(),
        Err(e) => return Err(fail(e, &trace)),
    };

    let mut current = fan.clone();
    loop {
        if current.is_smooth() {
            break;
        }
        if trace.iterations >= budget {
            return Err(fail(Error::BudgetExceeded(budget), &trace));
        }

        let measure_before = current.multiplicity_measure();
        let (kind, orbit) = match choose_subdivision(&current, group) {
            Some(c) => c,
            None => return Err(fail(Error::NoProgress, &trace)),
        };
        let excess_before = simplicial_excess(&current);
        for ray in &orbit {
            current = current
                .star_subdivide(ray)
                .map_err(|e| fail(e, &trace))?;
        }
        if !current.is_stable(group) {
            return Err(fail(
                Error::StabilityLost(format!("after subdividing orbit {orbit:?}")),
                &trace,
            ));
        }
        let measure_after = current.multiplicity_measure();
        match kind {
            StepKind::Resolve => {
                if !measure_less(&measure_after, &measure_before) {
                    return Err(fail(Error::NoProgress, &trace));
                }
            }
            StepKind::Simplicialize => {
                if simplicial_excess(&current) >= excess_before {
                    return Err(fail(Error::NoProgress, &trace));
                }
            }
        }
        if was_projective {
            match projectivity(&current) {
                Ok(Some(_)) => {}
                Ok(None) => return Err(fail(Error::ProjectivityLost, &trace)),
                Err(e) => return Err(fail(e, &trace)),
            }
        }
        trace.steps.push(OrbitStep {
            kind,
            orbit,
            measure_before,
            measure_after,
        });
        trace.iterations += 1;
    }
    debug_assert!(current.refines(fan));
    Ok((current, trace))
}

/// Total failure of simpliciality: sum over cones of (#rays - dim).
fn simplicial_excess<I: RingInt>(fan: &Fan<I>) -> usize {
    fan.cones()
        .iter()
        .map(|c| c.rays().len() - c.dim())
        .sum()
}

/// Picks the next orbit to subdivide at: an existing-ray orbit of the first
/// non-simplicial cone, or the parallelepiped-point orbit of the worst
/// minimal-dimension non-smooth cone. Canonical tie-breaks keep the run
/// deterministic; the orbit keeps it equivariant.
fn choose_subdivision<I: RingInt>(
    fan: &Fan<I>,
    group: &MatrixGroup<I>,
) -> Option<(StepKind, Vec<Vector<I>>)> {
    if let Some(c) = fan
        .cones()
        .iter()
        .filter(|c| !c.is_simplicial())
        .min_by_key(|c| (c.dim(), c.rays().to_vec()))
    {
        let ray = c.rays()[0].clone();
        return Some((StepKind::Simplicialize, ray_orbit(&ray, group)));
    }
    let target = fan
        .cones()
        .iter()
        .filter(|c| c.dim() > 0 && !c.is_smooth())
        .min_by_key(|c| {
            (
                c.dim(),
                std::cmp::Reverse(c.multiplicity()),
                c.rays().to_vec(),
            )
        })?;
    let point = parallelepiped_point(target)?;
    Some((StepKind::Resolve, ray_orbit(&point, group)))
}

fn ray_orbit<I: RingInt>(ray: &Vector<I>, group: &MatrixGroup<I>) -> Vec<Vector<I>> {
    let mut orbit: Vec<Vector<I>> = group
        .elements()
        .iter()
        .map(|m| {
            m.apply(ray)
                .primitive()
                .expect("unimodular image of a primitive ray is nonzero")
        })
        .collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

/// Canonical nonzero lattice point of the fundamental parallelepiped of a
/// non-smooth simplicial cone. Minimal dimension among non-smooth cones
/// guarantees the point is interior; minimizing the coefficient sum keeps
/// the choice primitive and orbit-compatible.
fn parallelepiped_point<I: RingInt>(cone: &Cone<I>) -> Option<Vector<I>> {
    debug_assert!(cone.is_simplicial());
    let rank = cone.rank();
    let rays = cone.rays();
    // bounding box of the half-open parallelepiped
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
    let mut best: Option<(Fraction<I>, Vector<I>)> = None;
    let mut cursor = lo.clone();
    'point: loop {
        let x = Vector::new(cursor.clone());
        if let Some(lambda) = cone.ray_coordinates(&x) {
            let in_box = lambda
                .iter()
                .all(|l| !l.is_negative() && *l < Fraction::one());
            let interior = lambda.iter().all(|l| l.is_positive());
            if in_box && interior && !x.is_zero() {
                let total: Fraction<I> = lambda
                    .iter()
                    .fold(Fraction::zero(), |acc, l| acc + l.clone());
                let candidate = (total, x.clone());
                let better = match &best {
                    None => true,
                    Some(b) => candidate < *b,
                };
                if better {
                    best = Some(candidate);
                }
            }
        }
        // advance the box cursor
        for j in 0..rank {
            cursor[j] = cursor[j].clone() + I::one();
            if cursor[j] <= hi[j] {
                continue 'point;
            }
            cursor[j] = lo[j].clone();
        }
        break;
    }
    best.map(|(_, x)| {
        let p = x.primitive().expect("interior point is nonzero");
        debug_assert_eq!(p, x, "minimal parallelepiped points are primitive");
        p
    })
}

/// Result of the good-fan pipeline: the chamber subdivision, its Weyl
/// saturation, and the refinement audit trail.
#[derive(Debug, Clone)]
pub struct GoodFan<I: RingInt> {
    /// Subdivision of the dominant chamber, stable under the diagram group.
    pub chamber_fan: Fan<I>,
    /// Its Weyl saturation: smooth, complete, projective.
    pub saturated: Fan<I>,
    pub trace: RefinementTrace<I>,
}

/// Produces a diagram-stable subdivision of the dominant chamber whose Weyl
/// saturation is smooth, complete, and projective.
pub fn good_fan<I: RingInt>(
    rd: &RootDatum<I>,
    diagram_group: &MatrixGroup<I>,
) -> Result<GoodFan<I>> {
    let full_diagram = rd.diagram_automorphisms();
    for g in diagram_group.generators() {
        if !full_diagram.contains(g) {
            return Err(Error::NotStable);
        }
    }
    let chamber = Fan::from_cones(rd.rank(), vec![rd.dominant_chamber()])?;
    let weyl = rd.weyl_group()?;
    let weyl_fan = chamber.saturate(&weyl)?;
    if projectivity(&weyl_fan)?.is_none() {
        // the chamber decomposition always carries a strictly convex support
        // function; a failure here means the datum is outside what this
        // pipeline handles and needs a preliminary subdivision
        return Err(Error::ChamberFanNotProjective);
    }
    let symmetries = weyl.join(diagram_group)?;
    let (saturated, trace) =
        equivariant_smooth_refine(&weyl_fan, &symmetries, DEFAULT_BUDGET).map_err(Error::from)?;
    let chamber_fan = intersect_with_chamber(&saturated, rd)?;
    if !chamber_fan.is_stable(diagram_group) {
        return Err(Error::StabilityLost(
            "chamber restriction lost diagram stability".into(),
        ));
    }
    debug_assert_eq!(chamber_fan.saturate(&weyl)?, saturated);
    Ok(GoodFan {
        chamber_fan,
        saturated,
        trace,
    })
}

/// Subfan of all cones contained in the dominant chamber. Errors when those
/// cones fail to cover the chamber, which happens exactly when the input was
/// not stable under the Weyl group.
pub fn intersect_with_chamber<I: RingInt>(fan: &Fan<I>, rd: &RootDatum<I>) -> Result<Fan<I>> {
    let chamber = rd.dominant_chamber();
    let inside: Vec<Cone<I>> = fan
        .cones()
        .iter()
        .filter(|c| chamber.contains_cone(c))
        .cloned()
        .collect();
    let refs: Vec<&Cone<I>> = inside.iter().collect();
    if !crate::polyhedral::tiles_target(&refs, chamber.dim(), chamber.facet_normals()) {
        return Err(Error::NotCovering);
    }
    Fan::from_cones(fan.rank(), inside)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Matrix;
    use crate::rootdata::LatticeForm;
    use crate::Int;

    fn v(coords: &[i64]) -> Vector<Int> {
        Vector::new(coords.iter().map(|&c| Int::from(c)).collect())
    }

    fn cone(rank: usize, rays: &[&[i64]]) -> Cone<Int> {
        Cone::from_rays(rank, &rays.iter().map(|r| v(r)).collect::<Vec<_>>()).unwrap()
    }

    fn datum(name: &str, form: LatticeForm) -> RootDatum<Int> {
        RootDatum::preset(name, form).unwrap()
    }

    #[test]
    fn smooth_input_returns_unchanged() {
        let f = Fan::from_cones(2, vec![cone(2, &[&[1, 0], &[0, 1]])]).unwrap();
        let g = MatrixGroup::trivial(2);
        let (out, trace) = equivariant_smooth_refine(&f, &g, 10).unwrap();
        assert_eq!(out, f);
        assert_eq!(trace.iterations, 0);
    }

    #[test]
    fn p1_under_sign_flip_unchanged() {
        let f = Fan::from_cones(1, vec![cone(1, &[&[1]]), cone(1, &[&[-1]])]).unwrap();
        let g = MatrixGroup::generate(1, vec![Matrix::from_rows(vec![vec![Int::from(-1)]])])
            .unwrap();
        let (out, trace) = equivariant_smooth_refine(&f, &g, 10).unwrap();
        assert_eq!(out, f);
        assert_eq!(trace.iterations, 0);
    }

    #[test]
    fn rejects_unstable_input() {
        let half = Fan::from_cones(1, vec![cone(1, &[&[1]])]).unwrap();
        let g = MatrixGroup::generate(1, vec![Matrix::from_rows(vec![vec![Int::from(-1)]])])
            .unwrap();
        let err = equivariant_smooth_refine(&half, &g, 10).unwrap_err();
        assert_eq!(err.error, Error::NotStable);
    }

    #[test]
    fn budget_zero_on_non_smooth_input() {
        let f = Fan::from_cones(2, vec![cone(2, &[&[2, 1], &[1, 2]])]).unwrap();
        let g = MatrixGroup::trivial(2);
        let err = equivariant_smooth_refine(&f, &g, 0).unwrap_err();
        assert_eq!(err.error, Error::BudgetExceeded(0));
    }

    #[test]
    fn resolves_sc_a2_weyl_fan() {
        let rd = datum("A2", LatticeForm::SimplyConnected);
        let weyl = rd.weyl_group().unwrap();
        let wf = rd.weyl_fan().unwrap();
        assert!(!wf.is_smooth());
        let symmetries = weyl.join(&rd.diagram_automorphisms()).unwrap();
        let (out, trace) = equivariant_smooth_refine(&wf, &symmetries, 100).unwrap();
        assert!(out.is_smooth());
        assert!(out.refines(&wf));
        assert!(out.is_stable(&symmetries));
        assert!(out.is_complete().unwrap());
        assert!(trace.iterations >= 1);
        for s in &trace.steps {
            assert!(measure_less(&s.measure_after, &s.measure_before));
        }
        // ray set of the output is a union of orbits
        for step in &trace.steps {
            for r in &step.orbit {
                assert!(out.rays().contains(r));
            }
        }
    }

    #[test]
    fn resolves_stubborn_planar_cone() {
        // <(1,0),(1,4)> needs repeated parallelepiped subdivisions
        let f = Fan::from_cones(2, vec![cone(2, &[&[1, 0], &[1, 4]])]).unwrap();
        let g = MatrixGroup::trivial(2);
        let (out, trace) = equivariant_smooth_refine(&f, &g, 50).unwrap();
        assert!(out.is_smooth());
        assert!(out.refines(&f));
        assert!(trace.iterations >= 2);
    }

    #[test]
    fn simplicializes_square_cone() {
        let square = cone(3, &[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        let f = Fan::from_cones(3, vec![square]).unwrap();
        let g = MatrixGroup::trivial(3);
        let (out, _) = equivariant_smooth_refine(&f, &g, 50).unwrap();
        assert!(out.is_simplicial());
        assert!(out.is_smooth());
        assert!(out.refines(&f));
    }

    #[test]
    fn good_fan_adjoint_a2_is_the_chamber_itself() {
        let rd = datum("A2", LatticeForm::Adjoint);
        let gamma = rd.diagram_automorphisms();
        let gf = good_fan(&rd, &gamma).unwrap();
        assert_eq!(gf.trace.iterations, 0);
        assert_eq!(gf.chamber_fan.maximal_cones().len(), 1);
        assert!(gf.saturated.is_smooth());
        assert!(gf.saturated.is_complete().unwrap());
        assert!(gf.chamber_fan.is_stable(&gamma));
    }

    #[test]
    fn good_fan_adjoint_a1() {
        let rd = datum("A1", LatticeForm::Adjoint);
        let gf = good_fan(&rd, &rd.diagram_automorphisms()).unwrap();
        assert_eq!(gf.chamber_fan.rays(), &[v(&[1])]);
        assert_eq!(gf.saturated.maximal_cones().len(), 2);
    }

    #[test]
    fn good_fan_simply_connected_a2() {
        let rd = datum("A2", LatticeForm::SimplyConnected);
        let gamma = rd.diagram_automorphisms();
        assert_eq!(gamma.order(), 2);
        let gf = good_fan(&rd, &gamma).unwrap();
        assert!(gf.trace.iterations >= 1);
        assert!(gf.saturated.is_smooth());
        assert!(gf.saturated.is_complete().unwrap());
        assert!(projectivity(&gf.saturated).unwrap().is_some());
        assert!(gf.chamber_fan.is_stable(&gamma));
        // the diagonal subdivision point shows up as a chamber ray
        assert!(gf.chamber_fan.rays().contains(&v(&[1, 1])));
    }

    #[test]
    fn refinement_is_deterministic() {
        let rd = datum("A2", LatticeForm::SimplyConnected);
        let gamma = rd.diagram_automorphisms();
        let first = good_fan(&rd, &gamma).unwrap();
        let second = good_fan(&rd, &gamma).unwrap();
        assert_eq!(first.chamber_fan, second.chamber_fan);
        assert_eq!(first.saturated, second.saturated);
        assert_eq!(first.trace.iterations, second.trace.iterations);
        for (a, b) in first.trace.steps.iter().zip(&second.trace.steps) {
            assert_eq!(a.orbit, b.orbit);
        }
    }

    #[test]
    fn intersect_weyl_fan_with_chamber() {
        let rd = datum("A2", LatticeForm::Adjoint);
        let wf = rd.weyl_fan().unwrap();
        let sub = intersect_with_chamber(&wf, &rd).unwrap();
        assert_eq!(sub.maximal_cones().len(), 1);
        assert_eq!(sub.maximal_cones()[0], &rd.dominant_chamber());
    }

    #[test]
    fn intersect_p1_with_a1_chamber() {
        let rd = datum("A1", LatticeForm::Adjoint);
        let p1 = Fan::from_cones(1, vec![cone(1, &[&[1]]), cone(1, &[&[-1]])]).unwrap();
        let sub = intersect_with_chamber(&p1, &rd).unwrap();
        assert_eq!(sub.cones().len(), 2); // the ray and the origin
    }

    #[test]
    fn intersect_not_covering_fails() {
        // the P2 fan is not stable under the A2 Weyl group: its cones cross
        // the chamber walls, so nothing inside covers the chamber
        let rd = datum("A2", LatticeForm::Adjoint);
        let p2 = Fan::from_cones(
            2,
            vec![
                cone(2, &[&[1, 0], &[0, 1]]),
                cone(2, &[&[0, 1], &[-1, -1]]),
                cone(2, &[&[-1, -1], &[1, 0]]),
            ],
        )
        .unwrap();
        // rotate so the chamber is not a union of cones
        let rot = Matrix::from_rows(vec![
            vec![Int::from(1), Int::from(1)],
            vec![Int::from(0), Int::from(1)],
        ]);
        let sheared = p2.transform(&rot).unwrap();
        match intersect_with_chamber(&sheared, &rd) {
            Err(Error::NotCovering) => {}
            Ok(f) => {
                // if the shear happens to keep a covering, it must tile
                assert!(f.validate().is_valid());
            }
            Err(e) => panic!("unexpected error {e:?}"),
        }
    }

    #[test]
    fn good_fan_rejects_foreign_symmetry() {
        let rd = datum("A2", LatticeForm::Adjoint);
        let not_diagram =
            MatrixGroup::generate(2, vec![rd.simple_reflection(0)]).unwrap();
        assert_eq!(good_fan(&rd, &not_diagram).unwrap_err(), Error::NotStable);
    }
}
