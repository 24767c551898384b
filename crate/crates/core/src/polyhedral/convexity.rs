//! Support-coverage certificates and strict convexity of piecewise linear
//! functions on fans.
//!
//! `tiles_target` certifies that a collection of cones from a valid fan fills
//! a convex target: pieces must be pure of the target dimension, every
//! codimension-one face either pairs up two pieces or lies on the target
//! boundary, and the piece graph is connected. Completeness is the special
//! case of a boundaryless target.
//!
//! `projectivity` decides existence of a strictly convex piecewise linear
//! support function by exact rational feasibility, one linear functional per
//! maximal cone, and returns the functionals as a witness. The witness is
//! re-checkable by plain arithmetic via [`verify_support_function`].

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{solve, Matrix, Vector};
use crate::lp::{LinearSystem, Rel};
use crate::scalar::{to_ratio, Fraction, RingInt};

use super::cone::Cone;
use super::fan::Fan;
use super::hrep::hull_hrep;

/// Does the cone collection tile a convex target of dimension `target_dim`
/// bounded by `target_facets` (empty for a complete target)? Assumes every
/// piece is contained in the target and the pieces come from one valid fan.
pub fn tiles_target<I: RingInt>(
    cones: &[&Cone<I>],
    target_dim: usize,
    target_facets: &[Vector<I>],
) -> bool {
    if target_dim == 0 {
        return cones.iter().any(|c| c.dim() == 0);
    }
    let full: Vec<&Cone<I>> = cones
        .iter()
        .filter(|c| c.dim() == target_dim)
        .copied()
        .collect();
    if full.is_empty() {
        return false;
    }
    // purity: everything lies under a full-dimensional piece
    for c in cones {
        if !full.iter().any(|f| f.contains_cone(c)) {
            return false;
        }
    }
    // wall accounting
    let mut walls: BTreeMap<Vec<Vector<I>>, Vec<usize>> = BTreeMap::new();
    for (i, f) in full.iter().enumerate() {
        for w in f.facet_faces() {
            walls.entry(w.rays().to_vec()).or_default().push(i);
        }
    }
    let mut uf: Vec<usize> = (0..full.len()).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for (wall_rays, owners) in &walls {
        match owners.len() {
            2 => {
                let (a, b) = (find(&mut uf, owners[0]), find(&mut uf, owners[1]));
                uf[a] = b;
            }
            1 => {
                // must lie on the target boundary
                let on_boundary = target_facets
                    .iter()
                    .any(|tf| wall_rays.iter().all(|r| tf.dot(r).is_zero()));
                if !on_boundary {
                    return false;
                }
            }
            _ => return false,
        }
    }
    let root = find(&mut uf, 0);
    (0..full.len()).all(|i| find(&mut uf, i) == root)
}

/// Strictly convex piecewise linear support function: one rational linear
/// functional per maximal cone.
#[derive(Debug, Clone)]
pub struct SupportFunction<I: RingInt> {
    pub functionals: Vec<(Cone<I>, Vector<Fraction<I>>)>,
}

/// Decides projectivity. `Err(NonConvexSupport)` when the support is not
/// convex; otherwise `Some` witness iff a strictly convex support function
/// exists.
pub fn projectivity<I: RingInt>(fan: &Fan<I>) -> Result<Option<SupportFunction<I>>> {
    let hull = hull_hrep(fan.rank(), fan.rays());
    let all: Vec<&Cone<I>> = fan.cones().iter().collect();
    if !tiles_target(&all, hull.dim, &hull.facets) {
        return Err(Error::NonConvexSupport);
    }
    let maximal: Vec<&Cone<I>> = fan.maximal_cones();
    if hull.dim == 0 {
        return Ok(Some(SupportFunction {
            functionals: vec![(Cone::zero(fan.rank()), Vector::rational_zero(fan.rank()))],
        }));
    }

    // interior walls between maximal cones
    let mut wall_owners: BTreeMap<Vec<Vector<I>>, Vec<usize>> = BTreeMap::new();
    for (i, c) in maximal.iter().enumerate() {
        for w in c.facet_faces() {
            wall_owners.entry(w.rays().to_vec()).or_default().push(i);
        }
    }
    let walls: Vec<(usize, usize, Vec<Vector<I>>)> = wall_owners
        .into_iter()
        .filter(|(_, owners)| owners.len() == 2)
        .map(|(rays, owners)| (owners[0], owners[1], rays))
        .collect();

    if maximal.iter().all(|c| c.is_simplicial()) {
        projectivity_by_ray_values(fan, &maximal, &walls, &hull.pivots)
    } else {
        projectivity_by_cone_functionals(fan, &maximal, &walls)
    }
}

/// Simplicial case: variables are the values of the support function on the
/// rays; each wall contributes one strict convexity inequality.
fn projectivity_by_ray_values<I: RingInt>(
    fan: &Fan<I>,
    maximal: &[&Cone<I>],
    walls: &[(usize, usize, Vec<Vector<I>>)],
    pivots: &[usize],
) -> Result<Option<SupportFunction<I>>> {
    let rays = fan.rays();
    let ray_index: BTreeMap<&Vector<I>, usize> = rays.iter().zip(0..).collect();
    let mut lp = LinearSystem::new(rays.len());
    for (a, b, wall_rays) in walls {
        let sigma = maximal[*a];
        let tau = maximal[*b];
        let extra: Vec<&Vector<I>> = tau
            .rays()
            .iter()
            .filter(|r| !wall_rays.contains(r))
            .collect();
        debug_assert_eq!(extra.len(), 1);
        let r_star = extra[0];
        let lambda = sigma
            .ray_coordinates(r_star)
            .expect("wall neighbours share the span of the support");
        // value of sigma's functional at r_star must undershoot phi(r_star)
        let mut coeffs = vec![Fraction::<I>::zero(); rays.len()];
        for (k, ray) in sigma.rays().iter().enumerate() {
            coeffs[ray_index[ray]] = coeffs[ray_index[ray]].clone() + lambda[k].clone();
        }
        let ri = ray_index[r_star];
        coeffs[ri] = coeffs[ri].clone() - Fraction::one();
        lp.push(coeffs, Rel::Le, -Fraction::<I>::one());
    }
    let Some(phi) = lp.feasible_point() else {
        return Ok(None);
    };
    // reconstruct one functional per maximal cone from the ray values
    let mut functionals = Vec::with_capacity(maximal.len());
    for c in maximal {
        let d = pivots.len();
        let rows: Vec<Vec<Fraction<I>>> = c
            .rays()
            .iter()
            .map(|r| pivots.iter().map(|&p| to_ratio(&r.coords()[p])).collect())
            .collect();
        let rhs: Vec<Fraction<I>> = c.rays().iter().map(|r| phi[ray_index[r]].clone()).collect();
        debug_assert_eq!(rows.len(), d);
        let a = Matrix::from_rows(rows);
        let m_local = solve(&a, &rhs).expect("simplicial rays are independent");
        let mut ambient = vec![Fraction::<I>::zero(); fan.rank()];
        for (j, &p) in pivots.iter().enumerate() {
            ambient[p] = m_local[j].clone();
        }
        functionals.push(((*c).clone(), Vector::new(ambient)));
    }
    let witness = SupportFunction { functionals };
    debug_assert!(verify_support_function(fan, &witness));
    Ok(Some(witness))
}

/// General case: one functional per maximal cone as explicit variables,
/// agreement enforced on every pairwise intersection.
fn projectivity_by_cone_functionals<I: RingInt>(
    fan: &Fan<I>,
    maximal: &[&Cone<I>],
    walls: &[(usize, usize, Vec<Vector<I>>)],
) -> Result<Option<SupportFunction<I>>> {
    let n = fan.rank();
    let nvars = maximal.len() * n;
    let mut lp = LinearSystem::new(nvars);
    let term = |coeffs: &mut Vec<Fraction<I>>, cone_idx: usize, r: &Vector<I>, sign: i8| {
        for (j, c) in r.coords().iter().enumerate() {
            let v = to_ratio(c);
            let v = if sign < 0 { -v } else { v };
            coeffs[cone_idx * n + j] = coeffs[cone_idx * n + j].clone() + v;
        }
    };
    for i in 0..maximal.len() {
        for j in i + 1..maximal.len() {
            let meet = maximal[i].intersection(maximal[j]);
            for r in meet.rays() {
                let mut coeffs = vec![Fraction::<I>::zero(); nvars];
                term(&mut coeffs, i, r, 1);
                term(&mut coeffs, j, r, -1);
                lp.push(coeffs, Rel::Eq, Fraction::zero());
            }
        }
    }
    for (a, b, wall_rays) in walls {
        let tau = maximal[*b];
        let r_star = tau
            .rays()
            .iter()
            .find(|r| !wall_rays.contains(r))
            .expect("a wall is a proper face of its owners");
        let mut coeffs = vec![Fraction::<I>::zero(); nvars];
        term(&mut coeffs, *b, r_star, 1);
        term(&mut coeffs, *a, r_star, -1);
        lp.push(coeffs, Rel::Ge, Fraction::one());
    }
    let Some(x) = lp.feasible_point() else {
        return Ok(None);
    };
    let functionals = maximal
        .iter()
        .enumerate()
        .map(|(i, c)| {
            (
                (*c).clone(),
                Vector::new(x[i * n..(i + 1) * n].to_vec()),
            )
        })
        .collect();
    let witness = SupportFunction { functionals };
    debug_assert!(verify_support_function(fan, &witness));
    Ok(Some(witness))
}

/// Re-checks a support function witness by direct rational arithmetic,
/// independently of the solver: the functionals must agree wherever their
/// cones meet, and each must strictly dominate the others away from them.
pub fn verify_support_function<I: RingInt>(fan: &Fan<I>, w: &SupportFunction<I>) -> bool {
    // value of the function at each ray, well-definedness included
    let mut values: BTreeMap<&Vector<I>, Fraction<I>> = BTreeMap::new();
    for r in fan.rays() {
        let mut val: Option<Fraction<I>> = None;
        for (c, m) in &w.functionals {
            if !c.contains_integer(r) {
                continue;
            }
            let v = r.dot_rational(m);
            match &val {
                None => val = Some(v),
                Some(prev) if *prev == v => {}
                Some(_) => return false,
            }
        }
        let Some(v) = val else {
            return false; // a ray covered by no maximal cone
        };
        values.insert(r, v);
    }
    // strictness: every functional undershoots the function off its cone
    for (c, m) in &w.functionals {
        for r in fan.rays() {
            if c.contains_integer(r) {
                continue;
            }
            if r.dot_rational(m) >= values[r] {
                return false;
            }
        }
    }
    true
}
