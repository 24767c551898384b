//! Toric schemes over a discrete valuation ring as fans in `R^n x R>=0`.
//!
//! A `DvrFan` keeps every cone in the closed upper half-space of the last
//! coordinate. The height-zero slice projects to the recession fan (the
//! generic fiber), the height-one slice's vertices count the special fiber's
//! irreducible components, and a family is constant exactly when every
//! non-vertical ray lives at height zero.
//!
//! The shear-stability machinery refutes candidate complete plane fans
//! against a nontrivial unipotent matrix: either some cone leaves the fan,
//! or a ray off the fixed axis has an orbit point that is not a ray. Over a
//! finite fan one of the two must occur; a candidate passing both is
//! reported as a library bug rather than silently accepted.


use crate::error::{Error, Result};
use crate::lattice::{Matrix, Vector};
use crate::scalar::{Fraction, RingInt};
use crate::polyhedral::{Cone, Fan};

/// Fan in rank `base_rank + 1` with all rays at nonnegative height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DvrFan<I: RingInt> {
    base_rank: usize,
    fan: Fan<I>,
}

impl<I: RingInt> DvrFan<I> {
    pub fn new(base_rank: usize, fan: Fan<I>) -> Result<Self> {
        if fan.rank() != base_rank + 1 {
            return Err(Error::RankMismatch {
                expected: base_rank + 1,
                got: fan.rank(),
            });
        }
        for r in fan.rays() {
            if r.coords()[base_rank].is_negative() {
                return Err(Error::InvalidFan(format!(
                    "ray {r:?} has negative height"
                )));
            }
        }
        Ok(DvrFan { base_rank, fan })
    }

    /// Constant family: each base cone at height zero, joined with the
    /// vertical ray.
    pub fn constant(base: &Fan<I>) -> Self {
        let n = base.rank();
        let vertical = Vector::basis(n + 1, n);
        let mut cones = Vec::new();
        for c in base.cones() {
            let lifted: Vec<Vector<I>> = c
                .rays()
                .iter()
                .map(|r| {
                    let mut coords = r.coords().to_vec();
                    coords.push(I::zero());
                    Vector::new(coords)
                })
                .collect();
            let mut with_vertical = lifted.clone();
            with_vertical.push(vertical.clone());
            cones.push(Cone::from_rays(n + 1, &lifted).expect("lift of a pointed cone"));
            cones.push(Cone::from_rays(n + 1, &with_vertical).expect("join with vertical ray"));
        }
        let fan = Fan::from_cones(n + 1, cones).expect("constant family is a fan");
        DvrFan { base_rank: n, fan }
    }

    /// The fan of the torus over the valuation ring: just the vertical ray.
    pub fn torus(base_rank: usize) -> Self {
        let vertical = Vector::basis(base_rank + 1, base_rank);
        let fan = Fan::from_cones(
            base_rank + 1,
            vec![Cone::from_rays(base_rank + 1, &[vertical]).expect("a ray is pointed")],
        )
        .expect("single ray fan");
        DvrFan { base_rank, fan }
    }

    pub fn base_rank(&self) -> usize {
        self.base_rank
    }

    pub fn fan(&self) -> &Fan<I> {
        &self.fan
    }

    /// Projection of the height-zero part: classifies the generic fiber.
    /// The height-zero part of each cone is its face of height-zero rays.
    pub fn recession_fan(&self) -> Result<Fan<I>> {
        let n = self.base_rank;
        let mut cones = Vec::new();
        for c in self.fan.cones() {
            let base_rays: Vec<Vector<I>> = c
                .rays()
                .iter()
                .filter(|r| r.coords()[n].is_zero())
                .map(|r| Vector::new(r.coords()[..n].to_vec()))
                .collect();
            cones.push(
                Cone::from_rays(n, &base_rays)
                    .map_err(|e| Error::NotAFan(e.to_string()))?,
            );
        }
        Fan::from_cones(n, cones).map_err(|e| Error::NotAFan(e.to_string()))
    }

    /// Vertices of the height-one polyhedral complex: rays of positive
    /// height, scaled to height one. One vertex per irreducible component of
    /// the special fiber.
    pub fn special_fiber_components(&self) -> Vec<Vector<Fraction<I>>> {
        let n = self.base_rank;
        let mut vertices: Vec<Vector<Fraction<I>>> = Vec::new();
        for r in self.fan.rays() {
            let h = &r.coords()[n];
            if !h.is_positive() {
                continue;
            }
            let vertex = Vector::new(
                r.coords()[..n]
                    .iter()
                    .map(|c| Fraction::new(c.clone(), h.clone()))
                    .collect(),
            );
            if !vertices.contains(&vertex) {
                vertices.push(vertex);
            }
        }
        vertices.sort();
        vertices
    }

    /// Every ray is vertical or lives at height zero: the family is the base
    /// change of a fan over the residue field.
    pub fn is_constant_family(&self) -> bool {
        let n = self.base_rank;
        let vertical = Vector::basis(n + 1, n);
        self.fan
            .rays()
            .iter()
            .all(|r| r.coords()[n].is_zero() || *r == vertical)
    }

    /// Applies a base unipotent action, extended trivially to the height
    /// coordinate.
    pub fn apply_action(&self, u: &UnipotentAction<I>) -> Result<DvrFan<I>> {
        let fan = u.act_on_fan(&self.fan)?;
        DvrFan::new(self.base_rank, fan)
    }
}

/// Unimodular unipotent matrix on the base lattice: `(A - I)^2 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnipotentAction<I: RingInt> {
    matrix: Matrix<I>,
}

impl<I: RingInt> UnipotentAction<I> {
    pub fn new(matrix: Matrix<I>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotUnipotent);
        }
        let n = matrix.nrows();
        let mut nilpotent = matrix.clone();
        for i in 0..n {
            let v = nilpotent.get(i, i).clone() - I::one();
            nilpotent.set(i, i, v);
        }
        let square = nilpotent.mul(&nilpotent);
        if (0..n).any(|r| (0..n).any(|c| !square.get(r, c).is_zero())) {
            return Err(Error::NotUnipotent);
        }
        debug_assert!(matrix.is_unimodular());
        Ok(UnipotentAction { matrix })
    }

    /// The standard shear `(x, y) -> (x + y, y)`.
    pub fn standard_shear() -> Self {
        let m = Matrix::from_rows(vec![
            vec![I::one(), I::one()],
            vec![I::zero(), I::one()],
        ]);
        UnipotentAction::new(m).expect("shear is unipotent")
    }

    pub fn matrix(&self) -> &Matrix<I> {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &Vector<I>) -> Vector<I> {
        self.matrix.apply(v)
    }

    /// Acts on a fan of the base rank directly, or of rank one more by
    /// fixing the height coordinate.
    pub fn act_on_fan(&self, fan: &Fan<I>) -> Result<Fan<I>> {
        let n = self.rank();
        if fan.rank() == n {
            return fan.transform(&self.matrix);
        }
        if fan.rank() == n + 1 {
            let mut ext: Matrix<I> = Matrix::zero(n + 1, n + 1);
            for r in 0..n {
                for c in 0..n {
                    ext.set(r, c, self.matrix.get(r, c).clone());
                }
            }
            ext.set(n, n, I::one());
            return fan.transform(&ext);
        }
        Err(Error::RankMismatch {
            expected: n,
            got: fan.rank(),
        })
    }

    /// Primitive generator of the fixed axis `ker(A - I)`; `None` for the
    /// identity.
    pub fn fixed_axis(&self) -> Option<Vector<I>> {
        if self.is_identity() {
            return None;
        }
        let n = self.rank();
        let mut rows = Vec::new();
        for i in 0..n {
            let mut row = self.matrix.row(i);
            row[i] = row[i].clone() - I::one();
            rows.push(Vector::new(row));
        }
        let kernel = crate::lattice::integer_nullspace(&rows, n);
        debug_assert_eq!(kernel.len(), 1, "nontrivial 2x2 unipotent has a line of fixed points");
        kernel.into_iter().next()
    }
}

/// A ray whose orbit under the action escapes the fan's ray set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeWitness<I: RingInt> {
    pub ray: Vector<I>,
    pub power: usize,
    pub image: Vector<I>,
}

/// Finds a ray of the complete fan off the fixed axis whose orbit leaves the
/// ray set within `bound` steps. Distinct orbit points exceed any finite ray
/// set, so `bound >= rays + 1` always suffices.
pub fn orbit_escape_witness<I: RingInt>(
    fan: &Fan<I>,
    action: &UnipotentAction<I>,
    bound: usize,
) -> Result<EscapeWitness<I>> {
    assert!(
        !action.is_identity(),
        "orbit escape needs a nontrivial action"
    );
    let axis = action.fixed_axis().expect("nontrivial action");
    let off_axis: Vec<&Vector<I>> = fan
        .rays()
        .iter()
        .filter(|r| {
            // off the fixed axis: not a multiple of the axis generator
            let a = &axis;
            !(0..fan.rank()).all(|i| {
                (0..fan.rank()).all(|j| {
                    (r.coords()[i].clone() * a.coords()[j].clone()
                        - r.coords()[j].clone() * a.coords()[i].clone())
                    .is_zero()
                })
            })
        })
        .collect();
    if off_axis.is_empty() {
        return Err(Error::NoRayOffAxis);
    }
    for ray in off_axis {
        let mut current = (*ray).clone();
        for power in 1..=bound {
            current = action
                .apply(&current)
                .primitive()
                .expect("unimodular image of a ray");
            if !fan.rays().contains(&current) {
                return Ok(EscapeWitness {
                    ray: (*ray).clone(),
                    power,
                    image: current,
                });
            }
        }
    }
    Err(Error::BoundExceeded(bound))
}

/// Why a candidate fan cannot be stable under the action.
#[derive(Debug, Clone)]
pub enum Refutation<I: RingInt> {
    /// A cone whose image leaves the fan.
    NotStable { moved_cone: Cone<I> },
    /// The fan's ray set is closed under the generator but an orbit escapes.
    Escape(EscapeWitness<I>),
    /// Both checks passed: impossible for a finite complete fan, so this
    /// marks an internal inconsistency.
    LibraryBug,
}

#[derive(Debug, Clone)]
pub struct CandidateVerdict<I: RingInt> {
    pub rays: Vec<Vector<I>>,
    pub refutation: Refutation<I>,
}

/// Report over a list of candidate complete plane fans; states the checked
/// universe explicitly.
#[derive(Debug, Clone)]
pub struct StabilityReport<I: RingInt> {
    pub universe: String,
    pub verdicts: Vec<CandidateVerdict<I>>,
}

impl<I: RingInt> StabilityReport<I> {
    pub fn all_refuted(&self) -> bool {
        self.verdicts
            .iter()
            .all(|v| !matches!(v.refutation, Refutation::LibraryBug))
    }
}

/// Aggregate counts from refuting a streamed family.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RefutationSummary {
    pub candidates: usize,
    pub not_stable: usize,
    pub escapes: usize,
    pub unexplained: usize,
}

impl RefutationSummary {
    pub fn all_refuted(&self) -> bool {
        self.unexplained == 0 && self.candidates == self.not_stable + self.escapes
    }
}

/// Refutes every complete plane fan over the bounded ray box, streaming, and
/// hands each verdict to the callback.
pub fn refute_bounded_family<I: RingInt>(
    action: &UnipotentAction<I>,
    bound: u32,
    mut on_verdict: impl FnMut(&Fan<I>, &Refutation<I>),
) -> RefutationSummary {
    assert!(!action.is_identity(), "the identity stabilizes everything");
    let mut summary = RefutationSummary::default();
    for_each_complete_plane_fan(bound, |fan| {
        let refutation = refute_candidate(&fan, action);
        summary.candidates += 1;
        match &refutation {
            Refutation::NotStable { .. } => summary.not_stable += 1,
            Refutation::Escape(_) => summary.escapes += 1,
            Refutation::LibraryBug => summary.unexplained += 1,
        }
        on_verdict(&fan, &refutation);
    });
    summary
}

/// Checks every candidate: a stability violation or an escape witness. Any
/// candidate passing both is reported as a bug.
pub fn no_stable_fan_report<I: RingInt>(
    action: &UnipotentAction<I>,
    candidates: &[Fan<I>],
    universe: impl Into<String>,
) -> StabilityReport<I> {
    assert!(!action.is_identity(), "the identity stabilizes everything");
    let mut verdicts = Vec::new();
    for fan in candidates {
        let refutation = refute_candidate(fan, action);
        verdicts.push(CandidateVerdict {
            rays: fan.rays().to_vec(),
            refutation,
        });
    }
    StabilityReport {
        universe: universe.into(),
        verdicts,
    }
}

fn refute_candidate<I: RingInt>(fan: &Fan<I>, action: &UnipotentAction<I>) -> Refutation<I> {
    // For a complete plane fan under an orientation-preserving unimodular
    // map, stability of the ray set is equivalent to stability of the fan:
    // cones are consecutive ray pairs in angular order, and the map
    // preserves that order. Checking rays keeps the exhaustive sweep fast.
    for r in fan.rays() {
        let image = action
            .apply(r)
            .primitive()
            .expect("unimodular image of a primitive ray");
        if !fan.rays().contains(&image) {
            let moved_cone =
                Cone::from_rays(fan.rank(), std::slice::from_ref(r)).expect("a ray is pointed");
            return Refutation::NotStable { moved_cone };
        }
    }
    let bound = fan.rays().len() + 1;
    match orbit_escape_witness(fan, action, bound) {
        Ok(w) => Refutation::Escape(w),
        Err(_) => Refutation::LibraryBug,
    }
}

/// Cone-level stability check, used to cross-validate the ray-set shortcut.
pub fn cone_level_stable<I: RingInt>(fan: &Fan<I>, action: &UnipotentAction<I>) -> bool {
    fan.cones().iter().all(|c| {
        c.transform(action.matrix())
            .map(|img| fan.contains_cone(&img))
            .unwrap_or(false)
    })
}

/// All complete rank-2 fans whose rays are primitive vectors in the box
/// `|coords|_inf <= bound`. Materializes the whole family; for larger bounds
/// prefer [`for_each_complete_plane_fan`].
pub fn complete_plane_fans<I: RingInt>(bound: u32) -> Vec<Fan<I>> {
    let mut fans: Vec<Fan<I>> = Vec::new();
    for_each_complete_plane_fan(bound, |f| fans.push(f));
    fans
}

/// Streams every complete rank-2 fan with primitive rays in the sup-norm
/// box. A complete plane fan is exactly a cyclically ordered ray set with
/// every consecutive angle below pi, so candidates are the subsets whose
/// angular gaps all close up.
pub fn for_each_complete_plane_fan<I: RingInt>(bound: u32, mut visit: impl FnMut(Fan<I>)) {
    let b = bound as i64;
    let mut prims: Vec<(i64, i64)> = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            if (x, y) == (0, 0) {
                continue;
            }
            if gcd64(x.abs(), y.abs()) == 1 {
                prims.push((x, y));
            }
        }
    }
    // sort by angle around the origin
    prims.sort_by(|a, b| compare_angle(*a, *b));
    let m = prims.len();
    // cones reused across candidates: one per admissible consecutive pair
    let mut pair_cones: std::collections::BTreeMap<(usize, usize), Cone<I>> =
        std::collections::BTreeMap::new();
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let (a, c) = (prims[i], prims[j]);
            if a.0 * c.1 - a.1 * c.0 > 0 {
                let cone = Cone::from_rays(2, &[int_vec2(a), int_vec2(c)])
                    .expect("positively oriented rays span a pointed cone");
                pair_cones.insert((i, j), cone);
            }
        }
    }
    for mask in 0u64..(1 << m) {
        if (mask.count_ones() as usize) < 3 {
            continue;
        }
        let chosen: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let k = chosen.len();
        let ok = (0..k).all(|i| {
            let a = prims[chosen[i]];
            let c = prims[chosen[(i + 1) % k]];
            // consecutive determinant positive: angle strictly below pi
            a.0 * c.1 - a.1 * c.0 > 0
        });
        if !ok {
            continue;
        }
        let cones: Vec<Cone<I>> = (0..k)
            .map(|i| pair_cones[&(chosen[i], chosen[(i + 1) % k])].clone())
            .collect();
        // valid by construction: consecutive cones share exactly one ray,
        // non-consecutive ones meet only at the origin
        visit(Fan::assemble(2, cones, true));
    }
}

fn int_vec2<I: RingInt>(p: (i64, i64)) -> Vector<I> {
    Vector::new(vec![int_from(p.0), int_from(p.1)])
}

fn int_from<I: RingInt>(c: i64) -> I {
    let one = I::one();
    let mut v = I::zero();
    let mut k = c;
    while k > 0 {
        v = v + one.clone();
        k -= 1;
    }
    while k < 0 {
        v = v - one.clone();
        k += 1;
    }
    v
}

fn gcd64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd64(b, a % b)
    }
}

/// Angular order starting from the positive x-axis.
fn compare_angle(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    let half = |p: (i64, i64)| -> u8 {
        if p.1 > 0 || (p.1 == 0 && p.0 > 0) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 * b.1 - a.1 * b.0;
        cross.cmp(&0).reverse()
    })
}
