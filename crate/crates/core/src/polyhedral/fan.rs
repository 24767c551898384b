use std::collections::BTreeSet;
use std::fmt;


use crate::error::{Error, Result};
use crate::lattice::{Matrix, Vector};
use crate::scalar::{Fraction, RingInt};

use super::cone::Cone;
use super::group::MatrixGroup;

/// Finite collection of strongly convex rational cones, closed under faces,
/// any two meeting in a common face. Infinite fans are unrepresentable.
#[derive(Clone, PartialEq, Eq)]
pub struct Fan<I: RingInt> {
    rank: usize,
    cones: Vec<Cone<I>>,
    rays: Vec<Vector<I>>,
}

/// One invariant violation found by [`Fan::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation<I: RingInt> {
    Empty,
    RankMismatch { cone: Cone<I> },
    NonPrimitiveRay { ray: Vector<I> },
    MissingFace { cone: Cone<I>, face: Cone<I> },
    ImproperIntersection { a: Cone<I>, b: Cone<I>, meet: Cone<I> },
    UnregisteredRay { cone: Cone<I>, ray: Vector<I> },
}

impl<I: RingInt> fmt::Display for Violation<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "fan lists no cones; even the zero fan has the zero cone"),
            Violation::RankMismatch { cone } => {
                write!(f, "cone {:?} has wrong ambient rank", cone.rays())
            }
            Violation::NonPrimitiveRay { ray } => write!(f, "ray {ray:?} is not primitive"),
            Violation::MissingFace { cone, face } => write!(
                f,
                "face {:?} of cone {:?} is not listed in the fan",
                face.rays(),
                cone.rays()
            ),
            Violation::ImproperIntersection { a, b, meet } => write!(
                f,
                "cones {:?} and {:?} meet in {:?}, which is not a common face",
                a.rays(),
                b.rays(),
                meet.rays()
            ),
            Violation::UnregisteredRay { cone, ray } => write!(
                f,
                "ray {ray:?} of cone {:?} is missing from the ray list",
                cone.rays()
            ),
        }
    }
}

/// Result of checking the fan invariants; empty iff the fan is valid.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport<I: RingInt> {
    pub violations: Vec<Violation<I>>,
}

impl<I: RingInt> ValidationReport<I> {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Smoothness verdict with a witness cone on failure.
#[derive(Debug, Clone)]
pub struct SmoothnessReport<I: RingInt> {
    pub smooth: bool,
    /// A non-smooth cone and its multiplicity, when one exists.
    pub witness: Option<(Cone<I>, I)>,
}

impl<I: RingInt> Fan<I> {
    /// Builds a fan from generating cones: faces are added, the collection is
    /// deduplicated, and the fan invariants are verified.
    pub fn from_cones(rank: usize, cones: Vec<Cone<I>>) -> Result<Self> {
        let fan = Self::assemble(rank, cones, true);
        let report = fan.validate();
        if let Some(v) = report.violations.first() {
            if matches!(v, Violation::ImproperIntersection { .. }) {
                return Err(Error::Overlap(v.to_string()));
            }
            return Err(Error::InvalidFan(v.to_string()));
        }
        Ok(fan)
    }

    /// Assembles the data structure without checking invariants; used by the
    /// validation pipeline, which wants a `Fan` to inspect even when the cone
    /// list is bad. `close_faces` adds all faces of the given cones.
    pub fn assemble(rank: usize, cones: Vec<Cone<I>>, close_faces: bool) -> Self {
        let mut set: BTreeSet<Cone<I>> = BTreeSet::new();
        if close_faces {
            set.insert(Cone::zero(rank));
        }
        for c in cones {
            if close_faces && c.rank() == rank {
                for f in c.faces() {
                    set.insert(f);
                }
            }
            set.insert(c);
        }
        let mut rays: BTreeSet<Vector<I>> = BTreeSet::new();
        for c in &set {
            for r in c.rays() {
                rays.insert(r.clone());
            }
        }
        let mut cones: Vec<Cone<I>> = set.into_iter().collect();
        cones.sort_by_key(|c| (c.dim(), c.rays().to_vec()));
        Fan {
            rank,
            cones,
            rays: rays.into_iter().collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cones(&self) -> &[Cone<I>] {
        &self.cones
    }

    /// Index-ordered primitive ray generators (lexicographic).
    pub fn rays(&self) -> &[Vector<I>] {
        &self.rays
    }

    pub fn contains_cone(&self, c: &Cone<I>) -> bool {
        self.cones.iter().any(|x| x == c)
    }

    /// Cones that are not proper faces of another cone.
    pub fn maximal_cones(&self) -> Vec<&Cone<I>> {
        self.cones
            .iter()
            .filter(|c| {
                !self
                    .cones
                    .iter()
                    .any(|d| d != *c && d.contains_cone(c))
            })
            .collect()
    }

    /// Checks every fan invariant and reports all violations found.
    pub fn validate(&self) -> ValidationReport<I> {
        let mut violations = Vec::new();
        if self.cones.is_empty() {
            violations.push(Violation::Empty);
        }
        for c in &self.cones {
            if c.rank() != self.rank {
                violations.push(Violation::RankMismatch { cone: c.clone() });
            }
        }
        for r in &self.rays {
            if !r.is_primitive() {
                violations.push(Violation::NonPrimitiveRay { ray: r.clone() });
            }
        }
        let ray_set: BTreeSet<&Vector<I>> = self.rays.iter().collect();
        let cone_set: BTreeSet<&Cone<I>> = self.cones.iter().collect();
        for c in &self.cones {
            for r in c.rays() {
                if !ray_set.contains(r) {
                    violations.push(Violation::UnregisteredRay {
                        cone: c.clone(),
                        ray: r.clone(),
                    });
                }
            }
            for f in c.faces() {
                if !cone_set.contains(&f) {
                    violations.push(Violation::MissingFace {
                        cone: c.clone(),
                        face: f,
                    });
                }
            }
        }
        // With face closure in hand, properness of all pairs follows from
        // properness of the maximal pairs: lower cones are faces of maximal
        // ones, and intersections of faces of a cone are again faces.
        let maximal = self.maximal_cones();
        for (i, a) in maximal.iter().enumerate() {
            for b in &maximal[i + 1..] {
                let meet = a.intersection(b);
                if !meet.is_face_of(a) || !meet.is_face_of(b) {
                    violations.push(Violation::ImproperIntersection {
                        a: (*a).clone(),
                        b: (*b).clone(),
                        meet,
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Whether some cone contains the (rational) point. Scans big cones
    /// first; support points usually sit in a maximal cone.
    pub fn supports_point(&self, x: &Vector<Fraction<I>>) -> bool {
        self.cones.iter().rev().any(|c| c.contains(x))
    }

    pub fn supports_integer_point(&self, x: &Vector<I>) -> bool {
        self.cones.iter().rev().any(|c| c.contains_integer(x))
    }

    /// Every cone's rays extend to a lattice basis.
    pub fn smoothness(&self) -> SmoothnessReport<I> {
        for c in &self.cones {
            if c.dim() == 0 {
                continue;
            }
            if !c.is_smooth() {
                return SmoothnessReport {
                    smooth: false,
                    witness: Some((c.clone(), c.multiplicity())),
                };
            }
        }
        // smooth cones are simplicial by definition of the check
        debug_assert!(self.cones.iter().all(|c| c.is_simplicial()));
        SmoothnessReport {
            smooth: true,
            witness: None,
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.smoothness().smooth
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.is_simplicial())
    }

    /// First group generator and cone whose image leaves the fan, if any.
    pub fn unstable_witness(&self, group: &MatrixGroup<I>) -> Option<(Matrix<I>, Cone<I>)> {
        for m in group.generators() {
            for c in &self.cones {
                let image = match c.transform(m) {
                    Ok(img) => img,
                    Err(_) => return Some((m.clone(), c.clone())),
                };
                if !self.contains_cone(&image) {
                    return Some((m.clone(), c.clone()));
                }
            }
        }
        None
    }

    /// Stability under every generator of the group.
    pub fn is_stable(&self, group: &MatrixGroup<I>) -> bool {
        self.unstable_witness(group).is_none()
    }

    /// Smallest group-stable fan containing this one. Errors when the
    /// translates fail to intersect in common faces.
    pub fn saturate(&self, group: &MatrixGroup<I>) -> Result<Fan<I>> {
        let mut cones: BTreeSet<Cone<I>> = BTreeSet::new();
        for m in group.elements() {
            for c in &self.cones {
                cones.insert(c.transform(m)?);
            }
        }
        Fan::from_cones(self.rank, cones.into_iter().collect())
    }

    /// Image fan under a unimodular matrix.
    pub fn transform(&self, m: &Matrix<I>) -> Result<Fan<I>> {
        if !m.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        let cones: Result<Vec<Cone<I>>> = self.cones.iter().map(|c| c.transform(m)).collect();
        Fan::from_cones(self.rank, cones?)
    }

    /// Star subdivision at a primitive ray in the support: cones containing
    /// the ray are replaced by joins of the ray with their faces avoiding it.
    pub fn star_subdivide(&self, ray: &Vector<I>) -> Result<Fan<I>> {
        let ray = ray.primitive()?;
        if !self.supports_integer_point(&ray) {
            return Err(Error::RayNotInSupport(format!("{ray:?}")));
        }
        let mut cones: Vec<Cone<I>> = Vec::new();
        for c in &self.cones {
            if !c.contains_integer(&ray) {
                cones.push(c.clone());
                continue;
            }
            for f in c.faces() {
                if f.contains_integer(&ray) {
                    continue;
                }
                let mut gens = f.rays().to_vec();
                gens.push(ray.clone());
                cones.push(Cone::from_rays(self.rank, &gens)?);
            }
        }
        Ok(Fan::assemble(self.rank, cones, true))
    }

    /// `self` refines `other`: equal supports, every cone of `self` inside a
    /// cone of `other`.
    pub fn refines(&self, other: &Fan<I>) -> bool {
        if self.rank != other.rank {
            return false;
        }
        for c in &self.cones {
            if !other.cones.iter().any(|d| d.contains_cone(c)) {
                return false;
            }
        }
        // supports agree iff the pieces inside each maximal target cone
        // actually tile it
        for target in other.maximal_cones() {
            let pieces: Vec<&Cone<I>> = self
                .cones
                .iter()
                .filter(|c| target.contains_cone(c))
                .collect();
            if !super::convexity::tiles_target(
                &pieces,
                target.dim(),
                target.facet_normals(),
            ) {
                return false;
            }
        }
        true
    }

    /// Completeness of a full-dimensional fan, decided by facet pairing plus
    /// connectivity, cross-checked against a finite probing certificate.
    pub fn is_complete(&self) -> Result<bool> {
        if !self.cones.iter().any(|c| c.dim() == self.rank) {
            return Err(Error::NotFullDimensional);
        }
        let all: Vec<&Cone<I>> = self.cones.iter().collect();
        let paired = super::convexity::tiles_target(&all, self.rank, &[]);
        let probed = self.probe_certificate();
        // pairing implies coverage; a gap here is a library bug
        assert!(
            !paired || probed,
            "facet pairing claims completeness but a probe point is uncovered"
        );
        Ok(paired)
    }

    /// Sampling certificate: every probe vector (sign patterns and pairwise
    /// ray sums) lies in some cone. Necessary for completeness, never
    /// sufficient; used as the agreement check for the pairing method.
    pub fn probe_certificate(&self) -> bool {
        let mut probes: Vec<Vector<I>> = Vec::new();
        let n = self.rank;
        for mask in 0..3usize.pow(n as u32) {
            let mut m = mask;
            let mut coords = Vec::with_capacity(n);
            for _ in 0..n {
                let c = match m % 3 {
                    0 => I::zero(),
                    1 => I::one(),
                    _ => -I::one(),
                };
                coords.push(c);
                m /= 3;
            }
            let v = Vector::new(coords);
            if !v.is_zero() {
                probes.push(v);
            }
        }
        for (i, a) in self.rays.iter().enumerate() {
            for b in &self.rays[i..] {
                let s = a.add(b);
                if !s.is_zero() {
                    probes.push(s);
                }
            }
        }
        probes.iter().all(|p| self.supports_integer_point(p))
    }

    /// Multiset of cone multiplicities exceeding one, sorted descending: the
    /// refinement progress measure.
    pub fn multiplicity_measure(&self) -> Vec<I> {
        let mut m: Vec<I> = self
            .cones
            .iter()
            .map(Cone::multiplicity)
            .filter(|x| !x.is_one())
            .collect();
        m.sort();
        m.reverse();
        m
    }
}

impl<I: RingInt> fmt::Debug for Fan<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Fan(rank {}, {} cones, rays:", self.rank, self.cones.len())?;
        for r in &self.rays {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, ")")
    }
}

/// Comparison of multiplicity measures: lexicographic on the sorted
/// descending multisets, shorter prefix first.
pub fn measure_less<I: RingInt>(a: &[I], b: &[I]) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    a.len() < b.len()
}
