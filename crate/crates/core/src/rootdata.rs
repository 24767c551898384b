//! Root data from finite-type Cartan matrices.
//!
//! Coordinates are fixed by the lattice form: the adjoint form works in the
//! coweight lattice with fundamental coweights as the standard basis (the
//! dominant chamber is literally the positive orthant), the simply connected
//! form works in the coroot lattice with simple coroots as the standard
//! basis. The Cartan convention is `a[i][j] = <alpha_j, alpha_i^vee>`, so the
//! simple coroots of the adjoint form are the rows of the Cartan matrix.

use std::collections::BTreeSet;

use num::One;

use crate::error::{Error, Result};
use crate::lattice::{Matrix, Vector};
use crate::polyhedral::{extreme_rays, Cone, Fan, MatrixGroup};
use crate::scalar::{Fraction, RingInt};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeForm {
    Adjoint,
    SimplyConnected,
}

/// Combinatorial root datum: Cartan matrix plus a choice of cocharacter
/// lattice coordinates.
#[derive(Debug, Clone)]
pub struct RootDatum<I: RingInt> {
    cartan: Matrix<I>,
    form: LatticeForm,
    rank: usize,
    /// Simple coroots in lattice coordinates.
    coroots: Vec<Vector<I>>,
    /// Row `j` is the functional pairing a lattice vector with `alpha_j`.
    pairings: Vec<Vector<I>>,
}

impl<I: RingInt> RootDatum<I> {
    pub fn build(cartan: Matrix<I>, form: LatticeForm) -> Result<Self> {
        validate_finite_type(&cartan)?;
        let n = cartan.nrows();
        let (coroots, pairings) = match form {
            LatticeForm::Adjoint => {
                let coroots = (0..n).map(|i| Vector::new(cartan.row(i))).collect();
                let pairings = (0..n).map(|j| Vector::basis(n, j)).collect();
                (coroots, pairings)
            }
            LatticeForm::SimplyConnected => {
                let coroots = (0..n).map(|i| Vector::basis(n, i)).collect();
                let pairings = (0..n).map(|j| Vector::new(cartan.col(j))).collect();
                (coroots, pairings)
            }
        };
        let rd = RootDatum {
            cartan,
            form,
            rank: n,
            coroots,
            pairings,
        };
        // the pairing must reproduce the Cartan matrix on simple coroots
        for i in 0..n {
            for j in 0..n {
                debug_assert_eq!(
                    rd.pairings[j].dot(&rd.coroots[i]),
                    rd.cartan.get(i, j).clone()
                );
            }
        }
        Ok(rd)
    }

    /// Named presets with the CLI's lattice-form choice.
    pub fn preset(name: &str, form: LatticeForm) -> Result<Self> {
        let rows: &[&[i64]] = match name {
            "A1" => &[&[2]],
            "A2" => &[&[2, -1], &[-1, 2]],
            "A3" => &[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]],
            "B2" => &[&[2, -1], &[-2, 2]],
            "C2" => &[&[2, -2], &[-1, 2]],
            "G2" => &[&[2, -1], &[-3, 2]],
            other => {
                return Err(Error::NotFiniteType(format!("unknown preset {other:?}")));
            }
        };
        let cartan = Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&c| int_from(c)).collect())
                .collect(),
        );
        RootDatum::build(cartan, form)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn form(&self) -> LatticeForm {
        self.form
    }

    pub fn cartan(&self) -> &Matrix<I> {
        &self.cartan
    }

    pub fn simple_coroots(&self) -> &[Vector<I>] {
        &self.coroots
    }

    /// Functionals `v -> <alpha_j, v>` in lattice coordinates.
    pub fn root_pairings(&self) -> &[Vector<I>] {
        &self.pairings
    }

    /// Simple reflection `s_i(v) = v - <alpha_i, v>·alpha_i^vee` as a matrix.
    pub fn simple_reflection(&self, i: usize) -> Matrix<I> {
        let n = self.rank;
        let mut m: Matrix<I> = Matrix::identity(n);
        for c in 0..n {
            for r in 0..n {
                let v = m.get(r, c).clone()
                    - self.pairings[i].coords()[c].clone() * self.coroots[i].coords()[r].clone();
                m.set(r, c, v);
            }
        }
        m
    }

    /// Full enumeration of the Weyl group by closing the simple reflections.
    pub fn weyl_group(&self) -> Result<MatrixGroup<I>> {
        let gens = (0..self.rank).map(|i| self.simple_reflection(i)).collect();
        MatrixGroup::generate(self.rank, gens)
    }

    /// `{v : <alpha_i, v> >= 0}` with primitive ray generators.
    pub fn dominant_chamber(&self) -> Cone<I> {
        let rays = extreme_rays(self.rank, &[], &self.pairings);
        Cone::from_rays(self.rank, &rays).expect("the dominant chamber is strongly convex")
    }

    /// Complete fan whose maximal cones are the Weyl chambers.
    pub fn weyl_fan(&self) -> Result<Fan<I>> {
        let chamber = Fan::from_cones(self.rank, vec![self.dominant_chamber()])?;
        chamber.saturate(&self.weyl_group()?)
    }

    /// All permutations of the simple roots preserving the Cartan matrix,
    /// realized as lattice matrices. They permute the chamber rays, so the
    /// dominant chamber is stable as a set.
    pub fn diagram_automorphisms(&self) -> MatrixGroup<I> {
        let n = self.rank;
        let mut gens: Vec<Matrix<I>> = Vec::new();
        for perm in permutations(n) {
            if (0..n).any(|i| {
                (0..n).any(|j| self.cartan.get(perm[i], perm[j]) != self.cartan.get(i, j))
            }) {
                continue;
            }
            let mut m: Matrix<I> = Matrix::zero(n, n);
            for j in 0..n {
                m.set(perm[j], j, I::one());
            }
            if !m.is_identity() {
                gens.push(m);
            }
        }
        let g = MatrixGroup::generate(n, gens)
            .expect("permutation matrices generate a finite group");
        debug_assert!(g.elements().iter().all(|p| {
            // conjugation permutes the simple reflections
            (0..n).all(|i| {
                let conj = p.mul(&self.simple_reflection(i)).mul(&p.transpose());
                (0..n).any(|k| conj == self.simple_reflection(k))
            })
        }));
        g
    }

    /// Boundary strata of the compactified group, one per subset of the
    /// simple roots, ordered by reverse inclusion and labeled by the chamber
    /// face where the selected coordinates vanish. Adjoint form only.
    pub fn boundary_strata(&self) -> Result<StrataPoset<I>> {
        if self.form != LatticeForm::Adjoint {
            return Err(Error::NotAdjoint);
        }
        let n = self.rank;
        let chamber = self.dominant_chamber();
        debug_assert_eq!(chamber.rays(), {
            let mut basis: Vec<Vector<I>> = (0..n).map(|i| Vector::basis(n, i)).collect();
            basis.sort();
            basis
        });
        let mut strata = Vec::new();
        for mask in 0..(1usize << n) {
            let vanishing: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let rays: Vec<Vector<I>> = (0..n)
                .filter(|i| !vanishing.contains(i))
                .map(|i| Vector::basis(n, i))
                .collect();
            let face = Cone::from_rays(n, &rays).expect("orthant faces are pointed");
            strata.push(Stratum { vanishing, face });
        }
        strata.sort_by_key(|s| {
            (
                s.vanishing.len(),
                s.vanishing.iter().copied().collect::<Vec<_>>(),
            )
        });
        Ok(StrataPoset { rank: n, strata })
    }
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

/// One boundary stratum: the simple roots whose coordinates vanish, and the
/// chamber face indexing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum<I: RingInt> {
    pub vanishing: BTreeSet<usize>,
    pub face: Cone<I>,
}

/// Power set of the simple roots under reverse inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataPoset<I: RingInt> {
    rank: usize,
    strata: Vec<Stratum<I>>,
}

impl<I: RingInt> StrataPoset<I> {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn strata(&self) -> &[Stratum<I>] {
        &self.strata
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    /// Closure order: `a <= b` when stratum `a` lies in the closure of `b`,
    /// i.e. `a` vanishes on more simple roots.
    pub fn leq(&self, a: &Stratum<I>, b: &Stratum<I>) -> bool {
        a.vanishing.is_superset(&b.vanishing)
    }

    /// Boundary divisors: strata where a single simple root vanishes.
    pub fn divisors(&self) -> Vec<&Stratum<I>> {
        self.strata
            .iter()
            .filter(|s| s.vanishing.len() == 1)
            .collect()
    }

    /// The open stratum (nothing vanishes).
    pub fn open_stratum(&self) -> &Stratum<I> {
        self.strata
            .iter()
            .find(|s| s.vanishing.is_empty())
            .expect("the empty subset is always present")
    }
}

fn validate_finite_type<I: RingInt>(cartan: &Matrix<I>) -> Result<()> {
    let n = cartan.nrows();
    if n == 0 || cartan.ncols() != n {
        return Err(Error::NotFiniteType(
            "matrix must be square and nonempty".into(),
        ));
    }
    let two = I::one() + I::one();
    for i in 0..n {
        if cartan.get(i, i) != &two {
            return Err(Error::NotFiniteType(format!("diagonal entry {i} is not 2")));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if cartan.get(i, j).is_positive() {
                return Err(Error::NotFiniteType(format!(
                    "off-diagonal entry ({i},{j}) is positive"
                )));
            }
            if cartan.get(i, j).is_zero() != cartan.get(j, i).is_zero() {
                return Err(Error::NotFiniteType(format!(
                    "zero pattern is not symmetric at ({i},{j})"
                )));
            }
        }
    }
    // symmetrizer by propagation along the Coxeter graph
    let mut d: Vec<Option<Fraction<I>>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Fraction::one());
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            for j in 0..n {
                if i == j || cartan.get(i, j).is_zero() {
                    continue;
                }
                let dj = d[i].clone().unwrap()
                    * Fraction::new(cartan.get(i, j).clone(), cartan.get(j, i).clone());
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push(j);
                    }
                    Some(existing) => {
                        if *existing != dj {
                            return Err(Error::NotFiniteType(
                                "matrix is not symmetrizable".into(),
                            ));
                        }
                    }
                }
            }
        }
    }
    // clear denominators: integral positive symmetrizer
    let mut lcm = I::one();
    for di in d.iter().flatten() {
        lcm = lcm.lcm(di.denom());
    }
    let d_int: Vec<I> = d
        .into_iter()
        .map(|di| {
            let di = di.unwrap();
            di.numer().clone() * (lcm.clone() / di.denom().clone())
        })
        .collect();
    // positive-definite symmetrization: leading principal minors positive
    let mut sym: Matrix<I> = Matrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            sym.set(i, j, d_int[i].clone() * cartan.get(i, j).clone());
        }
    }
    for k in 1..=n {
        let minor = Matrix::from_rows(
            (0..k)
                .map(|i| (0..k).map(|j| sym.get(i, j).clone()).collect())
                .collect(),
        );
        if !minor.det().is_positive() {
            return Err(Error::NotFiniteType(format!(
                "symmetrization has a non-positive leading minor of size {k}"
            )));
        }
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in out {
            for k in 0..n {
                if !p.contains(&k) {
                    let mut q = p.clone();
                    q.push(k);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}
