//! Exact integer and rational linear algebra.
//!
//! Integer side: primitive vectors, Smith normal form with unimodular
//! transforms, fraction-free determinants, sublattice indices, lattice
//! membership. Rational side: row reduction, solving, null spaces. All of it
//! is exact; none of it is sparse or clever, which is the right trade at the
//! scale this crate operates (ambient rank <= 4, a few dozen rows).

mod matrix;
mod snf;
mod vector;

pub use matrix::Matrix;
pub use snf::{SmithNormalForm, smith_normal_form};
pub use vector::Vector;

use crate::error::{Error, Result};
use crate::scalar::{Fraction, RingInt};
use num::{One, Zero};

/// Index of a subgroup of a lattice: finite, or infinite when the generators
/// do not span the ambient lattice rationally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SublatticeIndex<I> {
    Finite(I),
    Infinite,
}

impl<I: RingInt> SublatticeIndex<I> {
    pub fn is_one(&self) -> bool {
        matches!(self, SublatticeIndex::Finite(i) if i.is_one())
    }
}

/// Index in the ambient lattice `Z^n` of the subgroup generated by the given
/// vectors. `Infinite` when they do not span `Q^n`.
pub fn sublattice_index<I: RingInt>(generators: &[Vector<I>]) -> Result<SublatticeIndex<I>> {
    let rank = common_rank(generators)?;
    let m = Matrix::from_rows(generators.iter().map(|v| v.coords().to_vec()).collect());
    let snf = smith_normal_form(&m);
    let divisors = snf.nonzero_divisors();
    if divisors.len() < rank {
        return Ok(SublatticeIndex::Infinite);
    }
    let mut idx = I::one();
    for d in divisors {
        idx = idx * d;
    }
    Ok(SublatticeIndex::Finite(idx))
}

/// Index of the subgroup generated by the vectors inside the saturation of
/// its own rational span (`span_Q ∩ Z^n`). Always finite; `1` exactly when
/// the generators extend to a basis of the ambient lattice.
pub fn index_in_saturation<I: RingInt>(generators: &[Vector<I>]) -> Result<I> {
    common_rank(generators)?;
    let m = Matrix::from_rows(generators.iter().map(|v| v.coords().to_vec()).collect());
    let snf = smith_normal_form(&m);
    let mut idx = I::one();
    for d in snf.nonzero_divisors() {
        idx = idx * d;
    }
    Ok(idx)
}

/// Basis data for the subgroup of `Z^n` generated by a list of vectors.
#[derive(Debug, Clone)]
pub struct SubgroupBasis<I> {
    /// Basis of the generated subgroup.
    pub basis: Vec<Vector<I>>,
    /// Basis of the saturation (rational span intersected with `Z^n`).
    pub saturated_basis: Vec<Vector<I>>,
    /// Elementary divisors (diagonal of the Smith normal form, nonzero part).
    pub divisors: Vec<I>,
    /// Index in the full ambient lattice.
    pub index: SublatticeIndex<I>,
}

/// Computes a basis of the subgroup generated by the vectors, together with
/// its saturation, via Smith normal form.
pub fn subgroup_basis<I: RingInt>(generators: &[Vector<I>]) -> Result<SubgroupBasis<I>> {
    let rank = common_rank(generators)?;
    let m = Matrix::from_rows(generators.iter().map(|v| v.coords().to_vec()).collect());
    let snf = smith_normal_form(&m);
    // rows of D·V^{-1} span the row lattice; row i is d_i times row i of V^{-1}
    let divisors = snf.nonzero_divisors();
    let r = divisors.len();
    let mut basis = Vec::with_capacity(r);
    let mut saturated = Vec::with_capacity(r);
    for (i, d) in divisors.iter().enumerate() {
        let row = snf.v_inv.row(i);
        saturated.push(Vector::new(row.clone()));
        basis.push(Vector::new(
            row.into_iter().map(|x| x * d.clone()).collect(),
        ));
    }
    let index = if r < rank {
        SublatticeIndex::Infinite
    } else {
        let mut idx = I::one();
        for d in &divisors {
            idx = idx * d.clone();
        }
        SublatticeIndex::Finite(idx)
    };
    Ok(SubgroupBasis {
        basis,
        saturated_basis: saturated,
        divisors,
        index,
    })
}

/// Decides whether `target` lies in the subgroup generated by `rows`,
/// returning the integer combination when it does.
pub fn lattice_membership<I: RingInt>(rows: &[Vector<I>], target: &Vector<I>) -> Option<Vec<I>> {
    if rows.is_empty() {
        return target.is_zero().then(Vec::new);
    }
    // Solve c·R = target over Z: transpose to R^T c = target and use SNF.
    // With U·A·V = D this becomes D·(V⁻¹c) = U·target, a diagonal system.
    let mt = Matrix::from_rows(rows.iter().map(|v| v.coords().to_vec()).collect()).transpose();
    let snf = smith_normal_form(&mt);
    let ut = snf.u.mul_vec(target.coords());
    let ncols = snf.d.ncols();
    let mut y = vec![I::zero(); ncols];
    for i in 0..snf.d.nrows() {
        if i < ncols {
            let d = snf.d.get(i, i).clone();
            if d.is_zero() {
                if !ut[i].is_zero() {
                    return None;
                }
            } else {
                if !(ut[i].clone() % d.clone()).is_zero() {
                    return None;
                }
                y[i] = ut[i].clone() / d;
            }
        } else if !ut[i].is_zero() {
            return None;
        }
    }
    let c = snf.v.mul_vec(&y);
    debug_assert_eq!(&mt.mul_vec(&c), target.coords());
    Some(c)
}

/// Rational reduced row echelon form, in place. Returns the pivot columns.
pub fn rref<I: RingInt>(m: &mut Matrix<Fraction<I>>) -> Vec<usize> {
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..nc {
        if row == nr {
            break;
        }
        let Some(p) = (row..nr).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(row, p);
        let inv = {
            let piv = m.get(row, col).clone();
            Fraction::one() / piv
        };
        for c in 0..nc {
            let v = m.get(row, c).clone() * inv.clone();
            m.set(row, c, v);
        }
        for r in 0..nr {
            if r != row && !m.get(r, col).is_zero() {
                let f = m.get(r, col).clone();
                for c in 0..nc {
                    let v = m.get(r, c).clone() - f.clone() * m.get(row, c).clone();
                    m.set(r, c, v);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank over the rationals.
pub fn rational_rank<I: RingInt>(rows: &[Vector<Fraction<I>>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m = Matrix::from_rows(rows.iter().map(|v| v.coords().to_vec()).collect());
    rref(&mut m).len()
}

/// Rank of integer rows over the rationals.
pub fn integer_rank<I: RingInt>(rows: &[Vector<I>]) -> usize {
    rational_rank(&rows.iter().map(Vector::to_rational).collect::<Vec<_>>())
}

/// Solves `A x = b` over the rationals; `None` when inconsistent. Free
/// variables are set to zero.
pub fn solve<I: RingInt>(
    a: &Matrix<Fraction<I>>,
    b: &[Fraction<I>],
) -> Option<Vec<Fraction<I>>> {
    assert_eq!(a.nrows(), b.len());
    let mut aug = Matrix::zero(a.nrows(), a.ncols() + 1);
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            aug.set(r, c, a.get(r, c).clone());
        }
        aug.set(r, a.ncols(), b[r].clone());
    }
    let pivots = rref(&mut aug);
    if pivots.contains(&a.ncols()) {
        return None;
    }
    let mut x = vec![Fraction::zero(); a.ncols()];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug.get(row, a.ncols()).clone();
    }
    Some(x)
}

/// Basis of the right null space `{x : A x = 0}` over the rationals.
pub fn nullspace<I: RingInt>(a: &Matrix<Fraction<I>>) -> Vec<Vector<Fraction<I>>> {
    let nc = a.ncols();
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..nc {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut x = vec![Fraction::zero(); nc];
        x[free] = Fraction::one();
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = -m.get(row, free).clone();
        }
        basis.push(Vector::new(x));
    }
    basis
}

/// Null space of integer rows, returned as primitive integer vectors.
pub fn integer_nullspace<I: RingInt>(rows: &[Vector<I>], ncols: usize) -> Vec<Vector<I>> {
    let a = if rows.is_empty() {
        Matrix::zero(1, ncols)
    } else {
        Matrix::from_rows(
            rows.iter()
                .map(|v| v.coords().iter().map(crate::scalar::to_ratio).collect())
                .collect(),
        )
    };
    nullspace(&a)
        .into_iter()
        .map(|v| v.to_primitive_integer().expect("nullspace basis vector is nonzero"))
        .collect()
}

fn common_rank<I: RingInt>(generators: &[Vector<I>]) -> Result<usize> {
    let Some(first) = generators.first() else {
        return Ok(0);
    };
    let rank = first.rank();
    for g in generators {
        if g.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                got: g.rank(),
            });
        }
    }
    Ok(rank)
}
