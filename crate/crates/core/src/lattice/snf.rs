 

use crate::scalar::RingInt;

use super::Matrix;

/// Smith normal form `U·M·V = D` with `U`, `V` unimodular, `D` diagonal with
/// nonnegative entries and `d_1 | d_2 | ...`. `V⁻¹` is tracked alongside so
/// row-lattice bases fall out without a separate inversion.
#[derive(Debug, Clone)]
pub struct SmithNormalForm<I> {
    pub u: Matrix<I>,
    pub d: Matrix<I>,
    pub v: Matrix<I>,
    pub v_inv: Matrix<I>,
}

impl<I: RingInt> SmithNormalForm<I> {
    /// Nonzero diagonal entries, in chain order.
    pub fn nonzero_divisors(&self) -> Vec<I> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .filter(|d| !d.is_zero())
            .collect()
    }
}

/// Row/column reduction with pivoting on the least absolute value.
pub fn smith_normal_form<I: RingInt>(m: &Matrix<I>) -> SmithNormalForm<I> {
    let nr = m.nrows();
    let nc = m.ncols();
    let mut d = m.clone();
    let mut u = Matrix::identity(nr);
    let mut v = Matrix::identity(nc);
    let mut v_inv = Matrix::identity(nc);

    for t in 0..nr.min(nc) {
        'pivot: loop {
            // least-absolute-value pivot in the trailing submatrix
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..nr {
                for j in t..nc {
                    if d.get(i, j).is_zero() {
                        continue;
                    }
                    let better = match &pivot {
                        None => true,
                        Some((pi, pj)) => d.get(i, j).abs() < d.get(*pi, *pj).abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(d, u, v, v_inv);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let p = d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..nr {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).clone() / p.clone();
                if !q.is_zero() {
                    row_sub(&mut d, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                }
                if !d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).clone() / p.clone();
                if !q.is_zero() {
                    col_sub(&mut d, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                    row_add(&mut v_inv, t, j, &q);
                }
                if !d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // pivot must divide the rest of the submatrix for the chain
            for i in t + 1..nr {
                for j in t + 1..nc {
                    if !(d.get(i, j).clone() % p.clone()).is_zero() {
                        row_add(&mut d, t, i, &I::one());
                        row_add(&mut u, t, i, &I::one());
                        continue 'pivot;
                    }
                }
            }
            break;
        }
    }
    finish(d, u, v, v_inv)
}

fn finish<I: RingInt>(
    mut d: Matrix<I>,
    mut u: Matrix<I>,
    v: Matrix<I>,
    v_inv: Matrix<I>,
) -> SmithNormalForm<I> {
    for t in 0..d.nrows().min(d.ncols()) {
        if d.get(t, t).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    SmithNormalForm { u, d, v, v_inv }
}

fn row_sub<I: RingInt>(m: &mut Matrix<I>, i: usize, t: usize, q: &I) {
    for c in 0..m.ncols() {
        let val = m.get(i, c).clone() - q.clone() * m.get(t, c).clone();
        m.set(i, c, val);
    }
}

fn row_add<I: RingInt>(m: &mut Matrix<I>, i: usize, t: usize, q: &I) {
    for c in 0..m.ncols() {
        let val = m.get(i, c).clone() + q.clone() * m.get(t, c).clone();
        m.set(i, c, val);
    }
}

fn col_sub<I: RingInt>(m: &mut Matrix<I>, j: usize, t: usize, q: &I) {
    for r in 0..m.nrows() {
        let val = m.get(r, j).clone() - q.clone() * m.get(r, t).clone();
        m.set(r, j, val);
    }
}

fn negate_row<I: RingInt>(m: &mut Matrix<I>, r: usize) {
    for c in 0..m.ncols() {
        let val = -m.get(r, c).clone();
        m.set(r, c, val);
    }
}
