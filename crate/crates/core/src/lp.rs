//! Exact rational linear feasibility.
//!
//! A phase-1 simplex over `Ratio<I>` with Bland's rule decides systems of
//! mixed equalities and inequalities in free variables. No tolerances: a
//! returned point satisfies every constraint exactly, and `None` means the
//! system is infeasible, not "numerically dubious".
//!
//! [`fourier_motzkin_feasible`] is an independent eliminator used by the
//! test suites to cross-check the simplex on small systems.

use num::{One, Signed, Zero};

use crate::scalar::{Fraction, RingInt};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Le,
    Eq,
}

/// `sum coeffs[j]·x[j]  rel  rhs` over free rational variables.
#[derive(Debug, Clone)]
pub struct LinearConstraint<I: RingInt> {
    pub coeffs: Vec<Fraction<I>>,
    pub rel: Rel,
    pub rhs: Fraction<I>,
}

#[derive(Debug, Clone)]
pub struct LinearSystem<I: RingInt> {
    nvars: usize,
    rows: Vec<LinearConstraint<I>>,
}

impl<I: RingInt> LinearSystem<I> {
    pub fn new(nvars: usize) -> Self {
        LinearSystem {
            nvars,
            rows: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn push(&mut self, coeffs: Vec<Fraction<I>>, rel: Rel, rhs: Fraction<I>) {
        assert_eq!(coeffs.len(), self.nvars);
        self.rows.push(LinearConstraint { coeffs, rel, rhs });
    }

    pub fn satisfied_by(&self, x: &[Fraction<I>]) -> bool {
        self.rows.iter().all(|row| {
            let mut lhs = Fraction::zero();
            for (c, xi) in row.coeffs.iter().zip(x) {
                lhs = lhs + c.clone() * xi.clone();
            }
            match row.rel {
                Rel::Ge => lhs >= row.rhs,
                Rel::Le => lhs <= row.rhs,
                Rel::Eq => lhs == row.rhs,
            }
        })
    }

    /// Finds an exact feasible point, or proves there is none.
    pub fn feasible_point(&self) -> Option<Vec<Fraction<I>>> {
        // Free variables split as x = p - n with p, n >= 0. One slack per
        // inequality, one artificial per row; phase-1 minimizes the
        // artificial sum.
        let n = self.nvars;
        let m = self.rows.len();
        if m == 0 {
            return Some(vec![Fraction::zero(); n]);
        }
        let n_ineq = self
            .rows
            .iter()
            .filter(|r| r.rel != Rel::Eq)
            .count();
        let total = 2 * n + n_ineq + m; // columns before RHS
        let mut tableau: Vec<Vec<Fraction<I>>> = Vec::with_capacity(m);
        let mut basis: Vec<usize> = Vec::with_capacity(m);
        let mut slack_idx = 0;
        for (r, row) in self.rows.iter().enumerate() {
            let mut t = vec![Fraction::<I>::zero(); total + 1];
            let flip = row.rhs.is_negative();
            let sgn = |v: Fraction<I>| if flip { -v } else { v };
            for j in 0..n {
                let c = sgn(row.coeffs[j].clone());
                t[j] = c.clone();
                t[n + j] = -c;
            }
            if row.rel != Rel::Eq {
                // a·x >= b becomes a·x - s = b; flipping the row flips the
                // slack sign along with everything else
                let mut s = match row.rel {
                    Rel::Ge => -Fraction::<I>::one(),
                    Rel::Le => Fraction::<I>::one(),
                    Rel::Eq => unreachable!(),
                };
                if flip {
                    s = -s;
                }
                t[2 * n + slack_idx] = s;
                slack_idx += 1;
            }
            t[2 * n + n_ineq + r] = Fraction::one();
            t[total] = sgn(row.rhs.clone());
            tableau.push(t);
            basis.push(2 * n + n_ineq + r);
        }

        // objective row carries reduced costs for minimizing the artificial
        // sum: start from -(sum of constraint rows) on non-artificial columns
        let mut obj = vec![Fraction::<I>::zero(); total + 1];
        for t in &tableau {
            for j in 0..=total {
                obj[j] = obj[j].clone() - t[j].clone();
            }
        }
        for j in 2 * n + n_ineq..total {
            obj[j] = Fraction::zero();
        }

        while let Some(enter) = (0..total).find(|&j| obj[j].is_negative()) {
            // Bland: entering column = lowest index with negative reduced cost
            // ratio test, Bland tie-break on lowest basis index
            let mut best: Option<(usize, Fraction<I>)> = None;
            for (r, t) in tableau.iter().enumerate() {
                if t[enter] <= Fraction::zero() {
                    continue;
                }
                let ratio = t[total].clone() / t[enter].clone();
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && basis[r] < basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((leave, _)) = best else {
                // unbounded phase-1 objective cannot happen (bounded below by 0)
                unreachable!("phase-1 simplex detected unbounded objective");
            };
            pivot(&mut tableau, &mut obj, leave, enter, total);
            basis[leave] = enter;
        }

        if !obj[total].is_zero() {
            return None; // artificial sum stays positive: infeasible
        }
        let mut values = vec![Fraction::<I>::zero(); total];
        for (r, &b) in basis.iter().enumerate() {
            values[b] = tableau[r][total].clone();
        }
        // a basic artificial at level zero is harmless for extraction
        let x: Vec<Fraction<I>> = (0..n)
            .map(|j| values[j].clone() - values[n + j].clone())
            .collect();
        debug_assert!(self.satisfied_by(&x));
        Some(x)
    }
}

fn pivot<I: RingInt>(
    tableau: &mut [Vec<Fraction<I>>],
    obj: &mut [Fraction<I>],
    leave: usize,
    enter: usize,
    total: usize,
) {
    let p = tableau[leave][enter].clone();
    for j in 0..=total {
        tableau[leave][j] = tableau[leave][j].clone() / p.clone();
    }
    for r in 0..tableau.len() {
        if r == leave || tableau[r][enter].is_zero() {
            continue;
        }
        let f = tableau[r][enter].clone();
        for j in 0..=total {
            tableau[r][j] = tableau[r][j].clone() - f.clone() * tableau[leave][j].clone();
        }
    }
    if !obj[enter].is_zero() {
        let f = obj[enter].clone();
        for j in 0..=total {
            obj[j] = obj[j].clone() - f.clone() * tableau[leave][j].clone();
        }
    }
}

/// Fourier–Motzkin elimination for pure `>=` systems. Exponential; used as an
/// independent oracle on small instances.
pub fn fourier_motzkin_feasible<I: RingInt>(
    nvars: usize,
    rows: &[(Vec<Fraction<I>>, Fraction<I>)],
) -> bool {
    let mut rows: Vec<(Vec<Fraction<I>>, Fraction<I>)> = rows.to_vec();
    for var in (0..nvars).rev() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for (a, b) in rows {
            if a[var].is_positive() {
                pos.push((a, b));
            } else if a[var].is_negative() {
                neg.push((a, b));
            } else {
                rest.push((a, b));
            }
        }
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                // scale so the var cancels: row_p/ap[var] (lower bound on x)
                // vs -row_n/an[var] (upper bound); combined constraint keeps >=
                let cp = ap[var].clone();
                let cn = -an[var].clone();
                let mut a = vec![Fraction::<I>::zero(); nvars];
                for j in 0..nvars {
                    a[j] = ap[j].clone() * cn.clone() + an[j].clone() * cp.clone();
                }
                let b = bp.clone() * cn.clone() + bn.clone() * cp.clone();
                a[var] = Fraction::zero();
                rest.push((a, b));
            }
        }
        rows = rest;
    }
    rows.iter().all(|(_, b)| !b.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Int, Rat};

    fn q(n: i64) -> Rat {
        Rat::from_integer(Int::from(n))
    }

    fn sys(nvars: usize, rows: &[(&[i64], Rel, i64)]) -> LinearSystem<Int> {
        let mut s = LinearSystem::new(nvars);
        for (coeffs, rel, rhs) in rows {
            s.push(coeffs.iter().map(|&c| q(c)).collect(), *rel, q(*rhs));
        }
        s
    }

    #[test]
    fn feasible_box() {
        let s = sys(
            2,
            &[
                (&[1, 0], Rel::Ge, 1),
                (&[0, 1], Rel::Ge, 1),
                (&[1, 1], Rel::Le, 3),
            ],
        );
        let x = s.feasible_point().unwrap();
        assert!(s.satisfied_by(&x));
    }

    #[test]
    fn infeasible_pair() {
        let s = sys(1, &[(&[1], Rel::Ge, 2), (&[1], Rel::Le, 1)]);
        assert!(s.feasible_point().is_none());
    }

    #[test]
    fn equality_with_negative_rhs() {
        let s = sys(2, &[(&[1, 1], Rel::Eq, -3), (&[1, -1], Rel::Ge, 0)]);
        let x = s.feasible_point().unwrap();
        assert!(s.satisfied_by(&x));
    }

    #[test]
    fn free_variables_go_negative() {
        let s = sys(1, &[(&[1], Rel::Le, -5)]);
        let x = s.feasible_point().unwrap();
        assert!(x[0] <= q(-5));
    }

    #[test]
    fn agrees_with_fourier_motzkin_on_small_systems() {
        // exhaustive-ish family of 2-var >= systems with tiny coefficients
        let coeff_choices: [[i64; 2]; 4] = [[1, 0], [0, 1], [-1, -1], [1, -2]];
        let rhs_choices = [-1i64, 0, 1];
        for &a in &coeff_choices {
            for &b in &coeff_choices {
                for &r1 in &rhs_choices {
                    for &r2 in &rhs_choices {
                        let rows = [(&a[..], Rel::Ge, r1), (&b[..], Rel::Ge, r2)];
                        let s = sys(2, &rows);
                        let fm_rows: Vec<(Vec<Rat>, Rat)> = [(a, r1), (b, r2)]
                            .iter()
                            .map(|(c, r)| (c.iter().map(|&x| q(x)).collect(), q(*r)))
                            .collect();
                        let fm = fourier_motzkin_feasible(2, &fm_rows);
                        let sx = s.feasible_point().is_some();
                        assert_eq!(fm, sx, "a={a:?} b={b:?} r1={r1} r2={r2}");
                    }
                }
            }
        }
    }
}
