use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lattice::Matrix;
use crate::scalar::RingInt;

/// Default cap on closure enumeration; far above any Weyl group handled here.
pub const DEFAULT_CLOSURE_BUDGET: usize = 65_536;

/// Finite group of unimodular integer matrices, stored with its full
/// enumerated closure. Infinite groups are rejected at construction; the
/// closure budget is the "INFINITE-UNSUPPORTED" marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGroup<I: RingInt> {
    rank: usize,
    generators: Vec<Matrix<I>>,
    elements: Vec<Matrix<I>>,
}

impl<I: RingInt> MatrixGroup<I> {
    pub fn generate(rank: usize, generators: Vec<Matrix<I>>) -> Result<Self> {
        Self::generate_with_budget(rank, generators, DEFAULT_CLOSURE_BUDGET)
    }

    /// Breadth-first closure of the generators under multiplication. For a
    /// finite set closed under products, inverses come for free.
    pub fn generate_with_budget(
        rank: usize,
        generators: Vec<Matrix<I>>,
        budget: usize,
    ) -> Result<Self> {
        for g in &generators {
            if g.nrows() != rank || g.ncols() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: g.nrows(),
                });
            }
            if !g.is_unimodular() {
                return Err(Error::NotUnimodular);
            }
        }
        let id = Matrix::identity(rank);
        let mut elements: BTreeSet<Matrix<I>> = BTreeSet::new();
        elements.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(m) = frontier.pop() {
            for g in &generators {
                let next = m.mul(g);
                if elements.insert(next.clone()) {
                    if elements.len() > budget {
                        return Err(Error::ClosureBudgetExceeded(budget));
                    }
                    frontier.push(next);
                }
            }
        }
        debug_assert!({
            // product closure: spot-check every generator against every element
            elements.iter().all(|a| {
                generators
                    .iter()
                    .all(|g| elements.contains(&a.mul(g)))
            })
        });
        Ok(MatrixGroup {
            rank,
            generators,
            elements: elements.into_iter().collect(),
        })
    }

    pub fn trivial(rank: usize) -> Self {
        MatrixGroup {
            rank,
            generators: Vec::new(),
            elements: vec![Matrix::identity(rank)],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix<I>] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix<I>] {
        &self.elements
    }

    pub fn contains(&self, m: &Matrix<I>) -> bool {
        self.elements.iter().any(|e| e == m)
    }

    /// Group generated by the union of two compatible groups' generators.
    pub fn join(&self, other: &MatrixGroup<I>) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        MatrixGroup::generate(self.rank, gens)
    }
}
