use std::fmt;

use num::Zero;

use crate::error::{Error, Result};
use crate::scalar::{to_ratio, Fraction, RingInt};

/// Coordinate tuple in a fixed-rank lattice (or rational vector space).
///
/// The rank is the length of the coordinate list; values are immutable after
/// construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<T> {
    coords: Vec<T>,
}

impl<T> Vector<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Vector { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }
}

impl<I: RingInt> Vector<I> {
    pub fn zero(rank: usize) -> Self {
        Vector::new(vec![I::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![I::zero(); rank];
        v[i] = I::one();
        Vector::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Vector::new(self.coords.iter().map(|a| -a.clone()).collect())
    }

    pub fn scale(&self, k: &I) -> Self {
        Vector::new(self.coords.iter().map(|a| a.clone() * k.clone()).collect())
    }

    pub fn dot(&self, other: &Self) -> I {
        debug_assert_eq!(self.rank(), other.rank());
        let mut acc = I::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc = acc + a.clone() * b.clone();
        }
        acc
    }

    /// Dot product against a rational vector.
    pub fn dot_rational(&self, other: &Vector<Fraction<I>>) -> Fraction<I> {
        debug_assert_eq!(self.rank(), other.rank());
        let mut acc = Fraction::zero();
        for (a, b) in self.coords.iter().zip(other.coords()) {
            acc = acc + to_ratio(a) * b.clone();
        }
        acc
    }

    /// Divides out the gcd of the coordinates, keeping the direction.
    /// Idempotent; errors on the zero vector.
    pub fn primitive(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut g = I::zero();
        for c in &self.coords {
            g = g.gcd(c);
        }
        Ok(Vector::new(
            self.coords.iter().map(|c| c.clone() / g.clone()).collect(),
        ))
    }

    pub fn is_primitive(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let mut g = I::zero();
        for c in &self.coords {
            g = g.gcd(c);
        }
        g.is_one()
    }

    pub fn to_rational(&self) -> Vector<Fraction<I>> {
        Vector::new(self.coords.iter().map(to_ratio).collect())
    }

    /// Sum of absolute values.
    pub fn norm1(&self) -> I {
        let mut acc = I::zero();
        for c in &self.coords {
            acc = acc + c.abs();
        }
        acc
    }
}

impl<I: RingInt> Vector<Fraction<I>> {
    pub fn rational_zero(rank: usize) -> Self {
        Vector::new(vec![Fraction::zero(); rank])
    }

    pub fn is_rational_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn rational_dot(&self, other: &Self) -> Fraction<I> {
        debug_assert_eq!(self.rank(), other.rank());
        let mut acc = Fraction::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc = acc + a.clone() * b.clone();
        }
        acc
    }

    pub fn rational_add(&self, other: &Self) -> Self {
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn rational_sub(&self, other: &Self) -> Self {
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn rational_scale(&self, k: &Fraction<I>) -> Self {
        Vector::new(self.coords.iter().map(|a| a.clone() * k.clone()).collect())
    }

    /// Clears denominators and divides by the gcd: the primitive integer
    /// vector on the same ray. `None` on the zero vector.
    pub fn to_primitive_integer(&self) -> Option<Vector<I>> {
        crate::scalar::clear_denominators(&self.coords).map(Vector::new)
    }

    /// Exact integer coordinates when every entry is integral.
    pub fn to_integer(&self) -> Option<Vector<I>> {
        let mut out = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            if !c.denom().is_one() {
                return None;
            }
            out.push(c.numer().clone());
        }
        Some(Vector::new(out))
    }
}

impl<T: fmt::Debug> fmt::Debug for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, ")")
    }
}

impl<T: fmt::Display> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
