//! Scalar trait bounds for the exact integer arithmetication used crate-wide.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num::rational::Ratio;
use num::{Integer, Signed};

/// Exact integer scalar.
///
/// Algorithms are written against this bound and instantiated with
/// `num::BigInt` through the crate-root aliases. Fixed-width integers also
/// satisfy the bound, but the library contract is arbitrary precision:
/// intermediate quantities (Smith normal form pivots, orbit iterates) grow
/// without any a-priori bound.
pub trait RingInt: Integer + Signed + Clone + Hash + Debug + Display + 'static {}

impl<T> RingInt for T where T: Integer + Signed + Clone + Hash + Debug + Display + 'static {}

/// Exact rational built on a [`RingInt`].
pub type Fraction<I> = Ratio<I>;

/// Embeds an integer into the rationals.
pub fn to_ratio<I: RingInt>(x: &I) -> Fraction<I> {
    Ratio::from_integer(x.clone())
}

/// Clears denominators: maps a rational vector to the primitive integer
/// vector on the same ray (positive multiple). Returns `None` on the zero
/// vector.
pub fn clear_denominators<I: RingInt>(coords: &[Fraction<I>]) -> Option<Vec<I>> {
    if coords.iter().all(|c| c.is_zero()) {
        return None;
    }
    let mut lcm = I::one();
    for c in coords {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<I> = coords
        .iter()
        .map(|c| c.numer().clone() * (lcm.clone() / c.denom().clone()))
        .collect();
    let mut g = I::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    Some(ints.into_iter().map(|x| x / g.clone()).collect())
}

use num::Zero;
