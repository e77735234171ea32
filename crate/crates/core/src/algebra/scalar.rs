//! Exact ordered fields usable by the simplex solver.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive};

/// An exact ordered field with integer rounding. Implemented for every
/// `Ratio<T>` over a signed integer type; `BigRational` never overflows,
/// fixed-width ratios are cheaper on small instances.
pub trait ExactScalar: Clone + PartialOrd + Num + Signed + Debug {
    fn from_i64(v: i64) -> Self;
    fn is_integral(&self) -> bool;
    fn floor_i64(&self) -> Option<i64>;
    fn ceil_i64(&self) -> Option<i64>;
    fn to_big(&self) -> BigRational;
}

impl<T> ExactScalar for Ratio<T>
where
    T: Clone + Integer + Signed + Debug + From<i64> + ToPrimitive + Into<BigInt>,
{
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(T::from(v))
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn floor_i64(&self) -> Option<i64> {
        self.floor().to_integer().to_i64()
    }

    fn ceil_i64(&self) -> Option<i64> {
        self.ceil().to_integer().to_i64()
    }

    fn to_big(&self) -> BigRational {
        BigRational::new(self.numer().clone().into(), self.denom().clone().into())
    }
}

/// Scales a non-negative rational vector to the smallest proportional
/// integer vector with the same direction (divides out the gcd).
pub fn scale_to_integers(v: &[BigRational]) -> Option<Vec<u64>> {
    let mut l = BigInt::from(1);
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::from(0);
    for x in &ints {
        g = g.gcd(x);
    }
    if g == BigInt::from(0) {
        g = BigInt::from(1);
    }
    ints.iter().map(|x| (x / &g).to_u64()).collect()
}
