//! Scalar abstraction for the lattice and unit-geometry modules.
//!
//! The geometric algorithms (Gram matrices, Lagrange reduction, the map to
//! the fundamental domain, hyperbolic distance, regulators) are written
//! once over [`Real`] and instantiated with `f64` for fast brute-force
//! oracles and with `BigReal` for production
//! precision. Constants are lifted from an existing value so that they are
//! created at the precision of the data they combine with.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::big::BigReal;

pub trait Real:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Integer constant at the precision of `self`.
    fn lift_i64(&self, v: i64) -> Self;

    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;

    /// Nearest integer, ties away from zero.
    fn round_i64(&self) -> i64;

    fn to_f64(&self) -> f64;
    fn finite(&self) -> bool;

    fn lift_ratio(&self, num: i64, den: i64) -> Self {
        self.lift_i64(num) / self.lift_i64(den)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    /// Inverse hyperbolic sine via logarithms.
    fn asinh_ln(&self) -> Self {
        (self.clone() + (self.square() + self.lift_i64(1)).sqrt()).ln()
    }

    /// Inverse hyperbolic cosine via logarithms; requires `self >= 1`.
    fn acosh_ln(&self) -> Self {
        (self.clone() + (self.square() - self.lift_i64(1)).sqrt()).ln()
    }

    fn max_val(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    fn min_val(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

macro_rules! impl_real_for_float {
    ($t:ty) => {
        impl Real for $t {
            fn lift_i64(&self, v: i64) -> Self {
                v as $t
            }
            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }
            fn ln(&self) -> Self {
                <$t>::ln(*self)
            }
            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }
            fn round_i64(&self) -> i64 {
                <$t>::round(*self) as i64
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn finite(&self) -> bool {
                <$t>::is_finite(*self)
            }
        }
    };
}

impl_real_for_float!(f32);
impl_real_for_float!(f64);

impl Zero for BigReal {
    fn zero() -> Self {
        BigReal::pow2(0, 64).lift_i64(0)
    }
    fn is_zero(&self) -> bool {
        BigReal::is_zero(self)
    }
}

impl One for BigReal {
    fn one() -> Self {
        BigReal::pow2(0, 64)
    }
}

impl Real for BigReal {
    fn lift_i64(&self, v: i64) -> Self {
        BigReal::lift_i64(self, v)
    }
    fn abs(&self) -> Self {
        BigReal::abs(self)
    }
    fn sqrt(&self) -> Self {
        BigReal::sqrt(self)
    }
    fn ln(&self) -> Self {
        BigReal::ln(self)
    }
    fn exp(&self) -> Self {
        BigReal::exp(self)
    }
    fn round_i64(&self) -> i64 {
        BigReal::round_i64(self)
    }
    fn to_f64(&self) -> f64 {
        BigReal::to_f64(self)
    }
    fn finite(&self) -> bool {
        BigReal::is_finite(self)
    }
}
