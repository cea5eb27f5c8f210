//! Scalar abstraction shared by every series and automorphism type.
//!
//! The series machinery only needs a commutative field with exact
//! equality in the interesting cases; floating point instantiations exist
//! for quick numeric evaluation and are never used by the verifiers.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative field usable as a series coefficient.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Send
    + Sync
{
    /// Embeds an integer.
    fn from_int(n: i64) -> Self;

    /// Integer power, negative exponents via the multiplicative inverse.
    fn pow_i(&self, k: i64) -> Self {
        let mut base = if k < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
}

impl Field for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Field for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn pow_i(&self, k: i64) -> Self {
        self.powi(k as i32)
    }
}

impl Field for f32 {
    fn from_int(n: i64) -> Self {
        n as f32
    }

    fn pow_i(&self, k: i64) -> Self {
        self.powi(k as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_i_matches_repeated_products() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(half.pow_i(3), BigRational::new(1.into(), 8.into()));
        assert_eq!(half.pow_i(-2), BigRational::from_int(4));
        assert_eq!(half.pow_i(0), BigRational::one());
        assert_eq!(2.0f64.pow_i(-1), 0.5);
    }
}
