//! Scalar abstraction shared by series, configuration polynomials and
//! evaluations of partition functions.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// A commutative ring (in practice a field) element.
///
/// Implemented for every type with the usual numeric operations, including
/// [`crate::Rational`], `f64` and [`crate::Complex64`].
pub trait Scalar: Clone + Debug + Num + Neg<Output = Self> + FromPrimitive {
    /// Lifts a nonnegative count.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    /// Lifts a signed integer.
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable in scalar type")
    }

    /// `self^exp` by repeated squaring.
    fn powu(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl<T> Scalar for T where T: Clone + Debug + Num + Neg<Output = T> + FromPrimitive {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Complex64, Rational};

    #[test]
    fn powu_agrees_across_scalars() {
        assert_eq!(Rational::from_int(3).powu(4), Rational::from_int(81));
        assert_eq!(2.0f64.powu(10), 1024.0);
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(i.powu(2), Complex64::new(-1.0, 0.0));
        assert_eq!(Rational::from_int(7).powu(0), Rational::from_int(1));
    }
}
