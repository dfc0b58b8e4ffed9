//! Closed intervals with exact rational endpoints.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::confalg::render_rational;
use crate::Rational;

/// `[lo, hi]` with `lo ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    /// `{|x| : x ∈ self}`.
    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            Interval::new(Rational::zero(), self.lo.abs().max(self.hi.abs()))
        } else {
            let (a, b) = (self.lo.abs(), self.hi.abs());
            Interval::new(a.clone().min(b.clone()), a.max(b))
        }
    }

    /// `{|x − y| : y ∈ self}`.
    pub fn distance_to(&self, x: &Rational) -> Self {
        (self - &Interval::point(x.clone())).abs()
    }

    pub fn powu(&self, e: u32) -> Self {
        let mut acc = Interval::point(Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Every point of `self` is below every point of `other`.
    pub fn strictly_below(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.lo.to_f64().unwrap_or(f64::NAN), self.hi.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let p = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = p.iter().min().expect("four products").clone();
        let hi = p.iter().max().expect("four products").clone();
        Interval::new(lo, hi)
    }
}

impl Mul<&Rational> for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Rational) -> Interval {
        self * &Interval::point(rhs.clone())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", render_rational(&self.lo), render_rational(&self.hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn arithmetic() {
        let a = Interval::new(q(-1, 2), q(1, 3));
        let b = Interval::new(q(2, 1), q(3, 1));
        assert_eq!(&a * &b, Interval::new(q(-3, 2), q(1, 1)));
        assert_eq!(&a + &b, Interval::new(q(3, 2), q(10, 3)));
        assert_eq!(a.abs(), Interval::new(q(0, 1), q(1, 2)));
        assert_eq!(b.distance_to(&q(1, 1)), Interval::new(q(1, 1), q(2, 1)));
        assert_eq!(b.powu(2), Interval::new(q(4, 1), q(9, 1)));
        assert_eq!(a.to_string(), "[-1/2,1/3]");
        assert!(a.strictly_below(&b));
    }

    proptest! {
        #[test]
        fn products_enclose_pointwise(a in -20i64..20, b in 0i64..10, c in -20i64..20, d in 0i64..10, s in 0i64..=8, t in 0i64..=8) {
            let x = Interval::new(q(a, 4), q(a + b, 4));
            let y = Interval::new(q(c, 3), q(c + d, 3));
            let px = q(a, 4) + q(b * s, 32);
            let py = q(c, 3) + q(d * t, 24);
            prop_assert!((&x * &y).contains(&(&px * &py)));
            prop_assert!((&x - &y).contains(&(&px - &py)));
        }
    }
}
