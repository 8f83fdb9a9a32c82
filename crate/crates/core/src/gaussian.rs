//! Exact arithmetic in the Gaussian integers `Z[i]`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// An element `re + im·i` of `Z[i]`.
///
/// All arithmetic is exact. Every in-scope computation keeps coefficients far
/// below the `i64` range; an overflow is a logic error and panics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianInteger {
    pub re: i64,
    pub im: i64,
}

#[inline]
fn ck_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("gaussian integer overflow")
}

#[inline]
fn ck_sub(a: i64, b: i64) -> i64 {
    a.checked_sub(b).expect("gaussian integer overflow")
}

#[inline]
fn ck_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("gaussian integer overflow")
}

impl GaussianInteger {
    pub const ZERO: Self = Self { re: 0, im: 0 };
    pub const ONE: Self = Self { re: 1, im: 0 };
    pub const I: Self = Self { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub const fn from_int(re: i64) -> Self {
        Self { re, im: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// Multiplication by `i`.
    pub fn mul_i(self) -> Self {
        Self::new(-self.im, self.re)
    }

    /// Absolute norm `|z|² = re² + im²`.
    pub fn norm(self) -> i64 {
        ck_add(ck_mul(self.re, self.re), ck_mul(self.im, self.im))
    }

    /// True for the four units `±1, ±i`.
    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// The four units of `Z[i]`.
    pub fn units() -> [Self; 4] {
        [Self::ONE, Self::I, Self::new(-1, 0), Self::new(0, -1)]
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(self, d: Self) -> Option<Self> {
        let n = d.norm();
        if n == 0 {
            return None;
        }
        let num = self * d.conj();
        if num.re % n != 0 || num.im % n != 0 {
            return None;
        }
        Some(Self::new(num.re / n, num.im / n))
    }

    /// True when `self = u·other` for one of the four units `u`.
    pub fn is_associate(self, other: Self) -> bool {
        Self::units().iter().any(|&u| u * other == self)
    }

    pub fn pow(self, exp: u32) -> Self {
        (0..exp).fold(Self::ONE, |acc, _| acc * self)
    }
}

impl From<i64> for GaussianInteger {
    fn from(re: i64) -> Self {
        Self::from_int(re)
    }
}

impl Add for GaussianInteger {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(ck_add(self.re, rhs.re), ck_add(self.im, rhs.im))
    }
}

impl Sub for GaussianInteger {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(ck_sub(self.re, rhs.re), ck_sub(self.im, rhs.im))
    }
}

impl Neg for GaussianInteger {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for GaussianInteger {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            ck_sub(ck_mul(self.re, rhs.re), ck_mul(self.im, rhs.im)),
            ck_add(ck_mul(self.re, rhs.im), ck_mul(self.im, rhs.re)),
        )
    }
}

impl AddAssign for GaussianInteger {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for GaussianInteger {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl fmt::Display for GaussianInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, im) => write!(f, "{im}i"),
            (re, 1) => write!(f, "{re}+i"),
            (re, -1) => write!(f, "{re}-i"),
            (re, im) if im < 0 => write!(f, "{re}{im}i"),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gi() -> impl Strategy<Value = GaussianInteger> {
        (-50i64..=50, -50i64..=50).prop_map(|(a, b)| GaussianInteger::new(a, b))
    }

    #[test]
    fn basic_products() {
        let a = GaussianInteger::new(1, -4);
        let b = GaussianInteger::new(4, -1);
        assert_eq!(a * b, GaussianInteger::new(0, -17));
        assert_eq!(GaussianInteger::I * GaussianInteger::I, GaussianInteger::from(-1));
        assert_eq!(GaussianInteger::new(2, 1).norm(), 5);
    }

    #[test]
    fn exact_division() {
        let a = GaussianInteger::new(4, 1);
        let b = GaussianInteger::new(4, -1);
        assert_eq!((a * b).div_exact(a), Some(b));
        assert_eq!(GaussianInteger::new(1, 0).div_exact(GaussianInteger::new(1, 1)), None);
        assert_eq!(GaussianInteger::ONE.div_exact(GaussianInteger::ZERO), None);
    }

    #[test]
    fn associates() {
        // 1 - 4i = -i (4 + i)
        assert!(GaussianInteger::new(1, -4).is_associate(GaussianInteger::new(4, 1)));
        assert!(!GaussianInteger::new(1, -4).is_associate(GaussianInteger::new(4, -1)));
    }

    #[test]
    fn display() {
        assert_eq!(GaussianInteger::new(1, -4).to_string(), "1-4i");
        assert_eq!(GaussianInteger::new(0, 289).to_string(), "289i");
        assert_eq!(GaussianInteger::new(-1, 1).to_string(), "-1+i");
    }

    proptest! {
        #[test]
        fn ring_axioms(a in gi(), b in gi(), c in gi()) {
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a * b).norm(), a.norm() * b.norm());
            prop_assert!(a.norm() >= 0);
            prop_assert_eq!(a.norm() == 0, a.is_zero());
        }
    }
}
