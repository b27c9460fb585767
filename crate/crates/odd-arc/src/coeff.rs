//! Exact coefficients: Gaussian integers with arbitrary-precision parts.
//!
//! All algebra in this crate is done over `Z` or `Z[i]`. A single type covers
//! both; plain integers are Gaussian integers with vanishing imaginary part.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// A Gaussian integer `re + im*i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussInt { re: re.into(), im: im.into() }
    }

    pub fn zero() -> Self {
        GaussInt { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn one() -> Self {
        GaussInt { re: BigInt::one(), im: BigInt::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        GaussInt { re: BigInt::from(v), im: BigInt::zero() }
    }

    /// `i^k` for any residue of `k` mod 4.
    pub fn i_pow(k: u8) -> Self {
        match k % 4 {
            0 => GaussInt::new(1, 0),
            1 => GaussInt::new(0, 1),
            2 => GaussInt::new(-1, 0),
            _ => GaussInt::new(0, -1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussInt { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Field norm `re^2 + im^2`; the Euclidean size function of `Z[i]`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Real part mod 2 (used for the mod-2 comparisons; only valid on real values).
    pub fn re_mod2(&self) -> u8 {
        debug_assert!(self.im.is_zero());
        if (&self.re % 2u8).is_zero() { 0 } else { 1 }
    }

    /// Euclidean division by nearest rounding: `self = q*d + r` with `norm(r) < norm(d)`.
    pub fn div_rem(&self, d: &GaussInt) -> (GaussInt, GaussInt) {
        assert!(!d.is_zero(), "division by zero Gaussian integer");
        // (a*conj(d)) / norm(d), rounded to the nearest integer componentwise.
        let nd = d.norm();
        let num = self * &d.conj();
        let q = GaussInt { re: round_div(&num.re, &nd), im: round_div(&num.im, &nd) };
        let r = self - &(&q * d);
        debug_assert!(r.norm() < nd);
        (q, r)
    }

    /// Whether the value is a unit, i.e. one of `1, i, -1, -i` (or `±1` over `Z`).
    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }
}

/// Rounds `a / b` to the nearest integer (ties toward +infinity); `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let b2: BigInt = b * 2;
    let shifted: BigInt = a * 2 + b;
    let mut q = &shifted / &b2;
    // BigInt division truncates toward zero; fix up for negative operands.
    if (&shifted % &b2).is_negative() {
        q -= 1;
    }
    q
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl<'a, 'b> $trait<&'b GaussInt> for &'a GaussInt {
            type Output = GaussInt;
            fn $method(self, rhs: &'b GaussInt) -> GaussInt {
                let ($a, $b) = (self, rhs);
                $body
            }
        }
        impl $trait<GaussInt> for GaussInt {
            type Output = GaussInt;
            fn $method(self, rhs: GaussInt) -> GaussInt {
                $trait::$method(&self, &rhs)
            }
        }
        impl<'b> $trait<&'b GaussInt> for GaussInt {
            type Output = GaussInt;
            fn $method(self, rhs: &'b GaussInt) -> GaussInt {
                $trait::$method(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussInt { re: &a.re + &b.re, im: &a.im + &b.im });
forward_binop!(Sub, sub, |a, b| GaussInt { re: &a.re - &b.re, im: &a.im - &b.im });
forward_binop!(Mul, mul, |a, b| GaussInt {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re,
});

impl Neg for &GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt { re: -self.re, im: -self.im }
    }
}

impl AddAssign<&GaussInt> for GaussInt {
    fn add_assign(&mut self, rhs: &GaussInt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussInt> for GaussInt {
    fn sub_assign(&mut self, rhs: &GaussInt) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussInt> for GaussInt {
    fn mul_assign(&mut self, rhs: &GaussInt) {
        let prod = &*self * rhs;
        *self = prod;
    }
}

impl From<i64> for GaussInt {
    fn from(v: i64) -> Self {
        GaussInt::from_int(v)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return match () {
                _ if self.im.is_one() => write!(f, "i"),
                _ if (-&self.im).is_one() => write!(f, "-i"),
                _ => write!(f, "{}i", self.im),
            };
        }
        if self.im.is_positive() {
            if self.im.is_one() {
                write!(f, "{}+i", self.re)
            } else {
                write!(f, "{}+{}i", self.re, self.im)
            }
        } else if (-&self.im).is_one() {
            write!(f, "{}-i", self.re)
        } else {
            write!(f, "{}{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
