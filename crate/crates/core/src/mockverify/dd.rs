//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`s with
//! `|lo| ≤ ulp(hi)/2`, giving about 32 significant digits.
//!
//! The algorithms follow the classic QD library (error-free transformations
//! with fused multiply-add for the products).

use std::cmp::Ordering;
use std::fmt;
use std::num::ParseFloatError;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

use super::real::Real;
use crate::qseries::Rational;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

pub type DD = DoubleDouble;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };
    pub const PI: DD = DD {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const TWO_PI: DD = DD {
        hi: std::f64::consts::TAU,
        lo: 2.449_293_598_294_706_4e-16,
    };
    pub const HALF_PI: DD = DD {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123_233_995_736_766e-17,
    };
    pub const LN2: DD = DD {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };
    pub const EPSILON: f64 = 4.93038065763132e-32; // 2^-104

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DD { hi, lo }
    }

    pub const fn from_f64_const(x: f64) -> Self {
        DD { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let hi = n.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return DD { hi, lo: 0.0 };
        }
        let rest = n - BigInt::from_f64(hi).expect("finite");
        DD::new(hi, rest.to_f64().unwrap_or(0.0))
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b);
        p2 += self.lo * b;
        let (hi, lo) = quick_two_sum(p1, p2);
        DD { hi, lo }
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        DD {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    fn sqr(self) -> Self {
        self * self
    }

    fn round_f64(self) -> f64 {
        let r = self.hi.round();
        if r == self.hi {
            r + self.lo.round()
        } else if (r - self.hi).abs() == 0.5 && self.lo != 0.0 {
            if self.lo > 0.0 {
                self.hi.ceil()
            } else {
                self.hi.floor()
            }
        } else {
            r
        }
    }

    fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor_dd()
        } else {
            -(-self).floor_dd()
        }
    }

    fn floor_dd(self) -> Self {
        let f = self.hi.floor();
        if f == self.hi {
            DD::new(f, self.lo.floor())
        } else {
            DD { hi: f, lo: 0.0 }
        }
    }

    /// Taylor series of `sin` and `cos` for `|t| ≤ π/4`.
    fn sin_cos_taylor(t: DD) -> (DD, DD) {
        let t2 = t.sqr();
        let mut term = t;
        let mut s = t;
        let mut k = 1.0;
        loop {
            term = -(term * t2) / DD::from_f64((k + 1.0) * (k + 2.0));
            s += term;
            k += 2.0;
            if term.hi.abs() < DD::EPSILON * 1e-2 {
                break;
            }
        }
        let mut term = DD::ONE;
        let mut cc = DD::ONE;
        let mut k = 0.0;
        loop {
            term = -(term * t2) / DD::from_f64((k + 1.0) * (k + 2.0));
            cc += term;
            k += 2.0;
            if term.hi.abs() < DD::EPSILON * 1e-2 {
                break;
            }
        }
        (s, cc)
    }

    pub fn sin_cos(self) -> (DD, DD) {
        if !self.hi.is_finite() {
            return (DD::from_f64(f64::NAN), DD::from_f64(f64::NAN));
        }
        let turns = (self / DD::TWO_PI).round_f64();
        let z = self - DD::TWO_PI.mul_f64(turns);
        let j = (z / DD::HALF_PI).round_f64();
        let t = z - DD::HALF_PI.mul_f64(j);
        let (s, cc) = DD::sin_cos_taylor(t);
        match (j as i64).rem_euclid(4) {
            0 => (s, cc),
            1 => (cc, -s),
            2 => (-s, -cc),
            _ => (-cc, s),
        }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == 0.0 {
            write!(f, "{:e}", self.hi)
        } else {
            write!(f, "{:e}{:+e}", self.hi, self.lo)
        }
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, b: DD) -> DD {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        DD { hi, lo }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, b: DD) -> DD {
        self + (-b)
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, b: DD) -> DD {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, b: DD) -> DD {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() {
            return DD { hi: q1, lo: 0.0 };
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        DD { hi: q1, lo: q2 } + DD::from_f64(q3)
    }
}

impl Rem for DD {
    type Output = DD;
    fn rem(self, b: DD) -> DD {
        self - b * (self / b).trunc()
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for DD {
            fn $m(&mut self, b: DD) {
                *self = *self $op b;
            }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /, RemAssign rem_assign %);

impl Zero for DD {
    fn zero() -> Self {
        DD::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DD {
    fn one() -> Self {
        DD::ONE
    }
}

impl Num for DD {
    type FromStrRadixErr = ParseFloatError;

    /// Parses through `f64`, so only about 16 digits of the input survive.
    fn from_str_radix(s: &str, _radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        s.parse::<f64>().map(DD::from_f64)
    }
}

impl Real for DD {
    const DIGITS: u32 = 31;

    fn from_f64(x: f64) -> Self {
        DD { hi: x, lo: 0.0 }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn from_i64(n: i64) -> Self {
        let hi = n as f64;
        DD::new(hi, (n - hi as i64) as f64)
    }

    fn from_rational(q: &Rational) -> Self {
        DD::from_bigint(q.numer()) / DD::from_bigint(q.denom())
    }

    fn epsilon() -> Self {
        DD::from_f64(DD::EPSILON)
    }

    fn pi() -> Self {
        DD::PI
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                DD::ZERO
            } else {
                DD::from_f64(f64::NAN)
            };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let (p, e) = two_prod(ax, ax);
        let diff = self - DD::new(p, e);
        DD::from_f64(ax) + DD::from_f64(diff.hi * (x * 0.5))
    }

    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DD::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DD::ZERO;
        }
        if self.is_zero() {
            return DD::ONE;
        }
        let k = (self.hi / DD::LN2.hi).round();
        let r = (self - DD::LN2.mul_f64(k)).ldexp(-9);
        // expm1 by Taylor, then (1+s)^(2^9) - 1 by repeated doubling.
        let mut s = r;
        let mut term = r;
        let mut n = 2.0;
        loop {
            term = term * r / DD::from_f64(n);
            s += term;
            if term.hi.abs() < DD::EPSILON * 1e-3 * s.hi.abs() {
                break;
            }
            n += 1.0;
        }
        for _ in 0..9 {
            s = s.ldexp(1) + s.sqr();
        }
        (s + DD::ONE).ldexp(k as i32)
    }

    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return DD::from_f64(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        let x = DD::from_f64(self.hi.ln());
        x + self * (-x).exp() - DD::ONE
    }

    fn sin(self) -> Self {
        self.sin_cos().0
    }

    fn cos(self) -> Self {
        self.sin_cos().1
    }

    fn atan2(self, x: Self) -> Self {
        let y = self;
        if x.is_zero() && y.is_zero() {
            return DD::ZERO;
        }
        let mut a = DD::from_f64(y.hi.atan2(x.hi));
        let r = x.hypot(y);
        let (xx, yy) = (x / r, y / r);
        let (s, c) = a.sin_cos();
        if xx.hi.abs() > yy.hi.abs() {
            a += (yy - s) / c;
        } else {
            a -= (xx - c) / s;
        }
        a
    }

    fn floor(self) -> Self {
        self.floor_dd()
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::rat;

    fn close(a: DD, b: DD, tol: f64) -> bool {
        ((a - b).abs() / b.abs().max_of(DD::ONE)).to_f64() < tol
    }

    #[test]
    fn arithmetic_is_double_double() {
        let third = DD::ONE / DD::from_f64(3.0);
        let back = third * DD::from_f64(3.0);
        assert!((back - DD::ONE).abs().to_f64() < 1e-31);
        let x = DD::from_rational(&rat(1, 10));
        assert!((x * DD::from_f64(10.0) - DD::ONE).abs().to_f64() < 1e-31);
        let two = DD::from_f64(2.0);
        let r = two.sqrt();
        assert!((r * r - two).abs().to_f64() < 1e-31);
    }

    #[test]
    fn transcendental_accuracy() {
        // e = exp(1), checked against its 33-digit decimal expansion split into two doubles
        let e_ref = DD::new(std::f64::consts::E, 1.445_646_891_729_250_2e-16);
        assert!(close(DD::ONE.exp(), e_ref, 1e-30));
        let x = DD::from_rational(&rat(7, 3));
        assert!(close(x.ln().exp(), x, 1e-30));
        assert!(close(x.exp().ln(), x, 1e-30));
        let (s, c) = x.sin_cos();
        assert!((s * s + c * c - DD::ONE).abs().to_f64() < 1e-30);
        // sin(π/6) = 1/2
        let (s, _) = (DD::PI / DD::from_f64(6.0)).sin_cos();
        assert!((s - DD::from_f64(0.5)).abs().to_f64() < 1e-31);
        let a = DD::ONE.atan2(DD::ONE);
        assert!(close(a * DD::from_f64(4.0), DD::PI, 1e-31));
        let a = DD::from_f64(-1.0).atan2(DD::from_f64(-1e-3));
        assert!(close(
            a,
            DD::from_f64(-1e-3).atan2(DD::from_f64(1.0)) - DD::HALF_PI,
            1e-30
        ));
    }

    #[test]
    fn large_arguments() {
        let x = DD::from_f64(100.25);
        let (s, c) = x.sin_cos();
        assert!((s.to_f64() - 100.25f64.sin()).abs() < 1e-13);
        assert!((c.to_f64() - 100.25f64.cos()).abs() < 1e-13);
        assert!(((-x).exp().to_f64() / (-100.25f64).exp() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn floor_and_rem() {
        assert_eq!(DD::new(2.0, -1e-20).floor().to_f64(), 1.0);
        assert_eq!(DD::from_f64(-0.5).floor().to_f64(), -1.0);
        let r = DD::from_f64(7.5) % DD::from_f64(2.0);
        assert_eq!(r.to_f64(), 1.5);
    }
}
