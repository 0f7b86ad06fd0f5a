//! Floating-point scalars usable by the numerical code, plus principal-branch
//! complex helpers that only need the operations listed in [`Real`].

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{NumAssign, ToPrimitive};

use crate::qseries::Rational;

pub trait Real: Copy + Debug + Display + PartialOrd + NumAssign + Neg<Output = Self> + Send + Sync + 'static {
    /// Approximate number of correct significant decimal digits.
    const DIGITS: u32;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn epsilon() -> Self;
    fn pi() -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn atan2(self, x: Self) -> Self;
    fn floor(self) -> Self;
    fn is_finite(self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_f64(n as f64)
    }

    fn from_rational(q: &Rational) -> Self {
        Self::from_f64(q.to_f64().unwrap_or(f64::NAN))
    }

    fn powf(self, a: Self) -> Self {
        (a * self.ln()).exp()
    }

    fn hypot(self, other: Self) -> Self {
        let (a, b) = (self.abs(), other.abs());
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let r = small / big;
        big * (Self::one() + r * r).sqrt()
    }

    fn max_of(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Real for f64 {
    const DIGITS: u32 = 15;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn powf(self, a: Self) -> Self {
        f64::powf(self, a)
    }
    fn hypot(self, other: Self) -> Self {
        f64::hypot(self, other)
    }
}

pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::from_f64(re), T::from_f64(im))
}

pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

pub fn carg<T: Real>(z: Complex<T>) -> T {
    z.im.atan2(z.re)
}

/// `e^{iθ}`.
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

pub fn cexp<T: Real>(z: Complex<T>) -> Complex<T> {
    cis(z.im) * z.re.exp()
}

/// Principal logarithm.
pub fn cln<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(cabs(z).ln(), carg(z))
}

/// Principal power `z^a = exp(a log z)` for real `a`.
pub fn cpow<T: Real>(z: Complex<T>, a: T) -> Complex<T> {
    if z.re.is_zero() && z.im.is_zero() {
        return Complex::new(T::zero(), T::zero());
    }
    cexp(cln(z) * a)
}

pub fn cinv<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(T::one(), T::zero()) / z
}

/// Sup-norm of a slice of complex values.
pub fn sup_norm<T: Real>(values: &[Complex<T>]) -> T {
    values.iter().fold(T::zero(), |m, z| m.max_of(cabs(*z)))
}
