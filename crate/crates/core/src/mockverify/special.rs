//! Gamma function and the scaled upper incomplete gamma `e^z Γ(a, z)`.

use num_complex::Complex;

use super::real::{cabs, cexp, cln, cpow, Real};
use super::MockError;
use crate::qseries::{rat, Rational};

/// `B_{2j} / (2j(2j-1))` for `j = 1..=15`.
fn stirling_coefficients() -> Vec<Rational> {
    let bernoulli = [
        rat(1, 6),
        rat(-1, 30),
        rat(1, 42),
        rat(-1, 30),
        rat(5, 66),
        rat(-691, 2730),
        rat(7, 6),
        rat(-3617, 510),
        rat(43867, 798),
        rat(-174611, 330),
        rat(854513, 138),
        rat(-236364091, 2730),
        rat(8553103, 6),
        rat(-23749461029, 870),
        rat(8615841276005, 14322),
    ];
    bernoulli
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let n = 2 * (j as i64 + 1);
            b / rat(n * (n - 1), 1)
        })
        .collect()
}

/// `ln Γ(x)` for `x ≥ 20` by Stirling's series (remainder below 1e-32).
fn ln_gamma_large<T: Real>(x: T) -> T {
    let half = T::from_f64(0.5);
    let two_pi = T::pi() * T::from_f64(2.0);
    let mut s = (x - half) * x.ln() - x + half * two_pi.ln();
    let inv = T::one() / x;
    let inv2 = inv * inv;
    let mut pow = inv;
    for c in stirling_coefficients() {
        s += T::from_rational(&c) * pow;
        pow *= inv2;
    }
    s
}

/// `Γ(x)` for real `x` that is not a non-positive integer.
pub fn gamma<T: Real>(x: T) -> Result<T, MockError> {
    if is_gamma_pole(x) {
        return Err(MockError::Numeric(format!("gamma pole at {x}")));
    }
    let mut shifted = x;
    let mut denom = T::one();
    while shifted < T::from_f64(20.0) {
        denom *= shifted;
        shifted += T::one();
    }
    Ok(ln_gamma_large(shifted).exp() / denom)
}

/// `e^z Γ(a, z)` for real `a` and complex `z` off the closed negative real axis.
///
/// Uses the power series of the lower incomplete gamma for small `|z|` and a
/// Lentz continued fraction otherwise. The scaling keeps the result of order
/// `z^{a-1}` for large `z`.
pub fn gamma_upper_scaled<T: Real>(a: T, z: Complex<T>) -> Result<Complex<T>, MockError> {
    if z.re <= T::zero() && z.im.is_zero() {
        return Err(MockError::Numeric(format!(
            "incomplete gamma needs z off (-∞,0], got {z}"
        )));
    }
    if cabs(z) < T::from_f64(2.5) {
        series(a, z)
    } else {
        continued_fraction(a, z)
    }
}

fn series<T: Real>(a: T, z: Complex<T>) -> Result<Complex<T>, MockError> {
    let g = gamma(a)?;
    let eps = T::epsilon();
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term / a;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term = -(term * z) / T::from_f64(n);
        let add = term / (a + T::from_f64(n));
        sum += add;
        if cabs(add) < eps * cabs(sum) * T::from_f64(1e-2) {
            break;
        }
        if n > 500.0 {
            return Err(MockError::Numeric("incomplete gamma series did not converge".into()));
        }
    }
    let lower = cpow(z, a) * sum;
    Ok(cexp(z) * (Complex::new(g, T::zero()) - lower))
}

fn continued_fraction<T: Real>(a: T, z: Complex<T>) -> Result<Complex<T>, MockError> {
    // small enough to act as zero, large enough that 1/tiny² stays finite
    let tiny = T::from_f64(1e-150);
    let eps = T::epsilon();
    let one = Complex::new(T::one(), T::zero());
    let mut b = z + one - Complex::new(a, T::zero());
    let mut c = Complex::new(T::one() / tiny, T::zero());
    let mut d = one / b;
    let mut h = d;
    for i in 1..5000 {
        let fi = T::from_i64(i);
        let an = -(fi * (fi - a));
        b += Complex::new(T::from_f64(2.0), T::zero());
        d = b + d * an;
        if cabs(d) < tiny {
            d = Complex::new(tiny, T::zero());
        }
        c = b + Complex::new(an, T::zero()) / c;
        if cabs(c) < tiny {
            c = Complex::new(tiny, T::zero());
        }
        d = one / d;
        let del = d * c;
        h *= del;
        if cabs(del - one) < eps * T::from_f64(16.0) {
            // e^z Γ(a,z) = z^a · h
            return Ok(cexp(cln(z) * a) * h);
        }
    }
    Err(MockError::Numeric(format!(
        "incomplete gamma continued fraction did not converge at z = {z}"
    )))
}

/// `true` when `a` is a non-positive integer (where `Γ(a)` has a pole).
pub fn is_gamma_pole<T: Real>(a: T) -> bool {
    a <= T::zero() && a == a.floor()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mockverify::dd::DD;
    use crate::mockverify::real::c;

    #[test]
    fn gamma_values() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma(0.5f64).unwrap() - sqrt_pi).abs() < 1e-13);
        assert!((gamma(-0.5f64).unwrap() + 2.0 * sqrt_pi).abs() < 1e-13);
        assert!((gamma(5.0f64).unwrap() - 24.0).abs() < 1e-12);
        assert!(gamma(-2.0f64).is_err());
        let g = gamma(DD::from_f64(0.5)).unwrap();
        assert!(((g * g) - DD::PI).abs().to_f64() < 1e-29);
    }

    #[test]
    fn incomplete_gamma_closed_forms() {
        // Γ(1, z) = e^{-z}, so the scaled value is 1.
        for z in [c::<f64>(0.3, 0.0), c(4.0, 1.0), c(1.0, -2.0)] {
            let g = gamma_upper_scaled(1.0, z).unwrap();
            assert!((g - c(1.0, 0.0)).norm() < 1e-13, "{z} -> {g}");
        }
        // Γ(1/2, x) = √π erfc(√x); erfc(1) = 0.157299207050285130658779364917390740703933002
        let g = gamma_upper_scaled(0.5f64, c(1.0, 0.0)).unwrap();
        let expect = std::f64::consts::PI.sqrt() * 0.157_299_207_050_285_13 * 1f64.exp();
        assert!((g.re - expect).abs() < 1e-14);
    }

    #[test]
    fn series_and_fraction_overlap() {
        for a in [-0.5f64, 0.5, -1.5, 2.25] {
            for z in [c::<f64>(2.0, 0.0), c(2.2, 0.7), c(1.8, -1.2)] {
                let s = series(a, z).unwrap();
                let f = continued_fraction(a, z).unwrap();
                assert!((s - f).norm() < 1e-12 * s.norm(), "a={a} z={z}: {s} vs {f}");
            }
        }
        let a = DD::from_f64(-0.5);
        let z = c::<DD>(2.3, 0.0);
        let s = series(a, z).unwrap();
        let f = continued_fraction(a, z).unwrap();
        let rel = (cabs(s - f) / cabs(s)).to_f64();
        assert!(rel < 1e-27, "relative difference {rel:e}");
    }
}
