//! Numerical evaluation of truncated q-series at points of the upper half-plane.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::real::{cis, Real};
use super::{MockError, TauPoint};
use crate::qseries::{QSeries, Rational};

/// Coefficient growth model `|c_n| ≤ A·e^{B√n}`, `n` the distance from the
/// leading exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub a: f64,
    pub b: f64,
}

impl Envelope {
    /// Fits the envelope to the coefficients at relative exponent `n ≥ 1`,
    /// with 25% slack on the growth rate. No such coefficients gives `A = 0`.
    pub fn calibrate(series: &QSeries) -> Self {
        let Some(val) = series.valuation().cloned() else {
            return Envelope { a: 0.0, b: 0.0 };
        };
        let samples: Vec<(f64, f64)> = series
            .terms()
            .filter_map(|(e, c)| {
                let n = (e - &val).to_f64()?;
                (n >= 1.0).then(|| (n, c.abs().to_f64().unwrap_or(f64::INFINITY)))
            })
            .collect();
        if samples.is_empty() {
            return Envelope { a: 0.0, b: 0.0 };
        }
        let rate = samples
            .iter()
            .map(|(n, c)| c.max(1.0).ln() / n.sqrt())
            .fold(0.0, f64::max);
        let b = 1.25 * rate;
        let a = samples
            .iter()
            .map(|(n, c)| c * (-b * n.sqrt()).exp())
            .fold(0.0, f64::max);
        Envelope { a, b }
    }
}

/// A series converted once to working precision for repeated evaluation.
#[derive(Debug, Clone)]
pub struct PreparedSeries<T> {
    terms: Vec<(T, T)>,
    envelope: Envelope,
    valuation: f64,
    first_missing: f64,
    step: f64,
}

/// A value together with the bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<T> {
    pub value: Complex<T>,
    pub tail_bound: f64,
}

impl<T: Real> PreparedSeries<T> {
    pub fn new(series: &QSeries) -> Self {
        Self::with_envelope(series, Envelope::calibrate(series))
    }

    pub fn with_envelope(series: &QSeries, envelope: Envelope) -> Self {
        let terms = series
            .terms()
            .map(|(e, c)| (T::from_rational(e), T::from_rational(c)))
            .collect();
        let val = series.valuation().cloned().unwrap_or_else(|| series.cutoff().clone());
        // Unknown exponents beyond the cutoff live on val + Z/den.
        let den = series
            .terms()
            .map(|(e, _)| (e - &val).denom().clone())
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let step = Rational::new(BigInt::one(), den);
        let first = {
            let j = ((series.cutoff() - &val) / &step).ceil();
            &val + j * &step
        };
        PreparedSeries {
            terms,
            envelope,
            valuation: val.to_f64().unwrap_or(0.0),
            first_missing: first.to_f64().unwrap_or(f64::INFINITY),
            step: step.to_f64().unwrap_or(1.0),
        }
    }

    pub fn envelope(&self) -> Envelope {
        self.envelope
    }

    /// Bound on `Σ_{e ≥ cutoff} |c_e||q|^e` under the envelope, at `Im τ = im`.
    pub fn tail_bound(&self, im: f64) -> f64 {
        let Envelope { a, b } = self.envelope;
        if a == 0.0 {
            return 0.0;
        }
        let two_pi_y = 2.0 * std::f64::consts::PI * im;
        let log_term = |j: f64| {
            let e = self.first_missing + j * self.step;
            let n = (e - self.valuation).max(0.0);
            a.ln() + b * n.sqrt() - two_pi_y * e
        };
        let mut total = 0.0;
        let mut j = 0.0;
        loop {
            let lt = log_term(j);
            let term = lt.exp();
            let ratio = (log_term(j + 1.0) - lt).exp();
            if ratio < 0.9 && (term < 1e-300 || term < total * 1e-20) {
                return total + term * ratio / (1.0 - ratio);
            }
            total += term;
            j += 1.0;
            if j > 1e6 {
                return f64::INFINITY;
            }
        }
    }

    /// `Σ c_e e^{2πiτe}` over the stored terms.
    pub fn sum(&self, tau: Complex<T>) -> Complex<T> {
        let two_pi = T::pi() * T::from_f64(2.0);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (e, c) in &self.terms {
            let phase = tau.re * *e;
            let phase = phase - phase.floor();
            let modulus = (-(two_pi * tau.im * *e)).exp();
            acc += cis(two_pi * phase) * (*c * modulus);
        }
        acc
    }

    /// Value and tail bound; errors if the bound exceeds `max_tail`.
    pub fn eval(&self, tau: Complex<T>, max_tail: f64) -> Result<Evaluation<T>, MockError> {
        if tau.im <= T::zero() {
            return Err(MockError::InvalidPoint(format!("{tau} is not in the upper half-plane")));
        }
        let tail_bound = self.tail_bound(tau.im.to_f64());
        if tail_bound.is_nan() || tail_bound > max_tail {
            return Err(MockError::IncreaseTruncation {
                bound: tail_bound,
                requested: max_tail,
            });
        }
        Ok(Evaluation {
            value: self.sum(tau),
            tail_bound,
        })
    }
}

/// One-shot evaluation of `s` at `τ`.
pub fn eval_series<T: Real>(s: &QSeries, tau: TauPoint, max_tail: f64) -> Result<Evaluation<T>, MockError> {
    PreparedSeries::<T>::new(s).eval(tau.to_complex(), max_tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mockverify::dd::DD;
    use crate::numtheory::eta;
    use crate::qseries::{int, rat};

    #[test]
    fn constant_and_monomial() {
        let one = QSeries::one(int(10));
        let v = eval_series::<f64>(&one, TauPoint::new(0.3, 0.9), 1e-12).unwrap();
        assert_eq!(v.value, Complex::new(1.0, 0.0));
        assert_eq!(v.tail_bound, 0.0);
        let q = QSeries::monomial(int(1), int(1), int(5));
        let v = eval_series::<f64>(&q, TauPoint::new(0.0, 1.0), 1e-12).unwrap();
        assert!((v.value.re - 0.0018674427317079893).abs() < 1e-17);
        assert!(v.value.im.abs() < 1e-18);
    }

    #[test]
    fn eta_against_product() {
        let e = eta(&(rat(1, 24) + int(60)));
        let v = eval_series::<DD>(&e, TauPoint::new(0.0, 1.0), 1e-30).unwrap();
        let q = (-2.0 * std::f64::consts::PI).exp();
        let direct = q.powf(1.0 / 24.0) * (1..200).map(|n| 1.0 - q.powi(n)).product::<f64>();
        assert!((v.value.re.to_f64() - direct).abs() < 1e-15);
    }

    #[test]
    fn tail_bound_controls_truncation() {
        let e = eta(&(rat(1, 24) + int(3)));
        let p = PreparedSeries::<f64>::new(&e);
        assert!(p.tail_bound(1.0) > 0.0);
        assert!(p.tail_bound(2.0) < p.tail_bound(1.0));
        match p.eval(Complex::new(0.0, 0.05), 1e-12) {
            Err(MockError::IncreaseTruncation { .. }) => {}
            other => panic!("expected truncation error, got {other:?}"),
        }
        let err = p.eval(Complex::new(0.0, 0.05), 1e-12).unwrap_err();
        assert!(err.to_string().contains("increase truncation"));
    }

    #[test]
    fn envelope_covers_computed_coefficients() {
        let h = crate::qseries::QSeries::one(int(40)).mul(&eta(&(rat(1, 24) + int(40))).pow_int(-3).unwrap());
        let env = Envelope::calibrate(&h);
        let val = h.valuation().unwrap().clone();
        for (e, c) in h.terms() {
            let n = (e - &val).to_f64().unwrap();
            if n >= 1.0 {
                assert!(c.abs().to_f64().unwrap() <= env.a * (env.b * n.sqrt()).exp() * (1.0 + 1e-12));
            }
        }
    }
}
