//! Eichler integrals of unary theta series and the non-holomorphic
//! completions built from them.
//!
//! For a shadow `θ(v) = Σ m_λ e^{2πiλv}` and weight `k`,
//!
//! ```text
//! I(τ; w) = ∫_w^{i∞} θ(v) (-i(v+τ))^{-k} dv,
//! ```
//!
//! taken along the vertical ray `v = w + it`. With `z = -i(w+τ)` each theta
//! term integrates in closed form:
//!
//! ```text
//! λ > 0:  i·m·e^{2πiλw}·(2πλ)^{k-1}·e^{x}Γ(1-k, x),  x = 2πλz
//! λ = 0:  i·m·z^{1-k}/(k-1)
//! ```
//!
//! The default start point is `w = -τ̄`, where `z = 2·Im τ` is real.

use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::eval::PreparedSeries;
use super::quad::AdaptiveQuadrature;
use super::real::{cabs, cexp, cpow, Real};
use super::special::gamma_upper_scaled;
use super::MockError;
use crate::numtheory::ThetaSpec;
use crate::qseries::{int, rat, QSeries, Rational};

/// A constant `(re + i·im)·√radicand·π^{pi_power}` kept exact until it is
/// needed in a given precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prefactor {
    pub re: Rational,
    pub im: Rational,
    pub radicand: Rational,
    pub pi_power: i32,
}

impl Prefactor {
    pub fn zero() -> Self {
        Prefactor {
            re: int(0),
            im: int(0),
            radicand: int(1),
            pi_power: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn value<T: Real>(&self) -> Complex<T> {
        let mut scale = T::from_rational(&self.radicand).sqrt();
        let pi = T::pi();
        for _ in 0..self.pi_power.unsigned_abs() {
            if self.pi_power > 0 {
                scale *= pi;
            } else {
                scale /= pi;
            }
        }
        Complex::new(T::from_rational(&self.re), T::from_rational(&self.im)) * scale
    }
}

/// Tuning for the integral backends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralOptions {
    /// Absolute tolerance for quadrature and for the backend comparison.
    pub tolerance: f64,
    /// Gauss–Legendre points per panel.
    pub points: usize,
    /// Run the quadrature backend next to the closed form and compare.
    pub check_backends: bool,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        IntegralOptions {
            tolerance: 1e-10,
            points: 20,
            check_backends: true,
        }
    }
}

/// Theta terms `(λ, m)` in working precision, `λ` up to the point where
/// `e^{-2πλ·im_min}` drops below `cut`.
fn theta_terms<T: Real>(shadow: &ThetaSpec, im_min: f64, cut: f64) -> Vec<(T, T, Rational)> {
    let reach = -cut.ln() / (2.0 * std::f64::consts::PI * im_min);
    let bound = Rational::from_integer((reach.ceil() as i64 + 1).into());
    shadow
        .terms(&bound)
        .into_iter()
        .map(|(l, m)| (T::from_rational(&l), T::from_i64(m), l))
        .collect()
}

fn weight_parts<T: Real>(k: &Rational) -> (T, bool) {
    (T::from_rational(k), *k > int(1))
}

fn i_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `z = -i(w+τ)`, checked to lie in the right half-plane.
fn shifted<T: Real>(tau: Complex<T>, w: Complex<T>) -> Result<Complex<T>, MockError> {
    let z = -(i_unit::<T>() * (w + tau));
    if z.re <= T::zero() {
        return Err(MockError::Branch(z.re.to_f64()));
    }
    Ok(z)
}

/// Closed form of `I(τ; w)` via incomplete gamma functions.
pub fn eichler_closed_form<T: Real>(
    shadow: &ThetaSpec,
    k: &Rational,
    tau: Complex<T>,
    w: Complex<T>,
) -> Result<Complex<T>, MockError> {
    if w.im <= T::zero() {
        return Err(MockError::InvalidPoint(format!(
            "start point {w} must have positive imaginary part"
        )));
    }
    let z = shifted(tau, w)?;
    let (kt, above_one) = weight_parts::<T>(k);
    let a = T::one() - kt;
    let two_pi = T::pi() * T::from_f64(2.0);
    let cut = T::epsilon().to_f64() * 1e-3;
    let mut acc = Complex::new(T::zero(), T::zero());
    for (lambda, m, exact) in theta_terms::<T>(shadow, w.im.to_f64(), cut) {
        if exact.is_zero() {
            if !above_one {
                return Err(MockError::Numeric(format!(
                    "constant theta term needs weight > 1, got {k}"
                )));
            }
            acc += i_unit::<T>() * cpow(z, a) * (m / (kt - T::one()));
            continue;
        }
        let tl = two_pi * lambda;
        let g = gamma_upper_scaled(a, z * tl)?;
        let phase = cexp(i_unit::<T>() * w * tl);
        acc += i_unit::<T>() * phase * g * (m * tl.powf(kt - T::one()));
    }
    Ok(acc)
}

/// `I(τ; w)` by adaptive quadrature along `v = w + it`, with the constant
/// theta term's tail beyond the cut added analytically.
pub fn eichler_quadrature<T: Real>(
    shadow: &ThetaSpec,
    k: &Rational,
    tau: Complex<T>,
    w: Complex<T>,
    opts: &IntegralOptions,
) -> Result<Complex<T>, MockError> {
    if w.im <= T::zero() {
        return Err(MockError::InvalidPoint(format!(
            "start point {w} must have positive imaginary part"
        )));
    }
    let z = shifted(tau, w)?;
    let (kt, above_one) = weight_parts::<T>(k);
    let cut = opts.tolerance * 1e-3;
    let terms = theta_terms::<T>(shadow, w.im.to_f64(), cut);
    let constant: Option<T> = terms.iter().find(|t| t.2.is_zero()).map(|t| t.1);
    if constant.is_some() && !above_one {
        return Err(MockError::Numeric(format!(
            "constant theta term needs weight > 1, got {k}"
        )));
    }
    let lambda_min = terms
        .iter()
        .filter(|t| !t.2.is_zero())
        .map(|t| t.2.to_f64().unwrap_or(1.0))
        .fold(f64::INFINITY, f64::min);
    let end = path_length(lambda_min, w.im.to_f64(), cut);
    let two_pi = T::pi() * T::from_f64(2.0);
    let i = i_unit::<T>();

    let mut integrand = |t: T| -> Result<Complex<T>, MockError> {
        let zt = z + Complex::new(t, T::zero());
        if zt.re <= T::zero() {
            return Err(MockError::Branch(zt.re.to_f64()));
        }
        let v = w + i * t;
        let mut theta = Complex::new(T::zero(), T::zero());
        for (lambda, m, _) in &terms {
            theta += cexp(i * v * (two_pi * *lambda)) * *m;
        }
        Ok(i * theta * cpow(zt, -kt))
    };
    let quad = AdaptiveQuadrature::<T>::new(opts.points, opts.tolerance * 0.1);
    let mut total = quad.integrate_geometric(T::from_f64(end), &mut integrand)?;
    if let Some(m0) = constant {
        let zt = z + Complex::new(T::from_f64(end), T::zero());
        total += i * cpow(zt, T::one() - kt) * (m0 / (kt - T::one()));
    }
    Ok(total)
}

/// Length of the integration path after which `e^{-2πλ_min(im + t)} < cut`.
fn path_length(lambda_min: f64, im: f64, cut: f64) -> f64 {
    if !lambda_min.is_finite() {
        return 1.0;
    }
    let needed = -cut.ln() / (2.0 * std::f64::consts::PI * lambda_min);
    (needed - im).max(1.0)
}

/// `I(τ; w)` by both backends; returns the closed form after checking that
/// the quadrature agrees within `opts.tolerance`.
pub fn eichler_depth1<T: Real>(
    shadow: &ThetaSpec,
    k: &Rational,
    tau: Complex<T>,
    w: Complex<T>,
    opts: &IntegralOptions,
) -> Result<Complex<T>, MockError> {
    let closed = eichler_closed_form(shadow, k, tau, w)?;
    if opts.check_backends {
        let quad = eichler_quadrature(shadow, k, tau, w, opts)?;
        let difference = cabs(quad - closed).to_f64();
        if difference.is_nan() || difference > opts.tolerance {
            return Err(MockError::BackendsDisagree {
                quadrature: format!("{quad}"),
                closed_form: format!("{closed}"),
                difference,
            });
        }
    }
    Ok(closed)
}

/// The default start point `-τ̄`.
pub fn mirror_point<T: Real>(tau: Complex<T>) -> Complex<T> {
    Complex::new(-tau.re, tau.im)
}

/// `f + prefactor·I(τ; -τ̄)` for a holomorphic `f` of the given weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionSpec {
    pub weight: Rational,
    pub prefactor: Prefactor,
    pub shadow: ThetaSpec,
}

impl CompletionSpec {
    /// Completion of `f_{2,c1}`: prefactor `-3i/(4√2π)` and shadow
    /// `Σ_{n ∈ Z + c1/2} q^{n²}`.
    pub fn rank2(c1: i64) -> Self {
        let mu = rat(c1.rem_euclid(2), 2);
        CompletionSpec {
            weight: rat(3, 2),
            prefactor: Prefactor {
                re: int(0),
                im: rat(-3, 4),
                radicand: rat(1, 2),
                pi_power: -1,
            },
            shadow: ThetaSpec::new(mu, int(2)).expect("valid theta"),
        }
    }

    pub fn with_prefactor(&self, prefactor: Prefactor) -> Self {
        CompletionSpec {
            prefactor,
            ..self.clone()
        }
    }

    pub fn with_shadow(&self, shadow: ThetaSpec) -> Self {
        CompletionSpec { shadow, ..self.clone() }
    }

    /// `prefactor·I(τ; w)` for an arbitrary start point `w`.
    pub fn correction_at<T: Real>(
        &self,
        tau: Complex<T>,
        w: Complex<T>,
        opts: &IntegralOptions,
    ) -> Result<Complex<T>, MockError> {
        if self.prefactor.is_zero() {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        let integral = eichler_depth1(&self.shadow, &self.weight, tau, w, opts)?;
        Ok(self.prefactor.value::<T>() * integral)
    }
}

/// `f̂(τ) = f(τ) + prefactor·I(τ; -τ̄)`.
pub fn complete_depth1<T: Real>(
    f: &PreparedSeries<T>,
    spec: &CompletionSpec,
    tau: Complex<T>,
    max_tail: f64,
    opts: &IntegralOptions,
) -> Result<Complex<T>, MockError> {
    let holo = f.eval(tau, max_tail)?.value;
    Ok(holo + spec.correction_at(tau, mirror_point(tau), opts)?)
}

/// What sits in front of `ϑ(3v)` inside a depth-2 integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerMode {
    /// The bivariate completion `f̂_{2,j}(τ, -v)`.
    Completion,
    /// A fixed constant; `Constant(1)` turns the integral into a depth-1 one.
    Constant(f64, f64),
}

/// One summand `∫ f̂_j(τ,-v) θ_j(v) (-i(v+τ))^{-k} dv` of a depth-2 correction.
#[derive(Debug, Clone, PartialEq)]
pub struct Depth2Channel {
    pub inner_series: QSeries,
    pub inner: CompletionSpec,
    pub shadow: ThetaSpec,
}

/// `f(τ) + prefactor·Σ_j ∫_{-τ̄}^{i∞} f̂_j(τ,-v) θ_j(v) (-i(v+τ))^{-k} dv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Depth2Spec {
    pub weight: Rational,
    pub prefactor: Prefactor,
    pub channels: Vec<Depth2Channel>,
}

impl Depth2Spec {
    /// The completion of `f_{3,0}`: prefactor `-(i/π)(3/2)^{3/2}`, channels
    /// `j ∈ {0,1}` with `f̂_{2,j}` inside and `ϑ_{j/2}(3v)` outside.
    pub fn rank3(order: usize) -> Result<Self, MockError> {
        let channels = (0..2)
            .map(|j| {
                Ok(Depth2Channel {
                    inner_series: crate::genseries::f2(j, order)?,
                    inner: CompletionSpec::rank2(j),
                    shadow: ThetaSpec::new(rat(j, 2), int(6))?,
                })
            })
            .collect::<Result<Vec<_>, MockError>>()?;
        Ok(Depth2Spec {
            weight: rat(3, 2),
            prefactor: Prefactor {
                re: int(0),
                im: rat(-3, 2),
                radicand: rat(3, 2),
                pi_power: -1,
            },
            channels,
        })
    }
}

/// A depth-2 spec with its inner series prepared in working precision.
#[derive(Debug, Clone)]
pub struct PreparedDepth2<T> {
    spec: Depth2Spec,
    inner: Vec<PreparedSeries<T>>,
}

impl<T: Real> PreparedDepth2<T> {
    pub fn new(spec: Depth2Spec) -> Self {
        let inner = spec
            .channels
            .iter()
            .map(|c| PreparedSeries::new(&c.inner_series))
            .collect();
        PreparedDepth2 { spec, inner }
    }

    pub fn spec(&self) -> &Depth2Spec {
        &self.spec
    }

    /// `prefactor·Σ_j J_j(τ)`, the whole depth-2 correction.
    pub fn correction(
        &self,
        tau: Complex<T>,
        mode: InnerMode,
        max_tail: f64,
        opts: &IntegralOptions,
    ) -> Result<Complex<T>, MockError> {
        if self.spec.prefactor.is_zero() {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        let mut total = Complex::new(T::zero(), T::zero());
        for (channel, series) in self.spec.channels.iter().zip(&self.inner) {
            total += self.channel_integral(channel, series, tau, mode, max_tail, opts)?;
        }
        Ok(self.spec.prefactor.value::<T>() * total)
    }

    fn channel_integral(
        &self,
        channel: &Depth2Channel,
        series: &PreparedSeries<T>,
        tau: Complex<T>,
        mode: InnerMode,
        max_tail: f64,
        opts: &IntegralOptions,
    ) -> Result<Complex<T>, MockError> {
        let i = i_unit::<T>();
        let y = tau.im;
        let start = mirror_point(tau);
        let (k, above_one) = weight_parts::<T>(&self.spec.weight);
        let cut = opts.tolerance * 1e-3;
        let outer = theta_terms::<T>(&channel.shadow, y.to_f64(), cut);
        let outer_const = outer.iter().find(|t| t.2.is_zero()).map(|t| t.1);
        if outer_const.is_some() && !above_one {
            return Err(MockError::Numeric("constant theta term needs weight > 1".into()));
        }

        let (front, inner_prefactor) = match mode {
            InnerMode::Completion => (series.eval(tau, max_tail)?.value, channel.inner.prefactor.value::<T>()),
            InnerMode::Constant(re, im) => (
                Complex::new(T::from_f64(re), T::from_f64(im)),
                Complex::new(T::zero(), T::zero()),
            ),
        };
        let use_inner = !inner_prefactor.is_zero();
        let (k_in, _) = weight_parts::<T>(&channel.inner.weight);
        let inner_terms = theta_terms::<T>(&channel.inner.shadow, y.to_f64(), cut);
        let inner_const = inner_terms.iter().find(|t| t.2.is_zero()).map(|t| t.1);

        let lambda_min = outer
            .iter()
            .chain(if use_inner {
                inner_terms.iter()
            } else {
                inner_terms[..0].iter()
            })
            .filter(|t| !t.2.is_zero())
            .map(|t| t.2.to_f64().unwrap_or(1.0))
            .fold(f64::INFINITY, f64::min);
        let end = path_length(lambda_min, y.to_f64(), cut);
        let two_pi = T::pi() * T::from_f64(2.0);
        let two_y = y * T::from_f64(2.0);

        let mut integrand = |t: T| -> Result<Complex<T>, MockError> {
            let v = start + i * t;
            let zt = Complex::new(two_y + t, T::zero());
            if zt.re <= T::zero() {
                return Err(MockError::Branch(zt.re.to_f64()));
            }
            let mut f_hat = front;
            if use_inner {
                let inner = eichler_closed_form(&channel.inner.shadow, &channel.inner.weight, tau, v)?;
                f_hat += inner_prefactor * inner;
            }
            let mut theta = Complex::new(T::zero(), T::zero());
            for (lambda, m, _) in &outer {
                theta += cexp(i * v * (two_pi * *lambda)) * *m;
            }
            Ok(i * f_hat * theta * cpow(zt, -k))
        };
        let quad = AdaptiveQuadrature::<T>::new(opts.points, opts.tolerance * 0.1);
        let mut total = quad.integrate_geometric(T::from_f64(end), &mut integrand)?;

        if let Some(m0) = outer_const {
            // Beyond the cut only the constant outer term and the constant
            // inner term survive; both tails are powers of 2y + t.
            let zt = Complex::new(two_y + T::from_f64(end), T::zero());
            let mut tail = cpow(zt, T::one() - k) * front / (k - T::one());
            if let (true, Some(m_in)) = (use_inner, inner_const) {
                let p = T::from_f64(2.0) - k_in - k;
                tail += inner_prefactor * i * cpow(zt, p) * (m_in / ((k_in - T::one()) * -p));
            }
            total += i * tail * m0;
        }
        Ok(total)
    }
}

/// `f̂_3(τ) = f_3(τ) + depth-2 correction`.
pub fn complete_depth2<T: Real>(
    f3: &PreparedSeries<T>,
    spec: &PreparedDepth2<T>,
    tau: Complex<T>,
    max_tail: f64,
    opts: &IntegralOptions,
) -> Result<Complex<T>, MockError> {
    let holo = f3.eval(tau, max_tail)?.value;
    Ok(holo + spec.correction(tau, InnerMode::Completion, max_tail, opts)?)
}
