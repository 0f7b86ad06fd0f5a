//! Empirical modular transformation laws: fit a constant matrix `M` with
//! `F(g·τ) ≈ (cτ+d)^k M F(τ)` on sample points and measure the residual on
//! held-out points.

use std::fmt;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::eichler::{complete_depth1, complete_depth2, CompletionSpec, IntegralOptions, PreparedDepth2};
use super::eval::PreparedSeries;
use super::real::{cabs, cexp, cinv, cln, Real};
use super::{MockError, PrecisionInfo, TauPoint};
use crate::qseries::{frac, QSeries, Rational};

type Rows<T> = Vec<Vec<Complex<T>>>;

/// The two generators of `SL₂(Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Element {
    S,
    T,
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Element::S => "S",
            Element::T => "T",
        })
    }
}

impl std::str::FromStr for Element {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "S" | "s" => Ok(Element::S),
            "T" | "t" => Ok(Element::T),
            _ => Err(format!("unknown element {s:?} (expected S or T)")),
        }
    }
}

impl Element {
    /// `g·τ`: `-1/τ` for S, `τ+1` for T.
    pub fn act<T: Real>(self, tau: Complex<T>) -> Complex<T> {
        match self {
            Element::S => -cinv(tau),
            Element::T => tau + Complex::new(T::one(), T::zero()),
        }
    }

    /// `(cτ+d)^k` on the principal branch.
    pub fn automorphy<T: Real>(self, tau: Complex<T>, k: T) -> Complex<T> {
        match self {
            Element::S => cexp(cln(tau) * k),
            Element::T => Complex::new(T::one(), T::zero()),
        }
    }
}

/// Something that can be evaluated on the upper half-plane.
pub trait Component<T: Real> {
    fn label(&self) -> String;
    fn eval(&self, tau: Complex<T>) -> Result<Complex<T>, MockError>;
}

/// A holomorphic q-series.
#[derive(Debug, Clone)]
pub struct SeriesComponent<T> {
    pub label: String,
    pub series: PreparedSeries<T>,
    pub max_tail: f64,
}

impl<T: Real> SeriesComponent<T> {
    pub fn new(label: impl Into<String>, series: &QSeries, max_tail: f64) -> Self {
        SeriesComponent {
            label: label.into(),
            series: PreparedSeries::new(series),
            max_tail,
        }
    }
}

impl<T: Real> Component<T> for SeriesComponent<T> {
    fn label(&self) -> String {
        self.label.clone()
    }
    fn eval(&self, tau: Complex<T>) -> Result<Complex<T>, MockError> {
        Ok(self.series.eval(tau, self.max_tail)?.value)
    }
}

/// A depth-1 completion `f̂`.
#[derive(Debug, Clone)]
pub struct Depth1Component<T> {
    pub label: String,
    pub series: PreparedSeries<T>,
    pub spec: CompletionSpec,
    pub max_tail: f64,
    pub options: IntegralOptions,
}

impl<T: Real> Component<T> for Depth1Component<T> {
    fn label(&self) -> String {
        self.label.clone()
    }
    fn eval(&self, tau: Complex<T>) -> Result<Complex<T>, MockError> {
        complete_depth1(&self.series, &self.spec, tau, self.max_tail, &self.options)
    }
}

/// A depth-2 completion.
#[derive(Debug, Clone)]
pub struct Depth2Component<T> {
    pub label: String,
    pub series: PreparedSeries<T>,
    pub spec: PreparedDepth2<T>,
    pub max_tail: f64,
    pub options: IntegralOptions,
}

impl<T: Real> Component<T> for Depth2Component<T> {
    fn label(&self) -> String {
        self.label.clone()
    }
    fn eval(&self, tau: Complex<T>) -> Result<Complex<T>, MockError> {
        complete_depth2(&self.series, &self.spec, tau, self.max_tail, &self.options)
    }
}

/// `inner(τ) / η(τ)^power`.
pub struct EtaQuotient<T> {
    pub inner: Box<dyn Component<T> + Send + Sync>,
    pub eta: PreparedSeries<T>,
    pub power: u32,
    pub max_tail: f64,
}

impl<T: Real> Component<T> for EtaQuotient<T> {
    fn label(&self) -> String {
        format!("{}/eta^{}", self.inner.label(), self.power)
    }
    fn eval(&self, tau: Complex<T>) -> Result<Complex<T>, MockError> {
        let e = self.eta.eval(tau, self.max_tail)?.value;
        let mut denom = Complex::new(T::one(), T::zero());
        for _ in 0..self.power {
            denom *= e;
        }
        Ok(self.inner.eval(tau)? / denom)
    }
}

/// Points used for one fit and its holdout check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub fit: Vec<TauPoint>,
    pub holdout: Vec<TauPoint>,
}

/// Lower bound on `Im(-1/τ) = Im τ/|τ|²` for S-test points.
pub const S_FLOOR: f64 = 0.4;

fn band_point(rng: &mut ChaCha8Rng, element: Element) -> TauPoint {
    loop {
        let im = rng.gen_range(0.7..1.3);
        let re = match element {
            Element::S => rng.gen_range(-1.25..1.25),
            Element::T => rng.gen_range(-0.5..0.5),
        };
        let p = TauPoint::new(re, im);
        let r = p.modulus();
        if element == Element::T || ((0.8..=1.25).contains(&r) && p.s_image_im() >= S_FLOOR) {
            return p;
        }
    }
}

/// `count` disjoint sample sets drawn deterministically from `seed`.
/// S points lie in `|τ| ∈ [0.8, 1.25]`, `Im τ ∈ [0.7, 1.3]`.
pub fn sample_sets(element: Element, count: usize, fit: usize, holdout: usize, seed: u64) -> Vec<SampleSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: Vec<TauPoint> = Vec::new();
    let mut draw = |rng: &mut ChaCha8Rng| loop {
        let p = band_point(rng, element);
        if !seen.contains(&p) {
            seen.push(p);
            return p;
        }
    };
    (0..count)
        .map(|_| {
            let fit = (0..fit).map(|_| draw(&mut rng)).collect();
            let holdout = (0..holdout).map(|_| draw(&mut rng)).collect();
            SampleSet { fit, holdout }
        })
        .collect()
}

/// Settings shared by the fits of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSettings {
    pub tolerance: f64,
    pub truncation_order: usize,
    pub precision: PrecisionInfo,
}

/// Result of one fit. Matrix entries are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformReport {
    pub element: Element,
    pub weight: String,
    pub components: Vec<String>,
    pub fit_points: Vec<TauPoint>,
    pub holdout_points: Vec<TauPoint>,
    pub fitted_matrix: Vec<Vec<[f64; 2]>>,
    pub fit_residual: f64,
    pub holdout_residual: f64,
    pub truncation_order: usize,
    pub tolerance: f64,
    pub precision: PrecisionInfo,
    pub pass: bool,
}

impl TransformReport {
    pub fn entry(&self, i: usize, j: usize) -> Complex<f64> {
        let [re, im] = self.fitted_matrix[i][j];
        Complex::new(re, im)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn sorted(points: &[TauPoint]) -> Vec<TauPoint> {
    let mut v = points.to_vec();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

/// Both sides of the transformation law at each point: `F(gτ)/(cτ+d)^k` and `F(τ)`.
fn sides<T: Real>(
    components: &[&dyn Component<T>],
    element: Element,
    k: T,
    points: &[TauPoint],
) -> Result<(Rows<T>, Rows<T>), MockError> {
    let mut lhs = Vec::with_capacity(points.len());
    let mut rhs = Vec::with_capacity(points.len());
    for p in points {
        let tau: Complex<T> = p.to_complex();
        let image = element.act(tau);
        let factor = element.automorphy(tau, k);
        let mut l = Vec::with_capacity(components.len());
        let mut r = Vec::with_capacity(components.len());
        for c in components {
            l.push(c.eval(image)? / factor);
            r.push(c.eval(tau)?);
        }
        lhs.push(l);
        rhs.push(r);
    }
    Ok((lhs, rhs))
}

/// Least squares `min ‖A x - b‖` for every column `b` via modified
/// Gram–Schmidt with one reorthogonalization pass.
fn least_squares<T: Real>(a: &[Vec<Complex<T>>], bs: &[Vec<Complex<T>>]) -> Result<Vec<Vec<Complex<T>>>, MockError> {
    let rows = a.len();
    let cols = a[0].len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut q: Vec<Vec<Complex<T>>> = (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect();
    let mut r = vec![vec![zero; cols]; cols];
    let norm = |v: &[Complex<T>]| v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    let scale = q.iter().map(|c| norm(c)).fold(T::zero(), |m, x| m.max_of(x));
    if scale.is_zero() {
        return Err(MockError::DegenerateSamples);
    }
    for j in 0..cols {
        for _pass in 0..2 {
            for p in 0..j {
                let dot = q[p].iter().zip(&q[j]).fold(zero, |s, (u, v)| s + u.conj() * v);
                r[p][j] += dot;
                let qp = q[p].clone();
                for (x, u) in q[j].iter_mut().zip(&qp) {
                    *x -= u * dot;
                }
            }
        }
        let n = norm(&q[j]);
        if n <= scale * T::epsilon() * T::from_f64(1e4) {
            return Err(MockError::DegenerateSamples);
        }
        r[j][j] = Complex::new(n, T::zero());
        for x in q[j].iter_mut() {
            *x /= n;
        }
    }
    bs.iter()
        .map(|b| {
            let qb: Vec<Complex<T>> = q
                .iter()
                .map(|col| col.iter().zip(b).fold(zero, |s, (u, v)| s + u.conj() * v))
                .collect();
            let mut x = vec![zero; cols];
            for j in (0..cols).rev() {
                let mut s = qb[j];
                for p in j + 1..cols {
                    s -= r[j][p] * x[p];
                }
                x[j] = s / r[j][j];
            }
            Ok(x)
        })
        .collect()
}

/// `max |lhs - M rhs| / max |lhs|` over all points and components.
fn residual<T: Real>(m: &[Vec<Complex<T>>], lhs: &[Vec<Complex<T>>], rhs: &[Vec<Complex<T>>]) -> f64 {
    let mut worst = T::zero();
    let mut size = T::zero();
    for (l, r) in lhs.iter().zip(rhs) {
        for (i, li) in l.iter().enumerate() {
            let pred = m[i]
                .iter()
                .zip(r)
                .fold(Complex::new(T::zero(), T::zero()), |s, (a, b)| s + a * b);
            worst = worst.max_of(cabs(*li - pred));
            size = size.max_of(cabs(*li));
        }
    }
    if size.is_zero() {
        return if worst.is_zero() { 0.0 } else { f64::INFINITY };
    }
    (worst / size).to_f64()
}

/// Fits the transformation matrix of `components` under `element` with
/// automorphy weight `weight`, and checks it on `holdout`.
pub fn fit_transformation<T: Real>(
    components: &[&dyn Component<T>],
    element: Element,
    weight: &Rational,
    fit_points: &[TauPoint],
    holdout_points: &[TauPoint],
    settings: &FitSettings,
) -> Result<TransformReport, MockError> {
    if components.is_empty() {
        return Err(MockError::InvalidPoint("no components to fit".into()));
    }
    if fit_points.len() < components.len() {
        return Err(MockError::DegenerateSamples);
    }
    for p in fit_points.iter().chain(holdout_points) {
        p.validate()?;
        if element == Element::S && p.s_image_im() < S_FLOOR {
            return Err(MockError::InvalidPoint(format!(
                "{p}: Im(-1/τ) = {} is below the floor {S_FLOOR}",
                p.s_image_im()
            )));
        }
    }
    if let Some(p) = holdout_points.iter().find(|p| fit_points.contains(p)) {
        return Err(MockError::InvalidPoint(format!(
            "{p} is in both the fit and holdout sets"
        )));
    }
    let fit_points = sorted(fit_points);
    let holdout_points = sorted(holdout_points);
    let k = T::from_rational(weight);

    let (lhs, rhs) = sides(components, element, k, &fit_points)?;
    let targets: Vec<Vec<Complex<T>>> = (0..components.len())
        .map(|i| lhs.iter().map(|row| row[i]).collect())
        .collect();
    let m = least_squares(&rhs, &targets)?;
    let fit_residual = residual(&m, &lhs, &rhs);
    let (hl, hr) = sides(components, element, k, &holdout_points)?;
    let holdout_residual = if holdout_points.is_empty() {
        0.0
    } else {
        residual(&m, &hl, &hr)
    };

    Ok(TransformReport {
        element,
        weight: weight.to_string(),
        components: components.iter().map(|c| c.label()).collect(),
        fit_points,
        holdout_points,
        fitted_matrix: m
            .iter()
            .map(|row| row.iter().map(|z| [z.re.to_f64(), z.im.to_f64()]).collect())
            .collect(),
        fit_residual,
        holdout_residual,
        truncation_order: settings.truncation_order,
        tolerance: settings.tolerance,
        precision: settings.precision,
        pass: holdout_residual <= settings.tolerance,
    })
}

/// Fits on several disjoint sample sets and compares the matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub reports: Vec<TransformReport>,
    /// Largest entrywise distance between any fitted matrix and the first one.
    pub max_spread: f64,
    pub stable: bool,
    pub pass: bool,
}

pub fn fit_stability<T: Real>(
    components: &[&dyn Component<T>],
    element: Element,
    weight: &Rational,
    sets: &[SampleSet],
    settings: &FitSettings,
) -> Result<StabilityReport, MockError> {
    let reports = sets
        .iter()
        .map(|s| fit_transformation(components, element, weight, &s.fit, &s.holdout, settings))
        .collect::<Result<Vec<_>, _>>()?;
    let mut max_spread: f64 = 0.0;
    if let Some(first) = reports.first() {
        for r in &reports[1..] {
            for (i, row) in r.fitted_matrix.iter().enumerate() {
                for j in 0..row.len() {
                    max_spread = max_spread.max((r.entry(i, j) - first.entry(i, j)).norm());
                }
            }
        }
    }
    let stable = max_spread <= settings.tolerance;
    let pass = stable && reports.iter().all(|r| r.pass);
    Ok(StabilityReport {
        reports,
        max_spread,
        stable,
        pass,
    })
}

/// The exponent class in `[0, 1)` of each series; the T-matrix is diagonal
/// with entries `e^{2πi·class}`.
pub fn t_phases(series: &[QSeries]) -> Result<Vec<Rational>, MockError> {
    series
        .iter()
        .map(|s| {
            s.exponent_class()
                .map(|c| frac(&c))
                .ok_or_else(|| MockError::Numeric("series exponents do not lie in a single class mod 1".into()))
        })
        .collect()
}

/// `e^{2πi·class}` as a complex number.
pub fn phase_value(class: &Rational) -> Complex<f64> {
    let theta = 2.0 * std::f64::consts::PI * num_traits::ToPrimitive::to_f64(class).unwrap_or(0.0);
    Complex::new(theta.cos(), theta.sin())
}
