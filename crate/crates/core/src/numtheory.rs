//! Dedekind eta, Hurwitz class numbers and unary theta series.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::qseries::{int, rat, QSeries, Rational};

/// `q^{1/24} ∏_{n≥1} (1 - q^n)` below `cutoff`, via Euler's pentagonal number theorem.
pub fn eta(cutoff: &Rational) -> QSeries {
    let shift = rat(1, 24);
    let mut terms = Vec::new();
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        let ks: &[i64] = if k == 0 { &[0] } else { &[k, -k] };
        for &j in ks {
            let g = j * (3 * j - 1) / 2;
            let e = &shift + int(g);
            if e < *cutoff {
                any = true;
                let sign = if j.rem_euclid(2) == 0 { 1 } else { -1 };
                terms.push((e, int(sign)));
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    QSeries::make(terms, cutoff.clone()).expect("pentagonal exponents are distinct")
}

/// The same series as [`eta`], computed by multiplying out the product directly.
pub fn eta_by_product(cutoff: &Rational) -> QSeries {
    let shift = rat(1, 24);
    // Integer degrees d with 1/24 + d < cutoff.
    let span = cutoff - &shift;
    if !span.is_positive() {
        return QSeries::zero(cutoff.clone());
    }
    let degrees = span.ceil().to_integer().to_usize().expect("cutoff too large");
    let mut poly = vec![BigInt::zero(); degrees];
    poly[0] = BigInt::one();
    for n in 1..degrees {
        for d in (n..degrees).rev() {
            let prev = poly[d - n].clone();
            poly[d] -= prev;
        }
    }
    let terms = poly
        .into_iter()
        .enumerate()
        .map(|(d, c)| (&shift + int(d as i64), Rational::from_integer(c)));
    QSeries::make(terms, cutoff.clone()).expect("distinct degrees")
}

/// Weight of a reduced form in units of 1/12: forms equivalent to `a(x²+xy+y²)`
/// count 1/3, forms equivalent to `a(x²+y²)` count 1/2, everything else counts 1.
fn reduced_weight_twelfths(a: i64, b: i64, c: i64) -> i64 {
    if a == b && b == c {
        4
    } else if b == 0 && a == c {
        6
    } else {
        12
    }
}

fn is_reduced(a: i64, b: i64, c: i64) -> bool {
    b.abs() <= a && a <= c && !(b < 0 && (b.abs() == a || a == c))
}

/// Hurwitz class number `H(N)`: the weighted number of classes of positive
/// definite binary quadratic forms of discriminant `-N`.
///
/// `H(0) = -1/12` and `H(N) = 0` for negative `N`, so that sums over
/// `H(4n - c)` can run over all `n ≥ 0`.
pub fn hurwitz(n: i64) -> Rational {
    if n < 0 {
        return Rational::zero();
    }
    if n == 0 {
        return rat(-1, 12);
    }
    if matches!(n % 4, 1 | 2) {
        return Rational::zero();
    }
    let mut twelfths = 0i64;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a..=a {
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if is_reduced(a, b, c) {
                twelfths += reduced_weight_twelfths(a, b, c);
            }
        }
        a += 1;
    }
    rat(twelfths, 12)
}

/// `H(0..=max)` filled in a single sweep over reduced forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzTable {
    twelfths: Vec<i64>,
}

impl HurwitzTable {
    pub fn new(max: usize) -> Self {
        let max_n = max as i64;
        let mut twelfths = vec![0i64; max + 1];
        twelfths[0] = -1;
        let mut a = 1i64;
        while 3 * a * a <= max_n {
            for b in -a..=a {
                let mut c = a;
                loop {
                    let disc = 4 * a * c - b * b;
                    if disc > max_n {
                        break;
                    }
                    if is_reduced(a, b, c) {
                        twelfths[disc as usize] += reduced_weight_twelfths(a, b, c);
                    }
                    c += 1;
                }
            }
            a += 1;
        }
        HurwitzTable { twelfths }
    }

    pub fn max(&self) -> usize {
        self.twelfths.len() - 1
    }

    /// `H(n)`; negative `n` gives 0, `n` beyond the table gives `None`.
    pub fn get(&self, n: i64) -> Option<Rational> {
        if n < 0 {
            return Some(Rational::zero());
        }
        self.twelfths.get(n as usize).map(|t| rat(*t, 12))
    }

    /// `12·H(n)`, always an integer.
    pub fn twelve_times(&self, n: usize) -> Option<i64> {
        self.twelfths.get(n).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Rational)> + '_ {
        self.twelfths.iter().enumerate().map(|(n, t)| (n, rat(*t, 12)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThetaError {
    #[error("theta shift must lie in [0,1), got {0}")]
    ShiftOutOfRange(Rational),
    #[error("theta scale must be positive, got {0}")]
    NonPositiveScale(Rational),
}

/// `Σ_{n ∈ Z + mu} q^{scale·n²/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThetaSpec {
    mu: Rational,
    scale: Rational,
}

impl ThetaSpec {
    pub fn new(mu: Rational, scale: Rational) -> Result<Self, ThetaError> {
        if mu.is_negative() || mu >= Rational::one() {
            return Err(ThetaError::ShiftOutOfRange(mu));
        }
        if !scale.is_positive() {
            return Err(ThetaError::NonPositiveScale(scale));
        }
        Ok(ThetaSpec { mu, scale })
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    /// The same theta function with its argument multiplied by `factor`.
    pub fn rescaled(&self, factor: &Rational) -> Result<Self, ThetaError> {
        ThetaSpec::new(self.mu.clone(), &self.scale * factor)
    }

    /// All `(scale·n²/2, #{n})` with frequency at most `bound`, ascending.
    pub fn terms(&self, bound: &Rational) -> Vec<(Rational, i64)> {
        if bound.is_negative() {
            return Vec::new();
        }
        let two = int(2);
        let reach = (&two * bound / &self.scale).to_f64().unwrap_or(f64::MAX).sqrt();
        let mu = self.mu.to_f64().unwrap_or(0.0);
        let lo = (-reach - mu).floor() as i64 - 1;
        let hi = (reach - mu).ceil() as i64 + 1;
        let mut freqs: Vec<Rational> = (lo..=hi)
            .map(|m| {
                let n = int(m) + &self.mu;
                &self.scale * &n * &n / &two
            })
            .filter(|f| f <= bound)
            .collect();
        freqs.sort();
        let mut out: Vec<(Rational, i64)> = Vec::new();
        for f in freqs {
            match out.last_mut() {
                Some((last, count)) if *last == f => *count += 1,
                _ => out.push((f, 1)),
            }
        }
        out
    }

    /// The q-expansion below `cutoff`.
    pub fn qexp(&self, cutoff: &Rational) -> QSeries {
        let terms = self
            .terms(cutoff)
            .into_iter()
            .filter(|(f, _)| f < cutoff)
            .map(|(f, m)| (f, int(m)));
        QSeries::make(terms, cutoff.clone()).expect("frequencies are distinct")
    }
}

/// Free-function form of [`ThetaSpec::qexp`].
pub fn theta_qexp(spec: &ThetaSpec, cutoff: &Rational) -> QSeries {
    spec.qexp(cutoff)
}

/// Free-function form of [`ThetaSpec::terms`].
pub fn theta_terms(spec: &ThetaSpec, bound: &Rational) -> Vec<(Rational, i64)> {
    spec.terms(bound)
}
