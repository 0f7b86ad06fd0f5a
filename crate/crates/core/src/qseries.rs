//! Exact truncated q-series with rational exponents.
//!
//! A [`QSeries`] stores finitely many nonzero terms `c·q^e` together with a
//! cutoff: the series is asserted correct for every exponent strictly below
//! the cutoff and unknown at or above it. Every operation propagates the
//! cutoff so that truncation can never silently leak into a result.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational scalar, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds the rational `n/d`.
///
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses a pair of decimal strings into a reduced rational.
pub fn parse_rational(num: &str, den: &str) -> Result<Rational, SeriesError> {
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| SeriesError::Malformed(format!("bad integer {num:?}")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| SeriesError::Malformed(format!("bad integer {den:?}")))?;
    if d.is_zero() {
        return Err(SeriesError::Malformed("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

/// The fractional part of `x`, in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("duplicate exponent {0}")]
    DuplicateExponent(Rational),
    #[error("series is not invertible (zero series)")]
    NotInvertible,
    #[error("exponent {exponent} is beyond truncation (cutoff {cutoff})")]
    BeyondTruncation { exponent: Rational, cutoff: Rational },
    #[error("malformed series data: {0}")]
    Malformed(String),
}

/// A truncated formal series `Σ c_e q^e + O(q^cutoff)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    terms: BTreeMap<Rational, Rational>,
    cutoff: Rational,
}

impl QSeries {
    /// Normalizes a list of terms: drops zero coefficients and anything at or
    /// beyond the cutoff. Duplicate exponents are rejected.
    pub fn make<I>(terms: I, cutoff: Rational) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if map.contains_key(&e) {
                return Err(SeriesError::DuplicateExponent(e));
            }
            map.insert(e, c);
        }
        map.retain(|e, c| !c.is_zero() && *e < cutoff);
        Ok(QSeries { terms: map, cutoff })
    }

    pub fn zero(cutoff: Rational) -> Self {
        QSeries {
            terms: BTreeMap::new(),
            cutoff,
        }
    }

    pub fn one(cutoff: Rational) -> Self {
        Self::monomial(Rational::zero(), Rational::one(), cutoff)
    }

    /// `c·q^e + O(q^cutoff)`.
    pub fn monomial(e: Rational, c: Rational, cutoff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() && e < cutoff {
            terms.insert(e, c);
        }
        QSeries { terms, cutoff }
    }

    /// Builds a series from an internal map that already satisfies the invariants.
    fn from_map(mut terms: BTreeMap<Rational, Rational>, cutoff: Rational) -> Self {
        terms.retain(|e, c| !c.is_zero() && *e < cutoff);
        QSeries { terms, cutoff }
    }

    pub fn cutoff(&self) -> &Rational {
        &self.cutoff
    }

    /// Stored terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Rational, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no term is known to be nonzero below the cutoff.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Minimal stored exponent, `None` for the zero series.
    pub fn valuation(&self) -> Option<&Rational> {
        self.terms.keys().next()
    }

    /// Leading `(exponent, coefficient)` pair.
    pub fn leading(&self) -> Option<(&Rational, &Rational)> {
        self.terms.iter().next()
    }

    /// The coefficient of `q^e`, or exact zero when `e` is not in the support.
    pub fn coefficient(&self, e: &Rational) -> Result<Rational, SeriesError> {
        if *e >= self.cutoff {
            return Err(SeriesError::BeyondTruncation {
                exponent: e.clone(),
                cutoff: self.cutoff.clone(),
            });
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(Rational::zero))
    }

    /// Lowers the cutoff to `min(self.cutoff, cutoff)`.
    pub fn truncate(&self, cutoff: &Rational) -> QSeries {
        let cut = if *cutoff < self.cutoff {
            cutoff.clone()
        } else {
            self.cutoff.clone()
        };
        let terms = self
            .terms
            .range(..cut.clone())
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        QSeries { terms, cutoff: cut }
    }

    /// Multiplies by the scalar `s`.
    pub fn scale(&self, s: &Rational) -> QSeries {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect();
        QSeries::from_map(terms, self.cutoff.clone())
    }

    /// Multiplies by `q^s`, shifting every exponent and the cutoff.
    pub fn shift(&self, s: &Rational) -> QSeries {
        let terms = self.terms.iter().map(|(e, c)| (e + s, c.clone())).collect();
        QSeries {
            terms,
            cutoff: &self.cutoff + s,
        }
    }

    /// Coefficientwise sum; the cutoff is the smaller of the two.
    pub fn add(&self, other: &QSeries) -> QSeries {
        let cutoff = self.cutoff.clone().min(other.cutoff.clone());
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms.range(..cutoff.clone()) {
            terms.insert(e.clone(), c.clone());
        }
        for (e, c) in other.terms.range(..cutoff.clone()) {
            let slot = terms.entry(e.clone()).or_insert_with(Rational::zero);
            *slot += c;
        }
        QSeries::from_map(terms, cutoff)
    }

    pub fn neg(&self) -> QSeries {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        QSeries {
            terms,
            cutoff: self.cutoff.clone(),
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    /// The exponent below which `self` is known, for use in product cutoffs:
    /// the valuation, or the cutoff itself for the zero series (`O(q^cutoff)`).
    fn effective_val(&self) -> Rational {
        self.valuation().cloned().unwrap_or_else(|| self.cutoff.clone())
    }

    /// Truncated Cauchy product. The result cutoff is
    /// `min(a.cutoff + val(b), b.cutoff + val(a))`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let va = self.effective_val();
        let vb = other.effective_val();
        let cutoff = (&self.cutoff + &vb).min(&other.cutoff + &va);
        let mut terms: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            if ea + &vb >= cutoff {
                break;
            }
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e >= cutoff {
                    break;
                }
                let slot = terms.entry(e).or_insert_with(Rational::zero);
                *slot += ca * cb;
            }
        }
        QSeries::from_map(terms, cutoff)
    }

    /// Multiplicative inverse. For `a = c·q^v(1 + …) + O(q^C)` the result has
    /// leading exponent `-v` and cutoff `C - 2v`, so that `a·inv(a) = 1 + O(q^{C-v})`.
    pub fn inv(&self) -> Result<QSeries, SeriesError> {
        let (v, c0) = match self.leading() {
            Some((v, c)) => (v.clone(), c.clone()),
            None => return Err(SeriesError::NotInvertible),
        };
        let precision = &self.cutoff - &v;
        let out_cutoff = &self.cutoff - &v - &v;
        let c0_inv = c0.recip();

        // Relative exponents of the non-leading terms live on a grid of step 1/L.
        let rel: Vec<(Rational, Rational)> = self.terms.iter().skip(1).map(|(e, c)| (e - &v, c.clone())).collect();
        if rel.is_empty() {
            return Ok(QSeries::monomial(-v, c0_inv, out_cutoff));
        }
        let lcm = rel.iter().fold(BigInt::one(), |acc, (d, _)| acc.lcm(d.denom()));
        let lcm_r = Rational::from_integer(lcm.clone());
        let steps: Vec<(usize, Rational)> = rel
            .iter()
            .map(|(d, c)| {
                let k = (d * &lcm_r).to_integer();
                (k.to_usize().expect("grid index overflow"), c.clone())
            })
            .collect();
        // Number of grid points j with j/L < precision.
        let n_points = (&precision * &lcm_r).ceil().to_integer();
        let n_points = n_points.to_usize().expect("grid size overflow");

        let mut b: Vec<Rational> = Vec::with_capacity(n_points);
        for j in 0..n_points {
            if j == 0 {
                b.push(c0_inv.clone());
                continue;
            }
            let mut acc = Rational::zero();
            for (k, a) in &steps {
                if *k > j {
                    break;
                }
                let prev = &b[j - k];
                if !prev.is_zero() {
                    acc += a * prev;
                }
            }
            b.push(-(acc * &c0_inv));
        }
        let terms = b
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (Rational::new(BigInt::from(j), lcm.clone()) - &v, c))
            .collect();
        Ok(QSeries::from_map(terms, out_cutoff))
    }

    /// Integer power by repeated squaring; negative powers go through [`QSeries::inv`].
    pub fn pow_int(&self, k: i64) -> Result<QSeries, SeriesError> {
        if k < 0 {
            return self.inv()?.pow_int(-k);
        }
        if k == 0 {
            // Keep the relative precision of the base.
            let rel = &self.cutoff - self.effective_val();
            let rel = if self.is_zero() { self.cutoff.clone() } else { rel };
            return Ok(QSeries::one(rel));
        }
        let mut result: Option<QSeries> = None;
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result.expect("k >= 1"))
    }

    /// The common class of all exponents modulo 1, if there is exactly one.
    pub fn exponent_class(&self) -> Option<Rational> {
        let mut class: Option<Rational> = None;
        for e in self.terms.keys() {
            let f = frac(e);
            match &class {
                None => class = Some(f),
                Some(c) if *c == f => {}
                Some(_) => return None,
            }
        }
        class
    }

    /// Serializes to the JSON layout
    /// `{"cutoff":[num,den],"terms":[[e_num,e_den,c_num,c_den],…]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<QSeries, SeriesError> {
        serde_json::from_str(text).map_err(|e| SeriesError::Malformed(e.to_string()))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "q^({e})")?;
            } else {
                write!(f, "{mag}·q^({e})")?;
            }
        }
        if first {
            write!(f, "O(q^({}))", self.cutoff)
        } else {
            write!(f, " + O(q^({}))", self.cutoff)
        }
    }
}

impl<'a> Add<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn add(self, rhs: &'a QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl<'a> Sub<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &'a QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl<'a> Mul<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &'a QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    cutoff: [String; 2],
    terms: Vec<[String; 4]>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let json = SeriesJson {
            cutoff: [self.cutoff.numer().to_string(), self.cutoff.denom().to_string()],
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    [
                        e.numer().to_string(),
                        e.denom().to_string(),
                        c.numer().to_string(),
                        c.denom().to_string(),
                    ]
                })
                .collect(),
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let json = SeriesJson::deserialize(deserializer)?;
        let cutoff = parse_rational(&json.cutoff[0], &json.cutoff[1]).map_err(D::Error::custom)?;
        let mut terms = Vec::with_capacity(json.terms.len());
        for [en, ed, cn, cd] in &json.terms {
            let e = parse_rational(en, ed).map_err(D::Error::custom)?;
            let c = parse_rational(cn, cd).map_err(D::Error::custom)?;
            terms.push((e, c));
        }
        QSeries::make(terms, cutoff).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eta_head() -> QSeries {
        QSeries::make(vec![(rat(1, 24), int(1)), (rat(25, 24), int(-1))], int(2)).unwrap()
    }

    #[test]
    fn make_constant_and_zero() {
        let one = QSeries::make(vec![(int(0), int(1))], int(5)).unwrap();
        assert_eq!(one, QSeries::one(int(5)));
        let z = QSeries::make(vec![(int(0), int(0))], int(5)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.cutoff(), &int(5));
    }

    #[test]
    fn make_drops_terms_beyond_cutoff_and_rejects_duplicates() {
        let s = eta_head();
        assert_eq!(s.len(), 2);
        let s = QSeries::make(vec![(int(0), int(1)), (int(3), int(1))], int(2)).unwrap();
        assert_eq!(s.len(), 1);
        let err = QSeries::make(vec![(int(1), int(1)), (int(1), int(2))], int(2)).unwrap_err();
        assert_eq!(err, SeriesError::DuplicateExponent(int(1)));
    }

    #[test]
    fn additive_identity_and_inverse() {
        let a = eta_head();
        assert_eq!(a.add(&QSeries::zero(int(10))), a);
        assert!(a.add(&a.neg()).is_zero());
        let doubled = a.add(&a);
        for (e, c) in a.terms() {
            assert_eq!(doubled.coefficient(e).unwrap(), c * int(2));
        }
    }

    #[test]
    fn product_of_half_powers() {
        let h = QSeries::monomial(rat(1, 2), int(1), int(10));
        let p = h.mul(&h);
        assert_eq!(p.leading(), Some((&int(1), &int(1))));
        assert_eq!(p.len(), 1);
        // min(10 + 1/2, 10 + 1/2)
        assert_eq!(p.cutoff(), &rat(21, 2));
        let a = eta_head();
        assert_eq!(a.mul(&QSeries::one(int(100))), a);
    }

    #[test]
    fn zero_times_anything_keeps_a_meaningful_cutoff() {
        let z = QSeries::zero(int(3));
        let a = QSeries::monomial(rat(1, 2), int(2), int(5));
        let p = z.mul(&a);
        assert!(p.is_zero());
        assert_eq!(p.cutoff(), &rat(7, 2));
    }

    #[test]
    fn inverse_of_monomials() {
        assert_eq!(QSeries::one(int(4)).inv().unwrap(), QSeries::one(int(4)));
        let m = QSeries::monomial(rat(1, 24), int(1), int(3));
        let inv = m.inv().unwrap();
        assert_eq!(inv.leading(), Some((&rat(-1, 24), &int(1))));
        assert_eq!(QSeries::zero(int(1)).inv(), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn inverse_times_self_is_one() {
        let a = QSeries::make(
            vec![(rat(1, 3), int(2)), (rat(5, 6), int(-1)), (rat(4, 3), rat(1, 2))],
            int(6),
        )
        .unwrap();
        let p = a.mul(&a.inv().unwrap());
        assert_eq!(p, QSeries::one(p.cutoff().clone()));
        assert_eq!(p.cutoff(), &rat(17, 3));
    }

    #[test]
    fn powers() {
        let a = eta_head();
        assert_eq!(a.pow_int(1).unwrap(), a);
        let p0 = a.pow_int(0).unwrap();
        assert_eq!(p0.leading(), Some((&int(0), &int(1))));
        assert_eq!(p0.len(), 1);
        let m6 = a.pow_int(-6).unwrap();
        assert_eq!(m6.valuation(), Some(&rat(-1, 4)));
    }

    #[test]
    fn coefficient_lookup() {
        let a = eta_head();
        assert_eq!(a.coefficient(&rat(1, 24)).unwrap(), int(1));
        assert_eq!(a.coefficient(&rat(1, 2)).unwrap(), int(0));
        assert!(matches!(
            a.coefficient(&int(2)),
            Err(SeriesError::BeyondTruncation { .. })
        ));
    }

    #[test]
    fn json_layout() {
        let a = eta_head();
        let text = a.to_json();
        assert_eq!(
            text,
            r#"{"cutoff":["2","1"],"terms":[["1","24","1","1"],["25","24","-1","1"]]}"#
        );
        assert_eq!(QSeries::from_json(&text).unwrap(), a);
        assert!(QSeries::from_json(r#"{"cutoff":["1","0"],"terms":[]}"#).is_err());
    }

    #[test]
    fn exponent_class() {
        assert_eq!(eta_head().exponent_class(), Some(rat(1, 24)));
        let mixed = QSeries::make(vec![(int(0), int(1)), (rat(1, 2), int(1))], int(3)).unwrap();
        assert_eq!(mixed.exponent_class(), None);
    }
}
