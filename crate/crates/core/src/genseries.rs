//! Vafa–Witten and log Gromov–Witten generating series, invariant
//! extraction and the BPS multiple-cover inversion.
//!
//! For rank `r` and first Chern class `c1` the Vafa–Witten series is
//! `h_{r,c1} = Σ_{c2} (-1)^{dim M^s} VW_{r,c1,c2} q^{e(γ)}` with
//! `e(γ) = c2 - (r-1)c1²/(2r) - r/8`. Ranks 1 and 2 are built in
//! (`1/η³` and `f_{2,c1}/η⁶`); rank 3 needs externally supplied numerators.
//!
//! The log Gromov–Witten series is assembled independently: each coefficient
//! goes through the correspondence `GW_{v_γ,β_γ} = (-1)^{dim M^s} VW_γ`, with
//! the contact order and curve class attached, and is placed at the exponent
//! computed from `γ`. Agreement of the two series is a genuine check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::numtheory::{eta, HurwitzTable};
use crate::qseries::{int, rat, QSeries, Rational, SeriesError};
use crate::toricgeo::{contact_order, curve_class, fiber_class, ChernData, CurveClass, Fan, GeometryError, Vec2};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid series spec: {0}")]
    InvalidSpec(String),
    #[error("rank-3 coefficients not loaded (c1 = {c1})")]
    Rank3NotLoaded { c1: i64 },
    #[error("missing Ω̄ data for divisor classes: {}", fmt_triples(.0))]
    MissingDivisors(Vec<ChTriple>),
    #[error("curve class of {gamma} is not β_(r,c1,0) + c2·F")]
    NonLinearClass { gamma: ChernData },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn fmt_triples(ts: &[ChTriple]) -> String {
    ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

/// Where the numerator of `h_{r,c1}` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    BuiltinRank1,
    BuiltinRank2,
    ExternalRank3,
}

/// Which `h_{r,c1}` to build and how many integer q-steps past its leading exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesSpec {
    pub r: i64,
    pub c1: i64,
    pub order: usize,
    pub source: Source,
}

impl SeriesSpec {
    pub fn new(r: i64, c1: i64, order: usize) -> Result<Self, GenError> {
        let source = match r {
            1 => Source::BuiltinRank1,
            2 => Source::BuiltinRank2,
            3 => Source::ExternalRank3,
            _ => return Err(GenError::InvalidSpec(format!("rank {r} is not supported (1..=3)"))),
        };
        if order == 0 {
            return Err(GenError::InvalidSpec("order must be positive".into()));
        }
        Ok(SeriesSpec { r, c1, order, source })
    }

    /// `c1` reduced into `[0, r)`, the labelling used to assemble the series.
    pub fn assembly_c1(&self) -> i64 {
        self.c1.rem_euclid(self.r)
    }

    /// `c1` reduced into `(-r, 0]`, the range where the correspondence applies.
    pub fn correspondence_c1(&self) -> i64 {
        let a = self.assembly_c1();
        if a == 0 {
            0
        } else {
            a - self.r
        }
    }

    pub fn with_order(&self, order: usize) -> Self {
        SeriesSpec { order, ..*self }
    }
}

/// `-(r-1)c1²/(2r) - r/8`, the exponent of `q` attached to `c2 = 0`.
pub fn exponent_offset(r: i64, c1: i64) -> Rational {
    -rat((r - 1) * c1 * c1, 2 * r) - rat(r, 8)
}

/// Exponent carrying the invariant of `γ` in `h_{r,c1}`.
pub fn exponent_of(gamma: &ChernData) -> Rational {
    int(gamma.c2) + exponent_offset(gamma.r, gamma.c1)
}

pub fn moduli_dim(gamma: &ChernData) -> i64 {
    gamma.moduli_dim()
}

pub fn sign(gamma: &ChernData) -> i64 {
    gamma.sign()
}

/// `f_{2,c1} = 3 Σ_{n≥0} H(4n - c1) q^{n - c1/4}` for `n < order`.
pub fn f2(c1: i64, order: usize) -> Result<QSeries, GenError> {
    if !(0..=1).contains(&c1) {
        return Err(GenError::InvalidSpec(format!("f2 needs c1 in {{0,1}}, got {c1}")));
    }
    let table = HurwitzTable::new(4 * order);
    let shift = rat(-c1, 4);
    let terms = (0..order as i64).map(|n| {
        let h = table.get(4 * n - c1).expect("table covers 4·order");
        (&shift + int(n), h * int(3))
    });
    Ok(QSeries::make(terms, &shift + int(order as i64))?)
}

/// `η^{-k}` with relative precision `order`.
fn eta_inverse_power(k: i64, order: usize) -> Result<QSeries, GenError> {
    let e = eta(&(rat(1, 24) + int(order as i64)));
    Ok(e.pow_int(-k)?)
}

/// Numerators `f_{3,c1}` for `c1 ∈ {0,1,2}` supplied from outside.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeriesCatalog {
    rank3: BTreeMap<i64, QSeries>,
}

impl SeriesCatalog {
    /// Only the built-in ranks 1 and 2.
    pub fn builtin() -> Self {
        SeriesCatalog::default()
    }

    /// Registers `f_{3,c1}`; `c1` is reduced mod 3.
    pub fn insert_rank3(&mut self, c1: i64, numerator: QSeries) {
        self.rank3.insert(c1.rem_euclid(3), numerator);
    }

    pub fn rank3(&self, c1: i64) -> Option<&QSeries> {
        self.rank3.get(&c1.rem_euclid(3))
    }

    /// The numerator `f_{r,c1}` with the requested number of integer steps,
    /// and the formal leading exponent of `h_{r,c1}`.
    fn numerator(&self, spec: &SeriesSpec) -> Result<QSeries, GenError> {
        let c1 = spec.assembly_c1();
        match spec.source {
            Source::BuiltinRank1 => Ok(QSeries::one(int(spec.order as i64))),
            Source::BuiltinRank2 => f2(c1, spec.order),
            Source::ExternalRank3 => self.rank3(c1).cloned().ok_or(GenError::Rank3NotLoaded { c1 }),
        }
    }

    /// `h^{VW}_{r,c1}` up to `order` integer steps past its formal leading exponent.
    ///
    /// For rank 3 the result is cut short if the supplied numerator does not
    /// reach that far; the returned cutoff always states what is known.
    pub fn h_vw(&self, spec: &SeriesSpec) -> Result<QSeries, GenError> {
        let f = self.numerator(spec)?;
        let formal_start = match spec.source {
            Source::BuiltinRank1 => Rational::zero(),
            Source::BuiltinRank2 => rat(-spec.assembly_c1(), 4),
            Source::ExternalRank3 => f
                .valuation()
                .cloned()
                .ok_or_else(|| GenError::InvalidSpec("rank-3 numerator is zero".into()))?,
        };
        let lead = &formal_start - rat(spec.r, 8);
        let cutoff = &lead + int(spec.order as i64);
        let inv = eta_inverse_power(3 * spec.r, spec.order)?;
        Ok(f.mul(&inv).truncate(&cutoff))
    }

    /// The vector `(h_{r,c1})_{0 ≤ c1 < r}`.
    pub fn h_vw_vector(&self, r: i64, order: usize) -> Result<Vec<QSeries>, GenError> {
        (0..r).map(|c1| self.h_vw(&SeriesSpec::new(r, c1, order)?)).collect()
    }

    /// `h^{GW}_{r,c1}` assembled coefficient by coefficient through the
    /// correspondence, together with the per-`c2` records.
    pub fn h_gw_with_records(&self, spec: &SeriesSpec) -> Result<GwSeries, GenError> {
        let fan = Fan::standard();
        let c1 = spec.correspondence_c1();
        let vw = self.h_vw(spec)?;
        let offset = exponent_offset(spec.r, c1);
        let start = vw.valuation().cloned().unwrap_or_else(|| vw.cutoff().clone());
        let mut c2 = (&start - &offset).ceil().to_integer().to_i64().expect("c2 fits i64");

        let base_gamma = ChernData::new(spec.r, c1, 0);
        let base_class = curve_class(&fan, &base_gamma)?;
        let fiber = fiber_class(&fan);
        let v = contact_order(&base_gamma)?;

        let mut terms = Vec::new();
        let mut records = Vec::new();
        loop {
            let e = int(c2) + &offset;
            if e >= *vw.cutoff() {
                break;
            }
            let gamma = ChernData::new(spec.r, c1, c2);
            let class = curve_class(&fan, &gamma)?;
            if class != base_class + fiber.scaled(c2) || contact_order(&gamma)? != v {
                return Err(GenError::NonLinearClass { gamma });
            }
            let s = int(gamma.sign());
            let vw_value = &s * vw.coefficient(&e)?;
            let gw_value = &s * &vw_value;
            terms.push((e, gw_value.clone()));
            records.push(GwRecord {
                gamma,
                contact_order: v,
                curve_class: class,
                vw: vw_value,
                gw: gw_value,
            });
            c2 += 1;
        }
        Ok(GwSeries {
            series: QSeries::make(terms, vw.cutoff().clone())?,
            records,
        })
    }

    pub fn h_gw(&self, spec: &SeriesSpec) -> Result<QSeries, GenError> {
        Ok(self.h_gw_with_records(spec)?.series)
    }

    /// Signed invariants for `c2` in `range`, using `c1` in `(-r, 0]`.
    pub fn extract_invariants(
        &self,
        spec: &SeriesSpec,
        range: RangeInclusive<i64>,
    ) -> Result<Vec<InvariantRecord>, GenError> {
        let c1 = spec.correspondence_c1();
        let series = self.h_vw(spec)?;
        range
            .map(|c2| {
                let gamma = ChernData::new(spec.r, c1, c2);
                let raw = series.coefficient(&exponent_of(&gamma))?;
                let s = int(gamma.sign());
                let vw = &s * raw;
                let gw = &s * &vw;
                Ok(InvariantRecord { gamma, vw, gw })
            })
            .collect()
    }

    /// A single `VW_γ` (any `c1`), building as much of the series as needed.
    pub fn vw_invariant(&self, gamma: &ChernData) -> Result<Rational, GenError> {
        let probe = SeriesSpec::new(gamma.r, gamma.c1, 1)?;
        let e = exponent_of(gamma);
        // Leading exponent is at least offset - 1 for every supported source.
        let lead = exponent_offset(gamma.r, probe.correspondence_c1()) - int(1);
        let steps = (&e - &lead).floor().to_integer().to_i64().unwrap_or(0).max(0) as usize + 2;
        let series = self.h_vw(&probe.with_order(steps))?;
        Ok(int(gamma.sign()) * series.coefficient(&e)?)
    }
}

/// One coefficient of `h^{GW}` with the geometric data attached to it.
#[derive(Debug, Clone, PartialEq)]
pub struct GwRecord {
    pub gamma: ChernData,
    pub contact_order: Vec2,
    pub curve_class: CurveClass,
    pub vw: Rational,
    pub gw: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GwSeries {
    pub series: QSeries,
    pub records: Vec<GwRecord>,
}

/// `VW_γ` and `GW_{v_γ,β_γ}` for one `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantRecord {
    pub gamma: ChernData,
    pub vw: Rational,
    pub gw: Rational,
}

impl InvariantRecord {
    pub const CSV_HEADER: [&'static str; 12] = [
        "r", "c1", "c2", "chi", "dim_s", "sign", "vw_num", "vw_den", "gw_num", "gw_den", "v_x", "v_y",
    ];

    pub fn csv_row(&self) -> Result<Vec<String>, GenError> {
        let g = &self.gamma;
        let v = contact_order(g)?;
        Ok(vec![
            g.r.to_string(),
            g.c1.to_string(),
            g.c2.to_string(),
            g.chi().to_string(),
            g.moduli_dim().to_string(),
            g.sign().to_string(),
            self.vw.numer().to_string(),
            self.vw.denom().to_string(),
            self.gw.numer().to_string(),
            self.gw.denom().to_string(),
            v.x.to_string(),
            v.y.to_string(),
        ])
    }
}

/// A class in Chern-character coordinates `(r, c1, ch2)`, `ch2 = c1²/2 - c2`,
/// where multiples `k·γ` are taken componentwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChTriple {
    pub r: i64,
    pub c1: i64,
    pub ch2: Rational,
}

impl ChTriple {
    pub fn from_chern(gamma: &ChernData) -> Self {
        ChTriple {
            r: gamma.r,
            c1: gamma.c1,
            ch2: rat(gamma.c1 * gamma.c1, 2) - int(gamma.c2),
        }
    }

    /// Back to `(r, c1, c2)` when `c2 = c1²/2 - ch2` is an integer.
    pub fn to_chern(&self) -> Option<ChernData> {
        let c2 = rat(self.c1 * self.c1, 2) - &self.ch2;
        c2.is_integer()
            .then(|| ChernData::new(self.r, self.c1, c2.to_integer().to_i64().expect("c2 fits i64")))
    }

    pub fn scaled(&self, k: i64) -> ChTriple {
        ChTriple {
            r: k * self.r,
            c1: k * self.c1,
            ch2: &self.ch2 * int(k),
        }
    }

    /// `γ/k` if it is again the class of a sheaf (integral `r`, `c1`, `c2`).
    pub fn divide(&self, k: i64) -> Option<ChTriple> {
        if k <= 0 || self.r % k != 0 || self.c1 % k != 0 {
            return None;
        }
        let t = ChTriple {
            r: self.r / k,
            c1: self.c1 / k,
            ch2: &self.ch2 / int(k),
        };
        t.to_chern().map(|_| t)
    }

    /// All `k ≥ 1` with `γ/k` integral, ascending.
    pub fn divisors(&self) -> Vec<i64> {
        let g = self.r.abs().gcd(&self.c1.abs());
        let bound = if g > 0 {
            g
        } else {
            (&self.ch2.numer().abs() * BigInt::from(2)).to_i64().unwrap_or(1).max(1)
        };
        (1..=bound).filter(|k| self.divide(*k).is_some()).collect()
    }
}

impl fmt::Display for ChTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.c1, self.ch2)
    }
}

/// Möbius function.
pub fn mobius(mut n: i64) -> i64 {
    assert!(n >= 1, "mobius needs n >= 1");
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Rational DT invariants `Ω̄_γ` indexed by Chern-character triples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BpsLattice {
    pub data: BTreeMap<ChTriple, Rational>,
}

impl BpsLattice {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, gamma: ChTriple, value: Rational) {
        self.data.insert(gamma, value);
    }

    /// Ω̄ for every requested `γ` and all of its divisors, taken from the catalog.
    pub fn from_catalog(
        catalog: &SeriesCatalog,
        classes: impl IntoIterator<Item = ChernData>,
    ) -> Result<Self, GenError> {
        let mut needed = BTreeSet::new();
        for gamma in classes {
            let t = ChTriple::from_chern(&gamma);
            for k in t.divisors() {
                needed.insert(t.divide(k).expect("listed divisor"));
            }
        }
        let mut lattice = BpsLattice::new();
        for t in needed {
            let gamma = t.to_chern().expect("divisors are integral");
            let value = catalog.vw_invariant(&gamma)?;
            lattice.insert(t, value);
        }
        Ok(lattice)
    }
}

/// `Ω_γ = Σ_{k | γ} μ(k)/k² Ω̄_{γ/k}` for every `γ` in the lattice.
pub fn bps_invert(lattice: &BpsLattice) -> Result<BTreeMap<ChTriple, Rational>, GenError> {
    cover_transform(&lattice.data, |k| rat(mobius(k), k * k))
}

/// The forward multiple-cover sum `Ω̄_γ = Σ_{k | γ} Ω_{γ/k}/k²`.
pub fn multiple_cover(omega: &BTreeMap<ChTriple, Rational>) -> Result<BTreeMap<ChTriple, Rational>, GenError> {
    cover_transform(omega, |k| rat(1, k * k))
}

fn cover_transform(
    input: &BTreeMap<ChTriple, Rational>,
    weight: impl Fn(i64) -> Rational,
) -> Result<BTreeMap<ChTriple, Rational>, GenError> {
    let mut missing = BTreeSet::new();
    let mut out = BTreeMap::new();
    for gamma in input.keys() {
        let mut acc = Rational::zero();
        for k in gamma.divisors() {
            let w = weight(k);
            if w.is_zero() {
                continue;
            }
            let sub = gamma.divide(k).expect("listed divisor");
            match input.get(&sub) {
                Some(v) => acc += w * v,
                None => {
                    missing.insert(sub);
                }
            }
        }
        out.insert(gamma.clone(), acc);
    }
    if !missing.is_empty() {
        return Err(GenError::MissingDivisors(missing.into_iter().collect()));
    }
    Ok(out)
}

/// Outcome of checking that BPS invariants are integers.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralityReport {
    pub checked: usize,
    pub non_integral: Vec<(ChTriple, Rational)>,
}

impl IntegralityReport {
    pub fn from_omega(omega: &BTreeMap<ChTriple, Rational>) -> Self {
        let non_integral = omega
            .iter()
            .filter(|(_, v)| !v.is_integer())
            .map(|(t, v)| (t.clone(), v.clone()))
            .collect();
        IntegralityReport {
            checked: omega.len(),
            non_integral,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.non_integral.is_empty()
    }

    /// Human-readable diagnostic. Non-integral values point at the choice of
    /// lattice in which `γ = kγ'` divisibility is taken.
    pub fn diagnostic(&self) -> String {
        if self.is_integral() {
            return format!("all {} BPS invariants are integers", self.checked);
        }
        let list = self
            .non_integral
            .iter()
            .map(|(t, v)| format!("{t}: {v}"))
            .collect::<Vec<_>>()
            .join(", ");
        format!(
            "{} of {} BPS invariants are not integers ({list}); divisibility is taken in \
             Chern-character coordinates (r, c1, ch2), check that convention",
            self.non_integral.len(),
            self.checked
        )
    }
}

/// `γ` range helper: every `(r, c1, c2)` with `c2` in `range`.
pub fn chern_range(r: i64, c1: i64, range: RangeInclusive<i64>) -> impl Iterator<Item = ChernData> {
    range.map(move |c2| ChernData::new(r, c1, c2))
}

/// True when `x - y` is an integer.
pub fn same_class_mod_one(x: &Rational, y: &Rational) -> bool {
    (x - y).is_integer()
}
