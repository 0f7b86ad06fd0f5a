//! End-to-end verification of the transformation law of a generating-series vector.

use serde::{Deserialize, Serialize};

use super::eichler::{CompletionSpec, Depth2Spec, IntegralOptions, PreparedDepth2};
use super::fit::{
    fit_stability, sample_sets, t_phases, Component, Depth1Component, Depth2Component, Element, EtaQuotient,
    FitSettings, SampleSet, SeriesComponent, StabilityReport,
};
use super::{MockError, Precision, PrecisionInfo, Real, TauPoint, DD};
use crate::genseries::{f2, GenError, SeriesCatalog, SeriesSpec};
use crate::numtheory::eta;
use crate::qseries::{int, rat, QSeries, Rational};

/// Which vector to test: `h_{r,c1}` or its numerator `f_{r,c1} = η^{3r} h_{r,c1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Auto,
    H,
    F,
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Target::Auto),
            "h" => Ok(Target::H),
            "f" => Ok(Target::F),
            _ => Err(format!("unknown target {s:?} (expected auto, h or f)")),
        }
    }
}

impl Target {
    /// `Auto` picks `h` for rank 1 (where `f = 1`) and `f` otherwise.
    pub fn resolve(self, r: i64) -> Target {
        match self {
            Target::Auto if r == 1 => Target::H,
            Target::Auto => Target::F,
            t => t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRequest {
    pub r: i64,
    pub element: Element,
    pub target: Target,
    pub completed: bool,
    pub order: usize,
    pub precision_digits: u32,
    pub tolerance: f64,
    pub sets: usize,
    pub fit_points: usize,
    pub holdout_points: usize,
    pub seed: u64,
    /// Explicit points; alternate points go to the fit and holdout sets.
    pub tau_grid: Vec<TauPoint>,
}

impl VerifyRequest {
    pub fn new(r: i64, element: Element) -> Self {
        VerifyRequest {
            r,
            element,
            target: Target::Auto,
            completed: true,
            order: 60,
            precision_digits: 34,
            tolerance: 1e-6,
            sets: 3,
            fit_points: 6,
            holdout_points: 6,
            seed: 20_240_601,
            tau_grid: Vec::new(),
        }
    }

    fn sample_sets(&self) -> Vec<SampleSet> {
        if self.tau_grid.is_empty() {
            return sample_sets(self.element, self.sets, self.fit_points, self.holdout_points, self.seed);
        }
        let (mut fit, mut holdout) = (Vec::new(), Vec::new());
        for (i, p) in self.tau_grid.iter().enumerate() {
            if i % 2 == 0 {
                fit.push(*p)
            } else {
                holdout.push(*p)
            }
        }
        vec![SampleSet { fit, holdout }]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub r: i64,
    pub target: Target,
    pub completed: bool,
    pub weight: String,
    /// Exact exponent classes of the holomorphic components (T-matrix phases).
    pub exponent_classes: Vec<String>,
    pub stability: StabilityReport,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Data(#[from] GenError),
    #[error(transparent)]
    Numeric(#[from] MockError),
}

/// Holomorphic numerators `f_{r,c1}` for `0 ≤ c1 < r`.
fn numerators(catalog: &SeriesCatalog, r: i64, order: usize) -> Result<Vec<QSeries>, GenError> {
    match r {
        1 => Ok(vec![QSeries::one(int(order as i64))]),
        2 => (0..2).map(|c1| f2(c1, order)).collect(),
        3 => (0..3)
            .map(|c1| catalog.rank3(c1).cloned().ok_or(GenError::Rank3NotLoaded { c1 }))
            .collect(),
        _ => Err(GenError::InvalidSpec(format!("rank {r} is not supported"))),
    }
}

type Boxed<T> = Box<dyn Component<T> + Send + Sync>;

fn build_components<T: Real>(
    catalog: &SeriesCatalog,
    req: &VerifyRequest,
    target: Target,
    max_tail: f64,
    options: IntegralOptions,
) -> Result<(Vec<Boxed<T>>, Vec<QSeries>), VerifyError> {
    let r = req.r;
    let holomorphic = match target {
        Target::H => (0..r)
            .map(|c1| catalog.h_vw(&SeriesSpec::new(r, c1, req.order)?))
            .collect::<Result<Vec<_>, _>>()?,
        _ => numerators(catalog, r, req.order)?,
    };
    let numer = numerators(catalog, r, req.order)?;
    let mut out: Vec<Boxed<T>> = Vec::new();
    for (c1, f) in numer.iter().enumerate() {
        let label = format!("f_{{{r},{c1}}}");
        let base: Boxed<T> = match (req.completed, r, c1) {
            (true, 2, _) => Box::new(Depth1Component {
                label: format!("{label}^"),
                series: super::eval::PreparedSeries::new(f),
                spec: CompletionSpec::rank2(c1 as i64),
                max_tail,
                options,
            }),
            (true, 3, 0) => Box::new(Depth2Component {
                label: format!("{label}^"),
                series: super::eval::PreparedSeries::new(f),
                spec: PreparedDepth2::new(Depth2Spec::rank3(req.order)?),
                max_tail,
                options,
            }),
            _ => Box::new(SeriesComponent::new(label, f, max_tail)),
        };
        let comp: Boxed<T> = if target == Target::H {
            Box::new(EtaQuotient {
                inner: base,
                eta: super::eval::PreparedSeries::new(&eta(&(rat(1, 24) + int(req.order as i64 + 1)))),
                power: (3 * r) as u32,
                max_tail,
            })
        } else {
            base
        };
        out.push(comp);
    }
    Ok((out, holomorphic))
}

fn run<T: Real>(catalog: &SeriesCatalog, req: &VerifyRequest) -> Result<VerifyOutcome, VerifyError> {
    let target = req.target.resolve(req.r);
    let precision = PrecisionInfo::for_digits(req.precision_digits);
    let max_tail = 10f64.powi(-(precision.effective_digits as i32));
    let options = IntegralOptions {
        tolerance: (req.tolerance * 1e-2).min(1e-8),
        points: 20,
        check_backends: true,
    };
    let (components, holomorphic) = build_components::<T>(catalog, req, target, max_tail, options)?;
    let refs: Vec<&dyn Component<T>> = components.iter().map(|c| c.as_ref() as &dyn Component<T>).collect();
    let weight = vector_weight(req.r, target);
    let settings = FitSettings {
        tolerance: req.tolerance,
        truncation_order: req.order,
        precision,
    };
    let stability = fit_stability(&refs, req.element, &weight, &req.sample_sets(), &settings)?;
    let classes = t_phases(&holomorphic)?;
    Ok(VerifyOutcome {
        r: req.r,
        target,
        completed: req.completed,
        weight: weight.to_string(),
        exponent_classes: classes.iter().map(|c| c.to_string()).collect(),
        pass: stability.pass,
        stability,
    })
}

/// `-3/2` for `h`; the numerator `f = η^{3r} h` adds `3r/2`.
pub fn vector_weight(r: i64, target: Target) -> Rational {
    match target.resolve(r) {
        Target::F => rat(3 * r - 3, 2),
        _ => rat(-3, 2),
    }
}

/// Runs the fits in the precision implied by `req.precision_digits`.
pub fn run_verification(catalog: &SeriesCatalog, req: &VerifyRequest) -> Result<VerifyOutcome, VerifyError> {
    match Precision::for_digits(req.precision_digits) {
        Precision::Double => run::<f64>(catalog, req),
        Precision::DoubleDouble => run::<DD>(catalog, req),
    }
}
