//! Numerical side: evaluating q-series on the upper half-plane, Eichler
//! integrals and completions, and fitting modular transformation laws.
//!
//! Everything numeric is generic over [`Real`], implemented for `f64` and for
//! the double-double type [`DD`] (about 32 digits).

pub mod dd;
pub mod eichler;
pub mod eval;
pub mod fit;
pub mod pipeline;
pub mod quad;
pub mod real;
pub mod special;

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::genseries::GenError;
use crate::numtheory::ThetaError;
use crate::qseries::SeriesError;

pub use dd::{DoubleDouble, DD};
pub use eichler::{
    complete_depth1, complete_depth2, eichler_closed_form, eichler_depth1, eichler_quadrature, CompletionSpec,
    Depth2Channel, Depth2Spec, InnerMode, IntegralOptions, Prefactor, PreparedDepth2,
};
pub use eval::{eval_series, Envelope, Evaluation, PreparedSeries};
pub use fit::{
    fit_stability, fit_transformation, sample_sets, t_phases, Component, Element, FitSettings, SampleSet,
    StabilityReport, TransformReport,
};
pub use real::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MockError {
    #[error("tail bound {bound:e} exceeds requested {requested:e}; increase truncation")]
    IncreaseTruncation { bound: f64, requested: f64 },
    #[error(
        "integral backends disagree: quadrature {quadrature}, closed form {closed_form}, difference {difference:e}"
    )]
    BackendsDisagree {
        quadrature: String,
        closed_form: String,
        difference: f64,
    },
    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    QuadratureNonConvergence { a: f64, b: f64, estimate: f64 },
    #[error("branch check failed: Re(-i(v+τ)) = {0} is not positive")]
    Branch(f64),
    #[error("degenerate sample set")]
    DegenerateSamples,
    #[error("invalid sample point: {0}")]
    InvalidPoint(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Gen(#[from] GenError),
}

/// A point `τ = re + i·im` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauPoint {
    pub re: f64,
    pub im: f64,
}

impl TauPoint {
    pub const fn new(re: f64, im: f64) -> Self {
        TauPoint { re, im }
    }

    pub fn checked(re: f64, im: f64) -> Result<Self, MockError> {
        let p = TauPoint { re, im };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), MockError> {
        if self.im > 0.0 && self.re.is_finite() && self.im.is_finite() {
            Ok(())
        } else {
            Err(MockError::InvalidPoint(format!(
                "{self} is not in the upper half-plane"
            )))
        }
    }

    pub fn to_complex<T: Real>(self) -> Complex<T> {
        Complex::new(T::from_f64(self.re), T::from_f64(self.im))
    }

    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// `Im(-1/τ) = Im τ / |τ|²`.
    pub fn s_image_im(&self) -> f64 {
        self.im / (self.re * self.re + self.im * self.im)
    }
}

impl fmt::Display for TauPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}

/// Which scalar type a requested number of digits maps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    Double,
    DoubleDouble,
}

impl Precision {
    pub fn for_digits(digits: u32) -> Self {
        if digits <= 16 {
            Precision::Double
        } else {
            Precision::DoubleDouble
        }
    }

    pub fn effective_digits(self) -> u32 {
        match self {
            Precision::Double => f64::DIGITS,
            Precision::DoubleDouble => DD::DIGITS,
        }
    }
}

/// Requested and effective decimal digits, as recorded in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionInfo {
    pub requested_digits: u32,
    pub effective_digits: u32,
    pub arithmetic: Precision,
}

impl PrecisionInfo {
    pub fn for_digits(requested_digits: u32) -> Self {
        let arithmetic = Precision::for_digits(requested_digits);
        PrecisionInfo {
            requested_digits,
            effective_digits: arithmetic.effective_digits(),
            arithmetic,
        }
    }
}
