//! Exact generating series of rank ≤ 3 Vafa–Witten invariants of P², their
//! log Gromov–Witten counterparts on the mirror rational elliptic surface,
//! and numerical checks of their (mock) modular behaviour.
//!
//! * [`qseries`]: truncated formal series with rational exponents and coefficients.
//! * [`numtheory`]: Dedekind eta, Hurwitz class numbers, theta series.
//! * [`toricgeo`]: the 9-ray fan, contact orders and curve classes attached to `γ = (r, c1, c2)`.
//! * [`genseries`]: `h_vw`, `h_gw`, invariant extraction and BPS inversion.
//! * [`mockverify`]: evaluation on the upper half-plane, Eichler-integral completions,
//!   transformation fits.
//! * [`cli`]: the `mockgw` command line.
//!
//! ```
//! use mockgw::genseries::{SeriesCatalog, SeriesSpec};
//! use mockgw::qseries::rat;
//!
//! let h = SeriesCatalog::builtin().h_vw(&SeriesSpec::new(1, 0, 4).unwrap()).unwrap();
//! assert_eq!(h.coefficient(&rat(-1, 8)).unwrap(), rat(1, 1));
//! assert_eq!(h.coefficient(&rat(7, 8)).unwrap(), rat(3, 1));
//! ```

#![allow(clippy::result_large_err)]

pub mod cli;
pub mod genseries;
pub mod mockverify;
pub mod numtheory;
pub mod qseries;
pub mod toricgeo;

pub use genseries::{SeriesCatalog, SeriesSpec};
pub use mockverify::{Element, TauPoint};
pub use qseries::{QSeries, Rational};
