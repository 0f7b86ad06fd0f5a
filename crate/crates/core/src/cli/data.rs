//! Rank-3 numerator files: `{"c1": 0, "terms": [["e_num","e_den","c_num","c_den"], …]}`,
//! optionally with `"cutoff": ["num","den"]`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::genseries::{same_class_mod_one, SeriesCatalog};
use crate::qseries::{int, parse_rational, QSeries, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    c1: i64,
    terms: Vec<[String; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cutoff: Option<[String; 2]>,
}

/// A validated numerator `f_{3,c1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank3DataFile {
    pub c1: i64,
    pub terms: Vec<(Rational, Rational)>,
    /// Exponents at or past this are unknown. Defaults to one integer step
    /// past the largest listed exponent.
    pub cutoff: Rational,
}

impl Rank3DataFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| CliError::Data(e.to_string()))?;
        if !(0..3).contains(&raw.c1) {
            return Err(CliError::Data(format!("c1 must be 0, 1 or 2, got {}", raw.c1)));
        }
        let mut terms = Vec::with_capacity(raw.terms.len());
        for [en, ed, cn, cd] in &raw.terms {
            let e = parse_rational(en, ed).map_err(|e| CliError::Data(e.to_string()))?;
            let c = parse_rational(cn, cd).map_err(|e| CliError::Data(e.to_string()))?;
            terms.push((e, c));
        }
        let Some((first, _)) = terms.first() else {
            return Err(CliError::Data("no terms".into()));
        };
        for w in terms.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(CliError::Data(format!(
                    "exponents not strictly increasing: {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some((e, _)) = terms.iter().find(|(e, _)| !same_class_mod_one(e, first)) {
            return Err(CliError::Data(format!(
                "exponent {e} is not congruent to {first} mod 1"
            )));
        }
        let last = &terms.last().expect("nonempty").0;
        let cutoff = match &raw.cutoff {
            Some([n, d]) => parse_rational(n, d).map_err(|e| CliError::Data(e.to_string()))?,
            None => last + int(1),
        };
        if cutoff <= *last {
            return Err(CliError::Data(format!(
                "cutoff {cutoff} does not exceed the last exponent {last}"
            )));
        }
        Ok(Rank3DataFile {
            c1: raw.c1,
            terms,
            cutoff,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Rank3DataFile::parse(&text).map_err(|e| match e {
            CliError::Data(msg) => CliError::Data(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn series(&self) -> Result<QSeries, CliError> {
        QSeries::make(self.terms.iter().cloned(), self.cutoff.clone()).map_err(|e| CliError::Data(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let raw = RawFile {
            c1: self.c1,
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
            cutoff: Some([self.cutoff.numer().to_string(), self.cutoff.denom().to_string()]),
        };
        serde_json::to_string(&raw).expect("serializable")
    }
}

/// Builtin catalog plus every rank-3 file in `paths`.
pub fn load_catalog(paths: &[impl AsRef<Path>]) -> Result<SeriesCatalog, CliError> {
    let mut catalog = SeriesCatalog::builtin();
    for p in paths {
        let file = Rank3DataFile::load(p.as_ref())?;
        catalog.insert_rank3(file.c1, file.series()?);
    }
    Ok(catalog)
}
