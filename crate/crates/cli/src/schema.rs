//! Input documents and the versioned report envelope.
//!
//! Germ descriptions are JSON objects with integer fields; unknown fields
//! are rejected. Reports serialize rationals as `{num, den}` pairs (the
//! library's `Frac` serializer); no floating point appears anywhere.

use serde::{Deserialize, Serialize};

use moriconic::germ::{Equation, GermError, NormalizedGerm, Series};
use moriconic::weights::Monomial;

pub const SCHEMA_VERSION: u32 = 1;

/// A germ description file.
#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GermDocument {
    pub mbar: i64,
    pub d: i64,
    pub series: SeriesTag,
    pub weights: [i64; 4],
    pub ords: [i64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<EquationDoc>,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesTag {
    Main,
    Exceptional,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum EquationDoc {
    /// `{"binomial": [1,1,0,0], "n": 1}` encodes `x1*x2 - x4`.
    Binomial { binomial: [u32; 4], n: u32 },
    /// `"general-hypersurface"` or `"smooth-marker"`.
    Tag(String),
}

#[derive(Debug)]
pub enum DocumentError {
    Json(serde_json::Error),
    UnknownEquationTag(String),
    Germ(GermError),
}

impl std::fmt::Display for DocumentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DocumentError::Json(e) => write!(f, "{e}"),
            DocumentError::UnknownEquationTag(t) => write!(
                f,
                "unknown equation tag {t:?} (expected \"general-hypersurface\" or \"smooth-marker\")"
            ),
            DocumentError::Germ(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DocumentError {}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Json(e)
    }
}

impl From<GermError> for DocumentError {
    fn from(e: GermError) -> Self {
        DocumentError::Germ(e)
    }
}

impl GermDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_germ(&self) -> Result<NormalizedGerm, DocumentError> {
        let series = match self.series {
            SeriesTag::Main => Series::Main,
            SeriesTag::Exceptional => Series::Exceptional,
        };
        let equation = match &self.equation {
            None => Equation::GeneralHypersurface,
            Some(EquationDoc::Binomial { binomial, n }) => Equation::CyclicBinomial {
                psi0: Monomial::new(*binomial),
                power: *n,
            },
            Some(EquationDoc::Tag(tag)) => match tag.as_str() {
                "general-hypersurface" => Equation::GeneralHypersurface,
                "smooth-marker" => Equation::SmoothMarker,
                other => return Err(DocumentError::UnknownEquationTag(other.to_string())),
            },
        };
        Ok(NormalizedGerm::new(
            self.mbar,
            self.d,
            series,
            self.weights,
            self.ords,
            equation,
        )?)
    }

    pub fn from_germ(germ: &NormalizedGerm) -> Self {
        GermDocument {
            mbar: germ.mbar(),
            d: germ.d(),
            series: match germ.series() {
                Series::Main => SeriesTag::Main,
                Series::Exceptional => SeriesTag::Exceptional,
            },
            weights: germ.weights().map(|w| w.value()),
            ords: germ.ords(),
            equation: match germ.equation() {
                Equation::GeneralHypersurface => None,
                Equation::CyclicBinomial { psi0, power } => Some(EquationDoc::Binomial {
                    binomial: psi0.exps(),
                    n: power,
                }),
                Equation::SmoothMarker => Some(EquationDoc::Tag("smooth-marker".into())),
            },
        }
    }
}

/// One named pass/fail entry; the process exits 0 exactly when every check
/// in the report passed.
#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// The versioned report envelope shared by all commands.
#[derive(Debug, Serialize)]
pub struct ReportDocument<T: Serialize> {
    pub schema_version: u32,
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: T,
    pub checks: Vec<Check>,
    pub cap_flags: Vec<String>,
}

impl<T: Serialize> ReportDocument<T> {
    pub fn new(command: &str, inputs: serde_json::Value, results: T) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            inputs,
            results,
            checks: Vec::new(),
            cap_flags: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
