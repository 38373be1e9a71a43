//! JSON formats for decompositions and certification reports.
//!
//! Scalars are exact: JSON integers, or strings holding an integer or `num/den`.
//! Floating-point numbers are rejected wherever they appear.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::criteria::{CertReport, Diagnostics, Reason, Stage, Status, Timings};
use crate::error::Error;
use crate::field::{format_rational, parse_rational, Field, PrimeField, RationalField};
use crate::poly::LinearForm;
use crate::veronese::{Term, WaringInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Rational,
    Prime(u64),
}

impl FieldChoice {
    /// `rational`, `prime:<p>`, or bare `prime` for the default prime (which
    /// honours the `WARING_PRIME` environment variable).
    pub fn parse(s: &str) -> Result<Self, Error> {
        let bad = |message: String| Error::Parse {
            field: "field".into(),
            message,
        };
        match s.trim() {
            "rational" | "Q" => Ok(FieldChoice::Rational),
            "prime" => Ok(FieldChoice::Prime(PrimeField::from_env()?.modulus())),
            other => {
                let p = other
                    .strip_prefix("prime:")
                    .ok_or_else(|| bad(format!("expected \"rational\" or \"prime:<p>\", got {other:?}")))?;
                let p: u64 = p.parse().map_err(|_| bad(format!("bad prime {p:?}")))?;
                PrimeField::new(p)?;
                Ok(FieldChoice::Prime(p))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FieldChoice::Rational => RationalField.describe(),
            FieldChoice::Prime(p) => format!("prime:{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    #[serde(default = "one")]
    pub weight: Value,
    pub coeffs: Vec<Value>,
}

fn one() -> Value {
    Value::String("1".into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub n: usize,
    pub d: usize,
    #[serde(default = "default_field")]
    pub field: String,
    pub terms: Vec<TermFile>,
}

fn default_field() -> String {
    "rational".into()
}

fn scalar(v: &Value, path: &str) -> Result<BigRational, Error> {
    let err = |message: String| Error::Parse {
        field: path.to_string(),
        message,
    };
    match v {
        Value::String(s) => parse_rational(s).map_err(err),
        Value::Number(num) if num.is_i64() || num.is_u64() => parse_rational(&num.to_string()).map_err(err),
        Value::Number(num) => Err(err(format!("floating-point value {num} is not an exact scalar"))),
        other => Err(err(format!("expected an integer or a \"num/den\" string, got {other}"))),
    }
}

/// Terms as exact rationals: `(weight, coefficients)`.
pub type RationalTerms = Vec<(BigRational, Vec<BigRational>)>;

impl DecompositionFile {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let file: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            field: "<document>".into(),
            message: e.to_string(),
        })?;
        file.rational_terms()?;
        FieldChoice::parse(&file.field)?;
        Ok(file)
    }

    pub fn field_choice(&self) -> Result<FieldChoice, Error> {
        FieldChoice::parse(&self.field)
    }

    pub fn rational_terms(&self) -> Result<RationalTerms, Error> {
        if self.terms.is_empty() {
            return Err(Error::Parse {
                field: "terms".into(),
                message: "at least one term is required".into(),
            });
        }
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                if t.coeffs.len() != self.n + 1 {
                    return Err(Error::Parse {
                        field: format!("terms[{i}].coeffs"),
                        message: format!("expected n+1 = {} coefficients, got {}", self.n + 1, t.coeffs.len()),
                    });
                }
                let w = scalar(&t.weight, &format!("terms[{i}].weight"))?;
                let c = t
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, v)| scalar(v, &format!("terms[{i}].coeffs[{j}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((w, c))
            })
            .collect()
    }

    /// Maps the terms into `field`. Over `F_p` every denominator must be a unit.
    pub fn input<F: Field>(&self, field: F) -> Result<WaringInput<F>, Error> {
        let terms = self
            .rational_terms()?
            .into_iter()
            .enumerate()
            .map(|(i, (w, c))| {
                let weight = field.from_rational(&w)?;
                let coeffs = c.iter().map(|q| field.from_rational(q)).collect::<Result<Vec<_>, _>>()?;
                let form = LinearForm::new(field, coeffs).map_err(|e| Error::Parse {
                    field: format!("terms[{i}].coeffs"),
                    message: e.to_string(),
                })?;
                Ok(Term { weight, form })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        WaringInput::new(field, self.n, self.d, terms)
    }

    /// Every scalar as a reduced string, field descriptor normalized.
    pub fn canonical(&self) -> Result<Self, Error> {
        let terms = self
            .rational_terms()?
            .into_iter()
            .map(|(w, c)| TermFile {
                weight: Value::String(format_rational(&w)),
                coeffs: c.iter().map(|q| Value::String(format_rational(q))).collect(),
            })
            .collect();
        Ok(Self {
            n: self.n,
            d: self.d,
            field: self.field_choice()?.describe(),
            terms,
        })
    }

    pub fn to_canonical_json(&self) -> Result<String, Error> {
        Ok(serde_json::to_string_pretty(&self.canonical()?).expect("plain data serializes") + "\n")
    }

    pub fn from_input<F: Field>(w: &WaringInput<F>) -> Self {
        let f = w.field();
        let term = |t: &Term<F>| TermFile {
            weight: Value::String(f.format(&t.weight)),
            coeffs: t.form.coeffs().iter().map(|c| Value::String(f.format(c))).collect(),
        };
        Self {
            n: w.n(),
            d: w.degree(),
            field: f.describe(),
            terms: w.terms().iter().map(term).collect(),
        }
    }
}

/// Serialized certification report; converts to and from [`CertReport`] without loss.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub status: Status,
    pub stage: Stage,
    pub reason: Option<Reason>,
    pub diagnostics: Diagnostics,
    pub timings: Timings,
}

impl ReportFile {
    pub fn new(report: CertReport, timings: Timings) -> Self {
        Self {
            status: report.status,
            stage: report.stage,
            reason: report.reason,
            diagnostics: report.diagnostics,
            timings,
        }
    }

    pub fn report(&self) -> CertReport {
        CertReport {
            status: self.status,
            stage: self.stage,
            reason: self.reason,
            diagnostics: self.diagnostics.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}
