//! Exact emission of matrices, functions, weights, coefficient tables and
//! reports, as JSON or CSV, and parsing them back.
//!
//! Selectors by kind:
//!
//! | kind           | selectors                                              |
//! |----------------|--------------------------------------------------------|
//! | `matrix`       | `X`, `Y`, `Z`, `calY`, `tildeX`, `tildeY`, `tildeZ`, `casimir`, `gram` |
//! | `function`     | `U<n>`, `V<n>`, `phi<n>`                               |
//! | `weight`       | `w`                                                    |
//! | `coefficients` | `lambda`, `nu`, `mu`, `xi`, `C<n>`                     |
//! | `report`       | a check id, a check prefix, or `all`                   |
//!
//! Matrix selectors take the basis separately; `calY` is always in the `φ`
//! basis and the tilde operators, `casimir` and `gram` in the delta basis.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::algebra::{casimir_matrix, xi_params};
use crate::bases::{build_u_series, build_v, gram_matrix, phi, u_coefficients_closed, weight};
use crate::bispectral::{cal_y_matrix, lambda, matrix_in_basis, mu_coeffs, nu_coeffs};
use crate::error::{Error, Result};
use crate::kernel::{fmt_rat, parse_rat, RatFun, RatScalar};
use crate::matrix::Basis;
use crate::operators::{make_tilde, matrix_in_e_basis, OpKind};
use crate::params::Params;
use crate::suite::{run_suite, Format, SuiteConfig, SuiteReport};

/// Directory used when no output path is given.
pub const OUT_DIR_ENV: &str = "HAHNBRF_OUT_DIR";

pub fn default_out_dir() -> Option<PathBuf> {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitKind {
    Matrix,
    Function,
    Weight,
    Coefficients,
    Report,
}

impl FromStr for EmitKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix" => Ok(EmitKind::Matrix),
            "function" => Ok(EmitKind::Function),
            "weight" => Ok(EmitKind::Weight),
            "coefficients" => Ok(EmitKind::Coefficients),
            "report" => Ok(EmitKind::Report),
            _ => Err(Error::UnknownSelector(format!("kind {s:?}"))),
        }
    }
}

impl fmt::Display for EmitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EmitKind::Matrix => "matrix",
            EmitKind::Function => "function",
            EmitKind::Weight => "weight",
            EmitKind::Coefficients => "coefficients",
            EmitKind::Report => "report",
        };
        f.write_str(s)
    }
}

/// An emitted object. The JSON shape identifies the variant, so parsing
/// needs no side information.
#[derive(Clone, Debug, PartialEq)]
pub enum Emitted {
    /// Row-major table: matrices, `ν`/`μ` tables.
    Grid(Vec<Vec<RatScalar>>),
    /// Numerator and denominator coefficients, lowest degree first.
    Function {
        num: Vec<RatScalar>,
        den: Vec<RatScalar>,
    },
    Vector(Vec<RatScalar>),
    Named(Vec<(String, RatScalar)>),
    Report(SuiteReport),
}

fn strings(v: &[RatScalar]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(fmt_rat(r))).collect())
}

fn parse_strings(v: &Value) -> Result<Vec<RatScalar>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected an array of rationals".into()))?
        .iter()
        .map(|s| {
            s.as_str()
                .ok_or_else(|| Error::Parse(format!("expected a rational string, got {s}")))
                .and_then(parse_rat)
        })
        .collect()
}

impl Emitted {
    pub fn to_json(&self) -> Result<Value> {
        Ok(match self {
            Emitted::Grid(rows) => Value::Array(rows.iter().map(|r| strings(r)).collect()),
            Emitted::Function { num, den } => {
                let mut m = Map::new();
                m.insert("num".into(), strings(num));
                m.insert("den".into(), strings(den));
                Value::Object(m)
            }
            Emitted::Vector(v) => strings(v),
            Emitted::Named(pairs) => Value::Object(
                pairs
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::String(fmt_rat(v))))
                    .collect(),
            ),
            Emitted::Report(r) => serde_json::to_value(r)?,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(items) if items.first().is_some_and(Value::is_array) => Ok(Emitted::Grid(
                items.iter().map(parse_strings).collect::<Result<_>>()?,
            )),
            Value::Array(_) => Ok(Emitted::Vector(parse_strings(v)?)),
            Value::Object(m) if m.contains_key("checks") => {
                Ok(Emitted::Report(serde_json::from_value(v.clone())?))
            }
            Value::Object(m) if m.len() == 2 && m.contains_key("num") && m.contains_key("den") => {
                Ok(Emitted::Function {
                    num: parse_strings(&m["num"])?,
                    den: parse_strings(&m["den"])?,
                })
            }
            Value::Object(m) => Ok(Emitted::Named(
                m.iter()
                    .map(|(k, s)| {
                        let s = s
                            .as_str()
                            .ok_or_else(|| Error::Parse(format!("field {k}: expected a string")))?;
                        Ok((k.clone(), parse_rat(s)?))
                    })
                    .collect::<Result<_>>()?,
            )),
            _ => Err(Error::Parse("unrecognized emitted object".into())),
        }
    }

    /// CSV layout: grids one record per row; vectors `index,value`; functions
    /// two records tagged `num` and `den`; named values `name,value`; reports
    /// one record per check.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .flexible(true)
            .from_writer(Vec::new());
        match self {
            Emitted::Grid(rows) => {
                for r in rows {
                    w.write_record(r.iter().map(fmt_rat))?;
                }
            }
            Emitted::Function { num, den } => {
                for (tag, v) in [("num", num), ("den", den)] {
                    let mut rec = vec![tag.to_string()];
                    rec.extend(v.iter().map(fmt_rat));
                    w.write_record(&rec)?;
                }
            }
            Emitted::Vector(v) => {
                w.write_record(["index", "value"])?;
                for (i, r) in v.iter().enumerate() {
                    w.write_record([i.to_string(), fmt_rat(r)])?;
                }
            }
            Emitted::Named(pairs) => {
                w.write_record(["name", "value"])?;
                for (k, v) in pairs {
                    w.write_record([k.clone(), fmt_rat(v)])?;
                }
            }
            Emitted::Report(r) => {
                w.write_record([
                    "check_id",
                    "alpha",
                    "beta",
                    "N",
                    "forced",
                    "status",
                    "elapsed_us",
                    "counterexample",
                ])?;
                for c in &r.checks {
                    let status = serde_json::to_value(c.status)?;
                    w.write_record([
                        c.check_id.clone(),
                        fmt_rat(&c.params.alpha),
                        fmt_rat(&c.params.beta),
                        c.params.n.to_string(),
                        c.params.forced.to_string(),
                        status.as_str().unwrap_or_default().to_string(),
                        c.elapsed_us.to_string(),
                        c.counterexample
                            .as_ref()
                            .map(Value::to_string)
                            .unwrap_or_default(),
                    ])?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    /// Inverse of [`Emitted::to_csv`] for every kind except reports.
    pub fn from_csv(kind: EmitKind, selector: &str, text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(text.as_bytes());
        let records: Vec<csv::StringRecord> = r.records().collect::<std::result::Result<_, _>>()?;
        let row = |rec: &csv::StringRecord, skip: usize| -> Result<Vec<RatScalar>> {
            rec.iter().skip(skip).map(parse_rat).collect()
        };
        let shape = shape_of(kind, selector)?;
        match shape {
            Shape::Grid => Ok(Emitted::Grid(
                records.iter().map(|r| row(r, 0)).collect::<Result<_>>()?,
            )),
            Shape::Function => {
                let find = |tag: &str| {
                    records
                        .iter()
                        .find(|r| r.get(0) == Some(tag))
                        .ok_or_else(|| Error::Parse(format!("missing {tag} record")))
                        .and_then(|r| row(r, 1))
                };
                Ok(Emitted::Function {
                    num: find("num")?,
                    den: find("den")?,
                })
            }
            Shape::Vector => Ok(Emitted::Vector(
                records
                    .iter()
                    .skip(1)
                    .map(|r| parse_rat(r.get(1).unwrap_or_default()))
                    .collect::<Result<_>>()?,
            )),
            Shape::Named => Ok(Emitted::Named(
                records
                    .iter()
                    .skip(1)
                    .map(|r| {
                        Ok((
                            r.get(0).unwrap_or_default().to_string(),
                            parse_rat(r.get(1).unwrap_or_default())?,
                        ))
                    })
                    .collect::<Result<_>>()?,
            )),
            Shape::Report => Err(Error::Parse("CSV reports are write-only".into())),
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.to_json()?)? + "\n"),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn parse(kind: EmitKind, selector: &str, format: Format, text: &str) -> Result<Self> {
        match format {
            Format::Json => Emitted::from_json(&serde_json::from_str(text)?),
            Format::Csv => Emitted::from_csv(kind, selector, text),
        }
    }
}

enum Shape {
    Grid,
    Function,
    Vector,
    Named,
    Report,
}

fn shape_of(kind: EmitKind, selector: &str) -> Result<Shape> {
    Ok(match kind {
        EmitKind::Matrix => Shape::Grid,
        EmitKind::Function => Shape::Function,
        EmitKind::Weight => Shape::Vector,
        EmitKind::Report => Shape::Report,
        EmitKind::Coefficients => match selector {
            "lambda" => Shape::Vector,
            "nu" | "mu" => Shape::Grid,
            "xi" => Shape::Named,
            s if indexed(s, "C").is_some() => Shape::Vector,
            s => return Err(Error::UnknownSelector(format!("coefficients {s:?}"))),
        },
    })
}

/// `prefix<n>` → `n`.
fn indexed(selector: &str, prefix: &str) -> Option<usize> {
    selector.strip_prefix(prefix)?.parse().ok()
}

fn function_of(f: &RatFun) -> Emitted {
    Emitted::Function {
        num: f.num().coeffs().to_vec(),
        den: f.den().coeffs().to_vec(),
    }
}

/// Builds the object named by `kind` and `selector` for `p`.
pub fn build(kind: EmitKind, selector: &str, basis: Basis, p: &Params) -> Result<Emitted> {
    let unknown = || Error::UnknownSelector(format!("{kind} {selector:?}"));
    match kind {
        EmitKind::Matrix => {
            let m = match selector {
                "X" | "Y" | "Z" => matrix_in_basis(OpKind::from_str(selector)?, basis, p)?,
                "calY" => cal_y_matrix(p),
                "casimir" => casimir_matrix(p)?,
                "gram" => gram_matrix(p)?,
                s => match s.strip_prefix("tilde") {
                    Some(op @ ("X" | "Y" | "Z")) => {
                        matrix_in_e_basis(&make_tilde(OpKind::from_str(op)?, p)?, p.n)?
                    }
                    _ => return Err(unknown()),
                },
            };
            Ok(Emitted::Grid(m.rows()))
        }
        EmitKind::Function => {
            if let Some(n) = indexed(selector, "U") {
                Ok(function_of(&build_u_series(n, p)?.fun))
            } else if let Some(n) = indexed(selector, "V") {
                Ok(function_of(&build_v(n, p)?.fun))
            } else if let Some(n) = indexed(selector, "phi") {
                Ok(function_of(&phi(n, p)?.fun))
            } else {
                Err(unknown())
            }
        }
        EmitKind::Weight => match selector {
            "w" | "" => Ok(Emitted::Vector(weight(p)?.values.values)),
            _ => Err(unknown()),
        },
        EmitKind::Coefficients => match selector {
            "lambda" => Ok(Emitted::Vector((0..=p.n).map(|n| lambda(n, p)).collect())),
            "nu" => Ok(Emitted::Grid(
                (0..=p.n).map(|n| nu_coeffs(n, p).to_vec()).collect(),
            )),
            "mu" => Ok(Emitted::Grid(
                (0..=p.n)
                    .map(|n| mu_coeffs(n, p).map(|m| m.to_vec()))
                    .collect::<Result<_>>()?,
            )),
            "xi" => {
                let xi = xi_params(p);
                Ok(Emitted::Named(
                    xi.as_array()
                        .iter()
                        .enumerate()
                        .map(|(i, v)| (format!("xi{i}"), (*v).clone()))
                        .collect(),
                ))
            }
            s => match indexed(s, "C") {
                Some(n) => Ok(Emitted::Vector(u_coefficients_closed(n, p)?)),
                None => Err(unknown()),
            },
        },
        EmitKind::Report => {
            let checks = if selector == "all" || selector.is_empty() {
                Vec::new()
            } else {
                vec![selector.to_string()]
            };
            let cfg = SuiteConfig {
                n_list: vec![p.n],
                param_draws: 0,
                explicit_params: vec![(p.alpha.clone(), p.beta.clone())],
                force: p.forced,
                checks,
                ..Default::default()
            };
            Ok(Emitted::Report(run_suite(&cfg)?))
        }
    }
}

/// File name used when only an output directory is known.
pub fn default_file_name(kind: EmitKind, selector: &str, format: Format) -> String {
    let sel: String = selector
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{kind}_{sel}.{}", format.extension())
}

pub fn write_to(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}
