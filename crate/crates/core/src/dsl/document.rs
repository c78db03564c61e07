//! Curve-spec documents: flat `key = value` files in TOML syntax.
//!
//! ```text
//! dimension = 3
//! curve = ["cos(s/sqrt(2))", "s/sqrt(2)", "sin(s/sqrt(2))"]
//! field = "x1^2 + x2 + x3^2"
//! s_range = [0, 12.566]
//! samples = 512
//! ```
//!
//! `samples`, `tol_const` and `tol_frame` are optional.

use std::fmt::Write as _;

use thiserror::Error;
use toml::{Table, Value};

use super::parser::parse_expr;
use super::{Expr, ExprError, ExprKind};

pub const DEFAULT_SAMPLES: usize = 512;
pub const DEFAULT_TOL_CONST: f64 = 1e-8;
pub const DEFAULT_TOL_FRAME: f64 = 1e-10;

const KEYS: [&str; 7] = [
    "dimension",
    "curve",
    "field",
    "s_range",
    "samples",
    "tol_const",
    "tol_frame",
];

/// A validated curve/field pair with its sampling settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub dimension: usize,
    pub components: Vec<Expr>,
    /// Component sources as written in the document.
    pub component_sources: Vec<String>,
    pub field: Expr,
    pub field_source: String,
    pub s_range: [f64; 2],
    pub samples: usize,
    /// Constancy tolerance.
    pub tol_const: f64,
    /// Degeneracy threshold for the Frenet frame.
    pub tol_frame: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing required field `{0}`")]
    MissingField(&'static str),
    #[error("line {line}: unknown field `{name}`")]
    UnknownField { name: String, line: usize },
    #[error("line {line}: invalid `{name}`: {message}")]
    InvalidField {
        name: &'static str,
        message: String,
        line: usize,
    },
    #[error("line {line}: dimension is {dimension} but `curve` has {components} components")]
    DimensionMismatch {
        dimension: usize,
        components: usize,
        line: usize,
    },
    #[error("line {line}: in {location}: {source}")]
    Expression {
        location: String,
        line: usize,
        source: ExprError,
    },
}

impl DocumentError {
    pub fn line(&self) -> Option<usize> {
        match self {
            DocumentError::MissingField(_) => None,
            DocumentError::Syntax { line, .. }
            | DocumentError::UnknownField { line, .. }
            | DocumentError::InvalidField { line, .. }
            | DocumentError::DimensionMismatch { line, .. }
            | DocumentError::Expression { line, .. } => Some(*line),
        }
    }
}

/// 1-based line of the first `key = …` assignment; 1 when not found.
fn key_line(document: &str, key: &str) -> usize {
    document
        .lines()
        .position(|l| {
            l.trim_start()
                .strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map_or(1, |i| i + 1)
}

fn offset_line(document: &str, offset: usize) -> usize {
    document[..offset.min(document.len())].matches('\n').count() + 1
}

fn as_real(value: &Value) -> Option<f64> {
    match value {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

pub fn parse_curve_spec(document: &str) -> Result<CurveSpec, DocumentError> {
    let table: Table = document.parse().map_err(|e: toml::de::Error| DocumentError::Syntax {
        line: e.span().map_or(1, |span| offset_line(document, span.start)),
        message: e.message().to_string(),
    })?;
    for key in table.keys() {
        if !KEYS.contains(&key.as_str()) {
            return Err(DocumentError::UnknownField {
                name: key.clone(),
                line: key_line(document, key),
            });
        }
    }
    let invalid = |name: &'static str, message: &str| DocumentError::InvalidField {
        name,
        message: message.to_string(),
        line: key_line(document, name),
    };
    let get = |name: &'static str| table.get(name).ok_or(DocumentError::MissingField(name));

    let dimension = match get("dimension")? {
        Value::Integer(n) if *n >= 2 => *n as usize,
        _ => return Err(invalid("dimension", "expected an integer >= 2")),
    };

    let Value::Array(items) = get("curve")? else {
        return Err(invalid("curve", "expected a list of quoted expressions"));
    };
    let curve_line = key_line(document, "curve");
    if items.len() != dimension {
        return Err(DocumentError::DimensionMismatch {
            dimension,
            components: items.len(),
            line: curve_line,
        });
    }
    let mut components = Vec::with_capacity(dimension);
    let mut component_sources = Vec::with_capacity(dimension);
    for (i, item) in items.iter().enumerate() {
        let Value::String(src) = item else {
            return Err(invalid("curve", "expected a list of quoted expressions"));
        };
        let expr = parse_expr(src, ExprKind::Curve, dimension).map_err(|source| DocumentError::Expression {
            location: format!("curve[{i}]"),
            line: curve_line,
            source,
        })?;
        components.push(expr);
        component_sources.push(src.clone());
    }

    let Value::String(field_source) = get("field")? else {
        return Err(invalid("field", "expected a quoted expression"));
    };
    let field = parse_expr(field_source, ExprKind::Field, dimension).map_err(|source| DocumentError::Expression {
        location: "field".into(),
        line: key_line(document, "field"),
        source,
    })?;

    let s_range = match get("s_range")? {
        Value::Array(v) if v.len() == 2 => match (as_real(&v[0]), as_real(&v[1])) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() && a < b => [a, b],
            (Some(_), Some(_)) => return Err(invalid("s_range", "need finite s_min < s_max")),
            _ => return Err(invalid("s_range", "expected two numbers")),
        },
        _ => return Err(invalid("s_range", "expected a list of two numbers")),
    };

    let samples = match table.get("samples") {
        None => DEFAULT_SAMPLES,
        Some(Value::Integer(k)) if *k >= 8 => *k as usize,
        Some(_) => return Err(invalid("samples", "expected an integer >= 8")),
    };

    let tolerance = |name: &'static str, default: f64| match table.get(name) {
        None => Ok(default),
        Some(v) => match as_real(v) {
            Some(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(invalid(name, "expected a finite positive number")),
        },
    };
    let tol_const = tolerance("tol_const", DEFAULT_TOL_CONST)?;
    let tol_frame = tolerance("tol_frame", DEFAULT_TOL_FRAME)?;

    Ok(CurveSpec {
        dimension,
        components,
        component_sources,
        field,
        field_source: field_source.clone(),
        s_range,
        samples,
        tol_const,
        tol_frame,
    })
}

fn format_real(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

fn quote(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

impl CurveSpec {
    /// Serialize back to document form. Re-parsing the result yields an
    /// equal spec.
    pub fn to_document(&self) -> String {
        let curve: Vec<String> = self.component_sources.iter().map(|s| quote(s)).collect();
        let mut out = String::new();
        let _ = writeln!(out, "dimension = {}", self.dimension);
        let _ = writeln!(out, "curve = [{}]", curve.join(", "));
        let _ = writeln!(out, "field = {}", quote(&self.field_source));
        let _ = writeln!(
            out,
            "s_range = [{}, {}]",
            format_real(self.s_range[0]),
            format_real(self.s_range[1])
        );
        let _ = writeln!(out, "samples = {}", self.samples);
        if self.tol_const != DEFAULT_TOL_CONST {
            let _ = writeln!(out, "tol_const = {:?}", self.tol_const);
        }
        if self.tol_frame != DEFAULT_TOL_FRAME {
            let _ = writeln!(out, "tol_frame = {:?}", self.tol_frame);
        }
        out
    }

    /// Equally spaced parameter values including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let [a, b] = self.s_range;
        let m = self.samples;
        (0..m)
            .map(|i| {
                if i + 1 == m {
                    b
                } else {
                    a + (b - a) * i as f64 / (m - 1) as f64
                }
            })
            .collect()
    }
}
