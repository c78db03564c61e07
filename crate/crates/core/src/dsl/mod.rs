//! Expression language for curve components and scalar fields, plus the
//! curve-spec document format.
//!
//! Curve components are expressions in the parameter `s`; fields are
//! expressions in the coordinates `x1 … xn`. Both share one grammar:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'pi' | 'e' | 's' | 'x'<i> | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | exp | sqrt | ln
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative; its exponent
//! must not depend on `s` or any coordinate.

mod document;
mod lexer;
mod parser;

use std::fmt;

pub use document::{parse_curve_spec, CurveSpec, DocumentError, DEFAULT_SAMPLES, DEFAULT_TOL_CONST, DEFAULT_TOL_FRAME};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_expr, parse_expression};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Sqrt,
    Ln,
}

impl UnaryOp {
    pub fn function_name(self) -> Option<&'static str> {
        match self {
            UnaryOp::Neg => None,
            UnaryOp::Sin => Some("sin"),
            UnaryOp::Cos => Some("cos"),
            UnaryOp::Exp => Some("exp"),
            UnaryOp::Sqrt => Some("sqrt"),
            UnaryOp::Ln => Some("ln"),
        }
    }

    pub fn from_function_name(name: &str) -> Option<Self> {
        match name {
            "sin" => Some(UnaryOp::Sin),
            "cos" => Some(UnaryOp::Cos),
            "exp" => Some(UnaryOp::Exp),
            "sqrt" => Some(UnaryOp::Sqrt),
            "ln" => Some(UnaryOp::Ln),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
            BinaryOp::Pow => 4,
        }
    }
}

/// Which symbol set an expression may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExprKind {
    /// Curve component: uses `s`, never coordinates.
    Curve,
    /// Scalar field: uses `x1 … xn`, never `s`.
    Field,
}

impl fmt::Display for ExprKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprKind::Curve => f.write_str("curve component"),
            ExprKind::Field => f.write_str("field"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    Param,
    /// Coordinate `x_i`, stored zero-based.
    Coord(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("illegal character `{ch}` at offset {pos}")]
    IllegalCharacter { pos: usize, ch: char },
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier `{name}` at offset {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("coordinate x{index} out of range for dimension {dimension} (offset {pos})")]
    CoordOutOfRange { index: usize, dimension: usize, pos: usize },
    #[error("`{symbol}` is not allowed in a {kind} expression (offset {pos})")]
    WrongSymbolKind { symbol: String, kind: ExprKind, pos: usize },
    #[error("exponent at offset {pos} must be a constant expression")]
    NonConstantExponent { pos: usize },
}

impl ExprError {
    pub fn position(&self) -> usize {
        match self {
            ExprError::IllegalCharacter { pos, .. }
            | ExprError::Syntax { pos, .. }
            | ExprError::UnknownIdentifier { pos, .. }
            | ExprError::CoordOutOfRange { pos, .. }
            | ExprError::WrongSymbolKind { pos, .. }
            | ExprError::NonConstantExponent { pos } => *pos,
        }
    }
}

impl Expr {
    pub fn unary(op: UnaryOp, child: Expr) -> Expr {
        Expr::Unary(op, Box::new(child))
    }

    pub fn binary(op: BinaryOp, left: Expr, right: Expr) -> Expr {
        Expr::Binary(op, Box::new(left), Box::new(right))
    }

    /// True when the expression references neither `s` nor any coordinate.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Constant(_) => true,
            Expr::Param | Expr::Coord(_) => false,
            Expr::Unary(_, c) => c.is_constant(),
            Expr::Binary(_, l, r) => l.is_constant() && r.is_constant(),
        }
    }

    pub fn uses_param(&self) -> bool {
        match self {
            Expr::Param => true,
            Expr::Constant(_) | Expr::Coord(_) => false,
            Expr::Unary(_, c) => c.uses_param(),
            Expr::Binary(_, l, r) => l.uses_param() || r.uses_param(),
        }
    }

    /// Largest zero-based coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self {
            Expr::Coord(i) => Some(*i),
            Expr::Constant(_) | Expr::Param => None,
            Expr::Unary(_, c) => c.max_coord(),
            Expr::Binary(_, l, r) => match (l.max_coord(), r.max_coord()) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            },
        }
    }

    /// Plain floating-point evaluation. Domain violations yield NaN; this
    /// path shares no code with the jet engines.
    pub fn eval(&self, s: f64, x: &[f64]) -> f64 {
        match self {
            Expr::Constant(c) => *c,
            Expr::Param => s,
            Expr::Coord(i) => x.get(*i).copied().unwrap_or(f64::NAN),
            Expr::Unary(op, c) => {
                let v = c.eval(s, x);
                match op {
                    UnaryOp::Neg => -v,
                    UnaryOp::Sin => v.sin(),
                    UnaryOp::Cos => v.cos(),
                    UnaryOp::Exp => v.exp(),
                    UnaryOp::Sqrt => v.sqrt(),
                    UnaryOp::Ln => v.ln(),
                }
            }
            Expr::Binary(op, l, r) => {
                let a = l.eval(s, x);
                let b = r.eval(s, x);
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => a / b,
                    BinaryOp::Pow => a.powf(b),
                }
            }
        }
    }

    /// Replace every `s` with `with`.
    pub fn substitute_param(&self, with: &Expr) -> Expr {
        match self {
            Expr::Param => with.clone(),
            Expr::Constant(_) | Expr::Coord(_) => self.clone(),
            Expr::Unary(op, c) => Expr::unary(*op, c.substitute_param(with)),
            Expr::Binary(op, l, r) => Expr::binary(*op, l.substitute_param(with), r.substitute_param(with)),
        }
    }

    /// Replace coordinate `x_{i+1}` with `with[i]`.
    pub fn substitute_coords(&self, with: &[Expr]) -> Expr {
        match self {
            Expr::Coord(i) => with[*i].clone(),
            Expr::Constant(_) | Expr::Param => self.clone(),
            Expr::Unary(op, c) => Expr::unary(*op, c.substitute_coords(with)),
            Expr::Binary(op, l, r) => Expr::binary(*op, l.substitute_coords(with), r.substitute_coords(with)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Constant(c) if c.is_sign_negative() => 3,
            _ => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// Prints with the minimum parentheses needed for the parser to rebuild the
/// same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Debug formatting is the shortest string that round-trips.
            Expr::Constant(c) => write!(f, "{c:?}"),
            Expr::Param => f.write_str("s"),
            Expr::Coord(i) => write!(f, "x{}", i + 1),
            Expr::Unary(UnaryOp::Neg, c) => {
                f.write_str("-")?;
                write_child(f, c, c.precedence() < 3)
            }
            Expr::Unary(op, c) => write!(f, "{}({c})", op.function_name().unwrap_or("?")),
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                let (left_parens, right_parens) = if *op == BinaryOp::Pow {
                    (l.precedence() <= p, r.precedence() < 3)
                } else {
                    (l.precedence() < p, r.precedence() <= p)
                };
                write_child(f, l, left_parens)?;
                match op {
                    BinaryOp::Pow => f.write_str("^")?,
                    _ => write!(f, " {} ", op.symbol())?,
                }
                write_child(f, r, right_parens)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(src: &str, n: usize) -> Expr {
        parse_expression(&tokenize(src).unwrap(), ExprKind::Field, n).unwrap()
    }

    fn curve(src: &str) -> Expr {
        parse_expression(&tokenize(src).unwrap(), ExprKind::Curve, 1).unwrap()
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        assert_eq!(curve("(s+1)*(s-2)").to_string(), "(s + 1.0) * (s - 2.0)");
        assert_eq!(curve("s-(1-s)").to_string(), "s - (1.0 - s)");
        assert_eq!(curve("(s-1)-s").to_string(), "s - 1.0 - s");
        assert_eq!(curve("-s^2").to_string(), "-s^2.0");
        assert_eq!(curve("(-s)^2").to_string(), "(-s)^2.0");
        assert_eq!(curve("s^3^2").to_string(), "s^3.0^2.0");
        assert_eq!(curve("(s^3)^2").to_string(), "(s^3.0)^2.0");
        assert_eq!(curve("s^-(1/2)").to_string(), "s^-(1.0 / 2.0)");
    }

    #[test]
    fn named_constants_become_literals() {
        assert_eq!(curve("pi"), Expr::Constant(std::f64::consts::PI));
        assert_eq!(curve("e"), Expr::Constant(std::f64::consts::E));
    }

    #[test]
    fn scalar_eval_matches_hand_values() {
        let f = field("x1^2 + x2 + x3^2", 3);
        assert_eq!(f.eval(0.0, &[1.0, 2.0, 3.0]), 12.0);
        let c = curve("sqrt(s) * ln(e)");
        assert!((c.eval(4.0, &[]) - 2.0).abs() < 1e-15);
        assert!(curve("ln(s)").eval(-1.0, &[]).is_nan());
    }

    #[test]
    fn substitution() {
        let f = field("x1 * x2", 2);
        let g = f.substitute_coords(&[Expr::Param, Expr::Constant(3.0)]);
        assert_eq!(g.eval(2.0, &[]), 6.0);
        let c = curve("sin(s)").substitute_param(&curve("2*s"));
        assert_eq!(c, curve("sin(2*s)"));
    }

    #[test]
    fn symbol_queries() {
        let f = field("x1 + 2^3 * x3", 3);
        assert_eq!(f.max_coord(), Some(2));
        assert!(!f.uses_param());
        assert!(curve("2^3").is_constant());
        assert!(!curve("s^2").is_constant());
    }
}
