use super::{FieldJet, Jet, JetError};
use crate::dsl::{BinaryOp, CurveSpec, Expr, UnaryOp};

/// Jet order used for an `n`-dimensional curve.
///
/// The frame consumes `n` derivatives of the curve. The tangent family of
/// harmonic curvatures then spends one more per level, and the normal
/// family, which starts from `k_{n-1}`, spends `n - 3` more. One order is
/// left over for the derivative identities on the last harmonic curvature.
/// That gives `n + max(0, n - 3) + 1`.
pub fn jet_order_for_dimension(n: usize) -> usize {
    n + n.saturating_sub(3) + 1
}

fn checked(j: Jet) -> Result<Jet, JetError> {
    if j.is_finite() {
        Ok(j)
    } else {
        Err(JetError::Overflow)
    }
}

/// Taylor jet of a curve-component expression at `s`.
pub fn curve_jet(expr: &Expr, s: f64, order: usize) -> Result<Jet, JetError> {
    let j = match expr {
        Expr::Constant(c) => Jet::constant(*c, order),
        Expr::Param => Jet::variable(s, order),
        Expr::Coord(_) => return Err(JetError::WrongSymbol),
        Expr::Unary(op, child) => {
            let a = curve_jet(child, s, order)?;
            match op {
                UnaryOp::Neg => -&a,
                UnaryOp::Sin => a.sin(),
                UnaryOp::Cos => a.cos(),
                UnaryOp::Exp => a.exp(),
                UnaryOp::Sqrt => a.sqrt()?,
                UnaryOp::Ln => a.ln()?,
            }
        }
        Expr::Binary(BinaryOp::Pow, base, exponent) => {
            let p = constant_exponent(exponent)?;
            curve_jet(base, s, order)?.powf(p)?
        }
        Expr::Binary(op, l, r) => {
            let a = curve_jet(l, s, order)?;
            let b = curve_jet(r, s, order)?;
            match op {
                BinaryOp::Add => &a + &b,
                BinaryOp::Sub => &a - &b,
                BinaryOp::Mul => &a * &b,
                BinaryOp::Div => a.div(&b)?,
                BinaryOp::Pow => unreachable!("handled above"),
            }
        }
    };
    checked(j)
}

fn constant_exponent(exponent: &Expr) -> Result<f64, JetError> {
    if !exponent.is_constant() {
        return Err(JetError::WrongSymbol);
    }
    let p = exponent.eval(0.0, &[]);
    if p.is_finite() {
        Ok(p)
    } else {
        Err(JetError::Overflow)
    }
}

/// Value, gradient and Hessian of a field expression at `point`.
pub fn field_jet(expr: &Expr, point: &[f64]) -> Result<FieldJet, JetError> {
    let n = point.len();
    let j = match expr {
        Expr::Constant(c) => FieldJet::constant(*c, n),
        Expr::Param => return Err(JetError::WrongSymbol),
        Expr::Coord(i) if *i < n => FieldJet::coordinate(*i, point),
        Expr::Coord(_) => return Err(JetError::WrongSymbol),
        Expr::Unary(op, child) => {
            let a = field_jet(child, point)?;
            match op {
                UnaryOp::Neg => a.neg(),
                UnaryOp::Sin => a.sin(),
                UnaryOp::Cos => a.cos(),
                UnaryOp::Exp => a.exp(),
                UnaryOp::Sqrt => a.sqrt()?,
                UnaryOp::Ln => a.ln()?,
            }
        }
        Expr::Binary(BinaryOp::Pow, base, exponent) => {
            let p = constant_exponent(exponent)?;
            field_jet(base, point)?.powf(p)?
        }
        Expr::Binary(op, l, r) => {
            let a = field_jet(l, point)?;
            let b = field_jet(r, point)?;
            match op {
                BinaryOp::Add => a.add(&b),
                BinaryOp::Sub => a.sub(&b),
                BinaryOp::Mul => a.mul(&b),
                BinaryOp::Div => a.div(&b)?,
                BinaryOp::Pow => unreachable!("handled above"),
            }
        }
    };
    if j.is_finite() {
        Ok(j)
    } else {
        Err(JetError::Overflow)
    }
}

/// Jets of every curve component at `s`.
pub fn eval_curve_jet(spec: &CurveSpec, s: f64, order: usize) -> Result<Vec<Jet>, JetError> {
    spec.components.iter().map(|c| curve_jet(c, s, order)).collect()
}

pub fn eval_field_jet(spec: &CurveSpec, point: &[f64]) -> Result<FieldJet, JetError> {
    field_jet(&spec.field, point)
}
