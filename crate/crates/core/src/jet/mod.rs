//! Truncated Taylor-series arithmetic.
//!
//! A [`Jet`] of order `K` holds the normalized Taylor coefficients
//! `c[j] = g^(j)(s0) / j!` for `j = 0..=K`. Arithmetic propagates them exactly
//! (up to rounding), so any derivative of a composed quantity up to order `K`
//! is available without numerical differencing.
//!
//! Binary operations on jets of different orders truncate to the smaller
//! order.

mod eval;
mod field;

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

pub use eval::{curve_jet, eval_curve_jet, eval_field_jet, field_jet, jet_order_for_dimension};
pub use field::FieldJet;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet with zero value")]
    DivisionByZero,
    #[error("{op} of non-positive value {value}")]
    Domain { op: &'static str, value: f64 },
    #[error("non-finite result")]
    Overflow,
    #[error("symbol not available in this evaluation context")]
    WrongSymbol,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the value coefficient");
        Jet { coeffs }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Jet::constant(0.0, order)
    }

    /// The independent variable expanded at `s`.
    pub fn variable(s: f64, order: usize) -> Self {
        let mut j = Jet::constant(s, order);
        if order >= 1 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `d^k g / ds^k` at the expansion point, or `None` beyond the order.
    pub fn derivative_value(&self, k: usize) -> Option<f64> {
        let c = *self.coeffs.get(k)?;
        Some(c * (1..=k).map(|i| i as f64).product::<f64>())
    }

    /// Jet of `dg/ds`, one order lower. A zero-order jet differentiates to
    /// the zero jet of order zero.
    pub fn derivative(&self) -> Jet {
        if self.order() == 0 {
            return Jet::zero(0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(j, c)| (j + 1) as f64 * c)
            .collect();
        Jet { coeffs }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        Jet {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, k: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn common_order(&self, other: &Jet) -> usize {
        self.order().min(other.order())
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        Jet::constant(1.0, self.order()).div(self)
    }

    pub fn div(&self, other: &Jet) -> Result<Jet, JetError> {
        let b0 = other.coeffs[0];
        if b0.abs() < f64::MIN_POSITIVE {
            return Err(JetError::DivisionByZero);
        }
        let k = self.common_order(other);
        let mut c = vec![0.0; k + 1];
        for n in 0..=k {
            let acc: f64 = (1..=n).map(|j| other.coeffs[j] * c[n - j]).sum();
            c[n] = (self.coeffs[n] - acc) / b0;
        }
        Ok(Jet { coeffs: c })
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let a0 = self.coeffs[0];
        if a0 <= 0.0 {
            return Err(JetError::Domain { op: "sqrt", value: a0 });
        }
        let k = self.order();
        let mut r = vec![0.0; k + 1];
        r[0] = a0.sqrt();
        for n in 1..=k {
            let acc: f64 = (1..n).map(|j| r[j] * r[n - j]).sum();
            r[n] = (self.coeffs[n] - acc) / (2.0 * r[0]);
        }
        Ok(Jet { coeffs: r })
    }

    pub fn exp(&self) -> Jet {
        let k = self.order();
        let mut e = vec![0.0; k + 1];
        e[0] = self.coeffs[0].exp();
        for n in 1..=k {
            let acc: f64 = (1..=n).map(|j| j as f64 * self.coeffs[j] * e[n - j]).sum();
            e[n] = acc / n as f64;
        }
        Jet { coeffs: e }
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        let a0 = self.coeffs[0];
        if a0 <= 0.0 {
            return Err(JetError::Domain { op: "ln", value: a0 });
        }
        let k = self.order();
        let mut l = vec![0.0; k + 1];
        l[0] = a0.ln();
        for n in 1..=k {
            let acc: f64 = (1..n).map(|j| j as f64 * l[j] * self.coeffs[n - j]).sum();
            l[n] = (self.coeffs[n] - acc / n as f64) / a0;
        }
        Ok(Jet { coeffs: l })
    }

    /// `(sin g, cos g)` from the coupled recurrence.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let k = self.order();
        let mut s = vec![0.0; k + 1];
        let mut c = vec![0.0; k + 1];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for n in 1..=k {
            let mut acc_s = 0.0;
            let mut acc_c = 0.0;
            for j in 1..=n {
                let ja = j as f64 * self.coeffs[j];
                acc_s += ja * c[n - j];
                acc_c += ja * s[n - j];
            }
            s[n] = acc_s / n as f64;
            c[n] = -acc_c / n as f64;
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    /// Integer power by repeated squaring; valid for any base value except
    /// zero with a negative exponent.
    pub fn powi(&self, p: i64) -> Result<Jet, JetError> {
        let mut result = Jet::constant(1.0, self.order());
        let mut base = self.clone();
        let mut e = p.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if p < 0 {
            result.recip()
        } else {
            Ok(result)
        }
    }

    /// Real power with constant exponent. Integral exponents go through
    /// [`Jet::powi`]; others need a positive base.
    pub fn powf(&self, p: f64) -> Result<Jet, JetError> {
        if p.fract() == 0.0 && p.abs() <= 1024.0 {
            return self.powi(p as i64);
        }
        let a0 = self.coeffs[0];
        if a0 <= 0.0 {
            return Err(JetError::Domain {
                op: "fractional power",
                value: a0,
            });
        }
        let k = self.order();
        let mut g = vec![0.0; k + 1];
        g[0] = a0.powf(p);
        for n in 1..=k {
            let acc: f64 = (1..=n)
                .map(|j| ((p + 1.0) * j as f64 - n as f64) * self.coeffs[j] * g[n - j])
                .sum();
            g[n] = acc / (n as f64 * a0);
        }
        Ok(Jet { coeffs: g })
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let k = self.common_order(rhs);
        Jet {
            coeffs: (0..=k).map(|i| self.coeffs[i] + rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let k = self.common_order(rhs);
        Jet {
            coeffs: (0..=k).map(|i| self.coeffs[i] - rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let k = self.common_order(rhs);
        let coeffs = (0..=k)
            .map(|n| (0..=n).map(|j| self.coeffs[j] * rhs.coeffs[n - j]).sum())
            .collect();
        Jet { coeffs }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

/// Dot product of two vectors of jets.
pub fn dot(a: &[Jet], b: &[Jet]) -> Jet {
    debug_assert_eq!(a.len(), b.len());
    let order = a.iter().chain(b).map(Jet::order).min().unwrap_or(0);
    a.iter().zip(b).fold(Jet::zero(order), |acc, (x, y)| &acc + &(x * y))
}
