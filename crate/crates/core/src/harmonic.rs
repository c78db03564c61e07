//! Harmonic curvatures of a Frenet curve.
//!
//! Tangent family, `i = 2..n-2`:
//!
//! ```text
//! H_1 = k_1 / k_2
//! H_i = (V_1[H_{i-1}] + k_i H_{i-2}) / k_{i+1}      with H_0 = 0
//! ```
//!
//! Normal family, `i = 2..n-2`:
//!
//! ```text
//! H*_0 = 0,  H*_1 = k_{n-1} / k_{n-2}
//! H*_i = (k_{n-i} H*_{i-2} - V_1[H*_{i-1}]) / k_{n-i-1}
//! ```
//!
//! For `n = 3` each family has the single member `H_1`, `H*_1`, and the
//! "previous" entries `H_{n-3}`, `H*_{n-3}` are the zero conventions.

use thiserror::Error;

use crate::frenet::{directional_derivative, FrenetData};
use crate::jet::{Jet, JetError};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum HarmonicError {
    #[error("jet order exhausted while computing harmonic curvature {index}")]
    InsufficientOrder { index: usize },
    #[error("curvature k{index} vanishes")]
    DegenerateCurvature { index: usize },
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicData {
    pub s: f64,
    /// `H_1 … H_{n-2}`.
    pub h: Vec<Jet>,
    /// `H*_0 … H*_{n-2}`; the first entry is identically zero.
    pub hstar: Vec<Jet>,
    pub sumsq_h: f64,
    /// `Σ_{i≥1} H*_i²`.
    pub sumsq_hstar: f64,
}

fn curvature(fr: &FrenetData, i: usize) -> &Jet {
    &fr.curvatures[i - 1]
}

fn ratio(num: &Jet, den: &Jet, den_index: usize) -> Result<Jet, HarmonicError> {
    num.div(den).map_err(|e| match e {
        JetError::DivisionByZero => HarmonicError::DegenerateCurvature { index: den_index },
        other => HarmonicError::Jet(other),
    })
}

fn max_order(fr: &FrenetData) -> usize {
    fr.curvatures.iter().map(Jet::order).max().unwrap_or(0)
}

fn arc_derivative(g: &Jet, fr: &FrenetData, index: usize) -> Result<Jet, HarmonicError> {
    if g.order() < 1 {
        return Err(HarmonicError::InsufficientOrder { index });
    }
    Ok(directional_derivative(g, &fr.speed)?)
}

/// `H_1 … H_{n-2}`; empty for `n < 3`.
pub fn harmonic_tangent(fr: &FrenetData) -> Result<Vec<Jet>, HarmonicError> {
    let n = fr.dimension();
    if n < 3 {
        return Ok(Vec::new());
    }
    let zero = Jet::zero(max_order(fr));
    let mut h: Vec<Jet> = Vec::with_capacity(n - 2);
    h.push(ratio(curvature(fr, 1), curvature(fr, 2), 2)?);
    for i in 2..=n - 2 {
        let prev = &h[i - 2];
        let prev2 = if i >= 3 { &h[i - 3] } else { &zero };
        let num = &arc_derivative(prev, fr, i)? + &(curvature(fr, i) * prev2);
        h.push(ratio(&num, curvature(fr, i + 1), i + 1)?);
    }
    if h[n - 3].order() < 1 {
        return Err(HarmonicError::InsufficientOrder { index: n - 2 });
    }
    Ok(h)
}

/// `H*_0 … H*_{n-2}`; just `[0]` for `n < 3`.
pub fn harmonic_normal(fr: &FrenetData) -> Result<Vec<Jet>, HarmonicError> {
    let n = fr.dimension();
    let mut hs = vec![Jet::zero(max_order(fr))];
    if n < 3 {
        return Ok(hs);
    }
    hs.push(ratio(curvature(fr, n - 1), curvature(fr, n - 2), n - 2)?);
    for i in 2..=n - 2 {
        let d = arc_derivative(&hs[i - 1], fr, i)?;
        let num = &(curvature(fr, n - i) * &hs[i - 2]) - &d;
        hs.push(ratio(&num, curvature(fr, n - i - 1), n - i - 1)?);
    }
    if hs[n - 2].order() < 1 {
        return Err(HarmonicError::InsufficientOrder { index: n - 2 });
    }
    Ok(hs)
}

pub fn harmonic_data(fr: &FrenetData) -> Result<HarmonicData, HarmonicError> {
    let h = harmonic_tangent(fr)?;
    let hstar = harmonic_normal(fr)?;
    let sumsq_h = h.iter().map(|j| j.value() * j.value()).sum();
    let sumsq_hstar = hstar.iter().skip(1).map(|j| j.value() * j.value()).sum();
    Ok(HarmonicData {
        s: fr.s,
        h,
        hstar,
        sumsq_h,
        sumsq_hstar,
    })
}

/// Residuals of the two derivative identities on the last harmonic
/// curvatures:
///
/// * tangent: `|V_1[H_{n-2}] + k_{n-1} H_{n-3}|`
/// * normal: `|V_1[H*_{n-2}] - k_1 H*_{n-3}|`
///
/// `None` for `n < 3`.
pub fn lemma_residuals(h: &HarmonicData, fr: &FrenetData) -> Option<(f64, f64)> {
    let n = fr.dimension();
    if n < 3 || h.h.len() != n - 2 {
        return None;
    }
    let speed = fr.speed.value();
    let last = &h.h[n - 3];
    let before_last = if n >= 4 { h.h[n - 4].value() } else { 0.0 };
    let d_last = last.derivative_value(1)? / speed;
    let r_tangent = (d_last + fr.curvature(n - 1) * before_last).abs();

    let last_star = &h.hstar[n - 2];
    let d_last_star = last_star.derivative_value(1)? / speed;
    let r_normal = (d_last_star - fr.curvature(1) * h.hstar[n - 3].value()).abs();
    Some((r_tangent, r_normal))
}
