//! Sampling a curve/field pair and classifying it as an f-eikonal helix
//! and/or an f-eikonal `V_n`-slant helix.
//!
//! "Constant" always means constant over the sample grid in the sense of
//! [`constancy`]. The gradient of `f` is treated as parallel when the
//! field's Hessian vanishes (to `tol_const`) at every sample, which in
//! Euclidean space is the constant-gradient case.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::CurveSpec;
use crate::frenet::{frenet_apparatus, FrenetData, FrenetError};
use crate::harmonic::{harmonic_data, lemma_residuals, HarmonicData, HarmonicError};
use crate::jet::{eval_curve_jet, eval_field_jet, jet_order_for_dimension, JetError};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SampleFailure {
    #[error(transparent)]
    Frenet(#[from] FrenetError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error("evaluation failed: {0}")]
    Evaluation(#[from] JetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("at s = {s}: {failure}")]
pub struct SampleError {
    pub s: f64,
    pub failure: SampleFailure,
}

impl SampleError {
    /// True for failures caused by the curve's geometry rather than by
    /// evaluating an expression.
    pub fn is_degenerate_curve(&self) -> bool {
        matches!(
            self.failure,
            SampleFailure::Frenet(FrenetError::DegenerateCurve { .. })
                | SampleFailure::Frenet(FrenetError::NotRegular { .. })
                | SampleFailure::Harmonic(HarmonicError::DegenerateCurvature { .. })
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("constancy test needs at least one value")]
pub struct EmptyInput;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub s: f64,
    /// `∇f` at `α(s)`.
    pub grad: Vec<f64>,
    pub grad_norm: f64,
    /// `<∇f, V_1>`.
    pub ip_tangent: f64,
    /// `<∇f, V_n>`.
    pub ip_last: f64,
    /// Frobenius norm of the field Hessian at `α(s)`.
    pub hessian_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub row: SampleRow,
    pub frenet: FrenetData,
    pub harmonic: HarmonicData,
    /// Tangent and normal derivative-identity residuals; `None` for `n < 3`.
    pub lemma: Option<(f64, f64)>,
}

fn inner(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Frame, harmonic curvatures and field data at a single parameter value.
pub fn sample_at(spec: &CurveSpec, s: f64) -> Result<Sample, SampleError> {
    let fail = |failure: SampleFailure| SampleError { s, failure };
    let n = spec.dimension;
    let jets = eval_curve_jet(spec, s, jet_order_for_dimension(n)).map_err(|e| fail(e.into()))?;
    let frenet = frenet_apparatus(s, &jets, spec.tol_frame).map_err(|e| fail(e.into()))?;
    let harmonic = harmonic_data(&frenet).map_err(|e| fail(e.into()))?;
    let point: Vec<f64> = jets.iter().map(|j| j.value()).collect();
    let field = eval_field_jet(spec, &point).map_err(|e| fail(e.into()))?;
    let row = SampleRow {
        s,
        grad_norm: field.gradient_norm(),
        ip_tangent: inner(&field.gradient, &frenet.vector(1)),
        ip_last: inner(&field.gradient, &frenet.vector(n)),
        hessian_norm: field.hessian_frobenius(),
        grad: field.gradient,
    };
    let lemma = lemma_residuals(&harmonic, &frenet);
    Ok(Sample {
        row,
        frenet,
        harmonic,
        lemma,
    })
}

/// Samples at `spec.samples` equally spaced parameters, endpoints included.
/// Reports the failure at the smallest failing `s`.
pub fn sample_along_curve(spec: &CurveSpec) -> Result<Vec<Sample>, SampleError> {
    let results: Vec<Result<Sample, SampleError>> = spec.grid().into_par_iter().map(|s| sample_at(spec, s)).collect();
    results.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constancy {
    pub is_const: bool,
    /// `max - min`.
    pub spread: f64,
    pub mean: f64,
}

/// Constant means `spread <= tol * (1 + |mean|)`.
pub fn constancy(values: &[f64], tol: f64) -> Result<Constancy, EmptyInput> {
    if values.is_empty() {
        return Err(EmptyInput);
    }
    let (min, max) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(*v), hi.max(*v))
    });
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let spread = max - min;
    Ok(Constancy {
        is_const: spread <= tol * (1.0 + mean.abs()),
        spread,
        mean,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spreads {
    pub grad_norm: f64,
    pub ip_tangent: f64,
    pub ip_last: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    /// `‖∇f‖` constant along the curve.
    pub eikonal: bool,
    /// Eikonal and `<∇f, V_1>` a non-zero constant.
    pub helix: bool,
    /// Eikonal and `<∇f, V_n>` a non-zero constant.
    pub slant: bool,
    pub parallel_gradient: bool,
    /// Angle between `∇f` and `V_1` from the mean values; `None` when the
    /// gradient vanishes along the curve.
    pub theta: Option<f64>,
    pub spreads: Spreads,
    pub means: Spreads,
    pub max_hessian_norm: f64,
}

pub fn classify_samples(samples: &[Sample], tol_const: f64) -> Result<Classification, EmptyInput> {
    let column = |f: fn(&SampleRow) -> f64| samples.iter().map(|x| f(&x.row)).collect::<Vec<f64>>();
    let norm = constancy(&column(|r| r.grad_norm), tol_const)?;
    let tangent = constancy(&column(|r| r.ip_tangent), tol_const)?;
    let last = constancy(&column(|r| r.ip_last), tol_const)?;
    let max_hessian_norm = samples.iter().map(|x| x.row.hessian_norm).fold(0.0, f64::max);

    let eikonal = norm.is_const;
    let helix = eikonal && tangent.is_const && tangent.mean.abs() > tol_const;
    let slant = eikonal && last.is_const && last.mean.abs() > tol_const;
    let theta = (norm.mean > 0.0).then(|| (tangent.mean / norm.mean).clamp(-1.0, 1.0).acos());

    Ok(Classification {
        eikonal,
        helix,
        slant,
        parallel_gradient: max_hessian_norm <= tol_const,
        theta,
        spreads: Spreads {
            grad_norm: norm.spread,
            ip_tangent: tangent.spread,
            ip_last: last.spread,
        },
        means: Spreads {
            grad_norm: norm.mean,
            ip_tangent: tangent.mean,
            ip_last: last.mean,
        },
        max_hessian_norm,
    })
}

pub fn classify(spec: &CurveSpec) -> Result<Classification, SampleError> {
    let samples = sample_along_curve(spec)?;
    // the grid always has at least 8 samples
    Ok(classify_samples(&samples, spec.tol_const).expect("non-empty grid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constancy_examples() {
        let r5 = 5f64.sqrt();
        let c = constancy(&[r5, r5, r5], 1e-8).unwrap();
        assert!(c.is_const);
        assert_eq!(c.spread, 0.0);
        let c = constancy(&[1.0, 1.0 + 1e-3], 1e-8).unwrap();
        assert!(!c.is_const);
        assert!((c.spread - 1e-3).abs() < 1e-15);
        assert_eq!(constancy(&[], 1e-8), Err(EmptyInput));
    }

    #[test]
    fn constancy_threshold_scales_with_mean() {
        assert!(constancy(&[1e6, 1e6 + 1e-3], 1e-8).unwrap().is_const);
        assert!(!constancy(&[0.0, 1e-3], 1e-8).unwrap().is_const);
    }
}
